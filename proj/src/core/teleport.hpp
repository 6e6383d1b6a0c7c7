#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "resources.hpp"
#include "types.hpp"

namespace cvt {

struct Coherent {
    Amplitude alpha{0.0, 0.0};
};

struct CatState {
    Amplitude alpha{0.0, 0.0};
    Parity parity = Parity::Even;
};

struct FockCoeffs {
    std::vector<std::complex<double>> coeffs;  // normalized to 1 within 1e-12
};

using InputState = std::variant<Coherent, CatState, FockCoeffs>;

/// Validating constructor for raw Fock inputs.
FockCoeffs make_fock_coeffs(std::vector<std::complex<double>> coeffs);

/// 1/sqrt(2 +- 2 e^{-2|alpha|^2}); rejects the null odd cat at alpha ~ 0.
double cat_normalization(Amplitude alpha, Parity parity);

/// Fock expansion c_0..c_{n_levels-1} of the input state.
std::vector<std::complex<double>> fock_coefficients(const InputState& input, int n_levels);

/// Levels needed to hold the input up to tail mass epsilon.
int input_truncation(const InputState& input, double epsilon);

enum class PointMethod { ClosedForm, Numeric };

struct TeleportPoint {
    Amplitude beta{0.0, 0.0};
    double prob_density = 0.0;  // P(beta)
    double fidelity = 0.0;      // F(beta)
    PointMethod method = PointMethod::ClosedForm;
};

struct TeleportConfig {
    double gain = 1.0;
    InputState comparison;  // the state whose overlap defines fidelity
    SchmidtResource resource;
    TruncationPolicy policy;
};

/// P(beta) and F(beta) for a coherent input of amplitude alpha. Standard and
/// photon-subtracted resources evaluate in closed form; photon-added goes
/// through the numeric transfer path.
TeleportPoint coherent_point(const TeleportConfig& cfg, Amplitude alpha, Amplitude beta);

/// Same for a cat input (four-term interference expressions).
TeleportPoint cat_point(const TeleportConfig& cfg, Amplitude alpha, Parity parity,
                        Amplitude beta);

/// Generalized transfer-operator evaluation for an arbitrary Schmidt resource
/// and input: builds T(beta)|psi> from displacement matrices.
TeleportPoint transfer_point(const TeleportConfig& cfg, const InputState& input, Amplitude beta);

struct AverageFidelity {
    double fbar = 0.0;
    double err = 0.0;
};

/// Fbar = integral over beta of |<comparison|T(beta)|input>|^2, evaluated on
/// the amplitude directly (never reconstructed from the F*P ratio). Throws
/// ConvergenceError when the order-doubling estimate exceeds 1e-4.
AverageFidelity average_fidelity(const TeleportConfig& cfg, const InputState& input,
                                 const QuadratureSpec& quad);

/// Order-48 grid with width 1/sqrt(1-lambda^2) and centers at the input's
/// coherent peaks (+-alpha for cats).
QuadratureSpec default_quadrature(const SchmidtResource& res, const InputState& input);

struct GainScanRow {
    double gain = 1.0;
    Amplitude gamma{0.0, 0.0};
    double fbar = 0.0;
    double err = 0.0;
};

struct GainScanResult {
    std::vector<GainScanRow> rows;  // gain-major, then gamma, in grid order
    size_t argmax = 0;
};

/// Average fidelity over the (gain, comparison amplitude) cross product.
GainScanResult gain_gamma_scan(const InputState& input, const SchmidtResource& resource,
                               const std::vector<double>& gain_grid,
                               const std::vector<Amplitude>& gamma_grid,
                               const QuadratureSpec& quad);

struct BoundaryScanResult {
    std::vector<double> lambdas;
    std::vector<double> fbar_standard;
    std::vector<double> fbar_subtracted;
    std::optional<double> crossing_standard;    // lambda where Fbar = 2/3
    std::optional<double> crossing_subtracted;
    std::optional<std::pair<double, double>> quantum_window;  // subtracted above, standard below
    double gap_argmax_lambda = 0.0;
    double gap_max = 0.0;
    double gap_relative_improvement = 0.0;  // gap / standard Fbar at the argmax
};

/// Fbar(lambda) for the standard and photon-subtracted resources at unity
/// gain with comparison amplitude alpha, plus the 2/3-crossing bookkeeping.
BoundaryScanResult boundary_scan(Amplitude alpha, const std::vector<double>& lambda_grid,
                                 int order = 48, bool refine = true);

}  // namespace cvt
