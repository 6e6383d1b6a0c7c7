#pragma once

#include <memory>
#include <optional>

#include "numerics.hpp"
#include "teleport.hpp"

namespace cvt {

// Fock amplitudes 0..dim-1. Operations on it never renormalize silently;
// the norm carries the physics (P(beta) is the squared norm of T|psi>).
struct TruncatedKet {
    std::vector<std::complex<double>> coeffs;

    int dim() const { return static_cast<int>(coeffs.size()); }
    double norm2() const {
        double n = 0.0;
        for (auto c : coeffs) n += std::norm(c);
        return n;
    }
};

/// Thread-safe memoized displacement matrices, keyed by (beta, dim).
std::shared_ptr<const ComplexMatrix> cached_displacement(Amplitude beta, int dim);

/// T(beta)|psi| for the resource's kind-specific transfer operator, built
/// from truncated matrix products only (never from any closed form): the
/// Schmidt weights are regenerated from kind and lambda and every
/// displacement acts as a dense truncated matrix.
TruncatedKet apply_transfer(const SchmidtResource& res, Amplitude beta, double gain,
                            const TruncatedKet& psi);

struct OraclePoint {
    Amplitude beta{0.0, 0.0};
    double prob_density = 0.0;
    std::optional<double> fidelity;  // empty when P(beta) vanished
};

/// Truncation dimension: 4*(ceil(amp^2) + ceil(|beta|^2)) + resource level,
/// clamped to [32, 256].
int oracle_dim(const SchmidtResource& res, const InputState& input, const InputState& comparison,
               Amplitude beta, double gain);

/// Ground-truth P(beta) and F(beta) via apply_transfer.
OraclePoint oracle_point(const SchmidtResource& res, const InputState& input, Amplitude beta,
                         double gain, const InputState& comparison);

struct EquivalenceCase {
    ResourceKind kind = ResourceKind::Standard;
    double lambda = 0.0;
    double gain = 1.0;
    InputState input;
    InputState comparison;
    Amplitude beta{0.0, 0.0};
    double dp = 0.0;  // |closed P - oracle P|
    double df = 0.0;  // |closed F - oracle F|
};

struct EquivalenceReport {
    std::vector<EquivalenceCase> cases;
    double max_dp = 0.0;
    double max_df = 0.0;
    size_t worst_case = 0;
};

/// Seeded sweep comparing the closed-form coherent/cat points against the
/// matrix oracle over lambda in {0.3, 0.5, 0.8} and gain in {0.5, 1}.
EquivalenceReport run_equivalence_suite(int n_cases = 200);

}  // namespace cvt
