#pragma once

#include <optional>
#include <span>

#include "teleport.hpp"

namespace cvt {

// One number-difference outcome of the ND/PS protocol.
struct NdpsPoint {
    int k = 0;
    double prob = 0.0;
    std::optional<double> fidelity;  // empty marker when prob vanishes
    std::vector<std::complex<double>> out_coeffs;  // normalized Bob-mode state
};

/// Fock coefficients c_0..c_n_max of the input state (normalized coherent
/// form e^{-|a|^2/2} a^n / sqrt(n!), cat superpositions thereof).
std::vector<std::complex<double>> input_coeffs(const InputState& input, int n_max);

/// P(k), F(k) and Bob's output state for number-difference outcome k.
/// Negative k extends the protocol's sums to n >= -(k+offset); the extension
/// is what makes the outcome probabilities complete.
NdpsPoint ndps_point(const SchmidtResource& res, std::span<const std::complex<double>> c, int k);

struct NdpsDistribution {
    std::vector<NdpsPoint> points;  // ascending k, from k_min to k_max
    int k_min = 0;
    double total_probability = 0.0;
};

/// Tabulates outcomes for k = 0..k_max plus the negative-k extension down to
/// where the probabilities die out.
NdpsDistribution ndps_distribution(const SchmidtResource& res,
                                   std::span<const std::complex<double>> c, int k_max);

struct NdpsCurvePoint {
    double lambda = 0.0;
    double prob = 0.0;
    std::optional<double> fidelity;
};

/// F(k; lambda) across a squeezing grid for one resource kind.
std::vector<NdpsCurvePoint> ndps_fidelity_curve(ResourceKind kind, const InputState& input, int k,
                                                const std::vector<double>& lambda_grid,
                                                const TruncationPolicy& policy = {});

}  // namespace cvt
