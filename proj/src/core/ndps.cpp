#include "ndps.hpp"

#include <cmath>

namespace cvt {

std::vector<std::complex<double>> input_coeffs(const InputState& input, int n_max) {
    if (n_max < 0) throw std::invalid_argument("input_coeffs: n_max must be >= 0");
    return fock_coefficients(input, n_max + 1);
}

NdpsPoint ndps_point(const SchmidtResource& res, std::span<const std::complex<double>> c,
                     int k) {
    if (c.empty()) throw std::invalid_argument("ndps_point: empty input coefficients");

    NdpsPoint pt;
    pt.k = k;

    // Bob's level for resource index n is n + offset + k; it must land inside
    // both the input expansion and the nonnegative ladder.
    const int n_lo = std::max(0, -(k + res.offset));
    const int n_hi_input = static_cast<int>(c.size()) - 1 - res.offset - k;
    const int n_hi = std::min(static_cast<int>(res.coeffs.size()) - 1, n_hi_input);

    double prob = 0.0;
    double overlap = 0.0;
    for (int n = n_lo; n <= n_hi; ++n) {
        const int level = n + res.offset + k;
        const double w = std::norm(c[level]);
        prob += res.coeffs[n] * res.coeffs[n] * w;
        overlap += res.coeffs[n] * w;
    }
    pt.prob = prob;
    if (prob < 1e-300) {
        pt.prob = std::max(prob, 0.0);
        return pt;  // fidelity left as the undefined marker
    }
    pt.fidelity = overlap * overlap / prob;

    const double inv_sqrt_p = 1.0 / std::sqrt(prob);
    pt.out_coeffs.assign(static_cast<size_t>(n_hi + res.offset + k) + 1, 0.0);
    for (int n = n_lo; n <= n_hi; ++n) {
        const int level = n + res.offset + k;
        pt.out_coeffs[level] = res.coeffs[n] * c[level] * inv_sqrt_p;
    }
    return pt;
}

NdpsDistribution ndps_distribution(const SchmidtResource& res,
                                   std::span<const std::complex<double>> c, int k_max) {
    if (k_max < 0) throw std::invalid_argument("ndps_distribution: k_max must be >= 0");

    // Walk the negative side until the outcomes die out (the probabilities
    // fall off at least geometrically in |k|).
    const int k_floor = -(static_cast<int>(c.size()) + static_cast<int>(res.coeffs.size()) +
                          res.offset + 1);
    int k_min = 0;
    for (int k = -1; k >= k_floor; --k) {
        const NdpsPoint pt = ndps_point(res, c, k);
        k_min = k;
        if (pt.prob < 1e-15) break;
    }

    NdpsDistribution dist;
    dist.k_min = k_min;
    dist.points.reserve(static_cast<size_t>(k_max - k_min) + 1);
    for (int k = k_min; k <= k_max; ++k) {
        dist.points.push_back(ndps_point(res, c, k));
        dist.total_probability += dist.points.back().prob;
    }
    return dist;
}

std::vector<NdpsCurvePoint> ndps_fidelity_curve(ResourceKind kind, const InputState& input,
                                                int k, const std::vector<double>& lambda_grid,
                                                const TruncationPolicy& policy) {
    if (lambda_grid.empty()) throw std::invalid_argument("ndps_fidelity_curve: empty grid");
    if (k < 0) throw std::invalid_argument("ndps_fidelity_curve: k must be >= 0");

    std::vector<NdpsCurvePoint> curve;
    curve.reserve(lambda_grid.size());
    const int input_levels = input_truncation(input, policy.epsilon) + 1;
    for (double lambda : lambda_grid) {
        const SchmidtResource res = build_resource(kind, lambda, policy);
        const int n_max =
            std::max(input_levels, static_cast<int>(res.coeffs.size()) + res.offset + k);
        const auto c = input_coeffs(input, n_max);
        const NdpsPoint pt = ndps_point(res, c, k);
        curve.push_back({lambda, pt.prob, pt.fidelity});
    }
    return curve;
}

}  // namespace cvt
