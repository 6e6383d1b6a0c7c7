#pragma once

#include <functional>
#include <vector>

#include "types.hpp"

namespace cvt {

/// ln(n!) to full double precision (table-backed for small n, lgamma beyond).
double log_factorial(int n);

// Dense complex matrix, row-major, square.
struct ComplexMatrix {
    int dim = 0;
    std::vector<std::complex<double>> a;

    ComplexMatrix() = default;
    explicit ComplexMatrix(int d) : dim(d), a(static_cast<size_t>(d) * d) {}

    std::complex<double>& operator()(int m, int n) { return a[static_cast<size_t>(m) * dim + n]; }
    const std::complex<double>& operator()(int m, int n) const {
        return a[static_cast<size_t>(m) * dim + n];
    }

    std::vector<std::complex<double>> apply(const std::vector<std::complex<double>>& v) const;
};

/// Matrix elements <m|D(beta)|n> of the displacement operator on the
/// truncated Fock ladder 0..dim-1, evaluated from the scaled
/// associated-Laguerre closed form (log-space prefactors), stable to
/// dim ~ 256. Rejects dim > 1024.
ComplexMatrix displacement_matrix(Amplitude beta, int dim);

// Gauss-Hermite rule for the weight e^{-x^2}; `flat_weights` are w_i e^{x_i^2},
// i.e. the weights to apply to plain (unweighted) integrands.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> flat_weights;
};

const GaussHermiteRule& gauss_hermite(int order);

/// Integral of f over the complex plane on the multi-center grid described
/// by spec. With several centers, each grid integrates its share of the
/// integrand through a Gaussian partition of unity so that overlapping
/// grids do not double count. err_estimate comes from doubling the order
/// when spec.refine is set (the refined value is returned).
QuadratureResult integrate_plane(const std::function<double(Amplitude)>& f,
                                 const QuadratureSpec& spec);

/// Smallest Fock level N such that the resource's photon-number tail mass
/// beyond N stays below policy.epsilon; capped (with flag) at hard_cap.
TruncationLevel truncation_level(double lambda, ResourceKind kind, const TruncationPolicy& policy);

/// Tail mass of the resource's photon-number distribution beyond level n,
/// in closed form (no cancellation).
double resource_tail_mass(double lambda, ResourceKind kind, int n);

}  // namespace cvt
