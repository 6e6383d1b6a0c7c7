#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "parallel.hpp"

namespace cvt {

namespace {

constexpr int kLogFactorialTable = 2048;

}  // namespace

double log_factorial(int n) {
    if (n < 0) throw std::invalid_argument("log_factorial: n must be >= 0");
    static const std::vector<double> table = [] {
        std::vector<double> t(kLogFactorialTable + 1);
        long double acc = 0.0L;
        t[0] = 0.0;
        for (int k = 1; k <= kLogFactorialTable; ++k) {
            acc += std::log(static_cast<long double>(k));
            t[k] = static_cast<double>(acc);
        }
        return t;
    }();
    if (n <= kLogFactorialTable) return table[n];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

std::vector<std::complex<double>> ComplexMatrix::apply(
    const std::vector<std::complex<double>>& v) const {
    if (static_cast<int>(v.size()) != dim)
        throw std::invalid_argument("ComplexMatrix::apply: size mismatch");
    std::vector<std::complex<double>> out(static_cast<size_t>(dim));
    for (int m = 0; m < dim; ++m) {
        std::complex<double> acc = 0.0;
        const std::complex<double>* row = a.data() + static_cast<size_t>(m) * dim;
        for (int n = 0; n < dim; ++n) acc += row[n] * v[n];
        out[m] = acc;
    }
    return out;
}

ComplexMatrix displacement_matrix(Amplitude beta, int dim) {
    if (dim < 1) throw std::invalid_argument("displacement_matrix: dim must be >= 1");
    if (dim > 1024) throw std::invalid_argument("displacement_matrix: dim > 1024 rejected");
    if (!is_finite(beta)) throw std::invalid_argument("displacement_matrix: non-finite beta");

    ComplexMatrix d(dim);
    const double x = std::norm(beta);
    if (x == 0.0) {
        for (int m = 0; m < dim; ++m) d(m, m) = 1.0;
        return d;
    }
    const double theta = std::arg(beta);

    // Work diagonal by diagonal. For m = j+k, n = j the element is
    //   S_j(k, x) e^{i k theta},
    // with S_j = sqrt(j!/(j+k)!) x^{k/2} e^{-x/2} L_j^{(k)}(x); |S_j| <= 1,
    // so the three-term recurrence below never overflows. The m < n side
    // follows from D(beta)^dag = D(-beta).
    for (int k = 0; k < dim; ++k) {
        const double log_s0 = 0.5 * (k * std::log(x) - x) - 0.5 * log_factorial(k);
        double s_prev2 = 0.0;
        double s_prev = std::exp(log_s0);  // j = 0
        const std::complex<double> up_phase = std::polar(1.0, k * theta);
        const std::complex<double> down_phase =
            ((k % 2 == 0) ? 1.0 : -1.0) * std::polar(1.0, -k * theta);
        for (int j = 0; j + k < dim; ++j) {
            double s;
            if (j == 0) {
                s = s_prev;
            } else if (j == 1) {
                s = s_prev * (1.0 + k - x) / std::sqrt(1.0 + k);
            } else {
                const double denom = std::sqrt(static_cast<double>(j) * (j + k));
                s = (2.0 * j - 1.0 + k - x) / denom * s_prev -
                    std::sqrt((j - 1.0) * (j - 1.0 + k) / (static_cast<double>(j) * (j + k))) *
                        s_prev2;
            }
            if (j >= 1) {
                s_prev2 = s_prev;
                s_prev = s;
            }
            d(j + k, j) = s * up_phase;
            if (k > 0) d(j, j + k) = s * down_phase;
        }
    }
    return d;
}

namespace {

// Nodes by Newton iteration on the Hermite functions (scaled orthonormal
// Hermite polynomials), weights as Christoffel numbers. The scaled
// recurrence keeps every intermediate bounded.
GaussHermiteRule build_gauss_hermite(int order) {
    if (order < 1 || order > 512)
        throw std::invalid_argument("gauss_hermite: order out of range [1,512]");
    GaussHermiteRule rule;
    rule.nodes.assign(order, 0.0);
    rule.flat_weights.assign(order, 0.0);

    const double pim4 = std::pow(M_PI, -0.25);
    const int half = (order + 1) / 2;
    double z = 0.0, z1 = 0.0, z2 = 0.0;
    for (int i = 0; i < half; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * order + 1.0) - 1.85575 * std::pow(2.0 * order + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(order), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * z2;
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * z2;
        } else {
            z = 2.0 * z - z2;
        }
        for (int iter = 0; iter < 100; ++iter) {
            // Hermite functions phi_k = p_k e^{-x^2/2} at z.
            double p0 = pim4 * std::exp(-0.5 * z * z);
            double p1 = std::sqrt(2.0) * z * p0;
            for (int k = 1; k < order; ++k) {
                double p2 = z * std::sqrt(2.0 / (k + 1.0)) * p1 -
                            std::sqrt(static_cast<double>(k) / (k + 1.0)) * p0;
                p0 = p1;
                p1 = p2;
            }
            // p1 = phi_order, p0 = phi_{order-1}; phi_n' = sqrt(2n) phi_{n-1} - z phi_n.
            const double dphi = std::sqrt(2.0 * order) * p0 - z * p1;
            const double dz = p1 / dphi;
            z -= dz;
            if (std::abs(dz) < 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        z2 = z1;
        z1 = z;
        // Christoffel number over the Hermite functions gives the flat weight
        // w e^{z^2} = 1 / sum_{k<order} phi_k(z)^2 directly.
        double sum = 0.0;
        {
            double p0 = pim4 * std::exp(-0.5 * z * z);
            double p1 = std::sqrt(2.0) * z * p0;
            sum += p0 * p0;
            for (int k = 1; k < order; ++k) {
                sum += p1 * p1;
                double p2 = z * std::sqrt(2.0 / (k + 1.0)) * p1 -
                            std::sqrt(static_cast<double>(k) / (k + 1.0)) * p0;
                p0 = p1;
                p1 = p2;
            }
        }
        const double w = 1.0 / sum;
        rule.nodes[i] = -z;
        rule.nodes[order - 1 - i] = z;
        rule.flat_weights[i] = w;
        rule.flat_weights[order - 1 - i] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int order) {
    static std::mutex mtx;
    static std::map<int, GaussHermiteRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_gauss_hermite(order)).first;
    return it->second;
}

namespace {

double integrate_plane_once(const std::function<double(Amplitude)>& f, int order,
                            const std::vector<Amplitude>& centers, double width) {
    const GaussHermiteRule& rule = gauss_hermite(order);
    const size_t n = rule.nodes.size();
    const double w2 = width * width;
    const size_t per_grid = n * n;
    const size_t total = per_grid * centers.size();
    const bool multi = centers.size() > 1;

    std::vector<double> contrib(total);
    parallel_for(total, [&](size_t idx) {
        const size_t g = idx / per_grid;
        const size_t ij = idx % per_grid;
        const size_t i = ij / n;
        const size_t j = ij % n;
        const Amplitude p = centers[g] + width * Amplitude(rule.nodes[i], rule.nodes[j]);
        double window = 1.0;
        if (multi) {
            // Gaussian partition of unity: each grid picks up its share of
            // the integrand, so overlapping grids never double count.
            double own = 0.0, all = 0.0;
            for (size_t h = 0; h < centers.size(); ++h) {
                const double wgt = std::exp(-std::norm(p - centers[h]) / w2);
                all += wgt;
                if (h == g) own = wgt;
            }
            window = own / all;
        }
        const double fv = f(p);
        if (!std::isfinite(fv)) {
            std::ostringstream os;
            os << "integrate_plane: non-finite integrand at node (" << p.real() << ", "
               << p.imag() << ")";
            throw NonFiniteError(os.str(), p);
        }
        contrib[idx] = rule.flat_weights[i] * rule.flat_weights[j] * w2 * window * fv;
    });

    // Fixed-order reduction keeps results bit-identical across worker counts.
    double acc = 0.0;
    for (size_t idx = 0; idx < total; ++idx) acc += contrib[idx];
    return acc;
}

}  // namespace

QuadratureResult integrate_plane(const std::function<double(Amplitude)>& f,
                                 const QuadratureSpec& spec) {
    spec.validate();
    // Drop duplicated centers (within 1e-12*width) so degenerate specs do not
    // count the same grid twice.
    std::vector<Amplitude> centers;
    for (Amplitude c : spec.centers) {
        bool dup = false;
        for (Amplitude seen : centers)
            if (std::abs(c - seen) < 1e-12 * spec.width) dup = true;
        if (!dup) centers.push_back(c);
    }

    QuadratureResult res;
    const double base = integrate_plane_once(f, spec.order, centers, spec.width);
    if (spec.refine) {
        const double refined = integrate_plane_once(f, 2 * spec.order, centers, spec.width);
        res.value = refined;
        res.err_estimate = std::abs(refined - base);
    } else {
        res.value = base;
        res.err_estimate = 0.0;
    }
    return res;
}

double resource_tail_mass(double lambda, ResourceKind kind, int n) {
    const double x = lambda * lambda;
    if (x == 0.0) return 0.0;
    if (kind == ResourceKind::Standard) return std::pow(x, n + 1);
    // Conditioned spectra carry (n+1)^2 lambda^{2n} weights; the remainder of
    // the series has the closed form below.
    const double norm = std::pow(1.0 - x, 3) / (1.0 + x);
    const double a = 1.0 - x;
    const double head = static_cast<double>(n + 2) * (n + 2) / a;
    const double mid = 2.0 * (n + 2) * x / (a * a);
    const double last = x * (1.0 + x) / (a * a * a);
    return norm * std::pow(x, n + 1) * (head + mid + last);
}

TruncationLevel truncation_level(double lambda, ResourceKind kind,
                                 const TruncationPolicy& policy) {
    policy.validate();
    if (!(lambda >= 0.0 && lambda < 1.0))
        throw std::invalid_argument("truncation_level: lambda must be in [0,1)");
    for (int n = 0; n <= policy.hard_cap; ++n) {
        if (resource_tail_mass(lambda, kind, n) < policy.epsilon) return {n, false};
    }
    return {policy.hard_cap, true};
}

}  // namespace cvt
