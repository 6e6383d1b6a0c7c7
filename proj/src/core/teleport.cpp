#include "teleport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "numerics.hpp"

namespace cvt {

namespace {

constexpr double kPi = 3.14159265358979323846;

double resource_norm_factor(const SchmidtResource& res) {
    const double x = res.lambda * res.lambda;
    if (res.kind == ResourceKind::Standard) return 1.0 - x;
    return std::pow(1.0 - x, 3) / (1.0 + x);
}

bool has_closed_form(ResourceKind kind) {
    return kind == ResourceKind::Standard || kind == ResourceKind::PhotonSubtracted;
}

// Polynomial bracket of sum_n w_n^2 z^n / n! = e^z * bracket(z) for the
// probability kernel (the e^z part is folded into the main exponent).
std::complex<double> prob_bracket(ResourceKind kind, std::complex<double> w) {
    if (kind == ResourceKind::Standard) return 1.0;
    return w * w + 3.0 * w + 1.0;
}

// <c_out| T(beta) |c_in> for one coherent component pair, closed-form kinds.
std::complex<double> coherent_pair_amplitude(const SchmidtResource& res, double g,
                                             Amplitude c_out, Amplitude c_in, Amplitude beta) {
    const std::complex<double> u = std::conj(c_out) - g * std::conj(beta);
    const std::complex<double> v = c_in - beta;
    const std::complex<double> w = res.lambda * u * v;
    const double phase = std::imag(g * beta * std::conj(c_out)) + std::imag(-beta * std::conj(c_in));
    const std::complex<double> exponent(
        -0.5 * (std::norm(c_out - g * beta) + std::norm(c_in - beta)) + w.real(),
        w.imag() + phase);
    return std::sqrt(resource_norm_factor(res) / kPi) * std::exp(exponent) *
           (res.kind == ResourceKind::Standard ? 1.0 : (1.0 + w));
}

// <c1| T(beta)^dag T(beta) |c2> for one component pair of the input.
std::complex<double> prob_pair_term(const SchmidtResource& res, Amplitude c1, Amplitude c2,
                                    Amplitude beta) {
    const double l2 = res.lambda * res.lambda;
    const std::complex<double> zeta = (std::conj(c1) - std::conj(beta)) * (c2 - beta);
    const std::complex<double> w = l2 * zeta;
    const double phase = std::imag(-beta * std::conj(c2)) - std::imag(-beta * std::conj(c1));
    const std::complex<double> exponent(
        -0.5 * (std::norm(c1 - beta) + std::norm(c2 - beta)) + w.real(), w.imag() + phase);
    return (resource_norm_factor(res) / kPi) * std::exp(exponent) * prob_bracket(res.kind, w);
}

void check_finite(Amplitude z, const char* what) {
    if (!is_finite(z)) throw std::invalid_argument(std::string(what) + ": non-finite amplitude");
}

Amplitude comparison_amplitude(const InputState& cmp) {
    if (const auto* c = std::get_if<Coherent>(&cmp)) return c->alpha;
    if (const auto* c = std::get_if<CatState>(&cmp)) return c->alpha;
    throw std::invalid_argument("comparison state has no coherent amplitude");
}

void require_same_family(const InputState& input, const InputState& cmp) {
    if (input.index() != cmp.index())
        throw std::invalid_argument("comparison state must match the input family");
    const auto* a = std::get_if<CatState>(&input);
    const auto* b = std::get_if<CatState>(&cmp);
    if (a && b && a->parity != b->parity)
        throw std::invalid_argument("comparison cat must match the input parity");
}

}  // namespace

double cat_normalization(Amplitude alpha, Parity parity) {
    check_finite(alpha, "cat_normalization");
    const double cross = 2.0 * std::exp(-2.0 * std::norm(alpha));
    const double denom = (parity == Parity::Even) ? 2.0 + cross : 2.0 - cross;
    if (denom < 1e-12)
        throw std::invalid_argument("cat_normalization: odd cat with alpha ~ 0 is the null state");
    return 1.0 / std::sqrt(denom);
}

FockCoeffs make_fock_coeffs(std::vector<std::complex<double>> coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("make_fock_coeffs: empty coefficient list");
    double norm2 = 0.0;
    for (auto c : coeffs) {
        if (!is_finite(c)) throw std::invalid_argument("make_fock_coeffs: non-finite coefficient");
        norm2 += std::norm(c);
    }
    if (std::abs(norm2 - 1.0) > 1e-12)
        throw std::invalid_argument("make_fock_coeffs: coefficients must be normalized to 1");
    return FockCoeffs{std::move(coeffs)};
}

namespace {

std::complex<double> coherent_coeff(Amplitude alpha, int n) {
    const double a = std::abs(alpha);
    if (a == 0.0) return n == 0 ? 1.0 : 0.0;
    const double mag = std::exp(-0.5 * a * a + n * std::log(a) - 0.5 * log_factorial(n));
    return std::polar(mag, n * std::arg(alpha));
}

}  // namespace

std::vector<std::complex<double>> fock_coefficients(const InputState& input, int n_levels) {
    if (n_levels < 1) throw std::invalid_argument("fock_coefficients: n_levels must be >= 1");
    std::vector<std::complex<double>> out(static_cast<size_t>(n_levels), 0.0);
    if (const auto* c = std::get_if<Coherent>(&input)) {
        check_finite(c->alpha, "fock_coefficients");
        for (int n = 0; n < n_levels; ++n) out[n] = coherent_coeff(c->alpha, n);
    } else if (const auto* c = std::get_if<CatState>(&input)) {
        check_finite(c->alpha, "fock_coefficients");
        const double nrm = cat_normalization(c->alpha, c->parity);
        const int keep = (c->parity == Parity::Even) ? 0 : 1;
        for (int n = 0; n < n_levels; ++n)
            if (n % 2 == keep) out[n] = 2.0 * nrm * coherent_coeff(c->alpha, n);
    } else {
        const auto& f = std::get<FockCoeffs>(input);
        const size_t m = std::min(f.coeffs.size(), out.size());
        std::copy(f.coeffs.begin(), f.coeffs.begin() + m, out.begin());
    }
    return out;
}

int input_truncation(const InputState& input, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("input_truncation: epsilon must be > 0");
    if (const auto* f = std::get_if<FockCoeffs>(&input))
        return static_cast<int>(f->coeffs.size()) - 1;
    constexpr int kMax = 4096;
    const auto coeffs = fock_coefficients(input, kMax);
    double acc = 0.0;
    for (int n = 0; n < kMax; ++n) {
        acc += std::norm(coeffs[n]);
        if (1.0 - acc < epsilon) return n;
    }
    throw TruncationError("input_truncation: tail does not fit below the level cap", kMax);
}

namespace {

// ----- numeric transfer path -------------------------------------------------

struct PointAmplitudes {
    double prob = 0.0;
    std::complex<double> overlap{0.0, 0.0};
};

int transfer_dim(const TeleportConfig& cfg, const InputState& input) {
    const int in_lvl = input_truncation(input, cfg.policy.epsilon * 0.1);
    const int cmp_lvl = input_truncation(cfg.comparison, cfg.policy.epsilon * 0.1);
    const int res_lvl = static_cast<int>(cfg.resource.coeffs.size()) + cfg.resource.offset;
    const int dim = std::max({in_lvl + 1, cmp_lvl + 1, res_lvl}) + 24;
    return std::clamp(dim, 32, 256);
}

// How much probability a truncated state representation lost.
double norm_deficit(const std::vector<std::complex<double>>& v) {
    double n2 = 0.0;
    for (auto c : v) n2 += std::norm(c);
    return std::max(0.0, 1.0 - n2);
}

// <comparison| T(beta) |input> and P(beta) via displacement matrices over the
// resource's tabulated Schmidt coefficients. P comes from the masked vector's
// norm (the output displacement is unitary), which stays accurate for any
// beta; the overlap displaces the comparison state instead of the output so
// only well-resolved low Fock rows are ever needed.
PointAmplitudes numeric_point(const TeleportConfig& cfg, const InputState& input,
                              Amplitude beta) {
    check_finite(beta, "transfer_point");
    const SchmidtResource& res = cfg.resource;
    const int dim = transfer_dim(cfg, input);

    const auto psi = fock_coefficients(input, dim);
    const auto cmp = fock_coefficients(cfg.comparison, dim);
    const double lost = std::max(norm_deficit(psi), norm_deficit(cmp));
    if (lost > 100.0 * cfg.policy.epsilon) {
        std::ostringstream os;
        os << "transfer_point: state tail mass " << lost << " at dim " << dim
           << " exceeds the truncation budget";
        throw TruncationError(os.str(), 2 * dim);
    }

    const ComplexMatrix d_in = displacement_matrix(-beta, dim);
    const auto w = d_in.apply(psi);

    std::vector<std::complex<double>> masked(static_cast<size_t>(dim), 0.0);
    double p_raw = 0.0;
    for (size_t n = 0; n < res.coeffs.size(); ++n) {
        const size_t lvl = n + static_cast<size_t>(res.offset);
        if (lvl >= static_cast<size_t>(dim)) break;
        masked[lvl] = res.coeffs[n] * w[lvl];
        p_raw += std::norm(masked[lvl]);
    }
    const double prob = p_raw / kPi;

    // A capped resource only matters if the input still has weight where the
    // Schmidt spectrum was cut off.
    if (res.truncation_capped) {
        double w_beyond = 0.0;
        for (size_t lvl = res.coeffs.size() + res.offset; lvl < w.size(); ++lvl)
            w_beyond = std::max(w_beyond, std::norm(w[lvl]));
        const double p_err = res.tail_mass * w_beyond / kPi;
        if (prob > 1e-100 && p_err > 1e-8 * prob) {
            std::ostringstream os;
            os << "transfer_point: resource truncated at hard cap with unresolved weight "
               << p_err;
            throw TruncationError(os.str(), 2 * dim);
        }
    }

    const Amplitude gb = cfg.gain * beta;
    const ComplexMatrix d_cmp = (gb == beta) ? d_in : displacement_matrix(-gb, dim);
    const auto cmp_shifted = d_cmp.apply(cmp);
    std::complex<double> overlap = 0.0;
    for (int m = 0; m < dim; ++m) overlap += std::conj(cmp_shifted[m]) * masked[m];
    overlap /= std::sqrt(kPi);

    return {prob, overlap};
}

double fidelity_from(const PointAmplitudes& pa, Amplitude beta) {
    if (pa.prob < 1e-300) {
        std::ostringstream os;
        os << "fidelity undefined: vanishing P(beta) at (" << beta.real() << ", " << beta.imag()
           << ")";
        throw NonFiniteError(os.str(), beta);
    }
    return std::norm(pa.overlap) / pa.prob;
}

// ----- closed-form cat machinery ---------------------------------------------

struct CatTerms {
    Amplitude alpha;
    Amplitude gamma;
    double sign;  // +1 even, -1 odd
    double n_alpha;
    double n_gamma;
};

CatTerms cat_terms(const TeleportConfig& cfg, Amplitude alpha, Parity parity) {
    const auto* cmp = std::get_if<CatState>(&cfg.comparison);
    if (!cmp) throw std::invalid_argument("cat_point: comparison must be a cat state");
    if (cmp->parity != parity)
        throw std::invalid_argument("cat_point: comparison parity must match the input");
    CatTerms t;
    t.alpha = alpha;
    t.gamma = cmp->alpha;
    t.sign = (parity == Parity::Even) ? 1.0 : -1.0;
    t.n_alpha = cat_normalization(alpha, parity);
    t.n_gamma = cat_normalization(cmp->alpha, parity);
    return t;
}

std::complex<double> cat_overlap_amplitude(const SchmidtResource& res, double g,
                                           const CatTerms& t, Amplitude beta) {
    std::complex<double> acc = 0.0;
    for (double s : {1.0, -1.0}) {
        for (double u : {1.0, -1.0}) {
            const double sgn = ((s < 0.0) ? t.sign : 1.0) * ((u < 0.0) ? t.sign : 1.0);
            acc += sgn * coherent_pair_amplitude(res, g, u * t.gamma, s * t.alpha, beta);
        }
    }
    return t.n_alpha * t.n_gamma * acc;
}

double cat_prob_density(const SchmidtResource& res, const CatTerms& t, Amplitude beta) {
    std::complex<double> acc = 0.0;
    for (double s : {1.0, -1.0}) {
        for (double u : {1.0, -1.0}) {
            const double sgn = ((s < 0.0) ? t.sign : 1.0) * ((u < 0.0) ? t.sign : 1.0);
            acc += sgn * prob_pair_term(res, u * t.alpha, s * t.alpha, beta);
        }
    }
    return t.n_alpha * t.n_alpha * acc.real();
}

}  // namespace

TeleportPoint coherent_point(const TeleportConfig& cfg, Amplitude alpha, Amplitude beta) {
    check_finite(alpha, "coherent_point");
    check_finite(beta, "coherent_point");
    if (!has_closed_form(cfg.resource.kind))
        return transfer_point(cfg, Coherent{alpha}, beta);

    const auto* cmp = std::get_if<Coherent>(&cfg.comparison);
    if (!cmp) throw std::invalid_argument("coherent_point: comparison must be coherent");
    const Amplitude gamma = cmp->alpha;
    const double g = cfg.gain;
    const double lambda = cfg.resource.lambda;

    const std::complex<double> u = std::conj(gamma) - g * std::conj(beta);
    const std::complex<double> v = alpha - beta;
    const std::complex<double> w = lambda * u * v;
    const double v2 = std::norm(v);

    double fid = std::exp(-std::norm(gamma - g * beta) - lambda * lambda * v2 + 2.0 * w.real());
    double prob;
    if (cfg.resource.kind == ResourceKind::Standard) {
        prob = (1.0 - lambda * lambda) / kPi * std::exp(-(1.0 - lambda * lambda) * v2);
    } else {
        const double x = lambda * lambda * v2;
        const double poly = x * x + 3.0 * x + 1.0;
        fid *= std::norm(1.0 + w) / poly;
        prob = resource_norm_factor(cfg.resource) / kPi *
               std::exp((lambda * lambda - 1.0) * v2) * poly;
    }
    if (!std::isfinite(prob) || !std::isfinite(fid))
        throw NonFiniteError("coherent_point: non-finite result", beta);
    return {beta, prob, fid, PointMethod::ClosedForm};
}

TeleportPoint cat_point(const TeleportConfig& cfg, Amplitude alpha, Parity parity,
                        Amplitude beta) {
    check_finite(alpha, "cat_point");
    check_finite(beta, "cat_point");
    if (!has_closed_form(cfg.resource.kind))
        return transfer_point(cfg, CatState{alpha, parity}, beta);

    const CatTerms t = cat_terms(cfg, alpha, parity);
    const double prob = cat_prob_density(cfg.resource, t, beta);
    const std::complex<double> a = cat_overlap_amplitude(cfg.resource, cfg.gain, t, beta);
    if (!std::isfinite(prob)) throw NonFiniteError("cat_point: non-finite probability", beta);
    const double fid = fidelity_from({prob, a}, beta);
    return {beta, prob, fid, PointMethod::ClosedForm};
}

TeleportPoint transfer_point(const TeleportConfig& cfg, const InputState& input, Amplitude beta) {
    require_same_family(input, cfg.comparison);
    const PointAmplitudes pa = numeric_point(cfg, input, beta);
    return {beta, pa.prob, fidelity_from(pa, beta), PointMethod::Numeric};
}

QuadratureSpec default_quadrature(const SchmidtResource& res, const InputState& input) {
    QuadratureSpec spec;
    spec.order = 48;
    spec.width = 1.0 / std::sqrt(1.0 - res.lambda * res.lambda);
    spec.refine = true;
    if (const auto* c = std::get_if<Coherent>(&input)) {
        spec.centers = {c->alpha};
    } else if (const auto* c = std::get_if<CatState>(&input)) {
        spec.centers = {c->alpha, -c->alpha};
    } else {
        spec.centers = {Amplitude{0.0, 0.0}};
    }
    return spec;
}

AverageFidelity average_fidelity(const TeleportConfig& cfg, const InputState& input,
                                 const QuadratureSpec& quad) {
    require_same_family(input, cfg.comparison);

    std::function<double(Amplitude)> integrand;
    if (has_closed_form(cfg.resource.kind) && !std::holds_alternative<FockCoeffs>(input)) {
        if (const auto* c = std::get_if<Coherent>(&input)) {
            const Amplitude alpha = c->alpha;
            const Amplitude gamma = comparison_amplitude(cfg.comparison);
            integrand = [&cfg, alpha, gamma](Amplitude beta) {
                return std::norm(
                    coherent_pair_amplitude(cfg.resource, cfg.gain, gamma, alpha, beta));
            };
        } else {
            const auto& cat = std::get<CatState>(input);
            const CatTerms t = cat_terms(cfg, cat.alpha, cat.parity);
            integrand = [&cfg, t](Amplitude beta) {
                return std::norm(cat_overlap_amplitude(cfg.resource, cfg.gain, t, beta));
            };
        }
    } else {
        integrand = [&cfg, &input](Amplitude beta) {
            return std::norm(numeric_point(cfg, input, beta).overlap);
        };
    }

    const QuadratureResult q = integrate_plane(integrand, quad);
    if (q.err_estimate > 1e-4) {
        std::ostringstream os;
        os << "average_fidelity did not converge: err " << q.err_estimate << " at order "
           << quad.order << ", width " << quad.width << ", " << quad.centers.size()
           << " center(s)";
        throw ConvergenceError(os.str());
    }
    return {q.value, q.err_estimate};
}

GainScanResult gain_gamma_scan(const InputState& input, const SchmidtResource& resource,
                               const std::vector<double>& gain_grid,
                               const std::vector<Amplitude>& gamma_grid,
                               const QuadratureSpec& quad) {
    if (gain_grid.empty() || gamma_grid.empty())
        throw std::invalid_argument("gain_gamma_scan: grids must be non-empty");

    GainScanResult result;
    result.rows.reserve(gain_grid.size() * gamma_grid.size());
    TeleportConfig cfg;
    cfg.resource = resource;
    for (double g : gain_grid) {
        for (Amplitude gamma : gamma_grid) {
            cfg.gain = g;
            if (std::holds_alternative<Coherent>(input)) {
                cfg.comparison = Coherent{gamma};
            } else if (const auto* cat = std::get_if<CatState>(&input)) {
                cfg.comparison = CatState{gamma, cat->parity};
            } else {
                throw std::invalid_argument("gain_gamma_scan: input must be coherent or cat");
            }
            const AverageFidelity af = average_fidelity(cfg, input, quad);
            result.rows.push_back({g, gamma, af.fbar, af.err});
            if (af.fbar > result.rows[result.argmax].fbar)
                result.argmax = result.rows.size() - 1;
        }
    }
    return result;
}

BoundaryScanResult boundary_scan(Amplitude alpha, const std::vector<double>& lambda_grid,
                                 int order, bool refine) {
    if (lambda_grid.empty()) throw std::invalid_argument("boundary_scan: empty lambda grid");
    BoundaryScanResult out;
    out.lambdas = lambda_grid;

    const InputState input = Coherent{alpha};
    for (ResourceKind kind : {ResourceKind::Standard, ResourceKind::PhotonSubtracted}) {
        auto& curve = (kind == ResourceKind::Standard) ? out.fbar_standard : out.fbar_subtracted;
        curve.reserve(lambda_grid.size());
        for (double lambda : lambda_grid) {
            TeleportConfig cfg;
            cfg.gain = 1.0;
            cfg.comparison = Coherent{alpha};
            cfg.resource = build_resource(kind, lambda);
            QuadratureSpec quad = default_quadrature(cfg.resource, input);
            quad.order = order;
            quad.refine = refine;
            curve.push_back(average_fidelity(cfg, input, quad).fbar);
        }
    }

    constexpr double kBound = 2.0 / 3.0;
    auto find_crossing = [&](const std::vector<double>& f) -> std::optional<double> {
        for (size_t i = 0; i + 1 < f.size(); ++i) {
            if (f[i] < kBound && f[i + 1] >= kBound) {
                const double t = (kBound - f[i]) / (f[i + 1] - f[i]);
                return lambda_grid[i] + t * (lambda_grid[i + 1] - lambda_grid[i]);
            }
        }
        return std::nullopt;
    };
    out.crossing_standard = find_crossing(out.fbar_standard);
    out.crossing_subtracted = find_crossing(out.fbar_subtracted);
    if (out.crossing_standard && out.crossing_subtracted &&
        *out.crossing_subtracted < *out.crossing_standard) {
        out.quantum_window = std::make_pair(*out.crossing_subtracted, *out.crossing_standard);
    }

    size_t gap_idx = 0;
    for (size_t i = 0; i < lambda_grid.size(); ++i) {
        const double gap = out.fbar_subtracted[i] - out.fbar_standard[i];
        if (gap > out.fbar_subtracted[gap_idx] - out.fbar_standard[gap_idx]) gap_idx = i;
    }
    out.gap_argmax_lambda = lambda_grid[gap_idx];
    out.gap_max = out.fbar_subtracted[gap_idx] - out.fbar_standard[gap_idx];
    out.gap_relative_improvement = out.gap_max / out.fbar_standard[gap_idx];
    return out;
}

}  // namespace cvt
