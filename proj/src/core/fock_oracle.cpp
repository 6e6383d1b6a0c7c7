#include "fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "numerics.hpp"

namespace cvt {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct DisplacementCache {
    std::mutex mtx;
    std::map<std::tuple<double, double, int>, std::shared_ptr<const ComplexMatrix>> entries;
    std::deque<std::tuple<double, double, int>> order;
    static constexpr size_t kCap = 64;
};

DisplacementCache& cache() {
    static DisplacementCache c;
    return c;
}

}  // namespace

std::shared_ptr<const ComplexMatrix> cached_displacement(Amplitude beta, int dim) {
    auto& c = cache();
    const auto key = std::make_tuple(beta.real(), beta.imag(), dim);
    {
        std::lock_guard<std::mutex> lock(c.mtx);
        auto it = c.entries.find(key);
        if (it != c.entries.end()) return it->second;
    }
    auto mat = std::make_shared<const ComplexMatrix>(displacement_matrix(beta, dim));
    std::lock_guard<std::mutex> lock(c.mtx);
    auto [it, inserted] = c.entries.emplace(key, mat);
    if (inserted) {
        c.order.push_back(key);
        while (c.order.size() > DisplacementCache::kCap) {
            c.entries.erase(c.order.front());
            c.order.pop_front();
        }
    }
    return it->second;
}

TruncatedKet apply_transfer(const SchmidtResource& res, Amplitude beta, double gain,
                            const TruncatedKet& psi) {
    const int dim = psi.dim();
    if (dim < res.offset + 1) {
        std::ostringstream os;
        os << "apply_transfer: dim " << dim << " cannot hold the resource support";
        throw TruncationError(os.str(), res.offset + 2);
    }

    const auto d_in = cached_displacement(-beta, dim);
    const auto w = d_in->apply(psi.coeffs);

    // Schmidt weights straight from the kind: sqrt(norm) * w_n * lambda^n.
    const double x = res.lambda * res.lambda;
    const bool conditioned = res.kind != ResourceKind::Standard;
    const double base =
        conditioned ? std::sqrt(std::pow(1.0 - x, 3) / (1.0 + x)) : std::sqrt(1.0 - x);

    std::vector<std::complex<double>> masked(static_cast<size_t>(dim), 0.0);
    double pw = 1.0;
    for (int n = 0; n + res.offset < dim; ++n) {
        const double weight = base * (conditioned ? (n + 1.0) : 1.0) * pw;
        masked[n + res.offset] = weight * w[n + res.offset];
        pw *= res.lambda;
    }

    const auto d_out = cached_displacement(gain * beta, dim);
    TruncatedKet out;
    out.coeffs = d_out->apply(masked);
    const double scale = 1.0 / std::sqrt(kPi);
    for (auto& c : out.coeffs) c *= scale;
    return out;
}

int oracle_dim(const SchmidtResource& res, const InputState& input, const InputState& comparison,
               Amplitude beta, double gain) {
    auto amp2 = [](const InputState& s) -> double {
        if (const auto* c = std::get_if<Coherent>(&s)) return std::norm(c->alpha);
        if (const auto* c = std::get_if<CatState>(&s)) return std::norm(c->alpha);
        return static_cast<double>(std::get<FockCoeffs>(s).coeffs.size());
    };
    const double a2 = std::max(amp2(input), amp2(comparison));
    const double b2 = std::norm(beta) * std::max(1.0, gain * gain);
    const int level = static_cast<int>(res.coeffs.size()) + res.offset;
    const int dim = 4 * (static_cast<int>(std::ceil(a2)) + static_cast<int>(std::ceil(b2))) +
                    level;
    return std::clamp(dim, 32, 256);
}

OraclePoint oracle_point(const SchmidtResource& res, const InputState& input, Amplitude beta,
                         double gain, const InputState& comparison) {
    const int dim = oracle_dim(res, input, comparison, beta, gain);
    TruncatedKet psi{fock_coefficients(input, dim)};
    const auto cmp = fock_coefficients(comparison, dim);

    const TruncatedKet out = apply_transfer(res, beta, gain, psi);
    OraclePoint pt;
    pt.beta = beta;
    pt.prob_density = out.norm2();
    if (pt.prob_density >= 1e-300) {
        std::complex<double> overlap = 0.0;
        for (int m = 0; m < dim; ++m) overlap += std::conj(cmp[m]) * out.coeffs[m];
        pt.fidelity = std::norm(overlap) / pt.prob_density;
    }
    return pt;
}

EquivalenceReport run_equivalence_suite(int n_cases) {
    if (n_cases < 1) throw std::invalid_argument("run_equivalence_suite: n_cases must be >= 1");
    std::mt19937_64 rng(20020817ull);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> amp_radius(0.5, 2.0);
    std::uniform_real_distribution<double> beta_radius(0.0, 3.0);

    const double lambdas[] = {0.3, 0.5, 0.8};
    const double gains[] = {0.5, 1.0};

    EquivalenceReport report;
    report.cases.reserve(static_cast<size_t>(n_cases));
    for (int i = 0; i < n_cases; ++i) {
        EquivalenceCase ec;
        ec.kind = (i % 2 == 0) ? ResourceKind::Standard : ResourceKind::PhotonSubtracted;
        ec.lambda = lambdas[(i / 2) % 3];
        ec.gain = gains[(i / 6) % 2];
        const int family = (i / 12) % 3;

        const Amplitude alpha = std::polar(amp_radius(rng), angle(rng));
        const Amplitude gamma = std::polar(amp_radius(rng), angle(rng));
        ec.beta = std::polar(beta_radius(rng), angle(rng));

        TeleportConfig cfg;
        cfg.gain = ec.gain;
        cfg.resource = build_resource(ec.kind, ec.lambda);

        TeleportPoint closed;
        if (family == 0) {
            ec.input = Coherent{alpha};
            ec.comparison = Coherent{gamma};
            cfg.comparison = ec.comparison;
            closed = coherent_point(cfg, alpha, ec.beta);
        } else {
            const Parity parity = (family == 1) ? Parity::Even : Parity::Odd;
            ec.input = CatState{alpha, parity};
            ec.comparison = CatState{gamma, parity};
            cfg.comparison = ec.comparison;
            closed = cat_point(cfg, alpha, parity, ec.beta);
        }

        const OraclePoint oracle = oracle_point(cfg.resource, ec.input, ec.beta, ec.gain,
                                                ec.comparison);
        ec.dp = std::abs(closed.prob_density - oracle.prob_density);
        ec.df = oracle.fidelity ? std::abs(closed.fidelity - *oracle.fidelity) : 0.0;
        report.cases.push_back(ec);

        const double worst = std::max(ec.dp, ec.df);
        if (worst > std::max(report.max_dp, report.max_df))
            report.worst_case = report.cases.size() - 1;
        report.max_dp = std::max(report.max_dp, ec.dp);
        report.max_df = std::max(report.max_df, ec.df);
    }
    return report;
}

}  // namespace cvt
