#include "resources.hpp"

#include <cmath>

#include "numerics.hpp"

namespace cvt {

SchmidtResource build_resource(ResourceKind kind, double lambda, const TruncationPolicy& policy) {
    if (!(lambda >= 0.0 && lambda < 1.0))
        throw std::invalid_argument("build_resource: lambda must be in [0,1)");
    const TruncationLevel lvl = truncation_level(lambda, kind, policy);

    SchmidtResource res;
    res.kind = kind;
    res.lambda = lambda;
    res.offset = (kind == ResourceKind::PhotonAdded) ? 1 : 0;
    res.truncation_capped = lvl.capped;
    res.tail_mass = resource_tail_mass(lambda, kind, lvl.level);
    res.coeffs.resize(static_cast<size_t>(lvl.level) + 1);

    const double x = lambda * lambda;
    if (kind == ResourceKind::Standard) {
        const double base = std::sqrt(1.0 - x);
        double pw = 1.0;
        for (size_t n = 0; n < res.coeffs.size(); ++n) {
            res.coeffs[n] = base * pw;
            pw *= lambda;
        }
    } else {
        const double base = std::sqrt(std::pow(1.0 - x, 3) / (1.0 + x));
        double pw = 1.0;
        for (size_t n = 0; n < res.coeffs.size(); ++n) {
            res.coeffs[n] = base * (static_cast<double>(n) + 1.0) * pw;
            pw *= lambda;
        }
    }
    return res;
}

HeraldProbability herald_probability(double theta, double lambda) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("herald_probability: theta must be in [0,1]");
    if (!(lambda >= 0.0 && lambda < 1.0))
        throw std::invalid_argument("herald_probability: lambda must be in [0,1)");
    const double x = lambda * lambda;
    HeraldProbability p;
    p.value = std::pow(theta, 4) * (1.0 + x) / std::pow(1.0 - x, 3);
    p.perturbative_ok = p.value <= 0.1;
    return p;
}

std::vector<std::pair<int, double>> photon_number_distribution(const SchmidtResource& res) {
    std::vector<std::pair<int, double>> dist;
    dist.reserve(res.coeffs.size() + static_cast<size_t>(res.offset));
    for (int lvl = 0; lvl < res.offset; ++lvl) dist.emplace_back(lvl, 0.0);
    for (size_t n = 0; n < res.coeffs.size(); ++n)
        dist.emplace_back(static_cast<int>(n) + res.offset, res.coeffs[n] * res.coeffs[n]);
    return dist;
}

double von_neumann_entropy(const SchmidtResource& res, EntropyBase base) {
    double s = 0.0;
    for (double c : res.coeffs) {
        const double p = c * c;
        if (p > 0.0) s -= p * std::log(p);
    }
    if (base == EntropyBase::Bit) s /= std::log(2.0);
    return s;
}

double joint_phase_density(const SchmidtResource& res, double phi_plus) {
    // The Fock offset only contributes a global phase, so all three kinds
    // reduce to the same |sum c_n e^{i n phi}|^2 pattern.
    const std::complex<double> rot = std::polar(1.0, phi_plus);
    std::complex<double> phase = 1.0;
    std::complex<double> acc = 0.0;
    for (double c : res.coeffs) {
        acc += c * phase;
        phase *= rot;
    }
    return std::norm(acc) / (2.0 * M_PI);
}

}  // namespace cvt
