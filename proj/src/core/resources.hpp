#pragma once

#include <utility>
#include <vector>

#include "types.hpp"

namespace cvt {

// Bipartite entangled resource in Schmidt-diagonal form: the state is
// sum_n coeffs[n] |n+offset, n+offset>, with coeffs real, nonnegative and
// normalized up to the truncated tail_mass.
struct SchmidtResource {
    ResourceKind kind = ResourceKind::Standard;
    double lambda = 0.0;
    std::vector<double> coeffs;
    int offset = 0;  // 1 iff PhotonAdded
    double tail_mass = 0.0;
    bool truncation_capped = false;
};

/// Builds the requested resource at squeezing lambda in [0,1), truncated per
/// policy. Standard: c_n = sqrt(1-l^2) l^n. Conditioned (subtracted/added):
/// c_n = sqrt((1-l^2)^3/(1+l^2)) (n+1) l^n, the added kind shifted one Fock
/// level up.
SchmidtResource build_resource(ResourceKind kind, double lambda,
                               const TruncationPolicy& policy = {});

struct HeraldProbability {
    double value = 0.0;
    // False once the second-order-in-theta expansion stops being trustworthy
    // (value above 0.1).
    bool perturbative_ok = true;
};

/// Coincidence probability theta^4 (1+lambda^2)/(1-lambda^2)^3 of heralding
/// the conditioned resource with tap reflectivity theta.
HeraldProbability herald_probability(double theta, double lambda);

/// Photon-number distribution (fock_level, probability), levels from 0 so the
/// added resource reports an explicit zero at the vacuum.
std::vector<std::pair<int, double>> photon_number_distribution(const SchmidtResource& res);

enum class EntropyBase { Nat, Bit };

/// Von Neumann entropy of either reduced mode, -sum p_n log p_n over the
/// Schmidt spectrum p_n = c_n^2.
double von_neumann_entropy(const SchmidtResource& res, EntropyBase base = EntropyBase::Nat);

/// Joint phase-sum probability density at phi_+ in [-pi,pi], normalized to
/// unit integral: |sum_n c_n e^{i n phi}|^2 / (2 pi).
double joint_phase_density(const SchmidtResource& res, double phi_plus);

}  // namespace cvt
