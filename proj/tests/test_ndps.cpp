#include <cmath>
#include <map>

#include "core/ndps.hpp"
#include "doctest.h"

using namespace cvt;

namespace {

// Brute-force oracle: populate the two-mode lattice input (x) resource and
// marginalize the number difference directly.
std::map<int, double> lattice_distribution(const SchmidtResource& res,
                                           const std::vector<std::complex<double>>& c) {
    std::map<int, double> dist;
    for (size_t m = 0; m < c.size(); ++m) {
        const double pm = std::norm(c[m]);
        for (size_t n = 0; n < res.coeffs.size(); ++n) {
            const int alice = static_cast<int>(n) + res.offset;
            const int k = static_cast<int>(m) - alice;
            dist[k] += pm * res.coeffs[n] * res.coeffs[n];
        }
    }
    return dist;
}

}  // namespace

TEST_CASE("input_coeffs basics") {
    const auto vac = input_coeffs(Coherent{{0.0, 0.0}}, 4);
    CHECK(vac[0] == std::complex<double>(1.0, 0.0));
    for (int n = 1; n <= 4; ++n) CHECK(std::abs(vac[n]) == 0.0);

    // Poisson mass below n=30 for alpha=3, against a long-double oracle
    const auto c3 = input_coeffs(Coherent{{3.0, 0.0}}, 30);
    double mass = 0.0;
    for (const auto& cn : c3) mass += std::norm(cn);
    long double oracle = 0.0L;
    long double term = std::exp(-9.0L);
    for (int n = 0; n <= 30; ++n) {
        oracle += term;
        term *= 9.0L / (n + 1.0L);
    }
    CHECK(mass == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-13));
    // exact tail beyond 30 is ~8.0e-9
    CHECK(mass > 1.0 - 1e-8);
    CHECK(mass < 1.0 - 1e-9);

    const auto even = input_coeffs(CatState{{1.5, 0.0}, Parity::Even}, 20);
    for (int n = 1; n <= 20; n += 2) CHECK(std::abs(even[n]) == 0.0);
    double even_mass = 0.0;
    for (const auto& cn : even) even_mass += std::norm(cn);
    CHECK(even_mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("ndps_point: lambda=0 collapses to the lowest surviving term") {
    const auto c = input_coeffs(Coherent{{3.0, 0.0}}, 60);

    const SchmidtResource std0 = build_resource(ResourceKind::Standard, 0.0);
    const NdpsPoint p_std = ndps_point(std0, c, 0);
    const double e9 = std::exp(-9.0);
    CHECK(p_std.prob == doctest::Approx(e9).epsilon(1e-12));
    REQUIRE(p_std.fidelity.has_value());
    CHECK(*p_std.fidelity == doctest::Approx(e9).epsilon(1e-12));

    const SchmidtResource sub0 = build_resource(ResourceKind::PhotonSubtracted, 0.0);
    const NdpsPoint p_sub = ndps_point(sub0, c, 0);
    CHECK(p_sub.prob == doctest::Approx(e9).epsilon(1e-12));

    // photon-added support starts one level up
    const SchmidtResource add0 = build_resource(ResourceKind::PhotonAdded, 0.0);
    const NdpsPoint p_add = ndps_point(add0, c, 0);
    CHECK(p_add.prob == doctest::Approx(9.0 * e9).epsilon(1e-12));
    REQUIRE(p_add.fidelity.has_value());
    CHECK(*p_add.fidelity == doctest::Approx(9.0 * e9).epsilon(1e-12));
}

TEST_CASE("ndps_point: fidelity approaches 1 as lambda -> 1") {
    TruncationPolicy policy;
    const SchmidtResource res = build_resource(ResourceKind::Standard, 0.999, policy);
    const auto c = input_coeffs(Coherent{{3.0, 0.0}},
                                static_cast<int>(res.coeffs.size()) + 4);
    const NdpsPoint pt = ndps_point(res, c, 0);
    REQUIRE(pt.fidelity.has_value());
    CHECK(*pt.fidelity > 0.999);
    CHECK(*pt.fidelity <= 1.0 + 1e-12);
}

TEST_CASE("ndps_point: conditioned resources beat standard at k=0 over mid lambda") {
    for (double lambda = 0.2; lambda <= 0.7001; lambda += 0.05) {
        const auto run = [&](ResourceKind kind) {
            const SchmidtResource res = build_resource(kind, lambda);
            const auto c = input_coeffs(Coherent{{3.0, 0.0}},
                                        static_cast<int>(res.coeffs.size()) + 2);
            return *ndps_point(res, c, 0).fidelity;
        };
        const double f_std = run(ResourceKind::Standard);
        CHECK(run(ResourceKind::PhotonSubtracted) > f_std);
        CHECK(run(ResourceKind::PhotonAdded) > f_std);
    }
}

TEST_CASE("ndps_point: standard wins at k=5 for high lambda") {
    bool found = false;
    for (double lambda = 0.75; lambda <= 0.951; lambda += 0.05) {
        const auto run = [&](ResourceKind kind) {
            const SchmidtResource res = build_resource(kind, lambda);
            const auto c = input_coeffs(Coherent{{3.0, 0.0}},
                                        static_cast<int>(res.coeffs.size()) + 8);
            return *ndps_point(res, c, 5).fidelity;
        };
        if (run(ResourceKind::Standard) > run(ResourceKind::PhotonSubtracted) &&
            run(ResourceKind::Standard) > run(ResourceKind::PhotonAdded))
            found = true;
    }
    CHECK(found);
}

TEST_CASE("ndps_point: undefined fidelity marker at P(k)=0") {
    const SchmidtResource res = build_resource(ResourceKind::Standard, 0.5);
    const auto vac = input_coeffs(Coherent{{0.0, 0.0}}, 8);
    const NdpsPoint pt = ndps_point(res, vac, 1);
    CHECK(pt.prob == 0.0);
    CHECK_FALSE(pt.fidelity.has_value());
    CHECK(pt.out_coeffs.empty());
}

TEST_CASE("ndps_distribution: lambda=0 gives the Poisson distribution") {
    const SchmidtResource res = build_resource(ResourceKind::Standard, 0.0);
    const auto c = input_coeffs(Coherent{{3.0, 0.0}}, 60);
    const NdpsDistribution dist = ndps_distribution(res, c, 20);
    for (const NdpsPoint& pt : dist.points) {
        if (pt.k >= 0)
            CHECK(pt.prob == doctest::Approx(std::norm(c[pt.k])).epsilon(1e-12));
        else
            CHECK(pt.prob == 0.0);
    }
}

TEST_CASE("ndps completeness survives up to lambda = 0.9") {
    const auto c = input_coeffs(Coherent{{3.0, 0.0}}, 90);
    for (ResourceKind kind :
         {ResourceKind::Standard, ResourceKind::PhotonSubtracted, ResourceKind::PhotonAdded}) {
        const SchmidtResource res = build_resource(kind, 0.9);
        CHECK(std::abs(ndps_distribution(res, c, 80).total_probability - 1.0) < 1e-9);
    }
}

TEST_CASE("ndps_distribution: extended outcomes are complete") {
    const auto c = input_coeffs(Coherent{{3.0, 0.0}}, 90);
    for (ResourceKind kind :
         {ResourceKind::Standard, ResourceKind::PhotonSubtracted, ResourceKind::PhotonAdded}) {
        const SchmidtResource res = build_resource(kind, 0.8);
        const NdpsDistribution dist = ndps_distribution(res, c, 60);
        CAPTURE(to_string(kind));
        CHECK(std::abs(dist.total_probability - 1.0) < 1e-9);

        // against the brute-force two-mode lattice
        const auto lattice = lattice_distribution(res, c);
        double lattice_total = 0.0;
        for (const auto& [k, p] : lattice) lattice_total += p;
        CHECK(std::abs(lattice_total - 1.0) < 1e-9);
        for (const NdpsPoint& pt : dist.points) {
            const auto it = lattice.find(pt.k);
            const double expected = (it == lattice.end()) ? 0.0 : it->second;
            CHECK(pt.prob == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("ndps_distribution: added and subtracted differ at k=0 but both complete") {
    const auto c = input_coeffs(Coherent{{3.0, 0.0}}, 90);
    const SchmidtResource sub = build_resource(ResourceKind::PhotonSubtracted, 0.8);
    const SchmidtResource add = build_resource(ResourceKind::PhotonAdded, 0.8);
    const NdpsDistribution d_sub = ndps_distribution(sub, c, 60);
    const NdpsDistribution d_add = ndps_distribution(add, c, 60);
    const auto at = [](const NdpsDistribution& d, int k) {
        for (const auto& pt : d.points)
            if (pt.k == k) return pt.prob;
        return 0.0;
    };
    CHECK(std::abs(at(d_sub, 0) - at(d_add, 0)) > 1e-6);
    CHECK(std::abs(d_sub.total_probability - 1.0) < 1e-9);
    CHECK(std::abs(d_add.total_probability - 1.0) < 1e-9);
}

TEST_CASE("ndps output states are normalized and fidelities physical") {
    const auto c = input_coeffs(Coherent{{3.0, 0.0}}, 90);
    const SchmidtResource res = build_resource(ResourceKind::PhotonSubtracted, 0.8);
    const NdpsDistribution dist = ndps_distribution(res, c, 30);
    for (const NdpsPoint& pt : dist.points) {
        if (pt.prob <= 0.0) continue;
        double norm2 = 0.0;
        for (const auto& a : pt.out_coeffs) norm2 += std::norm(a);
        CHECK(std::abs(norm2 - 1.0) < 1e-12);
        REQUIRE(pt.fidelity.has_value());
        CHECK(*pt.fidelity >= 0.0);
        CHECK(*pt.fidelity <= 1.0 + 1e-12);
    }
}

TEST_CASE("ndps_fidelity_curve: standard k=0 is monotone and heads to 1") {
    std::vector<double> grid;
    for (int i = 1; i <= 9; ++i) grid.push_back(0.1 * i);
    const auto curve =
        ndps_fidelity_curve(ResourceKind::Standard, Coherent{{3.0, 0.0}}, 0, grid);
    REQUIRE(curve.size() == grid.size());
    double prev = 0.0;
    for (const auto& pt : curve) {
        REQUIRE(pt.fidelity.has_value());
        CHECK(*pt.fidelity > prev);
        prev = *pt.fidelity;
    }
    CHECK(prev > 0.9);  // lambda = 0.9 already close to the limit
}
