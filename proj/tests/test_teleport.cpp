#include <cmath>
#include <random>

#include "core/fock_oracle.hpp"
#include "core/numerics.hpp"
#include "core/teleport.hpp"
#include "doctest.h"

using namespace cvt;

namespace {

TeleportConfig make_cfg(ResourceKind kind, double lambda, double gain, InputState comparison) {
    TeleportConfig cfg;
    cfg.gain = gain;
    cfg.comparison = std::move(comparison);
    cfg.resource = build_resource(kind, lambda);
    return cfg;
}

std::vector<Amplitude> seeded_betas(int count, double radius, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-radius, radius);
    std::vector<Amplitude> betas;
    betas.reserve(count);
    while (static_cast<int>(betas.size()) < count) betas.push_back({u(rng), u(rng)});
    return betas;
}

}  // namespace

TEST_CASE("coherent_point: lambda=0 teleports exactly at beta=alpha") {
    const Amplitude alpha{1.5, 0.0};
    const auto cfg = make_cfg(ResourceKind::Standard, 0.0, 1.0, Coherent{alpha});
    const TeleportPoint pt = coherent_point(cfg, alpha, alpha);
    CHECK(pt.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pt.prob_density == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
    CHECK(pt.method == PointMethod::ClosedForm);
}

TEST_CASE("coherent_point: attenuation identity g=lambda, gamma=lambda*alpha") {
    const double lambda = 0.8;
    const Amplitude alpha{1.3, -0.7};
    const auto cfg = make_cfg(ResourceKind::Standard, lambda, lambda, Coherent{lambda * alpha});
    for (Amplitude beta : seeded_betas(100, 3.0, 42)) {
        const TeleportPoint pt = coherent_point(cfg, alpha, beta);
        CHECK(std::abs(pt.fidelity - 1.0) < 1e-12);
    }
}

TEST_CASE("coherent_point matches the matrix oracle (subtracted resource)") {
    const auto cfg = make_cfg(ResourceKind::PhotonSubtracted, 0.8, 1.0, Coherent{{1.5, 0.0}});
    for (Amplitude beta : seeded_betas(6, 2.5, 43)) {
        const TeleportPoint pt = coherent_point(cfg, {1.5, 0.0}, beta);
        const OraclePoint op =
            oracle_point(cfg.resource, Coherent{{1.5, 0.0}}, beta, 1.0, cfg.comparison);
        REQUIRE(op.fidelity.has_value());
        CHECK(std::abs(pt.prob_density - op.prob_density) < 1e-8);
        CHECK(std::abs(pt.fidelity - *op.fidelity) < 1e-8);
    }
}

TEST_CASE("cat_point: alpha=0 even cat is the vacuum") {
    const auto cat_cfg =
        make_cfg(ResourceKind::Standard, 0.7, 1.0, CatState{{0.0, 0.0}, Parity::Even});
    const auto coh_cfg = make_cfg(ResourceKind::Standard, 0.7, 1.0, Coherent{{0.0, 0.0}});
    for (Amplitude beta : seeded_betas(5, 2.0, 44)) {
        const TeleportPoint a = cat_point(cat_cfg, {0.0, 0.0}, Parity::Even, beta);
        const TeleportPoint b = coherent_point(coh_cfg, {0.0, 0.0}, beta);
        CHECK(a.prob_density == doctest::Approx(b.prob_density).epsilon(1e-12));
        CHECK(a.fidelity == doctest::Approx(b.fidelity).epsilon(1e-12));
    }
}

TEST_CASE("cat_point matches the matrix oracle (standard resource)") {
    const Amplitude alpha{1.5, 0.0};
    const auto cfg = make_cfg(ResourceKind::Standard, 0.8, 1.0, CatState{alpha, Parity::Even});
    for (Amplitude beta : seeded_betas(6, 2.5, 45)) {
        const TeleportPoint pt = cat_point(cfg, alpha, Parity::Even, beta);
        const OraclePoint op =
            oracle_point(cfg.resource, CatState{alpha, Parity::Even}, beta, 1.0, cfg.comparison);
        REQUIRE(op.fidelity.has_value());
        CHECK(std::abs(pt.prob_density - op.prob_density) < 1e-8);
        CHECK(std::abs(pt.fidelity - *op.fidelity) < 1e-8);
    }
}

TEST_CASE("cat_point: odd-cat probability at beta=0 matches the direct expression") {
    const double lambda = 0.8;
    const Amplitude alpha{0.0, 1.5};
    const auto cfg = make_cfg(ResourceKind::Standard, lambda, 1.0, CatState{alpha, Parity::Odd});
    const TeleportPoint pt = cat_point(cfg, alpha, Parity::Odd, {0.0, 0.0});

    // At beta=0 the four terms collapse pairwise; diagonal terms carry
    // e^{(l^2-1)|a|^2}, cross terms -e^{-(1+l^2)|a|^2}.
    const double a2 = std::norm(alpha);
    const double n2 = 1.0 / (2.0 - 2.0 * std::exp(-2.0 * a2));
    const double l2 = lambda * lambda;
    const double direct = n2 * ((1.0 - l2) / M_PI) * 2.0 *
                          (std::exp((l2 - 1.0) * a2) - std::exp(-(1.0 + l2) * a2));
    CHECK(pt.prob_density == doctest::Approx(direct).epsilon(1e-12));

    const OraclePoint op =
        oracle_point(cfg.resource, CatState{alpha, Parity::Odd}, {0.0, 0.0}, 1.0, cfg.comparison);
    CHECK(pt.prob_density == doctest::Approx(op.prob_density).epsilon(1e-10));
}

TEST_CASE("transfer_point: lambda=0 collapses to a displaced vacuum projection") {
    const auto cfg = make_cfg(ResourceKind::Standard, 0.0, 1.0, Coherent{{1.2, 0.5}});
    for (Amplitude beta : seeded_betas(5, 2.0, 46)) {
        const TeleportPoint pt = transfer_point(cfg, Coherent{{1.2, 0.5}}, beta);
        const double expected = std::exp(-std::norm(Amplitude{1.2, 0.5} - beta)) / M_PI;
        CHECK(pt.prob_density == doctest::Approx(expected).epsilon(1e-10));
        CHECK(pt.method == PointMethod::Numeric);
    }
}

TEST_CASE("transfer_point agrees with the closed form on a beta grid") {
    const Amplitude alpha{1.5, 0.0};
    const auto cfg = make_cfg(ResourceKind::Standard, 0.8, 1.0, Coherent{alpha});
    for (int i = 0; i < 11; ++i) {
        for (int j = 0; j < 11; ++j) {
            const Amplitude beta{-1.0 + 0.5 * i, -2.5 + 0.5 * j};
            const TeleportPoint numeric = transfer_point(cfg, Coherent{alpha}, beta);
            const TeleportPoint closed = coherent_point(cfg, alpha, beta);
            CHECK(std::abs(numeric.prob_density - closed.prob_density) < 1e-8);
            CHECK(std::abs(numeric.fidelity - closed.fidelity) < 1e-8);
        }
    }
}

TEST_CASE("POVM completeness: P(beta) integrates to 1 for every kind") {
    const Amplitude alpha{1.5, 0.0};
    const InputState input = Coherent{alpha};

    // closed forms at high order
    for (ResourceKind kind : {ResourceKind::Standard, ResourceKind::PhotonSubtracted}) {
        auto cfg = make_cfg(kind, 0.8, 1.0, Coherent{alpha});
        QuadratureSpec quad = default_quadrature(cfg.resource, input);
        quad.order = 64;
        quad.refine = false;
        auto prob = [&](Amplitude beta) { return coherent_point(cfg, alpha, beta).prob_density; };
        CAPTURE(to_string(kind));
        CHECK(std::abs(integrate_plane(prob, quad).value - 1.0) < 1e-6);
    }

    // generalized numeric path, all kinds
    for (ResourceKind kind :
         {ResourceKind::Standard, ResourceKind::PhotonSubtracted, ResourceKind::PhotonAdded}) {
        auto cfg = make_cfg(kind, 0.8, 1.0, Coherent{alpha});
        QuadratureSpec quad = default_quadrature(cfg.resource, input);
        quad.order = 40;
        quad.refine = false;
        auto prob = [&](Amplitude beta) { return transfer_point(cfg, input, beta).prob_density; };
        CAPTURE(to_string(kind));
        CHECK(std::abs(integrate_plane(prob, quad).value - 1.0) < 1e-6);
    }
}

TEST_CASE("transfer_point handles raw Fock-coefficient inputs") {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const InputState input =
        make_fock_coeffs({{inv_sqrt2, 0.0}, {0.0, inv_sqrt2}});  // (|0> + i|1>)/sqrt(2)
    auto cfg = make_cfg(ResourceKind::PhotonSubtracted, 0.8, 1.0, input);

    for (Amplitude beta : seeded_betas(5, 2.0, 48)) {
        const TeleportPoint pt = transfer_point(cfg, input, beta);
        const OraclePoint op = oracle_point(cfg.resource, input, beta, 1.0, cfg.comparison);
        REQUIRE(op.fidelity.has_value());
        CHECK(std::abs(pt.prob_density - op.prob_density) < 1e-9);
        CHECK(std::abs(pt.fidelity - *op.fidelity) < 1e-9);
        CHECK(pt.fidelity >= 0.0);
        CHECK(pt.fidelity <= 1.0 + 1e-9);
    }

    // average fidelity through the numeric integrand agrees with the P*F route
    QuadratureSpec quad;
    quad.order = 24;
    quad.width = 1.0 / std::sqrt(1.0 - 0.64);
    quad.centers = {{0.0, 0.0}};
    quad.refine = false;
    const double direct = average_fidelity(cfg, input, quad).fbar;
    const double via_points = integrate_plane(
        [&](Amplitude beta) {
            const TeleportPoint pt = transfer_point(cfg, input, beta);
            return pt.prob_density * pt.fidelity;
        },
        quad).value;
    CHECK(direct > 0.0);
    CHECK(direct <= 1.0 + 1e-9);
    CHECK(std::abs(direct - via_points) < 1e-7);

    CHECK_THROWS_AS(make_fock_coeffs({{1.0, 0.0}, {0.5, 0.0}}), std::invalid_argument);
}

TEST_CASE("POVM completeness holds for cat inputs too") {
    const Amplitude alpha{1.5, 0.0};
    const InputState input = CatState{alpha, Parity::Even};
    auto cfg = make_cfg(ResourceKind::PhotonSubtracted, 0.8, 1.0, CatState{alpha, Parity::Even});
    QuadratureSpec quad = default_quadrature(cfg.resource, input);
    quad.order = 64;
    quad.refine = false;
    auto prob = [&](Amplitude beta) { return cat_point(cfg, alpha, Parity::Even, beta).prob_density; };
    CHECK(std::abs(integrate_plane(prob, quad).value - 1.0) < 1e-6);
}

TEST_CASE("average_fidelity: classical limit and attenuation identity") {
    const Amplitude alpha{1.5, 0.0};
    const InputState input = Coherent{alpha};

    auto classical = make_cfg(ResourceKind::Standard, 0.0, 1.0, Coherent{alpha});
    auto quad = default_quadrature(classical.resource, input);
    CHECK(average_fidelity(classical, input, quad).fbar == doctest::Approx(0.5).epsilon(1e-9));

    const double lambda = 0.8;
    auto attenuated = make_cfg(ResourceKind::Standard, lambda, lambda, Coherent{lambda * alpha});
    quad = default_quadrature(attenuated.resource, input);
    CHECK(std::abs(average_fidelity(attenuated, input, quad).fbar - 1.0) < 1e-9);
}

TEST_CASE("average_fidelity equals the P*F integral of the point operations") {
    const Amplitude alpha{1.0, 0.0};
    const InputState input = Coherent{alpha};
    auto cfg = make_cfg(ResourceKind::PhotonSubtracted, 0.5, 1.0, Coherent{alpha});
    const QuadratureSpec quad = default_quadrature(cfg.resource, input);

    const double direct = average_fidelity(cfg, input, quad).fbar;
    const double via_points = integrate_plane(
        [&](Amplitude beta) {
            const TeleportPoint pt = coherent_point(cfg, alpha, beta);
            return pt.prob_density * pt.fidelity;
        },
        quad).value;
    CHECK(std::abs(direct - via_points) < 1e-7);
}

TEST_CASE("average_fidelity is independent of alpha at unity gain, gamma=alpha") {
    auto run = [](double a) {
        const Amplitude alpha{a, 0.0};
        auto cfg = make_cfg(ResourceKind::Standard, 0.6, 1.0, Coherent{alpha});
        const InputState input = Coherent{alpha};
        return average_fidelity(cfg, input, default_quadrature(cfg.resource, input)).fbar;
    };
    CHECK(std::abs(run(1.5) - run(3.0)) < 1e-7);
}

TEST_CASE("point values stay physical over random draws") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> lam(0.0, 0.9);
    std::uniform_real_distribution<double> gg(0.0, 1.5);
    for (int i = 0; i < 200; ++i) {
        const ResourceKind kind =
            (i % 2 == 0) ? ResourceKind::Standard : ResourceKind::PhotonSubtracted;
        const Amplitude alpha{u(rng), u(rng)};
        const Amplitude gamma{u(rng), u(rng)};
        const Amplitude beta{u(rng), u(rng)};
        const auto cfg = make_cfg(kind, lam(rng), gg(rng), Coherent{gamma});
        const TeleportPoint pt = coherent_point(cfg, alpha, beta);
        CHECK(pt.prob_density >= 0.0);
        CHECK(pt.fidelity >= 0.0);
        CHECK(pt.fidelity <= 1.0 + 1e-9);
    }
}

TEST_CASE("gain_gamma_scan finds the attenuated unity-fidelity point") {
    const InputState input = Coherent{{3.0, 0.0}};
    const SchmidtResource res = build_resource(ResourceKind::Standard, 0.5);
    QuadratureSpec quad = default_quadrature(res, input);

    std::vector<double> gains = {0.5, 0.75, 1.0};
    std::vector<Amplitude> gammas;
    for (int i = 0; i <= 8; ++i) gammas.push_back({1.0 + 0.25 * i, 0.0});

    const GainScanResult scan = gain_gamma_scan(input, res, gains, gammas, quad);
    REQUIRE(scan.rows.size() == 27);
    const GainScanRow& best = scan.rows[scan.argmax];
    CHECK(best.gain == doctest::Approx(0.5));
    CHECK(best.gamma.real() == doctest::Approx(1.5));
    CHECK(best.fbar >= 1.0 - 1e-6);
}

TEST_CASE("boundary_scan: standard curve follows (1+lambda)/2 and crosses at 1/3") {
    std::vector<double> grid;
    for (int i = 10; i <= 80; i += 2) grid.push_back(0.01 * i);
    const BoundaryScanResult scan = boundary_scan({3.0, 0.0}, grid, 32, false);

    for (size_t i = 0; i < grid.size(); ++i)
        CHECK(scan.fbar_standard[i] == doctest::Approx((1.0 + grid[i]) / 2.0).epsilon(1e-9));
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        CHECK(scan.fbar_standard[i + 1] > scan.fbar_standard[i]);
        CHECK(scan.fbar_subtracted[i + 1] > scan.fbar_subtracted[i]);
    }

    REQUIRE(scan.crossing_standard.has_value());
    CHECK(std::abs(*scan.crossing_standard - 1.0 / 3.0) < 0.01);
    REQUIRE(scan.crossing_subtracted.has_value());
    CHECK(*scan.crossing_subtracted < *scan.crossing_standard);
    REQUIRE(scan.quantum_window.has_value());
    CHECK(scan.quantum_window->first < scan.quantum_window->second);
}

TEST_CASE("family mismatches are rejected") {
    auto cfg = make_cfg(ResourceKind::Standard, 0.5, 1.0, CatState{{1.0, 0.0}, Parity::Even});
    CHECK_THROWS_AS(coherent_point(cfg, {1.0, 0.0}, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(cat_point(cfg, {1.0, 0.0}, Parity::Odd, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(average_fidelity(cfg, Coherent{{1.0, 0.0}},
                                     default_quadrature(cfg.resource, Coherent{{1.0, 0.0}})),
                    std::invalid_argument);
}

TEST_CASE("odd cat at alpha=0 is rejected") {
    CHECK_THROWS_AS(cat_normalization({0.0, 0.0}, Parity::Odd), std::invalid_argument);
    CHECK(cat_normalization({0.0, 0.0}, Parity::Even) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("far-beta behavior: coherent decays to zero, cat ratio is flagged") {
    auto coh = make_cfg(ResourceKind::Standard, 0.5, 1.0, Coherent{{1.5, 0.0}});
    const TeleportPoint pt = coherent_point(coh, {1.5, 0.0}, {35.0, 0.0});
    CHECK(pt.prob_density == 0.0);
    CHECK(pt.fidelity < 1e-100);

    auto cat = make_cfg(ResourceKind::Standard, 0.5, 1.0, CatState{{1.5, 0.0}, Parity::Even});
    CHECK_THROWS_AS(cat_point(cat, {1.5, 0.0}, Parity::Even, {35.0, 0.0}), NonFiniteError);
}

TEST_CASE("transfer_point reports truncation insufficiency") {
    // ~196 mean photons cannot be represented under the level cap
    auto cfg = make_cfg(ResourceKind::Standard, 0.5, 1.0, Coherent{{14.0, 0.0}});
    CHECK_THROWS_AS(transfer_point(cfg, Coherent{{14.0, 0.0}}, {0.0, 0.0}), TruncationError);
}

TEST_CASE("average_fidelity flags non-converged quadrature") {
    // A cusp at the origin converges too slowly for a deliberately low order.
    const Amplitude alpha{0.0, 0.0};
    auto cfg = make_cfg(ResourceKind::Standard, 0.5, 1.0, Coherent{alpha});
    QuadratureSpec quad;
    quad.order = 8;
    quad.width = 4.0;
    quad.centers = {{0.3, 0.1}};
    quad.refine = true;
    // exercised through integrate_plane directly to keep the trigger local
    auto cusp = [](Amplitude b) { return std::exp(-2.0 * std::abs(b)); };
    const QuadratureResult q = integrate_plane(cusp, quad);
    CHECK(q.err_estimate > 1e-4);  // precondition for the ConvergenceError path

    bool threw = false;
    try {
        // same machinery through average_fidelity needs an integrand with the
        // same behavior; the Fock input below has slow tails at low order.
        QuadratureSpec bad;
        bad.order = 8;
        bad.width = 0.2;
        bad.centers = {{2.0, 0.0}};
        bad.refine = true;
        average_fidelity(cfg, Coherent{alpha}, bad);
    } catch (const ConvergenceError&) {
        threw = true;
    }
    CHECK(threw);
}
