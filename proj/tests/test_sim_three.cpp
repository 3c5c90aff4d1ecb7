#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "steerkit/dense.hpp"
#include "steerkit/sampling.hpp"
#include "steerkit/sim_three.hpp"

using namespace steerkit;

namespace {

ExtremalPovm trine() {
    ExtremalPovm p;
    for (int a = 0; a < 3; ++a) {
        double ang = 2.0 * std::numbers::pi * a / 3.0;
        p.outcomes.push_back({1.0 / 3.0, {std::cos(ang), std::sin(ang), 0.0}});
    }
    return p;
}

}  // namespace

TEST_CASE("xy coefficients", "[sim3]") {
    SECTION("trine: X = Y = 1/6") {
        XYCoefficients xy = xy_coefficients({1.0 / 6, 1.0 / 6, 1.0 / 6}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
        REQUIRE(xy.x == Catch::Approx(1.0 / 6.0).margin(1e-15));
        REQUIRE(xy.y == Catch::Approx(1.0 / 6.0).margin(1e-15));
    }
    SECTION("X + Y = 1 - 2 mu_1 on random extremal triples") {
        Rng rng(3);
        for (int rep = 0; rep < 500; ++rep) {
            ExtremalPovm p = sample_extremal_povm(3, rng);
            SimThreeResult res = simulate_three(p);
            REQUIRE(std::abs(res.xy.x + res.xy.y - (1.0 - 2.0 * p.outcomes[0].mu)) < 1e-12);
            REQUIRE(res.xy.x >= 0.0);
            REQUIRE(res.xy.y >= 0.0);
        }
    }
    SECTION("mu_1 -> 1/2 drives X and Y to zero") {
        double eps = 1e-2;
        ExtremalPovm p;
        double mu2 = 0.5 / (1.0 + std::cos(eps));
        p.outcomes = {{2.0 * mu2 * std::cos(eps), {1, 0, 0}},
                      {mu2, {std::cos(std::numbers::pi - eps), std::sin(std::numbers::pi - eps), 0}},
                      {mu2, {std::cos(std::numbers::pi + eps), std::sin(std::numbers::pi + eps), 0}}};
        REQUIRE(p.is_valid(1e-12));
        SimThreeResult res = simulate_three(p);
        double q1 = 1.0 - 2.0 * p.outcomes[0].mu;
        REQUIRE(res.xy.x >= 0.0);
        REQUIRE(res.xy.y >= 0.0);
        REQUIRE(res.xy.x + res.xy.y == Catch::Approx(q1).margin(1e-12));
        REQUIRE(res.residual < 1e-12);
    }
    SECTION("alpha_1 = 0 rejected") {
        REQUIRE_THROWS_AS(xy_coefficients({0.0, 0.2, 0.2}, {0.3, 0.3, 0.4}),
                          std::invalid_argument);
    }
}

TEST_CASE("unnormalized response reproduces effects but not normalization", "[sim3]") {
    ExtremalPovm p = trine();
    ResponseTable t = unnormalized_response_three(p);
    SECTION("column {1,2} sums to 4/3") {
        double s = t.at(0, 0b011) + t.at(1, 0b011) + t.at(2, 0b011);
        REQUIRE(s == Catch::Approx(4.0 / 3.0).margin(1e-15));
    }
    SECTION("rows reproduce the noisy effects to 1e-12 under the analytic parent") {
        CoarseGrainedPovm parent =
            coarse_grain_coplanar3(p.outcomes[0].mhat, p.outcomes[1].mhat, p.outcomes[2].mhat);
        std::vector<Effect> targets;
        for (const auto& o : p.outcomes) targets.push_back(effect_from_bloch(o.mu, o.mhat, 0.5));
        REQUIRE(simulation_residual(t, parent, targets) < 1e-12);
    }
    SECTION("the PVM pair's hemisphere response is already normalized") {
        ExtremalPovm pvm = sample_extremal_povm(2, 5);
        SimThreeResult res = simulate_three(pvm);
        REQUIRE(res.table.column_sum_violation() == 0.0);
        REQUIRE(res.table.at(0, 0b1) == 1.0);  // 2 mu = 1
    }
}

TEST_CASE("normalized table for the trine", "[sim3]") {
    SimThreeResult res = simulate_three(trine());
    SECTION("frozen values") {
        REQUIRE(res.table.at(0, 0b001) == Catch::Approx(2.0 / 3.0).margin(1e-15));
        REQUIRE(res.table.at(1, 0b001) == Catch::Approx(1.0 / 6.0).margin(1e-15));
        REQUIRE(res.table.at(2, 0b001) == Catch::Approx(1.0 / 6.0).margin(1e-15));
        REQUIRE(res.table.column_sum_violation() < 1e-15);
    }
    SECTION("parent singleton is (1/6)(I + (3/4) m sigma)") {
        const Effect& pi1 = res.parent.at(0b001);
        REQUIRE(pi1.t == Catch::Approx(1.0 / 6.0).margin(1e-15));
        REQUIRE(max_component_diff(pi1.b, (1.0 / 8.0) * trine().outcomes[0].mhat) < 1e-15);
    }
    SECTION("exact reconstruction of M_1 = (1/3)(I + (1/2) m sigma)") {
        Effect acc;
        for (const auto& [label, e] : res.parent.entries) acc += res.table.at(0, label) * e;
        REQUIRE(std::abs(acc.t - 1.0 / 3.0) < 1e-15);
        REQUIRE(max_component_diff(acc.b, (1.0 / 6.0) * trine().outcomes[0].mhat) < 1e-15);
    }
    SECTION("dense-matrix reconstruction agrees (independent oracle)") {
        for (int a = 0; a < 3; ++a) {
            Mat2 acc{};
            for (const auto& [label, e] : res.parent.entries)
                acc = acc + to_matrix(e) * cplx(res.table.at(a, label));
            Mat2 target = to_matrix(
                effect_from_bloch(1.0 / 3.0, trine().outcomes[static_cast<std::size_t>(a)].mhat, 0.5));
            REQUIRE(acc.max_abs_diff(target) < 1e-15);
        }
    }
}

TEST_CASE("Observation 1: the untouched row keeps its unnormalized values", "[sim3]") {
    Rng rng(9);
    for (int rep = 0; rep < 50; ++rep) {
        ExtremalPovm p = sample_extremal_povm(3, rng);
        ResponseTable un = unnormalized_response_three(p);
        for (int u = 0; u < 3; ++u) {
            SimThreeResult res = simulate_three(p, u);
            for (const auto& [label, col] : res.table.columns)
                REQUIRE(std::abs(col[static_cast<std::size_t>(u)] - un.at(u, label)) < 1e-15);
        }
    }
}

TEST_CASE("linear dependence identities of the analytic parent", "[sim3][property]") {
    Rng rng(15);
    for (int rep = 0; rep < 100; ++rep) {
        ExtremalPovm p = sample_extremal_povm(3, rng);
        CoarseGrainedPovm parent =
            coarse_grain_coplanar3(p.outcomes[0].mhat, p.outcomes[1].mhat, p.outcomes[2].mhat);
        Effect dep;
        for (int a = 0; a < 3; ++a) {
            double q = 1.0 - 2.0 * p.outcomes[static_cast<std::size_t>(a)].mu;
            dep += q * (parent.at(1u << a) - parent.at(0x7u & ~(1u << a)));
        }
        REQUIRE(dep.max_abs() < 1e-12);
        for (int a = 0; a < 3; ++a) {
            for (int b = a + 1; b < 3; ++b) {
                Effect pa = parent.at(1u << a) + parent.at(0x7u & ~(1u << a));
                Effect pb = parent.at(1u << b) + parent.at(0x7u & ~(1u << b));
                Effect diff = (0.5 / pa.t) * pa - (0.5 / pb.t) * pb;
                REQUIRE(diff.max_abs() < 1e-12);
            }
        }
    }
}

TEST_CASE("simulate_three property sweep", "[sim3][property]") {
    Rng rng(1);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        ExtremalPovm p = sample_extremal_povm(3, rng);
        SimThreeResult res = simulate_three(p);
        worst = std::max(worst, res.residual);
        REQUIRE(res.table.min_entry() >= 0.0);
        REQUIRE(res.table.max_entry() <= 1.0);
        REQUIRE(res.table.column_sum_violation() < 1e-12);
    }
    REQUIRE(worst <= 1e-10);
}

TEST_CASE("degenerate inputs", "[sim3]") {
    SECTION("zero-weight outcome routes to the hemisphere pair") {
        ExtremalPovm p;
        Vec3 m = Vec3{0.6, -0.8, 0.0}.normalized();
        p.outcomes = {{0.5, m}, {0.5, -m}, {0.0, {0, 0, 1}}};
        SimThreeResult res = simulate_three(p);
        REQUIRE(res.reduced_to_pvm);
        REQUIRE(res.povm.size() == 2);
        REQUIRE(res.residual < 1e-15);
    }
    SECTION("parallel pair rejected as non-extremal") {
        ExtremalPovm p;
        p.outcomes = {{0.25, {1, 0, 0}}, {0.25, {1, 0, 0}}, {0.5, {-1, 0, 0}}};
        REQUIRE_THROWS_AS(simulate_three(p), std::invalid_argument);
    }
    SECTION("invalid weights rejected") {
        ExtremalPovm p;
        p.outcomes = {{0.4, {1, 0, 0}}, {0.4, {0, 1, 0}}, {0.2, {0, 0, 1}}};
        REQUIRE_THROWS_AS(simulate_three(p), std::invalid_argument);
    }
}

TEST_CASE("falsification channel rejects doctored tables", "[sim3]") {
    ResponseTable t;
    t.n_outcomes = 2;
    t.columns[0b1] = {1.2, -0.2};
    t.columns[0b0] = {0.0, 1.0};
    REQUIRE_THROWS_AS(detail::check_entries(t), SimulationFalsified);
    ResponseTable bad_sum;
    bad_sum.n_outcomes = 2;
    bad_sum.columns[0b1] = {0.5, 0.4};
    bad_sum.columns[0b0] = {0.5, 0.5};
    REQUIRE_THROWS_AS(detail::check_entries(bad_sum), SimulationFalsified);
}
