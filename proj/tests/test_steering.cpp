#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "steerkit/sampling.hpp"
#include "steerkit/steering.hpp"

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

TEST_CASE("werner state density matrix", "[steering]") {
    for (double r : {0.0, 0.3, 0.5, 1.0}) {
        WernerState w = werner_state(r);
        REQUIRE(std::abs(w.rho.trace() - cplx(1)) < 1e-15);
        // eigenvalues: (1+3r)/4 on the singlet, (1-r)/4 on the triplet
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        std::array<cplx, 4> psi{cplx(0), cplx(inv_sqrt2), cplx(-inv_sqrt2), cplx(0)};
        cplx q(0);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                q += std::conj(psi[static_cast<std::size_t>(i)]) * w.rho(i, j) *
                     psi[static_cast<std::size_t>(j)];
        REQUIRE(std::abs(q - cplx((1.0 + 3.0 * r) / 4.0)) < 1e-15);
        REQUIRE(std::abs(w.rho(0, 0) - cplx((1.0 - r) / 4.0)) < 1e-15);
    }
    REQUIRE_THROWS_AS(werner_state(1.2), std::invalid_argument);
}

TEST_CASE("assemblage oracle", "[steering][oracle]") {
    SECTION("closed form sigma_a = (mu/2)(I - r m sigma) on random rank-one POVMs") {
        Rng rng(41);
        for (int rep = 0; rep < 60; ++rep) {
            ExtremalPovm p = sample_extremal_povm(2 + rep % 3, rng);
            double r = rng.uniform();
            Assemblage asm_ = assemblage_oracle(p.to_povm(1.0), r);
            REQUIRE(asm_.marginal_violation() < 1e-12);
            for (std::size_t a = 0; a < p.size(); ++a) {
                double mu = p.outcomes[a].mu;
                Effect expect{mu / 2.0, (-0.5 * r * mu) * p.outcomes[a].mhat};
                Effect diff = asm_.sigmas[a] - expect;
                REQUIRE(diff.max_abs() < 1e-12);
            }
        }
    }
    SECTION("r = 0 gives Tr(M_a) I/4") {
        Assemblage asm_ = assemblage_oracle(trine().to_povm(1.0), 0.0);
        for (const Effect& s : asm_.sigmas) {
            REQUIRE(std::abs(s.t - 1.0 / 6.0) < 1e-15);
            REQUIRE(s.b.max_abs() < 1e-15);
        }
    }
    SECTION("identity measurement marginal") {
        Povm ident{{Effect{1.0, {}}}};
        Assemblage asm_ = assemblage_oracle(ident, 0.7);
        REQUIRE(std::abs(asm_.sigmas[0].t - 0.5) < 1e-15);
        REQUIRE(asm_.sigmas[0].b.max_abs() < 1e-15);
    }
}

TEST_CASE("compat_to_lhs model structure", "[steering]") {
    SimThreeResult sim = simulate_three(trine());
    LhsModel model = compat_to_lhs(sim.parent, sim.table, 0.5);
    SECTION("marginal conservation and weights") {
        REQUIRE(model.marginal_violation() < 1e-12);
        REQUIRE(model.weights.size() == 6);
    }
    SECTION("hidden states are the universal-NOT states with t = 1/2") {
        for (std::size_t i = 0; i < model.labels.size(); ++i) {
            const Effect& pi = sim.parent.at(model.labels[i]);
            REQUIRE(model.states[i].t == 0.5);
            Vec3 expect = (-0.5 / pi.t) * pi.b;
            REQUIRE(max_component_diff(model.states[i].b, expect) == 0.0);
            REQUIRE(model.states[i].is_positive(1e-12));
        }
    }
    SECTION("r beyond 1/2 rejected") {
        REQUIRE_THROWS_AS(compat_to_lhs(sim.parent, sim.table, 0.6), std::invalid_argument);
    }
}

TEST_CASE("hemisphere model reproduces the PVM assemblage exactly", "[steering]") {
    ExtremalPovm pvm = sample_extremal_povm(2, 77);
    SimThreeResult sim = simulate_three(pvm);
    for (double r : {0.5, 0.3, 0.0}) {
        LhsModel model = compat_to_lhs(sim.parent, sim.table, r);
        REQUIRE(verify_lhs(model, pvm) < 1e-14);
    }
}

TEST_CASE("trine LHS model at r = 0.5 and 0.3", "[steering]") {
    SimThreeResult sim = simulate_three(trine());
    for (double r : {0.5, 0.3}) {
        LhsModel model = compat_to_lhs(sim.parent, sim.table, r);
        REQUIRE(verify_lhs(model, trine()) < 1e-10);
        REQUIRE(model.marginal_violation() < 1e-12);
    }
}

TEST_CASE("tetrahedral LHS model on lebedev", "[steering]") {
    double s = 1.0 / std::sqrt(3.0);
    ExtremalPovm p;
    p.outcomes = {{0.25, {s, s, s}}, {0.25, {s, -s, -s}}, {0.25, {-s, s, -s}}, {0.25, {-s, -s, s}}};
    QuadratureGrid grid = load_lebedev(131);
    SimFourResult sim = simulate_four(p, grid);
    for (double r : {0.5, 0.3}) {
        LhsModel model = compat_to_lhs(sim.parent18, sim.fine.q, r);
        REQUIRE(verify_lhs(model, p) < 2e-3);
        REQUIRE(model.marginal_violation() < 1e-12);
    }
    SimFourResult exact = simulate_four_exact(p);
    LhsModel model = compat_to_lhs(exact.parent18, exact.fine.q, 0.5);
    REQUIRE(verify_lhs(model, p) < 1e-12);
}

TEST_CASE("flat response handles r = 0 for any POVM", "[steering]") {
    Rng rng(51);
    ExtremalPovm p = sample_extremal_povm(3, rng);
    SimThreeResult sim = simulate_three(p);
    LhsModel model = compat_to_lhs(sim.parent, sim.table, 0.0);
    REQUIRE(verify_lhs(model, p) < 1e-12);
}

TEST_CASE("bridge soundness: LHS residual bounded by twice the sim residual",
          "[steering][property]") {
    Rng rng(61);
    QuadratureGrid grid = load_lebedev(35);  // coarse on purpose, visible residual
    for (int rep = 0; rep < 25; ++rep) {
        ExtremalPovm p = sample_extremal_povm(4, rng);
        SimFourResult sim = simulate_four(p, grid);
        LhsModel model = compat_to_lhs(sim.parent18, sim.fine.q, 0.5);
        double lhs_res = verify_lhs(model, p);
        REQUIRE(lhs_res <= 2.0 * sim.residual + 1e-12);
    }
}

TEST_CASE("unsteerability suite", "[steering]") {
    QuadratureGrid grid = load_lebedev(53);
    UnsteerabilityReport rep = unsteerability_suite(0.5, 12, 99, grid, 1e-10, 2e-2);
    REQUIRE(rep.passed);
    REQUIRE(rep.samples.size() == 12);
    UnsteerabilityReport rep3 = unsteerability_suite(0.3, 6, 99, grid, 1e-10, 2e-2);
    REQUIRE(rep3.passed);
    REQUIRE_THROWS_AS(unsteerability_suite(0.7, 2, 1, grid), std::invalid_argument);
}
