#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "steerkit/partition.hpp"
#include "steerkit/polygon.hpp"
#include "steerkit/sampling.hpp"

using namespace steerkit;

TEST_CASE("hemisphere region is exact", "[polygon]") {
    Vec3 m = Vec3{0.1, -0.7, 0.7}.normalized();
    Effect e = exact_region_effect({m}, 0b1);
    REQUIRE(e.t == 0.5);
    REQUIRE(max_component_diff(e.b, 0.25 * m) < 1e-16);
}

TEST_CASE("lune between antipodal boundary planes has t = phi/2pi", "[polygon]") {
    for (double phi : {0.3, 0.7, 1.9, 3.0}) {
        Vec3 g1{0, 0, 1};
        Vec3 g2{0, std::sin(phi), -std::cos(phi)};
        spoly::Measure m = spoly::measure(spoly::intersect_halfspaces({g1, g2}));
        REQUIRE(std::abs(m.solid_angle / (4.0 * std::numbers::pi) - phi / (2.0 * std::numbers::pi)) <
                1e-14);
    }
}

TEST_CASE("coplanar extremal triples match the analytic backend to 1e-12", "[polygon]") {
    Rng rng(66);
    for (int rep = 0; rep < 60; ++rep) {
        ExtremalPovm p = sample_extremal_povm(3, rng);
        std::vector<Vec3> dirs{p.outcomes[0].mhat, p.outcomes[1].mhat, p.outcomes[2].mhat};
        CoarseGrainedPovm exact = coarse_grain_exact(dirs);
        CoarseGrainedPovm analytic = coarse_grain_coplanar3(dirs[0], dirs[1], dirs[2]);
        REQUIRE(exact.entries.size() == 6);
        for (const auto& [label, e] : analytic.entries) {
            REQUIRE(std::abs(exact.at(label).t - e.t) < 1e-12);
            REQUIRE(max_component_diff(exact.at(label).b, e.b) < 1e-12);
        }
    }
}

TEST_CASE("tetrahedral four-direction set: 14 regions, exact completeness", "[polygon]") {
    double s = 1.0 / std::sqrt(3.0);
    std::vector<Vec3> dirs{{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
    CoarseGrainedPovm cg = coarse_grain_exact(dirs);
    REQUIRE(cg.entries.size() == 14);
    REQUIRE(cg.entries.count(0b0000) == 0);
    REQUIRE(cg.entries.count(0b1111) == 0);
    REQUIRE(cg.completeness_violation() < 1e-13);
}

TEST_CASE("random direction sets: exact completeness and positivity", "[polygon][property]") {
    Rng rng(77);
    for (int rep = 0; rep < 20; ++rep) {
        int k = 2 + static_cast<int>(rng.raw() % 5);
        std::vector<Vec3> dirs;
        for (int i = 0; i < k; ++i) dirs.push_back(rng.unit_vector());
        CoarseGrainedPovm cg = coarse_grain_exact(dirs);
        REQUIRE(cg.completeness_violation() < 1e-13);
        for (const auto& [label, e] : cg.entries) REQUIRE(e.is_positive(1e-13));
    }
}

TEST_CASE("six-direction pseudo-effect sets resolve their concurrent boundaries", "[polygon]") {
    Rng rng(88);
    for (int rep = 0; rep < 20; ++rep) {
        ExtremalPovm p = sample_extremal_povm(4, rng);
        Vec3 v5 = p.outcomes[0].mu * p.outcomes[0].mhat + p.outcomes[1].mu * p.outcomes[1].mhat;
        Vec3 m5 = (-v5).normalized();
        std::vector<Vec3> dirs{p.outcomes[0].mhat, p.outcomes[1].mhat, p.outcomes[2].mhat,
                               p.outcomes[3].mhat, m5, -m5};
        CoarseGrainedPovm cg = coarse_grain_exact(dirs);
        REQUIRE(cg.entries.size() == 18);
        REQUIRE(cg.completeness_violation() < 1e-12);
        for (const auto& [label, e] : cg.entries) {
            // exactly one of the antipodal pseudo directions is on
            REQUIRE(label_contains(label, 4) != label_contains(label, 5));
        }
    }
}

TEST_CASE("quadrature and polygon backends agree on generic regions", "[polygon][property]") {
    Rng rng(99);
    for (int rep = 0; rep < 6; ++rep) {
        std::vector<Vec3> dirs;
        for (int i = 0; i < 4; ++i) dirs.push_back(rng.unit_vector());
        CoarseGrainedPovm exact = coarse_grain_exact(dirs);
        CoarseGrainedPovm quad = coarse_grain(dirs, load_lebedev(53));
        for (const auto& [label, e] : quad.entries) {
            Effect x = exact.value_or_zero(label);
            REQUIRE(std::abs(x.t - e.t) < 5.0 / std::sqrt(974.0));
            REQUIRE(max_component_diff(x.b, e.b) < 5.0 / std::sqrt(974.0));
        }
    }
}

TEST_CASE("degenerate or empty patterns give the zero effect", "[polygon]") {
    Vec3 m = Vec3{0.4, 0.2, -0.89}.normalized();
    // both m and -m "on" is contradictory
    Effect e = exact_region_effect({m, -m}, 0b11);
    REQUIRE(e.t == 0.0);
    REQUIRE(e.b.max_abs() == 0.0);
}
