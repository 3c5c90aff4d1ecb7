#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "steerkit/effect.hpp"
#include "steerkit/quadrature.hpp"
#include "steerkit/sampling.hpp"
#include "steerkit/vec3.hpp"

namespace steerkit {

// Region label: bit a set means direction a is "on" (mhat_a . n > 0).
using RegionLabel = std::uint32_t;

inline bool label_contains(RegionLabel label, int a) { return (label >> a) & 1u; }

inline std::string label_to_string(RegionLabel label, int n_directions) {
    std::string s = "{";
    bool first = true;
    for (int a = 0; a < n_directions; ++a) {
        if (!label_contains(label, a)) continue;
        if (!first) s += ",";
        s += std::to_string(a + 1);
        first = false;
    }
    return s + "}";
}

// Finite parent POVM obtained by partitioning the uniform parent
// {(1/4pi)(I + n.sigma)} along the hemisphere boundaries of a direction set.
// Only regions with nonzero effects are stored.
struct CoarseGrainedPovm {
    std::vector<Vec3> directions;
    std::map<RegionLabel, Effect> entries;
    std::string backend;       // "quadrature", "coplanar", "polygon"
    int tie_rotations = 0;     // nonzero if the grid had to be nudged

    const Effect& at(RegionLabel label) const {
        auto it = entries.find(label);
        if (it == entries.end())
            throw std::out_of_range("CoarseGrainedPovm: no region " +
                                    label_to_string(label, static_cast<int>(directions.size())));
        return it->second;
    }
    Effect value_or_zero(RegionLabel label) const {
        auto it = entries.find(label);
        return it == entries.end() ? Effect{} : it->second;
    }

    double completeness_violation() const {
        Effect sum;
        for (const auto& [label, e] : entries) sum += e;
        return std::max(std::abs(sum.t - 1.0), sum.b.max_abs());
    }
};

namespace detail {

inline constexpr double kBoundaryTol = 1e-12;
inline constexpr std::uint64_t kTieSeed = 0x5eed0000u;

}  // namespace detail

// Assign every grid node to the region given by its sign pattern and
// accumulate (sum w, sum w l) per region. Theta(0) is resolved by rotating
// the whole grid with a fixed seeded rotation whenever some node lies on a
// boundary (the rotated grid is an equally valid rule, and the boundary has
// measure zero).
inline CoarseGrainedPovm coarse_grain(const std::vector<Vec3>& directions,
                                      const QuadratureGrid& grid) {
    if (directions.empty() || directions.size() > 16)
        throw std::invalid_argument("coarse_grain: need 1..16 directions");
    for (const Vec3& d : directions)
        if (std::abs(d.norm() - 1.0) > kStructuralTol)
            throw std::invalid_argument("coarse_grain: directions must be unit vectors");

    const int k = static_cast<int>(directions.size());
    CoarseGrainedPovm out;
    out.directions = directions;
    out.backend = "quadrature";

    constexpr int kMaxAttempts = 16;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Rotation rot;
        if (attempt > 0) {
            Rng rng(detail::kTieSeed + static_cast<std::uint64_t>(attempt));
            rot = random_rotation(rng);
        }
        std::map<RegionLabel, Effect> acc;
        bool tie = false;
        for (std::size_t i = 0; i < grid.size() && !tie; ++i) {
            const Vec3 node = attempt == 0 ? grid.nodes[i] : rot.apply(grid.nodes[i]);
            RegionLabel label = 0;
            for (int a = 0; a < k; ++a) {
                const double d = directions[static_cast<std::size_t>(a)].dot(node);
                if (std::abs(d) < detail::kBoundaryTol) {
                    tie = true;
                    break;
                }
                if (d > 0.0) label |= (1u << a);
            }
            if (tie) break;
            Effect& e = acc[label];
            e.t += grid.weights[i];
            e.b += grid.weights[i] * node;
        }
        if (tie) continue;
        out.entries = std::move(acc);
        out.tie_rotations = attempt;
        return out;
    }
    throw std::runtime_error("coarse_grain: boundary ties persisted through all rotations");
}

namespace detail {

// Best-fit plane normal for three directions (largest pairwise cross).
inline Vec3 coplanar_normal(const Vec3& m1, const Vec3& m2, const Vec3& m3) {
    Vec3 c12 = m1.cross(m2), c13 = m1.cross(m3), c23 = m2.cross(m3);
    Vec3 best = c12;
    if (c13.norm2() > best.norm2()) best = c13;
    if (c23.norm2() > best.norm2()) best = c23;
    if (best.norm() < 1e-12)
        throw std::invalid_argument("coarse_grain_coplanar3: directions are mutually parallel");
    return best.normalized();
}

}  // namespace detail

// Closed-form six-effect parent for a coplanar direction triple. Each region
// is a lune of dihedral angle theta_a = arccos(-m_b . m_c) whose bisector is
// -/+ (m_b + m_c)/|m_b + m_c|:
//   Pi_{a}   = (theta_a/2pi) I - (sin(theta_a/2)/4) n_a . sigma,
//   Pi_{a}^c = (theta_a/2pi) I + (sin(theta_a/2)/4) n_a . sigma.
inline CoarseGrainedPovm coarse_grain_coplanar3(const Vec3& m1_in, const Vec3& m2_in,
                                                const Vec3& m3_in,
                                                double coplanar_tol = 1e-10) {
    std::array<Vec3, 3> m{m1_in.normalized(), m2_in.normalized(), m3_in.normalized()};
    const Vec3 normal = detail::coplanar_normal(m[0], m[1], m[2]);
    double residual = 0.0;
    for (const Vec3& v : m) residual = std::max(residual, std::abs(v.dot(normal)));
    if (residual > coplanar_tol)
        throw std::invalid_argument("coarse_grain_coplanar3: directions not coplanar (residual " +
                                    std::to_string(residual) + ")");
    for (Vec3& v : m) v = (v - v.dot(normal) * normal).normalized();

    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
            if (m[static_cast<std::size_t>(a)].dot(m[static_cast<std::size_t>(b)]) > 1.0 - 1e-10)
                throw std::invalid_argument("coarse_grain_coplanar3: parallel direction pair");

    CoarseGrainedPovm out;
    out.directions = {m[0], m[1], m[2]};
    out.backend = "coplanar";
    for (int a = 0; a < 3; ++a) {
        const Vec3& mb = m[static_cast<std::size_t>((a + 1) % 3)];
        const Vec3& mc = m[static_cast<std::size_t>((a + 2) % 3)];
        Vec3 sum = mb + mc;
        if (sum.norm() < 1e-9)
            throw std::invalid_argument(
                "coarse_grain_coplanar3: antiparallel pair makes region degenerate");
        double cosv = std::clamp(-mb.dot(mc), -1.0, 1.0);
        double theta = std::acos(cosv);
        Vec3 nhat = sum.normalized();
        double t = theta / (2.0 * std::numbers::pi);
        Vec3 bloch = (std::sin(0.5 * theta) / 4.0) * nhat;
        RegionLabel on = 1u << a;
        RegionLabel comp = 0x7u & ~on;
        out.entries[on] = Effect{t, -bloch};
        out.entries[comp] = Effect{t, bloch};
    }
    return out;
}

// Trace/2 of the singleton region, the alpha_a of the response construction.
inline double singleton_half_trace(const CoarseGrainedPovm& parent, int a) {
    return parent.at(1u << a).t;
}

}  // namespace steerkit
