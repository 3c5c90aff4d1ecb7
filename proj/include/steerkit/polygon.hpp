#pragma once

// Exact integration of the uniform sphere parent over sign-pattern regions.
// Every region is an intersection of open hemispheres, i.e. a geodesically
// convex spherical polygon. Solid angle comes from the turn angles
// (Gauss-Bonnet), the first moment from the boundary identity
//   Int_P n dOmega = 1/2 Oint_{dP} r x dr = 1/2 sum_arcs (arc length) * pole.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "steerkit/partition.hpp"
#include "steerkit/vec3.hpp"

namespace steerkit {

namespace spoly {

inline constexpr double kAngTol = 1e-9;   // interior-crossing margin (radians)
inline constexpr double kJoinTol = 1e-9;  // vertex merge distance

// Boundary loop: arc j runs verts[j] -> verts[j+1] counterclockwise around
// poles[j] (region on the left). kind distinguishes the vertex-free cases.
struct Polygon {
    enum class Kind { Empty, Hemisphere, Loop } kind = Kind::Empty;
    Vec3 hemi_pole{};
    std::vector<Vec3> verts;
    std::vector<Vec3> poles;
};

// CCW angle from a to b around pole n, in [0, 2pi).
inline double arc_angle(const Vec3& a, const Vec3& b, const Vec3& n) {
    double th = std::atan2(a.cross(b).dot(n), a.dot(b));
    if (th < 0) th += 2.0 * std::numbers::pi;
    return th;
}

inline Vec3 point_at(const Vec3& a, const Vec3& n, double theta) {
    Vec3 t = n.cross(a);
    return a * std::cos(theta) + t * std::sin(theta);
}

// Intersect with the half-space {g . x >= 0}. Sub-arc survival is decided by
// midpoint sign between interior crossings, which stays robust when vertices
// lie exactly on the clip circle (three boundary planes of a pseudo-effect
// direction set are concurrent by construction, so that case is structural).
inline Polygon clip(const Polygon& poly, const Vec3& g) {
    if (poly.kind == Polygon::Kind::Empty) return poly;
    if (poly.kind == Polygon::Kind::Hemisphere) {
        double d = poly.hemi_pole.dot(g);
        if (d > 1.0 - 1e-14) return poly;
        if (d < -1.0 + 1e-14) return Polygon{};
        Vec3 u = poly.hemi_pole.cross(g).normalized();
        Polygon lune;
        lune.kind = Polygon::Kind::Loop;
        lune.verts = {-u, u};
        lune.poles = {poly.hemi_pole, g};
        return lune;
    }

    struct Piece {
        Vec3 start, end, pole;
    };
    std::vector<Piece> pieces;
    bool any_kept = false, any_dropped = false;
    const std::size_t K = poly.verts.size();
    for (std::size_t j = 0; j < K; ++j) {
        const Vec3& a = poly.verts[j];
        const Vec3& b = poly.verts[(j + 1) % K];
        const Vec3& n = poly.poles[j];
        const double phi = arc_angle(a, b, n);
        double cr[2];
        int ncr = 0;
        Vec3 c = n.cross(g);
        if (c.norm() > 1e-14) {
            Vec3 w = c.normalized();
            for (const Vec3& cand : {w, -w}) {
                double th = arc_angle(a, cand, n);
                if (th > kAngTol && th < phi - kAngTol) cr[ncr++] = th;
            }
            if (ncr == 2 && cr[0] > cr[1]) std::swap(cr[0], cr[1]);
        }
        double cuts[4] = {0.0, 0.0, 0.0, 0.0};
        int ncuts = 0;
        cuts[ncuts++] = 0.0;
        for (int i = 0; i < ncr; ++i) cuts[ncuts++] = cr[i];
        cuts[ncuts++] = phi;
        for (int i = 0; i + 1 < ncuts; ++i) {
            Vec3 mid = point_at(a, n, 0.5 * (cuts[i] + cuts[i + 1]));
            if (g.dot(mid) > 0.0) {
                Piece p;
                p.start = (i == 0) ? a : point_at(a, n, cuts[i]);
                p.end = (i + 2 == ncuts) ? b : point_at(a, n, cuts[i + 1]);
                p.pole = n;
                pieces.push_back(p);
                any_kept = true;
            } else {
                any_dropped = true;
            }
        }
    }
    if (!any_kept) return Polygon{};
    if (!any_dropped) return poly;

    Polygon out;
    out.kind = Polygon::Kind::Loop;
    const std::size_t M = pieces.size();
    for (std::size_t k = 0; k < M; ++k) {
        out.verts.push_back(pieces[k].start);
        out.poles.push_back(pieces[k].pole);
        const Vec3& next_start = pieces[(k + 1) % M].start;
        if ((pieces[k].end - next_start).norm() > kJoinTol) {
            out.verts.push_back(pieces[k].end);  // gap arc along the clip circle
            out.poles.push_back(g);
        }
    }
    if (out.verts.size() < 2) return Polygon{};
    return out;
}

// Intersection of half-spaces {g . x > 0}; duplicate constraints collapse,
// antipodal constraints give the empty region.
inline Polygon intersect_halfspaces(const std::vector<Vec3>& gs) {
    std::vector<Vec3> hs;
    for (const Vec3& g : gs) {
        bool dup = false;
        for (const Vec3& h : hs) {
            double d = g.dot(h);
            if (d > 1.0 - 1e-12) {
                dup = true;
                break;
            }
            if (d < -1.0 + 1e-12) return Polygon{};
        }
        if (!dup) hs.push_back(g);
    }
    if (hs.empty()) throw std::invalid_argument("intersect_halfspaces: no constraints");
    Polygon poly;
    poly.kind = Polygon::Kind::Hemisphere;
    poly.hemi_pole = hs[0];
    for (std::size_t i = 1; i < hs.size(); ++i) {
        poly = clip(poly, hs[i]);
        if (poly.kind == Polygon::Kind::Empty) return poly;
    }
    return poly;
}

struct Measure {
    double solid_angle = 0.0;
    Vec3 moment{};
};

inline Measure measure(const Polygon& poly) {
    Measure m;
    if (poly.kind == Polygon::Kind::Empty) return m;
    if (poly.kind == Polygon::Kind::Hemisphere) {
        m.solid_angle = 2.0 * std::numbers::pi;
        m.moment = std::numbers::pi * poly.hemi_pole;
        return m;
    }
    const std::size_t K = poly.verts.size();
    double turn = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
        const Vec3& a = poly.verts[j];
        const Vec3& b = poly.verts[(j + 1) % K];
        const Vec3& n = poly.poles[j];
        m.moment += 0.5 * arc_angle(a, b, n) * n;
        const Vec3& prev = poly.poles[(j + K - 1) % K];
        turn += std::atan2(prev.cross(n).dot(a), prev.dot(n));
    }
    m.solid_angle = std::max(0.0, 2.0 * std::numbers::pi - turn);
    return m;
}

}  // namespace spoly

// Exact effect of one sign-pattern region.
inline Effect exact_region_effect(const std::vector<Vec3>& directions, RegionLabel label) {
    std::vector<Vec3> gs;
    gs.reserve(directions.size());
    for (std::size_t a = 0; a < directions.size(); ++a)
        gs.push_back(label_contains(label, static_cast<int>(a)) ? directions[a] : -directions[a]);
    spoly::Measure m = spoly::measure(spoly::intersect_halfspaces(gs));
    const double inv = 1.0 / (4.0 * std::numbers::pi);
    return Effect{m.solid_angle * inv, m.moment * inv};
}

// Exact-backend coarse graining over all sign patterns of the direction set.
inline CoarseGrainedPovm coarse_grain_exact(const std::vector<Vec3>& directions,
                                            double zero_tol = 1e-15) {
    if (directions.empty() || directions.size() > 10)
        throw std::invalid_argument("coarse_grain_exact: need 1..10 directions");
    for (const Vec3& d : directions)
        if (std::abs(d.norm() - 1.0) > kStructuralTol)
            throw std::invalid_argument("coarse_grain_exact: directions must be unit vectors");
    CoarseGrainedPovm out;
    out.directions = directions;
    out.backend = "polygon";
    const RegionLabel all = (1u << directions.size()) - 1u;
    for (RegionLabel label = 0; label <= all; ++label) {
        Effect e = exact_region_effect(directions, label);
        if (e.t > zero_tol) out.entries[label] = e;
    }
    return out;
}

}  // namespace steerkit
