#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

#include "steerkit/effect.hpp"
#include "steerkit/vec3.hpp"

namespace steerkit {

// Deterministic RNG front end. Uniform/gaussian draws are derived from the
// raw mt19937_64 stream directly so that a given seed produces the same
// values on every platform (std::*_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 0.0);
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Vec3 unit_vector() {
        Vec3 v{gauss(), gauss(), gauss()};
        double n = v.norm();
        while (n < 1e-12) {
            v = {gauss(), gauss(), gauss()};
            n = v.norm();
        }
        return v / n;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

struct Rotation {
    // rows of the rotation matrix
    Vec3 rx{1, 0, 0}, ry{0, 1, 0}, rz{0, 0, 1};
    Vec3 apply(const Vec3& v) const { return {rx.dot(v), ry.dot(v), rz.dot(v)}; }
};

// Uniform random rotation from a unit quaternion.
inline Rotation random_rotation(Rng& rng) {
    double q0 = rng.gauss(), q1 = rng.gauss(), q2 = rng.gauss(), q3 = rng.gauss();
    double n = std::sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3);
    q0 /= n; q1 /= n; q2 /= n; q3 /= n;
    Rotation r;
    r.rx = {1 - 2 * (q2 * q2 + q3 * q3), 2 * (q1 * q2 - q0 * q3), 2 * (q1 * q3 + q0 * q2)};
    r.ry = {2 * (q1 * q2 + q0 * q3), 1 - 2 * (q1 * q1 + q3 * q3), 2 * (q2 * q3 - q0 * q1)};
    r.rz = {2 * (q1 * q3 - q0 * q2), 2 * (q2 * q3 + q0 * q1), 1 - 2 * (q1 * q1 + q2 * q2)};
    return r;
}

// Deterministic quasi-uniform direction set.
inline std::vector<Vec3> fibonacci_sphere(int n) {
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(n));
    const double golden = std::numbers::pi * (1.0 + std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        double z = 1.0 - 2.0 * (i + 0.5) / n;
        double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = golden * (i + 0.5);
        out.push_back({s * std::cos(phi), s * std::sin(phi), z});
    }
    return out;
}

namespace detail {

// Gaussian elimination with partial pivoting; returns false if singular.
template <int N>
bool solve_linear(std::array<std::array<double, N>, N> a, std::array<double, N>& b) {
    for (int c = 0; c < N; ++c) {
        int piv = c;
        for (int r = c + 1; r < N; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (std::abs(a[piv][c]) < 1e-12) return false;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (int r = c + 1; r < N; ++r) {
            double f = a[r][c] / a[c][c];
            for (int k = c; k < N; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    for (int c = N - 1; c >= 0; --c) {
        for (int k = c + 1; k < N; ++k) b[c] -= a[c][k] * b[k];
        b[c] /= a[c][c];
    }
    return true;
}

}  // namespace detail

// Draw a random extremal POVM with n in {2,3,4} rank-one outcomes.
//
// n = 2 is forced to an antipodal pair with weights 1/2. For n = 3 the
// directions are drawn uniformly inside a uniformly random plane (extremal
// three-outcome POVMs are coplanar); for n = 4 uniformly on the sphere. The
// weights then solve sum mu m = 0, sum mu = 1; draws are rejected until all
// weights land in (min_mu, 1/2].
inline ExtremalPovm sample_extremal_povm(int n, Rng& rng, double min_mu = 1e-3) {
    if (n < 2 || n > 4) throw std::invalid_argument("sample_extremal_povm: n must be 2, 3 or 4");
    ExtremalPovm povm;
    if (n == 2) {
        Vec3 m = rng.unit_vector();
        povm.outcomes = {{0.5, m}, {0.5, -m}};
        return povm;
    }
    constexpr int kMaxTries = 100000;
    for (int attempt = 0; attempt < kMaxTries; ++attempt) {
        if (n == 3) {
            Rotation rot = random_rotation(rng);
            std::array<Vec3, 3> m;
            std::array<double, 3> ang{};
            for (int a = 0; a < 3; ++a) ang[a] = rng.uniform(0.0, 2.0 * std::numbers::pi);
            for (int a = 0; a < 3; ++a)
                m[a] = rot.rx * std::cos(ang[a]) + rot.ry * std::sin(ang[a]);
            // In-plane components + normalization: 3 equations, 3 weights.
            std::array<std::array<double, 3>, 3> A{};
            std::array<double, 3> rhs{0.0, 0.0, 1.0};
            for (int a = 0; a < 3; ++a) {
                A[0][a] = std::cos(ang[a]);
                A[1][a] = std::sin(ang[a]);
                A[2][a] = 1.0;
            }
            if (!detail::solve_linear<3>(A, rhs)) continue;
            bool ok = true;
            for (double mu : rhs) ok = ok && mu > min_mu && mu <= 0.5;
            if (!ok) continue;
            povm.outcomes.clear();
            for (int a = 0; a < 3; ++a) povm.outcomes.push_back({rhs[a], m[a]});
            return povm;
        }
        std::array<Vec3, 4> m;
        for (auto& v : m) v = rng.unit_vector();
        std::array<std::array<double, 4>, 4> A{};
        std::array<double, 4> rhs{0.0, 0.0, 0.0, 1.0};
        for (int a = 0; a < 4; ++a) {
            A[0][a] = m[a].x;
            A[1][a] = m[a].y;
            A[2][a] = m[a].z;
            A[3][a] = 1.0;
        }
        if (!detail::solve_linear<4>(A, rhs)) continue;
        bool ok = true;
        for (double mu : rhs) ok = ok && mu > min_mu && mu <= 0.5;
        if (!ok) continue;
        povm.outcomes.clear();
        for (int a = 0; a < 4; ++a) povm.outcomes.push_back({rhs[a], m[a]});
        return povm;
    }
    throw std::runtime_error("sample_extremal_povm: rejection sampling did not converge");
}

inline ExtremalPovm sample_extremal_povm(int n, std::uint64_t seed, double min_mu = 1e-3) {
    Rng rng(seed);
    return sample_extremal_povm(n, rng, min_mu);
}

}  // namespace steerkit
