#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "steerkit/vec3.hpp"

namespace steerkit {

// Default tolerance for structural identities (completeness, involutions, ...).
inline constexpr double kStructuralTol = 1e-12;
// Default tolerance for dense-matrix oracle round trips.
inline constexpr double kOracleTol = 1e-14;

// A qubit effect t*I + b.sigma in the Pauli basis. Positivity is |b| <= t,
// boundedness by the identity is t + |b| <= 1.
struct Effect {
    double t = 0.0;
    Vec3 b{};

    Effect() = default;
    Effect(double t_, const Vec3& b_) : t(t_), b(b_) {}

    double positivity_violation() const {
        return std::max(b.norm() - t, std::max(-t, t - 1.0));
    }
    bool is_positive(double tol = kStructuralTol) const { return b.norm() <= t + tol; }

    Effect operator+(const Effect& o) const { return {t + o.t, b + o.b}; }
    Effect operator-(const Effect& o) const { return {t - o.t, b - o.b}; }
    Effect operator*(double s) const { return {t * s, b * s}; }
    Effect& operator+=(const Effect& o) { t += o.t; b += o.b; return *this; }

    double max_abs() const { return std::max(std::abs(t), b.max_abs()); }
};

inline Effect operator*(double s, const Effect& e) { return e * s; }

struct Povm {
    std::vector<Effect> effects;

    Povm() = default;
    explicit Povm(std::vector<Effect> e) : effects(std::move(e)) {}
    std::size_t size() const { return effects.size(); }
};

struct PovmReport {
    bool valid = false;
    double max_violation = 0.0;
};

// Positivity of every effect plus completeness (sum t = 1, sum b = 0).
inline PovmReport validate_povm(const Povm& povm, double tol = kStructuralTol) {
    double worst = 0.0;
    Effect sum;
    for (const Effect& e : povm.effects) {
        worst = std::max(worst, std::max(0.0, e.positivity_violation()));
        sum += e;
    }
    worst = std::max(worst, std::abs(sum.t - 1.0));
    worst = std::max(worst, sum.b.max_abs());
    return {worst <= tol, worst};
}

// M = mu (I + r mhat.sigma): the depolarized version of a rank-one effect.
inline Effect effect_from_bloch(double mu, const Vec3& mhat, double r) {
    if (mu < 0.0 || mu > 1.0) throw std::invalid_argument("effect_from_bloch: mu outside [0,1]");
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("effect_from_bloch: r outside [0,1]");
    if (std::abs(mhat.norm() - 1.0) > kStructuralTol)
        throw std::invalid_argument("effect_from_bloch: mhat is not a unit vector");
    return {mu, mu * r * mhat};
}

// Effect-wise depolarization: Bloch parts shrink by r, traces are preserved.
inline Povm make_noisy(const Povm& povm, double r) {
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("make_noisy: r outside [0,1]");
    PovmReport rep = validate_povm(povm);
    if (!rep.valid)
        throw std::invalid_argument("make_noisy: input POVM invalid (violation " +
                                    std::to_string(rep.max_violation) + ")");
    Povm out;
    out.effects.reserve(povm.size());
    for (const Effect& e : povm.effects) out.effects.push_back({e.t, e.b * r});
    return out;
}

// M -> sigma_y M^T sigma_y, i.e. Bloch-vector negation. Involution.
inline Effect universal_not(const Effect& e) { return {e.t, -e.b}; }

// Rank-one extremal POVM: effects mu_a (I + mhat_a.sigma) with sum mu = 1,
// sum mu mhat = 0 and mu_a <= 1/2. Two to four outcomes.
struct ExtremalOutcome {
    double mu = 0.0;
    Vec3 mhat{};
};

struct ExtremalPovm {
    std::vector<ExtremalOutcome> outcomes;

    std::size_t size() const { return outcomes.size(); }

    // Noisy version at radius r as a plain Povm.
    Povm to_povm(double r) const {
        Povm p;
        p.effects.reserve(outcomes.size());
        for (const auto& o : outcomes) p.effects.push_back(effect_from_bloch(o.mu, o.mhat, r));
        return p;
    }

    double validation_violation() const {
        double sum_mu = 0.0;
        Vec3 sum_b{};
        double worst = 0.0;
        for (const auto& o : outcomes) {
            sum_mu += o.mu;
            sum_b += o.mu * o.mhat;
            worst = std::max(worst, std::abs(o.mhat.norm() - 1.0));
            worst = std::max(worst, std::max(-o.mu, o.mu - 0.5));
        }
        worst = std::max(worst, std::abs(sum_mu - 1.0));
        worst = std::max(worst, sum_b.max_abs());
        return worst;
    }
    bool is_valid(double tol = kStructuralTol) const { return validation_violation() <= tol; }
};

}  // namespace steerkit
