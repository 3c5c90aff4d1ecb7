#pragma once

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "steerkit/effect.hpp"
#include "steerkit/partition.hpp"

namespace steerkit {

// Thrown when a constructed response table violates the guarantees it is
// supposed to have (a genuine counterexample, not an input error).
struct SimulationFalsified : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Column-stochastic response function p(a|A) over the nonzero regions of a
// coarse-grained parent.
struct ResponseTable {
    int n_outcomes = 0;
    std::map<RegionLabel, std::vector<double>> columns;

    double at(int a, RegionLabel label) const {
        auto it = columns.find(label);
        if (it == columns.end()) return 0.0;
        return it->second[static_cast<std::size_t>(a)];
    }

    double min_entry() const {
        double m = 0.0;
        for (const auto& [label, col] : columns)
            for (double v : col) m = std::min(m, v);
        return m;
    }
    double max_entry() const {
        double m = 0.0;
        for (const auto& [label, col] : columns)
            for (double v : col) m = std::max(m, v);
        return m;
    }
    double column_sum_violation() const {
        double worst = 0.0;
        for (const auto& [label, col] : columns) {
            double s = 0.0;
            for (double v : col) s += v;
            worst = std::max(worst, std::abs(s - 1.0));
        }
        return worst;
    }
};

// Max component mismatch of sum_A p(a|A) Pi_A against the target effects.
inline double simulation_residual(const ResponseTable& table, const CoarseGrainedPovm& parent,
                                  const std::vector<Effect>& targets) {
    double worst = 0.0;
    for (int a = 0; a < static_cast<int>(targets.size()); ++a) {
        Effect acc;
        for (const auto& [label, e] : parent.entries) acc += table.at(a, label) * e;
        Effect diff = acc - targets[static_cast<std::size_t>(a)];
        worst = std::max(worst, diff.max_abs());
    }
    return worst;
}

struct XYCoefficients {
    double x = 0.0;
    double y = 0.0;
    std::array<double, 3> alphas{};
    std::array<double, 3> qs{};
};

// X = (a1 q1 - a2 q2 + a3 q3) / 2 a1, Y = (a1 q1 + a2 q2 - a3 q3) / 2 a1
// with q_a = 1 - 2 mu_a and alpha_a the singleton-region half-traces.
// X + Y = q1 and both are nonnegative for every extremal coplanar triple.
inline XYCoefficients xy_coefficients(const std::array<double, 3>& alphas,
                                      const std::array<double, 3>& mus) {
    if (!(alphas[0] > 0.0))
        throw std::invalid_argument("xy_coefficients: alpha_1 must be positive");
    XYCoefficients c;
    c.alphas = alphas;
    for (int i = 0; i < 3; ++i)
        c.qs[static_cast<std::size_t>(i)] = 1.0 - 2.0 * mus[static_cast<std::size_t>(i)];
    c.x = (alphas[0] * c.qs[0] - alphas[1] * c.qs[1] + alphas[2] * c.qs[2]) / (2.0 * alphas[0]);
    c.y = (alphas[0] * c.qs[0] + alphas[1] * c.qs[1] - alphas[2] * c.qs[2]) / (2.0 * alphas[0]);
    return c;
}

namespace detail {

inline std::array<int, 3> outcome_order(int untouched) {
    if (untouched < 0 || untouched > 2)
        throw std::invalid_argument("untouched outcome index must be 0, 1 or 2");
    return {untouched, (untouched + 1) % 3, (untouched + 2) % 3};
}

inline void check_entries(const ResponseTable& t, double tol = 1e-12) {
    if (t.min_entry() < -tol)
        throw SimulationFalsified("response table has a negative entry beyond tolerance");
    double sum_violation = t.column_sum_violation();
    if (sum_violation > tol)
        throw SimulationFalsified("response table column sums deviate from 1 by " +
                                  std::to_string(sum_violation));
}

inline void clamp_rounding(ResponseTable& t) {
    for (auto& [label, col] : t.columns)
        for (double& v : col) v = std::clamp(v, 0.0, 1.0);
}

}  // namespace detail

// Diagnostic: p(a|A) = 2 mu_a iff a in A. Reproduces each effect but the
// columns are not normalized in general.
inline ResponseTable unnormalized_response_three(const ExtremalPovm& povm) {
    if (povm.size() != 3) throw std::invalid_argument("expected a 3-outcome POVM");
    ResponseTable t;
    t.n_outcomes = 3;
    for (RegionLabel label = 1; label <= 6; ++label) {  // six proper nonempty subsets
        std::vector<double> col(3, 0.0);
        for (int a = 0; a < 3; ++a)
            if (label_contains(label, a)) col[static_cast<std::size_t>(a)] =
                2.0 * povm.outcomes[static_cast<std::size_t>(a)].mu;
        t.columns[label] = col;
    }
    return t;
}

// Normalized response table. Outcome `untouched` keeps its unnormalized row
// (needed as the pseudo-effect row in the four-outcome construction); the
// other two rows are rebalanced with the X/Y coefficients.
inline ResponseTable build_response_three(const ExtremalPovm& povm,
                                          const CoarseGrainedPovm& parent, int untouched = 0,
                                          XYCoefficients* xy_out = nullptr) {
    if (povm.size() != 3) throw std::invalid_argument("expected a 3-outcome POVM");
    if (parent.directions.size() != 3)
        throw std::invalid_argument("parent must be built from the POVM's three directions");
    for (int a = 0; a < 3; ++a)
        if (max_component_diff(parent.directions[static_cast<std::size_t>(a)],
                               povm.outcomes[static_cast<std::size_t>(a)].mhat) > 1e-9)
            throw std::invalid_argument("parent directions do not match the POVM");

    const auto [u, o2, o3] = detail::outcome_order(untouched);
    auto mu = [&](int a) { return povm.outcomes[static_cast<std::size_t>(a)].mu; };
    XYCoefficients xy = xy_coefficients(
        {singleton_half_trace(parent, u), singleton_half_trace(parent, o2),
         singleton_half_trace(parent, o3)},
        {mu(u), mu(o2), mu(o3)});
    if (xy_out) *xy_out = xy;

    auto label_of = [](int a) { return static_cast<RegionLabel>(1u << a); };
    auto comp_of = [](int a) { return static_cast<RegionLabel>(0x7u & ~(1u << a)); };

    ResponseTable t;
    t.n_outcomes = 3;
    for (RegionLabel label = 1; label <= 6; ++label) t.columns[label] = {0.0, 0.0, 0.0};
    auto set = [&](int a, RegionLabel label, double v) {
        t.columns[label][static_cast<std::size_t>(a)] = v;
    };
    // untouched row: 2 mu_u on every region containing u
    set(u, label_of(u), 2.0 * mu(u));
    set(u, comp_of(o2), 2.0 * mu(u));
    set(u, comp_of(o3), 2.0 * mu(u));
    // second row
    set(o2, label_of(u), xy.x);
    set(o2, label_of(o2), 1.0);
    set(o2, comp_of(u), 2.0 * mu(o2) - xy.y);
    set(o2, comp_of(o3), 1.0 - 2.0 * mu(u));
    // third row
    set(o3, label_of(u), xy.y);
    set(o3, label_of(o3), 1.0);
    set(o3, comp_of(u), 2.0 * mu(o3) - xy.x);
    set(o3, comp_of(o2), 1.0 - 2.0 * mu(u));

    detail::check_entries(t);
    detail::clamp_rounding(t);
    return t;
}

struct SimThreeResult {
    ExtremalPovm povm;          // zero-weight outcomes dropped
    CoarseGrainedPovm parent;
    ResponseTable table;
    XYCoefficients xy;          // meaningful on the three-outcome path
    double residual = 0.0;
    bool reduced_to_pvm = false;
};

namespace detail {

// Hemisphere model for an antipodal pair: one direction, two regions,
// deterministic response.
inline SimThreeResult simulate_pvm_pair(const ExtremalPovm& povm) {
    SimThreeResult res;
    res.povm = povm;
    res.reduced_to_pvm = true;
    res.parent.directions = {povm.outcomes[0].mhat};
    res.parent.backend = "coplanar";
    const Vec3 m = povm.outcomes[0].mhat;
    res.parent.entries[0b1] = Effect{0.5, 0.25 * m};
    res.parent.entries[0b0] = Effect{0.5, -0.25 * m};
    res.table.n_outcomes = 2;
    res.table.columns[0b1] = {1.0, 0.0};
    res.table.columns[0b0] = {0.0, 1.0};
    std::vector<Effect> targets;
    for (const auto& o : povm.outcomes) targets.push_back(effect_from_bloch(o.mu, o.mhat, 0.5));
    res.residual = simulation_residual(res.table, res.parent, targets);
    return res;
}

inline ExtremalPovm drop_zero_outcomes(const ExtremalPovm& povm, double tol = 1e-12) {
    ExtremalPovm out;
    for (const auto& o : povm.outcomes)
        if (o.mu > tol) out.outcomes.push_back(o);
    return out;
}

}  // namespace detail

// Simulate the noisy (r = 1/2) version of a three-outcome extremal POVM from
// the analytic six-effect parent.
inline SimThreeResult simulate_three(const ExtremalPovm& input, int untouched = 0) {
    ExtremalPovm povm = detail::drop_zero_outcomes(input);
    if (povm.validation_violation() > 1e-9)
        throw std::invalid_argument("simulate_three: input is not a valid extremal POVM");
    if (povm.size() == 2) return detail::simulate_pvm_pair(povm);
    if (povm.size() != 3)
        throw std::invalid_argument("simulate_three: need three outcomes (or a reducible pair)");

    SimThreeResult res;
    res.povm = povm;
    res.parent = coarse_grain_coplanar3(povm.outcomes[0].mhat, povm.outcomes[1].mhat,
                                        povm.outcomes[2].mhat);
    res.table = build_response_three(povm, res.parent, untouched, &res.xy);
    std::vector<Effect> targets;
    for (const auto& o : povm.outcomes) targets.push_back(effect_from_bloch(o.mu, o.mhat, 0.5));
    res.residual = simulation_residual(res.table, res.parent, targets);
    return res;
}

}  // namespace steerkit
