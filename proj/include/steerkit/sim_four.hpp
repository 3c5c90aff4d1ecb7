#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "steerkit/effect.hpp"
#include "steerkit/feasibility.hpp"
#include "steerkit/partition.hpp"
#include "steerkit/polygon.hpp"
#include "steerkit/quadrature.hpp"
#include "steerkit/sim_three.hpp"

namespace steerkit {

// Direction indexing for the four-outcome construction: 0..3 are the POVM
// outcomes, 4 is the pseudo direction +m5, 5 is -m5.
inline constexpr int kPseudoPlus = 4;
inline constexpr int kPseudoMinus = 5;

// The pseudo-effect split of a four-outcome POVM into two three-outcome
// POVMs: m5 = -(mu1 m1 + mu2 m2)/mu5 with mu5 its norm, kappa+- the
// normalizations of {M5+, M1, M2} and {M5-, M3, M4}.
struct PseudoSplit {
    std::array<int, 4> pairing{0, 1, 2, 3};  // outcomes feeding (plus, plus, minus, minus)
    Vec3 m5hat{};
    double mu5 = 0.0;
    double kappa_plus = 0.0;
    double kappa_minus = 0.0;
    ExtremalPovm povm_plus;   // outcomes ordered (5+, first pair)
    ExtremalPovm povm_minus;  // outcomes ordered (5-, second pair)
};

inline constexpr double kDegenerateMu5 = 1e-9;

inline PseudoSplit pseudo_split(const ExtremalPovm& povm,
                                const std::array<int, 4>& pairing = {0, 1, 2, 3}) {
    if (povm.size() != 4) throw std::invalid_argument("pseudo_split: expected four outcomes");
    if (povm.validation_violation() > 1e-9)
        throw std::invalid_argument("pseudo_split: input is not a valid extremal POVM");
    auto out = [&](int slot) -> const ExtremalOutcome& {
        return povm.outcomes[static_cast<std::size_t>(pairing[static_cast<std::size_t>(slot)])];
    };
    Vec3 v = out(0).mu * out(0).mhat + out(1).mu * out(1).mhat;
    PseudoSplit s;
    s.pairing = pairing;
    s.mu5 = v.norm();
    if (s.mu5 < kDegenerateMu5)
        throw std::invalid_argument("pseudo_split: pairing is degenerate (mu5 ~ 0)");
    s.m5hat = (-v).normalized();
    s.kappa_plus = out(0).mu + out(1).mu + s.mu5;
    s.kappa_minus = out(2).mu + out(3).mu + s.mu5;
    s.povm_plus.outcomes = {{s.mu5 / s.kappa_plus, s.m5hat},
                            {out(0).mu / s.kappa_plus, out(0).mhat},
                            {out(1).mu / s.kappa_plus, out(1).mhat}};
    s.povm_minus.outcomes = {{s.mu5 / s.kappa_minus, -s.m5hat},
                             {out(2).mu / s.kappa_minus, out(2).mhat},
                             {out(3).mu / s.kappa_minus, out(3).mhat}};
    return s;
}

// Directions in input outcome order, pseudo pair at indices 4 and 5; region
// label bits always refer to this ordering.
inline std::vector<Vec3> split_directions(const ExtremalPovm& povm, const PseudoSplit& split) {
    std::vector<Vec3> dirs(6);
    for (int a = 0; a < 4; ++a)
        dirs[static_cast<std::size_t>(a)] = povm.outcomes[static_cast<std::size_t>(a)].mhat;
    dirs[kPseudoPlus] = split.m5hat;
    dirs[kPseudoMinus] = -split.m5hat;
    return dirs;
}

// 18-effect parent over {m1..m4, +m5, -m5}. Labels containing both or
// neither pseudo direction are geometrically empty.
inline CoarseGrainedPovm build_parent_18(const ExtremalPovm& povm, const PseudoSplit& split,
                                         const QuadratureGrid& grid) {
    return coarse_grain(split_directions(povm, split), grid);
}

inline CoarseGrainedPovm build_parent_18_exact(const ExtremalPovm& povm, const PseudoSplit& split) {
    return coarse_grain_exact(split_directions(povm, split));
}

// Fine-grained response q(a|A) = kappa_+- * p_+-(a | A intersect O_+-).
// Rows 0..3 are the POVM outcomes in pairing order, rows 4/5 the pseudo
// effects 5+/5-.
struct FineResponseTable {
    ResponseTable q;          // 6 rows
    double mu5 = 0.0;

    // max violation of q(5+|A)+q(5-|A) = 2 mu5 and sum_{a<=4} q(a|A) = 1
    double normalization_violation() const {
        double worst = 0.0;
        for (const auto& [label, col] : q.columns) {
            worst = std::max(worst, std::abs(col[4] + col[5] - 2.0 * mu5));
            double s = col[0] + col[1] + col[2] + col[3];
            worst = std::max(worst, std::abs(s - 1.0));
        }
        return worst;
    }
};

namespace detail {

// Map a 6-direction label to the three-outcome label of POVM+ or POVM-.
// Sub-POVM outcome order: (pseudo, first pair member, second pair member).
inline RegionLabel project_label(RegionLabel label, bool plus, const std::array<int, 4>& pairing) {
    RegionLabel out = 0;
    const int pseudo = plus ? kPseudoPlus : kPseudoMinus;
    const int first = pairing[plus ? 0 : 2];
    const int second = pairing[plus ? 1 : 3];
    if (label_contains(label, pseudo)) out |= 1u;
    if (label_contains(label, first)) out |= 2u;
    if (label_contains(label, second)) out |= 4u;
    return out;
}

}  // namespace detail

struct SubTables {
    ResponseTable plus, minus;
    XYCoefficients xy_plus, xy_minus;
    CoarseGrainedPovm parent_plus, parent_minus;  // analytic coplanar parents
};

// Three-outcome tables for POVM+- with the pseudo effect as the untouched
// outcome; the alpha coefficients come from the analytic coplanar backend,
// so all quadrature error stays in the 18-effect parent.
inline SubTables build_sub_tables(const PseudoSplit& split) {
    SubTables st;
    st.parent_plus = coarse_grain_coplanar3(split.povm_plus.outcomes[0].mhat,
                                            split.povm_plus.outcomes[1].mhat,
                                            split.povm_plus.outcomes[2].mhat);
    st.parent_minus = coarse_grain_coplanar3(split.povm_minus.outcomes[0].mhat,
                                             split.povm_minus.outcomes[1].mhat,
                                             split.povm_minus.outcomes[2].mhat);
    st.plus = build_response_three(split.povm_plus, st.parent_plus, 0, &st.xy_plus);
    st.minus = build_response_three(split.povm_minus, st.parent_minus, 0, &st.xy_minus);
    return st;
}

inline FineResponseTable build_response_four(const PseudoSplit& split,
                                             const CoarseGrainedPovm& parent18,
                                             const SubTables& st) {
    FineResponseTable fine;
    fine.mu5 = split.mu5;
    fine.q.n_outcomes = 6;
    for (const auto& [label, effect] : parent18.entries) {
        const bool has_plus = label_contains(label, kPseudoPlus);
        const bool has_minus = label_contains(label, kPseudoMinus);
        if (has_plus == has_minus)
            throw SimulationFalsified(
                "18-effect parent has a nonzero region with contradictory pseudo directions: " +
                label_to_string(label, 6));
        RegionLabel lp = detail::project_label(label, true, split.pairing);
        RegionLabel lm = detail::project_label(label, false, split.pairing);
        std::vector<double> col(6, 0.0);
        // rows 0..3 in input outcome order, rows 4/5 the pseudo effects
        col[static_cast<std::size_t>(split.pairing[0])] = split.kappa_plus * st.plus.at(1, lp);
        col[static_cast<std::size_t>(split.pairing[1])] = split.kappa_plus * st.plus.at(2, lp);
        col[static_cast<std::size_t>(split.pairing[2])] = split.kappa_minus * st.minus.at(1, lm);
        col[static_cast<std::size_t>(split.pairing[3])] = split.kappa_minus * st.minus.at(2, lm);
        col[4] = split.kappa_plus * st.plus.at(0, lp);
        col[5] = split.kappa_minus * st.minus.at(0, lm);
        fine.q.columns[label] = col;
    }
    if (fine.q.min_entry() < -1e-12 || fine.q.max_entry() > 1.0 + 1e-12)
        throw SimulationFalsified("fine response table entry outside [0, 1]");
    double nv = fine.normalization_violation();
    if (nv > 1e-10)
        throw SimulationFalsified("fine response normalization violated by " + std::to_string(nv));
    return fine;
}

struct SimFourResult {
    ExtremalPovm povm;
    PseudoSplit split;
    CoarseGrainedPovm parent18;
    FineResponseTable fine;
    double residual = 0.0;
    std::string backend;
    bool reduced_to_three = false;
    bool degenerate_double_pvm = false;
    std::optional<SimThreeResult> three;  // set when reduced_to_three
};

namespace detail {

// All-degenerate fallback: the POVM is two exact antipodal pairs. Each pair
// is handled by its hemisphere model and a coin flip (weight 2 mu per pair)
// chooses which pair answers; the parent is the four-region coarse graining
// over the two independent directions.
inline SimFourResult simulate_double_pvm(const ExtremalPovm& povm) {
    // locate the partner of outcome 0
    int partner = -1;
    for (int a = 1; a < 4; ++a)
        if (max_component_diff(povm.outcomes[0].mhat, -povm.outcomes[static_cast<std::size_t>(a)].mhat) <
            1e-9)
            partner = a;
    if (partner < 0)
        throw std::invalid_argument("simulate_four: degenerate POVM is not two antipodal pairs");
    std::array<int, 4> order{0, partner, 0, 0};
    int k = 2;
    for (int a = 1; a < 4; ++a)
        if (a != partner) order[static_cast<std::size_t>(k++)] = a;
    const auto& o2 = povm.outcomes[static_cast<std::size_t>(order[2])];
    const auto& o3 = povm.outcomes[static_cast<std::size_t>(order[3])];
    if (max_component_diff(o2.mhat, -o3.mhat) > 1e-9 || std::abs(o2.mu - o3.mu) > 1e-9 ||
        std::abs(povm.outcomes[0].mu - povm.outcomes[static_cast<std::size_t>(partner)].mu) > 1e-9)
        throw std::invalid_argument("simulate_four: degenerate POVM is not two antipodal pairs");

    SimFourResult res;
    res.povm = povm;
    res.backend = "coplanar";
    res.degenerate_double_pvm = true;
    const Vec3 m1 = povm.outcomes[static_cast<std::size_t>(order[0])].mhat;
    const Vec3 m3 = povm.outcomes[static_cast<std::size_t>(order[2])].mhat;
    res.parent18 = coarse_grain_exact({m1, m3});
    res.fine.mu5 = 0.0;
    res.fine.q.n_outcomes = 6;
    const double w1 = 2.0 * povm.outcomes[static_cast<std::size_t>(order[0])].mu;
    const double w3 = 2.0 * povm.outcomes[static_cast<std::size_t>(order[2])].mu;
    for (const auto& [label, effect] : res.parent18.entries) {
        std::vector<double> col(6, 0.0);
        col[static_cast<std::size_t>(order[0])] = label_contains(label, 0) ? w1 : 0.0;
        col[static_cast<std::size_t>(order[1])] = label_contains(label, 0) ? 0.0 : w1;
        col[static_cast<std::size_t>(order[2])] = label_contains(label, 1) ? w3 : 0.0;
        col[static_cast<std::size_t>(order[3])] = label_contains(label, 1) ? 0.0 : w3;
        res.fine.q.columns[label] = col;
    }
    std::vector<Effect> targets;
    for (const auto& o : povm.outcomes) targets.push_back(effect_from_bloch(o.mu, o.mhat, 0.5));
    res.residual = simulation_residual(res.fine.q, res.parent18, targets);
    return res;
}

}  // namespace detail

// Simulate the noisy (r = 1/2) version of a four-outcome extremal POVM. The
// grid backend follows the quadrature discretization; pass use_exact to
// integrate the 18 regions with the spherical-polygon backend instead.
inline SimFourResult simulate_four(const ExtremalPovm& input, const QuadratureGrid* grid,
                                   bool use_exact = false,
                                   const std::array<int, 4>& pairing = {0, 1, 2, 3}) {
    ExtremalPovm povm = detail::drop_zero_outcomes(input);
    if (povm.size() < 4) {
        SimFourResult res;
        res.three = simulate_three(povm);
        res.povm = povm;
        res.reduced_to_three = true;
        res.residual = res.three->residual;
        res.backend = "coplanar";
        return res;
    }
    if (povm.validation_violation() > 1e-9)
        throw std::invalid_argument("simulate_four: input is not a valid extremal POVM");

    // The requested pairing can be degenerate (mu5 ~ 0) or induce a parallel
    // pair inside a sub-POVM; alternatives are valid by the same proof.
    PseudoSplit split;
    SubTables st;
    bool have_split = false;
    std::array<std::array<int, 4>, 3> pairings{pairing,
                                               std::array<int, 4>{pairing[0], pairing[2], pairing[1], pairing[3]},
                                               std::array<int, 4>{pairing[0], pairing[3], pairing[1], pairing[2]}};
    for (const auto& pr : pairings) {
        try {
            split = pseudo_split(povm, pr);
            st = build_sub_tables(split);
            have_split = true;
            break;
        } catch (const std::invalid_argument&) {
            continue;
        }
    }
    if (!have_split) return detail::simulate_double_pvm(povm);

    SimFourResult res;
    res.povm = povm;
    res.split = split;
    if (use_exact) {
        res.parent18 = build_parent_18_exact(povm, split);
        res.backend = "polygon";
    } else {
        if (!grid) throw std::invalid_argument("simulate_four: quadrature backend needs a grid");
        res.parent18 = build_parent_18(povm, split, *grid);
        res.backend = grid->spec;
    }
    res.fine = build_response_four(split, res.parent18, st);

    std::vector<Effect> targets;
    for (const auto& o : povm.outcomes) targets.push_back(effect_from_bloch(o.mu, o.mhat, 0.5));
    res.residual = simulation_residual(res.fine.q, res.parent18, targets);
    return res;
}

inline SimFourResult simulate_four(const ExtremalPovm& input, const QuadratureGrid& grid,
                                   const std::array<int, 4>& pairing = {0, 1, 2, 3}) {
    return simulate_four(input, &grid, false, pairing);
}

inline SimFourResult simulate_four_exact(const ExtremalPovm& input,
                                         const std::array<int, 4>& pairing = {0, 1, 2, 3}) {
    return simulate_four(input, nullptr, true, pairing);
}

// ---------------------------------------------------------------------------
// Brute-force check: can the 14-effect parent (coarse graining over the four
// outcome directions alone, no pseudo effects) simulate the noisy POVM? No
// closed-form response is known for this parent, so the question goes to the
// feasibility LP directly.
// ---------------------------------------------------------------------------

struct BruteForce14Result {
    FeasibilityOutcome outcome;
    CoarseGrainedPovm parent;
    std::string backend;
    double residual = 0.0;  // constraint residual when feasible
};

inline BruteForce14Result brute_force_14(const ExtremalPovm& input,
                                         const QuadratureGrid* grid = nullptr) {
    ExtremalPovm povm = detail::drop_zero_outcomes(input);
    if (povm.validation_violation() > 1e-9)
        throw std::invalid_argument("brute_force_14: input is not a valid extremal POVM");
    std::vector<Vec3> dirs;
    for (const auto& o : povm.outcomes) dirs.push_back(o.mhat);
    BruteForce14Result res;
    if (grid) {
        res.parent = coarse_grain(dirs, *grid);
        res.backend = grid->spec;
    } else {
        res.parent = coarse_grain_exact(dirs);
        res.backend = "polygon";
    }
    std::vector<Effect> parent_effects;
    for (const auto& [label, e] : res.parent.entries)
        if (e.t > 1e-14) parent_effects.push_back(e);
    std::vector<Effect> children;
    for (const auto& o : povm.outcomes) children.push_back(effect_from_bloch(o.mu, o.mhat, 0.5));
    res.outcome = solve_feasible(build_system(parent_effects, children));
    if (const Feasible* f = std::get_if<Feasible>(&res.outcome)) res.residual = f->residual;
    return res;
}

}  // namespace steerkit
