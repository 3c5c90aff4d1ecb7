#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "steerkit/dense.hpp"
#include "steerkit/effect.hpp"
#include "steerkit/quadrature.hpp"
#include "steerkit/sim_four.hpp"
#include "steerkit/sim_three.hpp"

namespace steerkit {

// rho_W(r) = r |Psi-><Psi-| + (1-r) I/4, dense.
struct WernerState {
    double r = 0.0;
    Mat4 rho;
};

inline WernerState werner_state(double r) {
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("werner_state: r outside [0,1]");
    WernerState w;
    w.r = r;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::array<cplx, 4> psi{cplx(0), cplx(inv_sqrt2), cplx(-inv_sqrt2), cplx(0)};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            w.rho(i, j) = cplx(r) * psi[static_cast<std::size_t>(i)] *
                          std::conj(psi[static_cast<std::size_t>(j)]);
    for (int i = 0; i < 4; ++i) w.rho(i, i) += cplx((1.0 - r) / 4.0);
    return w;
}

// Bob's subnormalized conditional states, one per outcome of Alice's POVM,
// stored in the Pauli 4-vector form.
struct Assemblage {
    std::vector<Effect> sigmas;

    double marginal_violation() const {  // sum must be I/2
        Effect sum;
        for (const Effect& s : sigmas) sum += s;
        return std::max(std::abs(sum.t - 0.5), sum.b.max_abs());
    }
};

// sigma_a = Tr_A[(M_a x I) rho_W(r)] via dense 4x4 arithmetic. This is the
// trusted independent route; everything else in this module is 4-vector
// algebra checked against it.
inline Assemblage assemblage_oracle(const Povm& povm, double r) {
    WernerState w = werner_state(r);
    Assemblage out;
    for (const Effect& m : povm.effects) {
        Mat4 op = kron(to_matrix(m), identity2());
        Mat4 prod;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                cplx s(0);
                for (int k = 0; k < 4; ++k) s += op(i, k) * w.rho(k, j);
                prod(i, j) = s;
            }
        out.sigmas.push_back(from_matrix(partial_trace_first(prod), 1e-12));
    }
    return out;
}

// Local-hidden-state model induced by a coarse-grained parent: weights
// p_A = Tr(Pi_A)/2 and hidden states = universal-NOT of the normalized
// effects (pure for rank-one regions). Werner radii r < 1/2 are absorbed by
// mixing the response toward the flat one, not by mixing the states.
struct LhsModel {
    double r = 0.0;                    // Werner radius the model targets
    std::vector<double> weights;       // p_lambda
    std::vector<Effect> states;        // hidden states, t = 1/2
    std::vector<RegionLabel> labels;   // parent region per hidden state
    ResponseTable response;            // built for the r = 1/2 simulation

    double marginal_violation() const {  // sum p rho = I/2
        Effect sum;
        double wsum = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            sum += weights[i] * states[i];
            wsum += weights[i];
        }
        double v = std::max(std::abs(sum.t - 0.5), sum.b.max_abs());
        return std::max(v, std::abs(wsum - 1.0));
    }
};

inline LhsModel compat_to_lhs(const CoarseGrainedPovm& parent, const ResponseTable& response,
                              double r) {
    if (r < 0.0 || r > 0.5 + 1e-12)
        throw std::invalid_argument("compat_to_lhs: the construction covers r in [0, 1/2]");
    LhsModel model;
    model.r = r;
    model.response = response;
    for (const auto& [label, e] : parent.entries) {
        if (e.t <= 0.0) continue;  // zero-trace region carries no weight
        model.labels.push_back(label);
        model.weights.push_back(e.t);
        model.states.push_back(Effect{0.5, (-0.5 / e.t) * e.b});
    }
    return model;
}

// Response at radius r: convex mix of the r = 1/2 table with the flat
// response Tr(M_a)/2, which realizes the extra depolarization classically.
inline double lhs_response(const LhsModel& model, int a, RegionLabel label, double flat_a) {
    return 2.0 * model.r * model.response.at(a, label) + (1.0 - 2.0 * model.r) * flat_a;
}

// Max component mismatch between the model's assemblage and the dense-oracle
// assemblage of the (noiseless) POVM measured on rho_W(r).
inline double verify_lhs(const LhsModel& model, const ExtremalPovm& povm) {
    const int n = static_cast<int>(povm.size());
    if (model.response.n_outcomes < n)
        throw std::invalid_argument("verify_lhs: response table does not cover the POVM outcomes");
    Assemblage oracle = assemblage_oracle(povm.to_povm(1.0), model.r);
    double worst = 0.0;
    for (int a = 0; a < n; ++a) {
        const double flat = povm.outcomes[static_cast<std::size_t>(a)].mu;
        Effect acc;
        for (std::size_t i = 0; i < model.weights.size(); ++i)
            acc += model.weights[i] * lhs_response(model, a, model.labels[i], flat) *
                   model.states[i];
        Effect diff = acc - oracle.sigmas[static_cast<std::size_t>(a)];
        worst = std::max(worst, diff.max_abs());
    }
    return worst;
}

struct UnsteerabilitySample {
    int n_outcomes = 0;
    double sim_residual = 0.0;
    double lhs_residual = 0.0;
    std::string backend;
};

struct UnsteerabilityReport {
    double r = 0.0;
    std::uint64_t seed = 0;
    std::vector<UnsteerabilitySample> samples;
    double max_analytic_residual = 0.0;    // 2- and 3-outcome (closed-form parents)
    double max_quadrature_residual = 0.0;  // 4-outcome on the grid backend
    double max_marginal_violation = 0.0;
    bool passed = false;
};

// Batch check: random extremal POVMs, each simulated at r = 1/2 and turned
// into an LHS model for rho_W(r), verified against the dense oracle.
inline UnsteerabilityReport unsteerability_suite(double r, int n_samples, std::uint64_t seed,
                                                 const QuadratureGrid& grid,
                                                 double analytic_tol = 1e-10,
                                                 double quadrature_tol = 2e-3) {
    if (r > 0.5 + 1e-12)
        throw std::invalid_argument("unsteerability_suite: r must be at most 1/2");
    UnsteerabilityReport rep;
    rep.r = r;
    rep.seed = seed;
    Rng rng(seed);
    for (int i = 0; i < n_samples; ++i) {
        const int n = 2 + i % 3;
        ExtremalPovm p = sample_extremal_povm(n, rng);
        UnsteerabilitySample s;
        s.n_outcomes = n;
        LhsModel model;
        if (n <= 3) {
            SimThreeResult sim = simulate_three(p);
            s.sim_residual = sim.residual;
            s.backend = sim.parent.backend;
            model = compat_to_lhs(sim.parent, sim.table, r);
        } else {
            SimFourResult sim = simulate_four(p, grid);
            s.sim_residual = sim.residual;
            s.backend = sim.backend;
            model = compat_to_lhs(sim.parent18, sim.fine.q, r);
        }
        s.lhs_residual = verify_lhs(model, p);
        rep.max_marginal_violation = std::max(rep.max_marginal_violation,
                                              model.marginal_violation());
        if (n <= 3)
            rep.max_analytic_residual = std::max(rep.max_analytic_residual, s.lhs_residual);
        else
            rep.max_quadrature_residual = std::max(rep.max_quadrature_residual, s.lhs_residual);
        rep.samples.push_back(s);
    }
    rep.passed = rep.max_analytic_residual <= analytic_tol &&
                 rep.max_quadrature_residual <= quadrature_tol &&
                 rep.max_marginal_violation <= kStructuralTol;
    return rep;
}

}  // namespace steerkit
