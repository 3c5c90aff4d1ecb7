#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "steerkit/effect.hpp"
#include "steerkit/sampling.hpp"

namespace steerkit {

// ---------------------------------------------------------------------------
// Dense two-phase primal simplex for min c.x s.t. A x = b, x >= 0.
// Bland's rule, full-tableau updates. The systems here are tiny (tens of
// columns), so simplicity and determinism win over speed.
// ---------------------------------------------------------------------------

struct LpResult {
    enum class Status { Optimal, Infeasible, IterationLimit };
    Status status = Status::IterationLimit;
    std::vector<double> x;
    double objective = 0.0;
    double phase1_objective = 0.0;
};

namespace lp {

inline constexpr double kPivotTol = 1e-11;
inline constexpr double kPhase1Tol = 1e-9;

class Tableau {
public:
    Tableau(const std::vector<std::vector<double>>& A, std::vector<double> b)
        : m_(A.size()), n_(A.empty() ? 0 : A[0].size()) {
        rows_.assign(m_, std::vector<double>(n_ + m_ + 1, 0.0));
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            double sign = b[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = sign * A[i][j];
            rows_[i][n_ + i] = 1.0;  // artificial
            rows_[i][n_ + m_] = sign * b[i];
            basis_[i] = n_ + i;
        }
    }

    std::size_t cols() const { return n_ + m_; }
    std::size_t real_cols() const { return n_; }

    // Minimize costs c over the current feasible tableau; artificial columns
    // may be excluded from entering. Returns false on iteration limit.
    bool minimize(const std::vector<double>& cost, bool allow_artificial) {
        const std::size_t limit = 2000 * (m_ + n_) + 10000;
        for (std::size_t iter = 0; iter < limit; ++iter) {
            // reduced costs from the simplex multipliers
            std::vector<double> y(m_);
            for (std::size_t i = 0; i < m_; ++i) y[i] = cost[basis_[i]];
            std::size_t enter = cols();
            for (std::size_t j = 0; j < cols(); ++j) {
                if (!allow_artificial && j >= n_) break;
                if (is_basic(j)) continue;
                double rc = cost[j];
                for (std::size_t i = 0; i < m_; ++i) rc -= y[i] * rows_[i][j];
                if (rc < -kPivotTol) {  // Bland: first improving index
                    enter = j;
                    break;
                }
            }
            if (enter == cols()) return true;  // optimal
            std::size_t leave = m_;
            double best = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                double a = rows_[i][enter];
                if (a > kPivotTol) {
                    double ratio = rhs(i) / a;
                    if (leave == m_ || ratio < best - 1e-15 ||
                        (std::abs(ratio - best) <= 1e-15 && basis_[i] < basis_[leave])) {
                        leave = i;
                        best = ratio;
                    }
                }
            }
            if (leave == m_) return true;  // unbounded below cannot happen in our uses
            pivot(leave, enter);
        }
        return false;
    }

    double objective(const std::vector<double>& cost) const {
        double v = 0.0;
        for (std::size_t i = 0; i < m_; ++i) v += cost[basis_[i]] * rhs(i);
        return v;
    }

    // Pivot zero-level artificials out of the basis where possible.
    void clear_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (std::abs(rows_[i][j]) > 1e-8) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    std::vector<double> solution() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) x[basis_[i]] = rhs(i);
        return x;
    }

private:
    double rhs(std::size_t i) const { return rows_[i][n_ + m_]; }

    bool is_basic(std::size_t j) const {
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] == j) return true;
        return false;
    }

    void pivot(std::size_t r, std::size_t c) {
        double p = rows_[r][c];
        for (double& v : rows_[r]) v /= p;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            double f = rows_[i][c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= n_ + m_; ++j) rows_[i][j] -= f * rows_[r][j];
        }
        basis_[r] = c;
    }

    std::size_t m_, n_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::size_t> basis_;
};

}  // namespace lp

// min c.x s.t. A x = b, x >= 0. Phase 1 decides feasibility; its objective
// is reported so callers can apply their own thresholds.
inline LpResult solve_lp(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                         const std::vector<double>& c) {
    if (A.size() != b.size()) throw std::invalid_argument("solve_lp: row mismatch");
    lp::Tableau t(A, b);
    std::vector<double> phase1(t.cols(), 0.0);
    for (std::size_t j = t.real_cols(); j < t.cols(); ++j) phase1[j] = 1.0;
    LpResult res;
    if (!t.minimize(phase1, true)) return res;  // IterationLimit
    res.phase1_objective = t.objective(phase1);
    if (res.phase1_objective > lp::kPhase1Tol) {
        res.status = LpResult::Status::Infeasible;
        return res;
    }
    t.clear_artificials();
    bool nonzero_cost = false;
    for (double v : c) nonzero_cost = nonzero_cost || v != 0.0;
    if (nonzero_cost) {
        std::vector<double> full(t.cols(), 0.0);
        for (std::size_t j = 0; j < c.size(); ++j) full[j] = c[j];
        if (!t.minimize(full, false)) return res;
        res.objective = t.objective(full);
    }
    res.status = LpResult::Status::Optimal;
    res.x = t.solution();
    return res;
}

// ---------------------------------------------------------------------------
// The simulability system: sum_i x_{a|i} Pi_i = M_a for every child effect,
// sum_a x_{a|i} = 1 for every parent effect, x >= 0. Effects enter as 4-row
// blocks (t; b), so A has 4m + n rows and m*n columns (column a*n + i).
// ---------------------------------------------------------------------------

struct LinearSystem {
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    int m = 0;  // children
    int n = 0;  // parent effects
};

inline LinearSystem build_system(const std::vector<Effect>& parent,
                                 const std::vector<Effect>& children,
                                 double completeness_tol = 1e-9) {
    auto check_complete = [&](const std::vector<Effect>& effs, const char* who) {
        Effect sum;
        for (const Effect& e : effs) sum += e;
        if (std::abs(sum.t - 1.0) > completeness_tol || sum.b.max_abs() > completeness_tol)
            throw std::invalid_argument(std::string("build_system: ") + who + " is not complete");
    };
    check_complete(parent, "parent");
    check_complete(children, "child set");

    LinearSystem sys;
    sys.m = static_cast<int>(children.size());
    sys.n = static_cast<int>(parent.size());
    const std::size_t rows = 4 * children.size() + parent.size();
    const std::size_t cols = children.size() * parent.size();
    sys.A.assign(rows, std::vector<double>(cols, 0.0));
    sys.b.assign(rows, 0.0);
    for (std::size_t a = 0; a < children.size(); ++a) {
        for (std::size_t i = 0; i < parent.size(); ++i) {
            const std::size_t col = a * parent.size() + i;
            sys.A[4 * a + 0][col] = parent[i].t;
            sys.A[4 * a + 1][col] = parent[i].b.x;
            sys.A[4 * a + 2][col] = parent[i].b.y;
            sys.A[4 * a + 3][col] = parent[i].b.z;
            sys.A[4 * children.size() + i][col] = 1.0;
        }
        sys.b[4 * a + 0] = children[a].t;
        sys.b[4 * a + 1] = children[a].b.x;
        sys.b[4 * a + 2] = children[a].b.y;
        sys.b[4 * a + 3] = children[a].b.z;
    }
    for (std::size_t i = 0; i < parent.size(); ++i) sys.b[4 * children.size() + i] = 1.0;
    return sys;
}

inline double constraint_residual(const LinearSystem& sys, const std::vector<double>& x) {
    double worst = 0.0;
    for (std::size_t i = 0; i < sys.A.size(); ++i) {
        double v = -sys.b[i];
        for (std::size_t j = 0; j < x.size(); ++j) v += sys.A[i][j] * x[j];
        worst = std::max(worst, std::abs(v));
    }
    return worst;
}

// Infeasibility witness: A^T y >= 0 and b^T y < 0.
struct FarkasCertificate {
    std::vector<double> y;
};

struct CertificateCheck {
    bool valid = false;
    double margin = 0.0;        // -b.y
    double min_aty = 0.0;       // most negative component of A^T y
};

inline CertificateCheck verify_certificate(const FarkasCertificate& cert, const LinearSystem& sys,
                                           double slack_tol = 1e-10) {
    if (cert.y.size() != sys.A.size())
        throw std::invalid_argument("verify_certificate: dimension mismatch");
    CertificateCheck chk;
    double min_aty = 0.0;
    for (std::size_t j = 0; j < sys.A[0].size(); ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i < sys.A.size(); ++i) v += sys.A[i][j] * cert.y[i];
        min_aty = std::min(min_aty, v);
    }
    double by = 0.0;
    for (std::size_t i = 0; i < sys.b.size(); ++i) by += sys.b[i] * cert.y[i];
    chk.min_aty = min_aty;
    chk.margin = -by;
    chk.valid = min_aty >= -slack_tol && by < 0.0;
    return chk;
}

// Bounded certificate search: min b.y s.t. A^T y >= 0, |y|_inf <= 1, via
// y = u - v with slacks. Returns the certificate when the optimum is
// meaningfully negative.
inline std::optional<FarkasCertificate> find_certificate(const LinearSystem& sys,
                                                         double margin_tol = 1e-10) {
    const std::size_t K = sys.A.size();        // length of y
    const std::size_t N = sys.A[0].size();     // columns of A
    const std::size_t vars = 2 * K + N + 2 * K;  // u, v, s, p, q
    std::vector<std::vector<double>> A(N + 2 * K, std::vector<double>(vars, 0.0));
    std::vector<double> b(N + 2 * K, 0.0);
    // A^T u - A^T v - s = 0
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t i = 0; i < K; ++i) {
            A[j][i] = sys.A[i][j];
            A[j][K + i] = -sys.A[i][j];
        }
        A[j][2 * K + j] = -1.0;
    }
    // u + p = 1, v + q = 1
    for (std::size_t i = 0; i < K; ++i) {
        A[N + i][i] = 1.0;
        A[N + i][2 * K + N + i] = 1.0;
        b[N + i] = 1.0;
        A[N + K + i][K + i] = 1.0;
        A[N + K + i][2 * K + N + K + i] = 1.0;
        b[N + K + i] = 1.0;
    }
    std::vector<double> c(vars, 0.0);
    for (std::size_t i = 0; i < K; ++i) {
        c[i] = sys.b[i];
        c[K + i] = -sys.b[i];
    }
    LpResult res = solve_lp(A, b, c);
    if (res.status != LpResult::Status::Optimal) return std::nullopt;
    if (res.objective > -margin_tol) return std::nullopt;
    FarkasCertificate cert;
    cert.y.resize(K);
    for (std::size_t i = 0; i < K; ++i) cert.y[i] = res.x[i] - res.x[K + i];
    return cert;
}

// Exactly one of: a verified response function, a verified certificate, or
// an explicit indeterminate verdict. Numerical limbo is never coerced.
struct Feasible {
    std::vector<double> x;
    double residual = 0.0;
};
struct Infeasible {
    FarkasCertificate certificate;
    double margin = 0.0;
};
struct Indeterminate {
    std::string reason;
};
using FeasibilityOutcome = std::variant<Feasible, Infeasible, Indeterminate>;

inline FeasibilityOutcome solve_feasible(const LinearSystem& sys, double residual_tol = 1e-9) {
    LpResult res = solve_lp(sys.A, sys.b, std::vector<double>(sys.A[0].size(), 0.0));
    if (res.status == LpResult::Status::IterationLimit)
        return Indeterminate{"simplex iteration limit reached"};
    if (res.status == LpResult::Status::Optimal) {
        double resid = constraint_residual(sys, res.x);
        double min_x = 0.0;
        for (double v : res.x) min_x = std::min(min_x, v);
        if (resid <= residual_tol && min_x >= -1e-12) return Feasible{res.x, resid};
        return Indeterminate{"phase-1 claims feasible but the solution fails verification"};
    }
    std::optional<FarkasCertificate> cert = find_certificate(sys);
    if (!cert) return Indeterminate{"phase-1 infeasible but no bounded certificate found"};
    CertificateCheck chk = verify_certificate(*cert, sys);
    if (!chk.valid) return Indeterminate{"certificate candidate failed verification"};
    return Infeasible{*cert, chk.margin};
}

inline bool is_feasible(const std::vector<Effect>& parent, const std::vector<Effect>& children,
                        double residual_tol = 1e-9) {
    return std::holds_alternative<Feasible>(
        solve_feasible(build_system(parent, children), residual_tol));
}

// ---------------------------------------------------------------------------
// The fixed five-effect parent and the three-outcome child family used to
// separate PVM and POVM simulability thresholds.
// ---------------------------------------------------------------------------

inline constexpr double kProp1Cos = 12.0 / 55.0;

inline double prop1_sin() { return std::sqrt(1.0 - kProp1Cos * kProp1Cos); }

// Certificate boundary 0.330 * sqrt(1 - (12/55)^2) ~= 0.3220497.
inline double prop1_certificate_threshold() { return 0.330 * prop1_sin(); }

// PVM simulability radius 0.34 + 0.144 * (12/55) ~= 0.3714.
inline double prop1_pvm_radius_closed_form() { return 0.34 + 0.144 * kProp1Cos; }

inline Povm prop1_parent() {
    const double c = kProp1Cos, s = prop1_sin();
    const double h = std::sqrt(3.0) / 2.0;
    std::vector<std::pair<double, Vec3>> defs = {
        {0.242, {1, 0, 0}},
        {0.098, {-1, 0, 0}},
        {0.220, {-c, s, 0}},
        {0.220, {-c, -0.5 * s, h * s}},
        {0.220, {-c, -0.5 * s, -h * s}},
    };
    Povm p;
    for (const auto& [alpha, nhat] : defs) p.effects.push_back({alpha, alpha * nhat});
    return p;
}

inline std::vector<Vec3> prop1_child_directions() {
    const double h = std::sqrt(3.0) / 2.0;
    return {{0, -1, 0}, {0, 0.5, h}, {0, 0.5, -h}};
}

// Noisy three-outcome child at radius r (trine in the y-z plane).
inline Povm prop1_child(double r) {
    Povm p;
    for (const Vec3& m : prop1_child_directions())
        p.effects.push_back(effect_from_bloch(1.0 / 3.0, m, r));
    return p;
}

// The explicit infeasibility witness: y_a = (0, -m_a) per child block and
// z = 0.110 sqrt(1 - (12/55)^2) on the three 0.220-weight parent effects.
inline FarkasCertificate prop1_certificate() {
    FarkasCertificate cert;
    cert.y.assign(17, 0.0);
    auto dirs = prop1_child_directions();
    for (std::size_t a = 0; a < 3; ++a) {
        cert.y[4 * a + 1] = -dirs[a].x;
        cert.y[4 * a + 2] = -dirs[a].y;
        cert.y[4 * a + 3] = -dirs[a].z;
    }
    const double z = 0.110 * prop1_sin();
    cert.y[12 + 2] = z;
    cert.y[12 + 3] = z;
    cert.y[12 + 4] = z;
    return cert;
}

// ---------------------------------------------------------------------------
// Sampled PVM simulability radius of a fixed parent, by bisection over a
// deterministic direction set (Fibonacci sphere plus seeded random extras).
// ---------------------------------------------------------------------------

struct PvmRadiusResult {
    double r_star = 0.0;
    double tol = 0.0;
    int n_directions = 0;
    bool verified_low = false;   // all directions feasible at r_star - tol
    bool verified_high = false;  // some direction infeasible at r_star + tol
};

namespace detail {

inline std::vector<Effect> pvm_children(const Vec3& m, double r) {
    return {effect_from_bloch(0.5, m, r), effect_from_bloch(0.5, -m, r)};
}

inline bool all_pvms_feasible(const std::vector<Effect>& parent, const std::vector<Vec3>& dirs,
                              double r) {
    for (const Vec3& m : dirs) {
        LinearSystem sys = build_system(parent, pvm_children(m, r));
        LpResult res = solve_lp(sys.A, sys.b, std::vector<double>(sys.A[0].size(), 0.0));
        if (res.status != LpResult::Status::Optimal) return false;
        if (constraint_residual(sys, res.x) > 1e-9) return false;
    }
    return true;
}

}  // namespace detail

inline PvmRadiusResult pvm_radius(const Povm& parent, int n_directions, std::uint64_t seed,
                                  double tol = 1e-3, int max_depth = 20) {
    PovmReport rep = validate_povm(parent, 1e-9);
    if (!rep.valid) throw std::invalid_argument("pvm_radius: parent POVM invalid");
    std::vector<Vec3> dirs = fibonacci_sphere(n_directions / 2);
    Rng rng(seed);
    while (static_cast<int>(dirs.size()) < n_directions) dirs.push_back(rng.unit_vector());

    double lo = 0.0, hi = 1.0;
    if (!detail::all_pvms_feasible(parent.effects, dirs, lo))
        throw std::runtime_error("pvm_radius: bracket failure, infeasible even at r = 0");
    if (detail::all_pvms_feasible(parent.effects, dirs, hi)) {
        PvmRadiusResult out;
        out.r_star = 1.0;
        out.tol = tol;
        out.n_directions = n_directions;
        out.verified_low = true;
        out.verified_high = false;
        return out;
    }
    for (int d = 0; d < max_depth && hi - lo > tol * 0.5; ++d) {
        double mid = 0.5 * (lo + hi);
        if (detail::all_pvms_feasible(parent.effects, dirs, mid))
            lo = mid;
        else
            hi = mid;
    }
    PvmRadiusResult out;
    out.r_star = 0.5 * (lo + hi);
    out.tol = tol;
    out.n_directions = n_directions;
    out.verified_low = detail::all_pvms_feasible(parent.effects, dirs,
                                                 std::max(0.0, out.r_star - tol));
    out.verified_high = !detail::all_pvms_feasible(parent.effects, dirs,
                                                   std::min(1.0, out.r_star + tol));
    return out;
}

// ---------------------------------------------------------------------------
// The PVM/POVM separation for the fixed five-effect parent: PVMs are
// simulable up to ~0.3714 while the trine child stops being simulable just
// above ~0.3220.
// ---------------------------------------------------------------------------

struct SeparationReport {
    PvmRadiusResult pvm;
    double certificate_threshold = 0.0;
    double closed_form_pvm_radius = 0.0;
    double gap = 0.0;
    bool certificate_valid_at_033 = false;
    double certificate_margin_at_033 = 0.0;
    bool lp_infeasible_at_033 = false;
    bool lp_infeasible_at_pvm_radius = false;
    bool pvm_feasible_at_threshold = false;
    bool passed = false;
};

inline SeparationReport separation_demo(int n_directions = 2000, std::uint64_t seed = 1,
                                        double radius_tol = 1e-3) {
    SeparationReport rep;
    Povm parent = prop1_parent();
    rep.pvm = pvm_radius(parent, n_directions, seed, radius_tol);
    rep.certificate_threshold = prop1_certificate_threshold();
    rep.closed_form_pvm_radius = prop1_pvm_radius_closed_form();
    rep.gap = rep.pvm.r_star - rep.certificate_threshold;

    LinearSystem sys033 = build_system(parent.effects, prop1_child(0.33).effects);
    CertificateCheck chk = verify_certificate(prop1_certificate(), sys033);
    rep.certificate_valid_at_033 = chk.valid;
    rep.certificate_margin_at_033 = chk.margin;
    rep.lp_infeasible_at_033 = std::holds_alternative<Infeasible>(solve_feasible(sys033));

    LinearSystem sys_r = build_system(parent.effects, prop1_child(rep.pvm.r_star).effects);
    rep.lp_infeasible_at_pvm_radius = std::holds_alternative<Infeasible>(solve_feasible(sys_r));

    // below the certificate threshold the PVM children are comfortably inside
    rep.pvm_feasible_at_threshold = detail::all_pvms_feasible(
        parent.effects, fibonacci_sphere(128), rep.certificate_threshold);

    rep.passed = rep.pvm.verified_low && rep.pvm.verified_high &&
                 std::abs(rep.pvm.r_star - rep.closed_form_pvm_radius) < 2e-3 &&
                 rep.certificate_valid_at_033 && rep.lp_infeasible_at_033 &&
                 rep.lp_infeasible_at_pvm_radius && rep.pvm_feasible_at_threshold &&
                 rep.gap > 0.045;
    return rep;
}

}  // namespace steerkit
