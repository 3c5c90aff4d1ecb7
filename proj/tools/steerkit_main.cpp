// steerkit command line: reproducible batch experiments with JSON reports.
// Exit codes: 0 all assertions passed, 1 assertion failed (counterexample
// serialized), 2 usage error or indeterminate result.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "steerkit/steerkit.hpp"

using namespace steerkit;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
}

ordered_json make_header(const std::string& command, const ordered_json& config,
                         const QuadratureGrid* grid) {
    ordered_json j;
    j["schema_version"] = 1;
    j["toolkit_version"] = STEERKIT_VERSION;
    j["command"] = command;
    j["config"] = config;
    if (grid) {
        j["grid"] = ordered_json{
            {"spec", grid->spec}, {"checksum", grid->checksum}, {"nodes", grid->size()}};
    }
    j["timestamp"] = iso_timestamp();
    return j;
}

void emit_report(const ordered_json& report, const std::string& out_path,
                 const std::string& fallback_name, bool failed) {
    std::string path = out_path;
    if (path.empty()) {
        if (!failed) return;  // nothing requested, nothing to persist
        path = fallback_name;
    }
    write_json_file(path, report);
    if (failed) std::cerr << "counterexample and report written to " << path << "\n";
}

ExtremalPovm povm_from_spec_file(const std::string& path, bool replay) {
    ordered_json j = load_json_file(path);
    if (replay) {
        if (!j.contains("failure") || !j["failure"].contains("input_povm"))
            throw std::invalid_argument("replay: report has no failure.input_povm");
        j = j["failure"]["input_povm"];
    }
    return povm_from_json(j).povm;
}

std::array<int, 4> parse_pairing(const std::string& s) {
    if (s.size() != 4)
        throw std::invalid_argument("pairing: expected four digits, e.g. 0123");
    std::array<int, 4> p{};
    std::array<bool, 4> seen{};
    for (int i = 0; i < 4; ++i) {
        int v = s[static_cast<std::size_t>(i)] - '0';
        if (v < 0 || v > 3 || seen[static_cast<std::size_t>(v)])
            throw std::invalid_argument("pairing: expected a permutation of 0123");
        p[static_cast<std::size_t>(i)] = v;
        seen[static_cast<std::size_t>(v)] = true;
    }
    return p;
}

// ---------------------------------------------------------------------- //

struct Simulate3Opts {
    std::string povm_path, replay_path, out_path;
    int random_count = 0;
    std::uint64_t seed = 1;
    int untouched = 0;
    double tol = 1e-10;
};

int run_simulate3(const Simulate3Opts& o) {
    ordered_json config{{"povm", o.povm_path}, {"replay", o.replay_path},
                        {"random", o.random_count}, {"seed", o.seed},
                        {"untouched", o.untouched}, {"tol", o.tol}};
    ordered_json report = make_header("simulate3", config, nullptr);

    std::vector<ExtremalPovm> inputs;
    if (!o.replay_path.empty()) {
        inputs.push_back(povm_from_spec_file(o.replay_path, true));
    } else if (!o.povm_path.empty()) {
        inputs.push_back(povm_from_spec_file(o.povm_path, false));
    } else {
        Rng rng(o.seed);
        int n = o.random_count > 0 ? o.random_count : 1;
        for (int i = 0; i < n; ++i) inputs.push_back(sample_extremal_povm(3, rng));
    }

    double max_residual = 0.0;
    ordered_json samples = ordered_json::array();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        try {
            SimThreeResult res = simulate_three(inputs[i], o.untouched);
            max_residual = std::max(max_residual, res.residual);
            if (inputs.size() == 1) report["result"] = sim3_to_json(res);
            samples.push_back(ordered_json{{"index", i}, {"residual", res.residual}});
            if (res.residual > o.tol) throw SimulationFalsified("residual above tolerance");
        } catch (const SimulationFalsified& ex) {
            report["failure"] = ordered_json{{"what", ex.what()},
                                             {"input_povm", povm_to_json(inputs[i], 0.5)}};
            emit_report(report, o.out_path, "steerkit_simulate3_failure.json", true);
            std::cerr << "simulate3: FAILED on sample " << i << ": " << ex.what() << "\n";
            return kExitFail;
        }
    }
    report["samples"] = samples;
    report["max_residual"] = max_residual;
    report["passed"] = true;
    emit_report(report, o.out_path, "", false);
    std::cout << "simulate3: " << inputs.size() << " instance(s), max residual " << max_residual
              << "\n";
    return kExitPass;
}

// ---------------------------------------------------------------------- //

struct Simulate4Opts {
    std::string povm_path, replay_path, out_path, grid_spec = "lebedev:131", pairing = "0123";
    int random_count = 0;
    std::uint64_t seed = 1;
    bool exact = false;
    bool convergence = false;
    double tol = 2e-3;
};

int run_simulate4(const Simulate4Opts& o) {
    ordered_json config{{"povm", o.povm_path},   {"replay", o.replay_path},
                        {"random", o.random_count}, {"seed", o.seed},
                        {"grid", o.grid_spec},   {"exact", o.exact},
                        {"pairing", o.pairing},  {"convergence", o.convergence},
                        {"tol", o.tol}};
    std::optional<QuadratureGrid> grid;
    if (!o.exact) grid = grid_from_spec(o.grid_spec);
    ordered_json report = make_header("simulate4", config, grid ? &*grid : nullptr);
    std::array<int, 4> pairing = parse_pairing(o.pairing);

    std::vector<ExtremalPovm> inputs;
    if (!o.replay_path.empty()) {
        inputs.push_back(povm_from_spec_file(o.replay_path, true));
    } else if (!o.povm_path.empty()) {
        inputs.push_back(povm_from_spec_file(o.povm_path, false));
    } else {
        Rng rng(o.seed);
        int n = o.random_count > 0 ? o.random_count : 1;
        for (int i = 0; i < n; ++i) inputs.push_back(sample_extremal_povm(4, rng));
    }

    double max_residual = 0.0;
    ordered_json samples = ordered_json::array();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        try {
            SimFourResult res = o.exact ? simulate_four_exact(inputs[i], pairing)
                                        : simulate_four(inputs[i], *grid, pairing);
            max_residual = std::max(max_residual, res.residual);
            if (inputs.size() == 1) {
                report["result"] = sim4_to_json(res);
                if (o.convergence) {
                    ordered_json conv = ordered_json::array();
                    for (int n_polar : {8, 16, 32}) {
                        QuadratureGrid g = product_grid(n_polar, 2 * n_polar);
                        SimFourResult rr = simulate_four(inputs[i], g, pairing);
                        conv.push_back(ordered_json{{"grid", g.spec},
                                                    {"nodes", g.size()},
                                                    {"residual", rr.residual}});
                    }
                    report["residual_convergence"] = conv;
                }
            }
            samples.push_back(ordered_json{{"index", i},
                                           {"residual", res.residual},
                                           {"regions", res.reduced_to_three
                                                           ? res.three->parent.entries.size()
                                                           : res.parent18.entries.size()}});
            if (res.residual > o.tol)
                throw SimulationFalsified("residual " + std::to_string(res.residual) +
                                          " above tolerance");
        } catch (const SimulationFalsified& ex) {
            report["failure"] = ordered_json{{"what", ex.what()},
                                             {"input_povm", povm_to_json(inputs[i], 0.5)}};
            emit_report(report, o.out_path, "steerkit_simulate4_failure.json", true);
            std::cerr << "simulate4: FAILED on sample " << i << ": " << ex.what() << "\n";
            return kExitFail;
        }
    }
    report["samples"] = samples;
    report["max_residual"] = max_residual;
    report["passed"] = true;
    emit_report(report, o.out_path, "", false);
    std::cout << "simulate4: " << inputs.size() << " instance(s), max residual " << max_residual
              << "\n";
    return kExitPass;
}

// ---------------------------------------------------------------------- //

struct LhsCheckOpts {
    double r = 0.5;
    int n = 100;
    std::uint64_t seed = 1;
    std::string grid_spec = "lebedev:131", out_path;
    double analytic_tol = 1e-10, quadrature_tol = 2e-3;
};

int run_lhs_check(const LhsCheckOpts& o) {
    ordered_json config{{"r", o.r},       {"n", o.n},
                        {"seed", o.seed}, {"grid", o.grid_spec},
                        {"analytic_tol", o.analytic_tol}, {"quadrature_tol", o.quadrature_tol}};
    QuadratureGrid grid = grid_from_spec(o.grid_spec);
    ordered_json report = make_header("lhs-check", config, &grid);
    UnsteerabilityReport rep =
        unsteerability_suite(o.r, o.n, o.seed, grid, o.analytic_tol, o.quadrature_tol);
    ordered_json samples = ordered_json::array();
    for (const auto& s : rep.samples)
        samples.push_back(ordered_json{{"outcomes", s.n_outcomes},
                                       {"backend", s.backend},
                                       {"sim_residual", s.sim_residual},
                                       {"lhs_residual", s.lhs_residual}});
    report["samples"] = samples;
    report["max_analytic_residual"] = rep.max_analytic_residual;
    report["max_quadrature_residual"] = rep.max_quadrature_residual;
    report["max_marginal_violation"] = rep.max_marginal_violation;
    report["passed"] = rep.passed;
    emit_report(report, o.out_path, "steerkit_lhs_check_failure.json", !rep.passed);
    std::cout << "lhs-check: r = " << o.r << ", " << o.n << " samples, analytic "
              << rep.max_analytic_residual << ", quadrature " << rep.max_quadrature_residual
              << (rep.passed ? " [pass]" : " [FAIL]") << "\n";
    return rep.passed ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------- //

struct RadiusOpts {
    std::string parent_path, out_path;
    int n = 2000;
    std::uint64_t seed = 1;
    double tol = 1e-3;
    int scan_points = 26;
};

int run_radius(const RadiusOpts& o) {
    ordered_json config{{"parent", o.parent_path}, {"n", o.n}, {"seed", o.seed},
                        {"tol", o.tol}, {"scan", o.scan_points}};
    ordered_json report = make_header("radius", config, nullptr);
    Povm parent;
    if (o.parent_path.empty())
        parent = prop1_parent();
    else
        parent.effects = effects_from_json(load_json_file(o.parent_path));
    PvmRadiusResult res = pvm_radius(parent, o.n, o.seed, o.tol);
    report["r_star"] = res.r_star;
    report["tol"] = res.tol;
    report["n_directions"] = res.n_directions;
    report["verified_low"] = res.verified_low;
    report["verified_high"] = res.verified_high;

    if (o.scan_points > 1) {
        std::vector<Vec3> dirs = fibonacci_sphere(std::min(o.n, 256));
        ordered_json scan = ordered_json::array();
        for (int k = 0; k < o.scan_points; ++k) {
            double r = 0.5 * k / (o.scan_points - 1);
            int feasible = 0;
            for (const Vec3& m : dirs) {
                if (is_feasible(parent.effects,
                                {effect_from_bloch(0.5, m, r), effect_from_bloch(0.5, -m, r)}))
                    ++feasible;
            }
            scan.push_back(ordered_json{{"r", r},
                                        {"feasible_fraction",
                                         static_cast<double>(feasible) / dirs.size()}});
        }
        report["scan"] = scan;
    }
    bool ok = res.verified_low && res.verified_high;
    report["passed"] = ok;
    emit_report(report, o.out_path, "steerkit_radius_failure.json", !ok);
    std::cout << "radius: r* = " << res.r_star << " +- " << res.tol << " over "
              << res.n_directions << " directions" << (ok ? "" : " [unverified]") << "\n";
    return ok ? kExitPass : kExitUsage;
}

// ---------------------------------------------------------------------- //

struct FarkasOpts {
    std::string parent_path, child_path, out_path;
    double r = -1.0;  // <0: use the child file's own radius
};

int run_farkas(const FarkasOpts& o) {
    ordered_json config{{"parent", o.parent_path}, {"child", o.child_path}, {"r", o.r}};
    ordered_json report = make_header("farkas", config, nullptr);
    std::vector<Effect> parent = o.parent_path.empty()
                                     ? prop1_parent().effects
                                     : effects_from_json(load_json_file(o.parent_path));
    std::vector<Effect> children;
    if (o.child_path.empty()) {
        children = prop1_child(o.r < 0.0 ? 0.33 : o.r).effects;
    } else {
        ordered_json j = load_json_file(o.child_path);
        if (o.r >= 0.0) j["r"] = o.r;
        children = effects_from_json(j);
    }
    LinearSystem sys = build_system(parent, children);
    FeasibilityOutcome outcome = solve_feasible(sys);
    report["system"] = ordered_json{{"rows", sys.A.size()}, {"cols", sys.A[0].size()},
                                    {"children", sys.m}, {"parent_effects", sys.n}};
    report["outcome"] = feasibility_to_json(outcome);
    emit_report(report, o.out_path, "", false);
    if (std::holds_alternative<Indeterminate>(outcome)) {
        std::cerr << "farkas: indeterminate: " << std::get<Indeterminate>(outcome).reason << "\n";
        return kExitUsage;
    }
    std::cout << "farkas: " << report["outcome"]["verdict"].get<std::string>() << "\n";
    return kExitPass;
}

// ---------------------------------------------------------------------- //

struct SeparationOpts {
    std::string out_path;
    int n = 2000;
    std::uint64_t seed = 1;
    double tol = 1e-3;
};

int run_separation(const SeparationOpts& o) {
    ordered_json config{{"n", o.n}, {"seed", o.seed}, {"tol", o.tol}};
    ordered_json report = make_header("separation", config, nullptr);
    SeparationReport rep = separation_demo(o.n, o.seed, o.tol);
    report["pvm_radius"] = rep.pvm.r_star;
    report["pvm_radius_closed_form"] = rep.closed_form_pvm_radius;
    report["certificate_threshold"] = rep.certificate_threshold;
    report["gap"] = rep.gap;
    report["certificate_valid_at_033"] = rep.certificate_valid_at_033;
    report["certificate_margin_at_033"] = rep.certificate_margin_at_033;
    report["lp_infeasible_at_033"] = rep.lp_infeasible_at_033;
    report["lp_infeasible_at_pvm_radius"] = rep.lp_infeasible_at_pvm_radius;
    report["pvm_feasible_at_threshold"] = rep.pvm_feasible_at_threshold;
    report["certificate_y"] = prop1_certificate().y;
    report["passed"] = rep.passed;
    emit_report(report, o.out_path, "steerkit_separation_failure.json", !rep.passed);
    std::printf("separation: PVM radius %.4f vs POVM certificate threshold %.4f (gap %.4f) %s\n",
                rep.pvm.r_star, rep.certificate_threshold, rep.gap,
                rep.passed ? "[pass]" : "[FAIL]");
    return rep.passed ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------- //

struct StressOpts {
    std::string out_path, grid_spec, replay_path;
    int n = 500;
    int hygiene = 200;
    std::uint64_t seed = 1;
};

int run_stress(const StressOpts& o) {
    ordered_json config{{"n", o.n}, {"hygiene", o.hygiene}, {"seed", o.seed},
                        {"grid", o.grid_spec}, {"replay", o.replay_path}};
    std::optional<QuadratureGrid> grid;
    if (!o.grid_spec.empty()) grid = grid_from_spec(o.grid_spec);
    ordered_json report = make_header("stress", config, grid ? &*grid : nullptr);

    std::vector<ExtremalPovm> inputs;
    if (!o.replay_path.empty()) {
        inputs.push_back(povm_from_spec_file(o.replay_path, true));
    } else {
        Rng rng(o.seed);
        for (int i = 0; i < o.n; ++i) inputs.push_back(sample_extremal_povm(4, rng));
    }

    double worst_residual = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        BruteForce14Result res = brute_force_14(inputs[i], grid ? &*grid : nullptr);
        if (!std::holds_alternative<Feasible>(res.outcome)) {
            report["failure"] = ordered_json{{"what", "14-effect LP not feasible"},
                                             {"outcome", feasibility_to_json(res.outcome)},
                                             {"input_povm", povm_to_json(inputs[i], 0.5)}};
            emit_report(report, o.out_path, "steerkit_stress_failure.json", true);
            std::cerr << "stress: sample " << i << " is NOT 14-effect simulable\n";
            return kExitFail;
        }
        worst_residual = std::max(worst_residual, std::get<Feasible>(res.outcome).residual);
    }

    // Farkas-alternative hygiene on systems straddling the infeasibility
    // boundary of the five-effect parent.
    Rng rng(o.seed ^ 0xfeedULL);
    int both = 0;
    for (int i = 0; i < o.hygiene; ++i) {
        double r = rng.uniform(0.25, 0.40);
        ExtremalPovm p = sample_extremal_povm(3, rng);
        std::vector<Effect> children;
        for (const auto& oc : p.outcomes) children.push_back(effect_from_bloch(oc.mu, oc.mhat, r));
        LinearSystem sys = build_system(prop1_parent().effects, children);
        LpResult primal = solve_lp(sys.A, sys.b, std::vector<double>(sys.A[0].size(), 0.0));
        bool primal_ok = primal.status == LpResult::Status::Optimal &&
                         constraint_residual(sys, primal.x) <= 1e-9;
        auto cert = find_certificate(sys, 1e-6);
        bool cert_ok = cert && verify_certificate(*cert, sys).valid;
        if (primal_ok && cert_ok) ++both;
    }
    report["brute_force_samples"] = inputs.size();
    report["worst_lp_residual"] = worst_residual;
    report["hygiene_samples"] = o.hygiene;
    report["exclusivity_violations"] = both;
    bool ok = both == 0;
    report["passed"] = ok;
    emit_report(report, o.out_path, "steerkit_stress_failure.json", !ok);
    std::cout << "stress: " << inputs.size()
              << " brute-force instances all feasible (worst LP residual " << worst_residual
              << "), " << o.hygiene << " hygiene instances, " << both
              << " exclusivity violations" << (ok ? " [pass]" : " [FAIL]") << "\n";
    return ok ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------- //

struct PlotOpts {
    std::string report_path, out_path;
};

int run_plot_data(const PlotOpts& o) {
    ordered_json report = load_json_file(o.report_path);
    std::ofstream csv(o.out_path);
    if (!csv) throw std::runtime_error("cannot write " + o.out_path);
    csv << "# kind: scan (x = r, y = feasible fraction), convergence (x = grid nodes,\n";
    csv << "# y = max residual), reference (x = r of a horizontal reference line)\n";
    csv << "kind,x,y\n";
    bool wrote = false;
    if (report.contains("scan")) {
        for (const auto& row : report["scan"])
            csv << "scan," << row["r"].get<double>() << ","
                << row["feasible_fraction"].get<double>() << "\n";
        wrote = true;
    }
    if (report.contains("residual_convergence")) {
        for (const auto& row : report["residual_convergence"])
            csv << "convergence," << row["nodes"].get<std::size_t>() << ","
                << row["residual"].get<double>() << "\n";
        wrote = true;
    }
    if (!wrote) {
        std::cerr << "plot-data: report has neither scan nor residual_convergence data\n";
        return kExitUsage;
    }
    for (double r : {5.0 / 12.0, 0.4517, 0.5}) csv << "reference," << r << ",\n";
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steerkit: parent-POVM simulation of noisy qubit measurements, local hidden "
                 "state models for Werner states, and LP feasibility certificates"};
    app.require_subcommand(1);

    Simulate3Opts s3;
    CLI::App* sim3 = app.add_subcommand("simulate3", "three-outcome simulation at r = 1/2");
    sim3->add_option("--povm", s3.povm_path, "POVM json file");
    sim3->add_option("--replay", s3.replay_path, "re-run the failure from a report");
    sim3->add_option("--random", s3.random_count, "number of random extremal POVMs");
    sim3->add_option("--seed", s3.seed, "RNG seed");
    sim3->add_option("--untouched", s3.untouched, "outcome whose response row stays unnormalized");
    sim3->add_option("--tol", s3.tol, "residual tolerance (default 1e-10)");
    sim3->add_option("--out", s3.out_path, "report path");

    Simulate4Opts s4;
    CLI::App* sim4 = app.add_subcommand("simulate4", "four-outcome simulation at r = 1/2");
    sim4->add_option("--povm", s4.povm_path, "POVM json file");
    sim4->add_option("--replay", s4.replay_path, "re-run the failure from a report");
    sim4->add_option("--random", s4.random_count, "number of random extremal POVMs");
    sim4->add_option("--seed", s4.seed, "RNG seed");
    sim4->add_option("--grid", s4.grid_spec, "lebedev:ORDER or product:NxM (default lebedev:131)");
    sim4->add_flag("--exact", s4.exact, "use the spherical-polygon backend");
    sim4->add_option("--pairing", s4.pairing, "outcome pairing, e.g. 0123 = (01)(23)");
    sim4->add_flag("--convergence", s4.convergence, "add a product-grid refinement ladder");
    sim4->add_option("--tol", s4.tol, "residual tolerance (default 2e-3)");
    sim4->add_option("--out", s4.out_path, "report path");

    LhsCheckOpts lhs;
    CLI::App* lhsc = app.add_subcommand("lhs-check", "verify LHS models for Werner states");
    lhsc->add_option("--r", lhs.r, "Werner radius (at most 0.5)")->required();
    lhsc->add_option("--n", lhs.n, "number of random POVMs");
    lhsc->add_option("--seed", lhs.seed, "RNG seed");
    lhsc->add_option("--grid", lhs.grid_spec, "grid for the four-outcome backend");
    lhsc->add_option("--analytic-tol", lhs.analytic_tol, "tolerance for analytic parents");
    lhsc->add_option("--quadrature-tol", lhs.quadrature_tol, "tolerance for quadrature parents");
    lhsc->add_option("--out", lhs.out_path, "report path");

    RadiusOpts rad;
    CLI::App* radius = app.add_subcommand("radius", "sampled PVM simulability radius of a parent");
    radius->add_option("--parent", rad.parent_path, "parent POVM json (default: built-in 5-effect)");
    radius->add_option("--n", rad.n, "number of PVM directions");
    radius->add_option("--seed", rad.seed, "RNG seed");
    radius->add_option("--tol", rad.tol, "bisection tolerance");
    radius->add_option("--scan", rad.scan_points, "feasibility-fraction scan points (0 disables)");
    radius->add_option("--out", rad.out_path, "report path");

    FarkasOpts fk;
    CLI::App* farkas = app.add_subcommand("farkas", "feasibility / infeasibility certificate");
    farkas->add_option("--parent", fk.parent_path, "parent effects json (default: built-in)");
    farkas->add_option("--child", fk.child_path, "child POVM json (default: built-in trine)");
    farkas->add_option("--r", fk.r, "override the child radius");
    farkas->add_option("--out", fk.out_path, "report path");

    SeparationOpts sep;
    CLI::App* separation = app.add_subcommand(
        "separation", "PVM vs POVM thresholds for the five-effect parent");
    separation->add_option("--n", sep.n, "number of PVM directions");
    separation->add_option("--seed", sep.seed, "RNG seed");
    separation->add_option("--tol", sep.tol, "bisection tolerance");
    separation->add_option("--out", sep.out_path, "report path");

    StressOpts st;
    CLI::App* stress = app.add_subcommand("stress", "14-effect brute force plus LP hygiene");
    stress->add_option("--n", st.n, "number of random four-outcome POVMs");
    stress->add_option("--hygiene", st.hygiene, "number of Farkas-exclusivity instances");
    stress->add_option("--seed", st.seed, "RNG seed");
    stress->add_option("--grid", st.grid_spec, "quadrature grid (default: exact backend)");
    stress->add_option("--replay", st.replay_path, "re-run the failure from a report");
    stress->add_option("--out", st.out_path, "report path");

    PlotOpts plot;
    CLI::App* plotc = app.add_subcommand("plot-data", "turn a report into CSV plot data");
    plotc->add_option("--report", plot.report_path, "input report json")->required();
    plotc->add_option("--out", plot.out_path, "output csv")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim3->parsed()) return run_simulate3(s3);
        if (sim4->parsed()) return run_simulate4(s4);
        if (lhsc->parsed()) return run_lhs_check(lhs);
        if (radius->parsed()) return run_radius(rad);
        if (farkas->parsed()) return run_farkas(fk);
        if (separation->parsed()) return run_separation(sep);
        if (stress->parsed()) return run_stress(st);
        if (plotc->parsed()) return run_plot_data(plot);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
