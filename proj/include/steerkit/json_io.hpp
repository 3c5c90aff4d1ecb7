#pragma once

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "steerkit/effect.hpp"
#include "steerkit/feasibility.hpp"
#include "steerkit/partition.hpp"
#include "steerkit/sim_four.hpp"
#include "steerkit/sim_three.hpp"
#include "steerkit/steering.hpp"

#ifndef STEERKIT_VERSION
#define STEERKIT_VERSION "0.0.0"
#endif

namespace steerkit {

using ordered_json = nlohmann::ordered_json;

inline ordered_json vec3_to_json(const Vec3& v) { return ordered_json::array({v.x, v.y, v.z}); }

inline Vec3 vec3_from_json(const ordered_json& j) {
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument("expected a 3-element array for a vector");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline ordered_json effect_to_json(const Effect& e) {
    return ordered_json{{"t", e.t}, {"b", vec3_to_json(e.b)}};
}

// POVM file: {"effects":[{"mu":..,"mhat":[x,y,z]}],"r":..}. Row order is
// outcome order; mhat is normalized when within 1e-9 of unit length and
// rejected otherwise.
struct PovmFile {
    ExtremalPovm povm;
    double r = 1.0;
};

inline ordered_json povm_to_json(const ExtremalPovm& povm, double r) {
    ordered_json effects = ordered_json::array();
    for (const auto& o : povm.outcomes)
        effects.push_back(ordered_json{{"mu", o.mu}, {"mhat", vec3_to_json(o.mhat)}});
    return ordered_json{{"effects", effects}, {"r", r}};
}

inline PovmFile povm_from_json(const ordered_json& j) {
    if (!j.contains("effects") || !j["effects"].is_array() || j["effects"].empty())
        throw std::invalid_argument("povm json: missing effects array");
    PovmFile out;
    out.r = j.value("r", 1.0);
    if (out.r < 0.0 || out.r > 1.0) throw std::invalid_argument("povm json: r outside [0,1]");
    for (const auto& entry : j["effects"]) {
        if (!entry.contains("mu") || !entry.contains("mhat"))
            throw std::invalid_argument("povm json: effect needs mu and mhat");
        double mu = entry["mu"].get<double>();
        Vec3 mhat = vec3_from_json(entry["mhat"]);
        double len = mhat.norm();
        if (std::abs(len - 1.0) > 1e-9)
            throw std::invalid_argument("povm json: mhat is not a unit vector (|norm-1| = " +
                                        std::to_string(std::abs(len - 1.0)) + ")");
        out.povm.outcomes.push_back({mu, mhat / len});
    }
    return out;
}

// Parent/child effect lists: either the mu/mhat schema above (rank-one with
// the file's global r) or rows {"t":..,"b":[..]} for general effects.
inline std::vector<Effect> effects_from_json(const ordered_json& j) {
    if (!j.contains("effects")) throw std::invalid_argument("effects json: missing effects");
    std::vector<Effect> out;
    const double r = j.value("r", 1.0);
    for (const auto& entry : j["effects"]) {
        if (entry.contains("mu") && entry.contains("mhat")) {
            Vec3 mhat = vec3_from_json(entry["mhat"]);
            double len = mhat.norm();
            if (std::abs(len - 1.0) > 1e-9)
                throw std::invalid_argument("effects json: mhat is not a unit vector");
            out.push_back(effect_from_bloch(entry["mu"].get<double>(), mhat / len, r));
        } else if (entry.contains("t") && entry.contains("b")) {
            out.push_back(Effect{entry["t"].get<double>(), vec3_from_json(entry["b"])});
        } else {
            throw std::invalid_argument("effects json: entry needs mu/mhat or t/b");
        }
    }
    return out;
}

inline ordered_json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    ordered_json j;
    in >> j;
    return j;
}

inline void write_json_file(const std::string& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

inline ordered_json parent_to_json(const CoarseGrainedPovm& parent) {
    ordered_json regions = ordered_json::array();
    for (const auto& [label, e] : parent.entries) {
        regions.push_back(ordered_json{{"label", label_to_string(label, static_cast<int>(parent.directions.size()))},
                                       {"bits", label},
                                       {"t", e.t},
                                       {"b", vec3_to_json(e.b)}});
    }
    return ordered_json{{"backend", parent.backend},
                        {"tie_rotations", parent.tie_rotations},
                        {"regions", regions}};
}

inline ordered_json table_to_json(const ResponseTable& table) {
    ordered_json cols = ordered_json::array();
    for (const auto& [label, col] : table.columns)
        cols.push_back(ordered_json{{"bits", label}, {"p", col}});
    return cols;
}

inline ordered_json sim3_to_json(const SimThreeResult& res) {
    ordered_json j;
    j["povm"] = povm_to_json(res.povm, 0.5);
    j["parent"] = parent_to_json(res.parent);
    j["table"] = table_to_json(res.table);
    j["residual"] = res.residual;
    if (!res.reduced_to_pvm) j["xy"] = ordered_json{{"X", res.xy.x}, {"Y", res.xy.y}};
    j["reduced_to_pvm"] = res.reduced_to_pvm;
    return j;
}

inline ordered_json sim4_to_json(const SimFourResult& res) {
    ordered_json j;
    j["povm"] = povm_to_json(res.povm, 0.5);
    if (res.reduced_to_three) {
        j["reduced_to_three"] = true;
        j["three"] = sim3_to_json(*res.three);
        j["residual"] = res.residual;
        return j;
    }
    j["split"] = ordered_json{{"m5hat", vec3_to_json(res.split.m5hat)},
                              {"mu5", res.split.mu5},
                              {"kappa", ordered_json::array({res.split.kappa_plus, res.split.kappa_minus})}};
    j["pairing"] = res.split.pairing;
    j["backend"] = res.backend;
    j["degenerate_double_pvm"] = res.degenerate_double_pvm;
    j["parent"] = parent_to_json(res.parent18);
    j["table"] = table_to_json(res.fine.q);
    j["residual"] = res.residual;
    return j;
}

inline ordered_json feasibility_to_json(const FeasibilityOutcome& outcome) {
    ordered_json j;
    if (const Feasible* f = std::get_if<Feasible>(&outcome)) {
        j["verdict"] = "feasible";
        j["x"] = f->x;
        j["residual"] = f->residual;
    } else if (const Infeasible* inf = std::get_if<Infeasible>(&outcome)) {
        j["verdict"] = "infeasible";
        j["certificate_y"] = inf->certificate.y;
        j["margin"] = inf->margin;
    } else {
        j["verdict"] = "indeterminate";
        j["reason"] = std::get<Indeterminate>(outcome).reason;
    }
    return j;
}

}  // namespace steerkit
