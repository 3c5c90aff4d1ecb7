#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "steerkit/vec3.hpp"

#ifndef STEERKIT_GRID_DIR
#define STEERKIT_GRID_DIR ""
#endif

namespace steerkit {

// Quadrature rule for integrals over the unit sphere with the normalized
// measure dOmega / 4pi: sum w_i f(l_i) ~ (1/4pi) Int f dOmega. Weights sum
// to one and the node set is closed under the antipodal map with equal
// weights, which makes the first moment vanish pairwise.
struct QuadratureGrid {
    std::vector<Vec3> nodes;
    std::vector<double> weights;
    std::string spec;      // e.g. "lebedev:131" or "product:16x32"
    std::string checksum;  // fnv1a-64 of the defining data, hex

    std::size_t size() const { return nodes.size(); }

    double weight_sum_violation() const {  // Kahan-compensated
        double s = 0.0, c = 0.0;
        for (double w : weights) {
            double y = w - c;
            double t = s + y;
            c = (t - s) - y;
            s = t;
        }
        return std::abs(s - 1.0);
    }

    // Max mismatch of the antipodal pairing: every node must have a partner
    // at -node carrying the same weight.
    double antipodal_violation() const {
        const std::size_t n = nodes.size();
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        auto key = [&](std::size_t i) {
            return std::array<double, 3>{nodes[i].x, nodes[i].y, nodes[i].z};
        };
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 target = -nodes[i];
            // binary search for the closest key, then scan the neighborhood
            auto cmp = [&](std::size_t a, const std::array<double, 3>& k) { return key(a) < k; };
            std::array<double, 3> tk{target.x, target.y, target.z};
            auto it = std::lower_bound(idx.begin(), idx.end(), tk, cmp);
            double best = 1e300;
            for (int off = -2; off <= 2; ++off) {
                auto jt = it + off;
                if (jt < idx.begin() || jt >= idx.end()) continue;
                std::size_t j = *jt;
                double d = std::max((nodes[j] - target).max_abs(),
                                    std::abs(weights[j] - weights[i]));
                best = std::min(best, d);
            }
            worst = std::max(worst, best);
        }
        return worst;
    }

    void validate(double tol = 1e-12) const {
        if (nodes.size() != weights.size() || nodes.empty())
            throw std::invalid_argument("grid: empty or mismatched node/weight arrays");
        for (const Vec3& v : nodes)
            if (std::abs(v.norm() - 1.0) > tol)
                throw std::invalid_argument("grid: node is not a unit vector");
        for (double w : weights)
            if (!(w > 0.0)) throw std::invalid_argument("grid: nonpositive weight");
        if (weight_sum_violation() > tol)
            throw std::invalid_argument("grid: weights do not sum to 1");
        if (antipodal_violation() > tol)
            throw std::invalid_argument("grid: node set is not antipodally symmetric");
    }
};

inline std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string fnv1a64_hex(const std::string& s) {
    std::uint64_t h = fnv1a64(s.data(), s.size());
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double xi = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = xi;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
            double dx = p1 / dp;
            xi -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        x[static_cast<std::size_t>(i)] = -xi;
        x[static_cast<std::size_t>(n - 1 - i)] = xi;
        double wi = 2.0 / ((1.0 - xi * xi) * dp * dp);
        w[static_cast<std::size_t>(i)] = wi;
        w[static_cast<std::size_t>(n - 1 - i)] = wi;
    }
}

}  // namespace detail

// Gauss-Legendre in cos(theta) times a uniform, half-step-offset azimuth
// ring. The azimuth count must be even so each node keeps its antipode on
// the grid. The second half of the sphere is built by negating the first
// bitwise, so the antipodal pairing is exact, not just within rounding.
inline QuadratureGrid product_grid(int n_polar, int n_azimuth) {
    if (n_polar < 2 || n_azimuth < 2)
        throw std::invalid_argument("product_grid: counts must be at least 2");
    if (n_azimuth % 2 != 0)
        throw std::invalid_argument("product_grid: azimuth count must be even");
    std::vector<double> ct, cw;
    detail::gauss_legendre(n_polar, ct, cw);
    QuadratureGrid g;
    g.nodes.reserve(static_cast<std::size_t>(n_polar * n_azimuth));
    g.weights.reserve(static_cast<std::size_t>(n_polar * n_azimuth));
    auto ring_phi = [&](int k) { return std::numbers::pi * (2 * k + 1) / n_azimuth; };
    for (int j = 0; j < n_polar / 2; ++j) {
        double z = ct[static_cast<std::size_t>(j)];
        double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        double wz = cw[static_cast<std::size_t>(j)] / (2.0 * n_azimuth);
        for (int k = 0; k < n_azimuth; ++k) {
            double phi = ring_phi(k);
            Vec3 node{s * std::cos(phi), s * std::sin(phi), z};
            g.nodes.push_back(node);
            g.weights.push_back(wz);
            g.nodes.push_back(-node);  // partner ring, exact negation
            g.weights.push_back(wz);
        }
    }
    if (n_polar % 2 == 1) {  // equator ring pairs with itself under phi -> phi + pi
        double wz = cw[static_cast<std::size_t>(n_polar / 2)] / (2.0 * n_azimuth);
        for (int k = 0; k < n_azimuth / 2; ++k) {
            double phi = ring_phi(k);
            Vec3 node{std::cos(phi), std::sin(phi), 0.0};
            g.nodes.push_back(node);
            g.weights.push_back(wz);
            g.nodes.push_back(-node);
            g.weights.push_back(wz);
        }
    }
    std::ostringstream spec;
    spec << "product:" << n_polar << "x" << n_azimuth;
    g.spec = spec.str();
    std::ostringstream blob;
    blob.precision(17);
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        blob << g.nodes[i].x << ' ' << g.nodes[i].y << ' ' << g.nodes[i].z << ' '
             << g.weights[i] << '\n';
    g.checksum = fnv1a64_hex(blob.str());
    return g;
}

// Standard Lebedev precision -> node count table (used to sanity-check the
// shipped files on load).
inline const std::map<int, int>& lebedev_node_counts() {
    static const std::map<int, int> table = {
        {3, 6},     {5, 14},    {7, 26},    {9, 38},    {11, 50},   {13, 74},
        {15, 86},   {17, 110},  {19, 146},  {21, 170},  {23, 194},  {25, 230},
        {27, 266},  {29, 302},  {31, 350},  {35, 434},  {41, 590},  {47, 770},
        {53, 974},  {59, 1202}, {65, 1454}, {71, 1730}, {77, 2030}, {83, 2354},
        {89, 2702}, {95, 3074}, {101, 3470},{107, 3890},{113, 4334},{119, 4802},
        {125, 5294},{131, 5810}};
    return table;
}

inline std::string grid_dir() {
    if (const char* env = std::getenv("STEERKIT_GRID_DIR"); env && *env) return env;
    return STEERKIT_GRID_DIR;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Parse "x y z w" rows; '#' starts a comment.
inline QuadratureGrid parse_grid_text(const std::string& text) {
    QuadratureGrid g;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double x, y, z, w;
        if (!(ls >> x >> y >> z >> w)) {
            std::string rest;
            if (ls.clear(), ls.str(line), (ls >> rest))  // non-blank garbage
                throw std::invalid_argument("grid file: malformed row '" + line + "'");
            continue;
        }
        g.nodes.push_back({x, y, z});
        g.weights.push_back(w);
    }
    return g;
}

inline QuadratureGrid load_lebedev(int order, const std::string& dir = grid_dir()) {
    const auto& counts = lebedev_node_counts();
    auto it = counts.find(order);
    if (it == counts.end())
        throw std::invalid_argument("load_lebedev: unknown order " + std::to_string(order));
    std::ostringstream name;
    name << "lebedev_" << order << ".txt";
    const std::string path = dir + "/" + name.str();
    const std::string text = read_file(path);
    const std::string sum = fnv1a64_hex(text);

    // checksum manifest
    const std::string manifest = read_file(dir + "/CHECKSUMS");
    std::istringstream ms(manifest);
    std::string fname, expect;
    bool found = false;
    while (ms >> fname >> expect) {
        if (fname == name.str()) {
            found = true;
            break;
        }
    }
    if (!found) throw std::runtime_error("load_lebedev: " + name.str() + " missing from CHECKSUMS");
    if (expect != sum)
        throw std::runtime_error("load_lebedev: checksum mismatch for " + name.str() +
                                 " (expected " + expect + ", got " + sum + ")");

    QuadratureGrid g = parse_grid_text(text);
    if (static_cast<int>(g.size()) != it->second)
        throw std::runtime_error("load_lebedev: order " + std::to_string(order) + " should have " +
                                 std::to_string(it->second) + " nodes, file has " +
                                 std::to_string(g.size()));
    g.spec = "lebedev:" + std::to_string(order);
    g.checksum = sum;
    g.validate(1e-13);
    return g;
}

// Parse a CLI grid spec: "lebedev:131" or "product:64x128".
inline QuadratureGrid grid_from_spec(const std::string& spec, const std::string& dir = grid_dir()) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("grid spec: expected kind:params");
    const std::string kind = spec.substr(0, colon);
    const std::string params = spec.substr(colon + 1);
    if (kind == "lebedev") {
        return load_lebedev(std::stoi(params), dir);
    }
    if (kind == "product") {
        auto x = params.find('x');
        if (x == std::string::npos)
            throw std::invalid_argument("grid spec: product wants NxM");
        return product_grid(std::stoi(params.substr(0, x)), std::stoi(params.substr(x + 1)));
    }
    throw std::invalid_argument("grid spec: unknown kind '" + kind + "'");
}

}  // namespace steerkit
