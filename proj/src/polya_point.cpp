#include "pacp/polya_point.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pacp {

namespace {

constexpr double kMeanClamp = 1e15; // Poisson means above this are position
                                    // underflow artifacts; clamped, never hit
                                    // by any assertion range

double gamma_shape(NodeType t, const Constants& c) {
    const double base = c.m + 2.0 * c.m * c.r;
    return t == NodeType::L ? base + 1.0 : base; // Root and R share the base
}

// R-child count: Poisson(gamma * (1 - x^psi) / x^psi), capped
std::int64_t r_child_count(double gamma, double x, double psi,
                           std::int64_t cap, bool* truncated, RandomStream& rng) {
    const double xp = std::pow(x, psi);
    double mean;
    if (xp <= 0.0 || !std::isfinite(xp)) {
        mean = std::numeric_limits<double>::infinity();
    } else {
        mean = gamma * (1.0 - xp) / xp;
    }
    if (!(mean < kMeanClamp)) mean = kMeanClamp;
    // far above the cap the draw cannot land below it (P < 1e-20); skip it
    if (mean > static_cast<double>(cap) + 20.0 * std::sqrt(static_cast<double>(cap)) + 100.0) {
        *truncated = true;
        return cap;
    }
    std::int64_t k = rng.poisson(mean);
    if (k > cap) {
        *truncated = true;
        k = cap;
    }
    return k;
}

// inverse-CDF position of an R-child of a node at position xv
double r_child_position(double xv, double psi, RandomStream& rng) {
    const double xvp = std::pow(xv, psi);
    const double u = rng.uniform01();
    return std::pow(xvp + u * (1.0 - xvp), 1.0 / psi);
}

} // namespace

std::int64_t PointTree::truncated_nodes() const {
    std::int64_t c = 0;
    for (const auto& nd : nodes) c += nd.truncated ? 1 : 0;
    return c;
}

std::string PointTree::path_of(std::int64_t v) const {
    std::vector<std::int64_t> rev;
    std::int64_t cur = v;
    while (nodes[cur].parent >= 0) {
        const auto& p = nodes[nodes[cur].parent];
        rev.push_back(cur - p.child_begin + 1);
        cur = nodes[cur].parent;
    }
    std::string out = "0";
    for (auto it = rev.rbegin(); it != rev.rend(); ++it)
        out += "." + std::to_string(*it);
    return out;
}

PointTree sample_ppt(const Constants& c, int depth, std::int64_t degree_cap,
                     RandomStream& rng) {
    if (depth < 0) throw std::invalid_argument("sample_ppt: depth must be >= 0");
    if (degree_cap < c.m + 1)
        throw std::invalid_argument("sample_ppt: degree_cap must be >= m + 1");

    PointTree t;
    t.consts = c;
    t.depth = depth;

    PointTree::Node root;
    root.x = std::pow(rng.uniform_open01(), c.chi);
    root.gamma = rng.gamma(gamma_shape(NodeType::Root, c));
    root.type = NodeType::Root;
    t.nodes.push_back(root);

    for (std::int64_t v = 0; v < static_cast<std::int64_t>(t.nodes.size()); ++v) {
        // copy: t.nodes may reallocate while children are appended
        PointTree::Node cur = t.nodes[v];
        if (cur.depth >= depth) break; // BFS order: all deeper nodes follow
        const int m_l = t.m_v(v);

        std::vector<double> lx(m_l);
        for (auto& x : lx) x = rng.uniform_open01() * cur.x;
        std::sort(lx.begin(), lx.end());

        bool truncated = false;
        const std::int64_t rk =
            r_child_count(cur.gamma, cur.x, c.psi, degree_cap, &truncated, rng);
        std::vector<double> rx(rk);
        for (auto& x : rx) x = r_child_position(cur.x, c.psi, rng);
        std::sort(rx.begin(), rx.end());

        t.nodes[v].truncated = truncated;
        t.nodes[v].child_begin = static_cast<std::int64_t>(t.nodes.size());
        for (double x : lx) {
            PointTree::Node nd;
            nd.x = x;
            nd.type = NodeType::L;
            nd.gamma = rng.gamma(gamma_shape(NodeType::L, c));
            nd.parent = static_cast<std::int32_t>(v);
            nd.depth = cur.depth + 1;
            t.nodes.push_back(nd);
        }
        for (double x : rx) {
            PointTree::Node nd;
            nd.x = x;
            nd.type = NodeType::R;
            nd.gamma = rng.gamma(gamma_shape(NodeType::R, c));
            nd.parent = static_cast<std::int32_t>(v);
            nd.depth = cur.depth + 1;
            t.nodes.push_back(nd);
        }
        t.nodes[v].child_end = static_cast<std::int64_t>(t.nodes.size());
    }
    return t;
}

double degree_pmf(std::int64_t k, const DegreeLawParams& p) {
    if (k < 0) throw std::invalid_argument("degree_pmf: k must be >= 0");
    if (!(p.x > 0.0 && p.x <= 1.0))
        throw std::invalid_argument("degree_pmf: x must be in (0, 1]");
    const double xp = std::pow(p.x, p.psi);
    double lp = std::lgamma(k + p.a) - std::lgamma(p.a) - std::lgamma(k + 1.0) +
                p.a * p.psi * std::log(p.x);
    if (k > 0) lp += k * std::log1p(-xp); // avoids 0 * (-inf) at x = 1
    return std::exp(lp);
}

double sample_position_chain(int i, const Constants& c, RandomStream& rng) {
    if (i < 0) throw std::invalid_argument("sample_position_chain: i >= 0");
    double x = std::pow(rng.uniform_open01(), 1.0 / (1.0 + c.psi));
    for (int j = 0; j < i; ++j) x *= rng.uniform_open01();
    return x;
}

std::int64_t sample_qi_degree(int i, const Constants& c, RandomStream& rng) {
    if (i < 0) throw std::invalid_argument("sample_qi_degree: i >= 0");
    const double x = sample_position_chain(i, c, rng);
    const double base_shape = c.m + 2.0 * c.m * c.r;
    const double shape = (i == 0) ? base_shape : base_shape + 1.0;
    const std::int64_t base_deg = (i == 0) ? c.m : c.m + 1;
    const double g = rng.gamma(shape);
    const double xp = std::pow(x, c.psi);
    double mean = (xp > 0.0) ? g * (1.0 - xp) / xp
                             : std::numeric_limits<double>::infinity();
    if (!(mean < kMeanClamp)) mean = kMeanClamp;
    return base_deg + rng.poisson(mean);
}

PointTree sample_gw_ball(int i, int depth, const Constants& c,
                         std::int64_t degree_cap, RandomStream& rng) {
    if (i < 2) throw std::invalid_argument("sample_gw_ball: requires i >= 2");
    if (depth > i)
        throw std::invalid_argument(
            "sample_gw_ball: depth > i outside the domination statement");
    if (depth < 0) throw std::invalid_argument("sample_gw_ball: depth >= 0");

    PointTree t;
    t.consts = c;
    t.depth = depth;
    PointTree::Node root; // x/gamma carry no meaning for GW trees
    root.x = 1.0;
    root.type = NodeType::Root;
    t.nodes.push_back(root);

    for (std::int64_t v = 0; v < static_cast<std::int64_t>(t.nodes.size()); ++v) {
        const PointTree::Node cur = t.nodes[v];
        if (cur.depth >= depth) break;
        std::int64_t offspring;
        if (cur.depth == 0) {
            offspring = sample_qi_degree(0, c, rng);
        } else {
            const int gen = cur.depth == 1 ? 1 : i - 1;
            offspring = sample_qi_degree(gen, c, rng) - 1;
        }
        bool truncated = false;
        if (offspring > degree_cap) {
            offspring = degree_cap;
            truncated = true;
        }
        t.nodes[v].truncated = truncated;
        t.nodes[v].child_begin = static_cast<std::int64_t>(t.nodes.size());
        for (std::int64_t k = 0; k < offspring; ++k) {
            PointTree::Node nd;
            nd.x = 1.0;
            nd.type = NodeType::L;
            nd.parent = static_cast<std::int32_t>(v);
            nd.depth = cur.depth + 1;
            t.nodes.push_back(nd);
        }
        t.nodes[v].child_end = static_cast<std::int64_t>(t.nodes.size());
    }
    return t;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* type_name(NodeType t) {
    switch (t) {
        case NodeType::Root: return "root";
        case NodeType::L: return "L";
        default: return "R";
    }
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

} // namespace

void write_tree(const std::string& path, const PointTree& t, std::uint64_t seed,
                std::int64_t degree_cap) {
    std::ofstream out(path);
    if (!out) fail(path, "cannot open for writing");
    out << "PPTREE v1 m=" << t.consts.m << " alpha=" << fmt_double(t.consts.alpha)
        << " depth=" << t.depth << " degree_cap=" << degree_cap
        << " seed=" << seed << "\n";
    for (std::int64_t v = 0; v < t.size(); ++v) {
        const auto& nd = t.nodes[v];
        out << t.path_of(v) << ' ' << fmt_double(nd.x) << ' ' << type_name(nd.type)
            << ' ' << fmt_double(nd.gamma) << ' ' << (nd.truncated ? 1 : 0) << "\n";
    }
    if (!out) fail(path, "write error");
}

PointTree read_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open");
    std::string line;
    if (!std::getline(in, line)) fail(path, "empty file");
    std::istringstream hdr(line);
    std::string magic, version, tok;
    hdr >> magic >> version;
    if (magic != "PPTREE" || version != "v1") fail(path, "not a PPTREE v1 file");
    int m = 0, depth = 0;
    double alpha = 0.0;
    while (hdr >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) fail(path, "malformed header token " + tok);
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        try {
            if (key == "m") m = std::stoi(val);
            else if (key == "alpha") alpha = std::stod(val);
            else if (key == "depth") depth = std::stoi(val);
        } catch (const std::exception&) {
            fail(path, "malformed header value " + tok);
        }
    }

    PointTree t;
    t.consts = derive_constants(m, alpha);
    t.depth = depth;
    std::map<std::string, std::int64_t> index_of;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string p, type_s;
        double x = 0.0, gamma = 0.0;
        int trunc = 0;
        if (!(row >> p >> x >> type_s >> gamma >> trunc))
            fail(path, "malformed node at line " + std::to_string(lineno));
        PointTree::Node nd;
        nd.x = x;
        nd.gamma = gamma;
        nd.truncated = trunc != 0;
        if (type_s == "root") nd.type = NodeType::Root;
        else if (type_s == "L") nd.type = NodeType::L;
        else if (type_s == "R") nd.type = NodeType::R;
        else fail(path, "unknown node type at line " + std::to_string(lineno));
        if (p == "0") {
            if (!t.nodes.empty()) fail(path, "duplicate root");
            nd.parent = -1;
            nd.depth = 0;
        } else {
            const auto dot = p.rfind('.');
            if (dot == std::string::npos)
                fail(path, "malformed path at line " + std::to_string(lineno));
            const auto pit = index_of.find(p.substr(0, dot));
            if (pit == index_of.end())
                fail(path, "orphan node at line " + std::to_string(lineno));
            nd.parent = static_cast<std::int32_t>(pit->second);
            nd.depth = t.nodes[pit->second].depth + 1;
        }
        index_of[p] = static_cast<std::int64_t>(t.nodes.size());
        t.nodes.push_back(nd);
    }
    if (t.nodes.empty()) fail(path, "no nodes");
    // children are contiguous in BFS order; rebuild ranges
    for (std::int64_t v = 0; v < t.size(); ++v) {
        t.nodes[v].child_begin = 0;
        t.nodes[v].child_end = 0;
    }
    for (std::int64_t v = 1; v < t.size(); ++v) {
        const auto p = t.nodes[v].parent;
        if (t.nodes[p].child_end == 0) {
            t.nodes[p].child_begin = v;
            t.nodes[p].child_end = v + 1;
        } else {
            if (t.nodes[p].child_end != v)
                fail(path, "children of node " + std::to_string(p) +
                               " are not contiguous");
            t.nodes[p].child_end = v + 1;
        }
    }
    return t;
}

} // namespace pacp
