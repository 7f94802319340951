#include "pacp/graph_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pacp {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// parses "key=value" tokens in a fixed order
std::string parse_kv(std::istringstream& in, const std::string& key,
                     const std::string& path) {
    std::string tok;
    if (!(in >> tok) || tok.rfind(key + "=", 0) != 0)
        fail(path, "malformed header: expected " + key + "=...");
    return tok.substr(key.size() + 1);
}

double parse_kv_num(std::istringstream& in, const std::string& key,
                    const std::string& path) {
    const std::string v = parse_kv(in, key, path);
    try {
        return std::stod(v);
    } catch (const std::exception&) {
        fail(path, "malformed header value for " + key);
    }
}

std::uint64_t parse_kv_u64(std::istringstream& in, const std::string& key,
                           const std::string& path) {
    const std::string v = parse_kv(in, key, path);
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        fail(path, "malformed header value for " + key);
    }
}

} // namespace

void write_graph(const std::string& path, const MultiGraph& g, const GraphMeta& meta) {
    std::ofstream out(path);
    if (!out) fail(path, "cannot open for writing");
    out << "PAGRAPH v1 n=" << g.n << " m=" << meta.m
        << " alpha=" << fmt_double(meta.alpha) << " seed=" << meta.seed << "\n";
    for (const auto& e : g.edges)
        out << (e.u + 1) << ' ' << (e.v + 1) << ' ' << e.mult << "\n";
    if (!out) fail(path, "write error");
}

LoadedGraph read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open");
    std::string line;
    if (!std::getline(in, line)) fail(path, "empty file");
    std::istringstream hdr(line);
    std::string magic, version;
    hdr >> magic >> version;
    if (magic != "PAGRAPH" || version != "v1")
        fail(path, "not a PAGRAPH v1 file (header: '" + line + "')");
    const int n = static_cast<int>(parse_kv_num(hdr, "n", path));
    LoadedGraph res;
    res.meta.m = static_cast<int>(parse_kv_num(hdr, "m", path));
    res.meta.alpha = parse_kv_num(hdr, "alpha", path);
    res.meta.seed = parse_kv_u64(hdr, "seed", path);
    if (n < 1) fail(path, "invalid vertex count");

    std::vector<MultiGraph::Edge> edges;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        long long j = 0, k = 0, mult = 0;
        if (!(row >> j >> k >> mult))
            fail(path, "malformed edge line " + std::to_string(lineno));
        if (j < 1 || k <= j || k > n || mult < 1)
            fail(path, "invalid edge '" + line + "' at line " + std::to_string(lineno));
        edges.push_back({static_cast<std::int32_t>(j - 1),
                         static_cast<std::int32_t>(k - 1),
                         static_cast<std::int32_t>(mult)});
    }
    try {
        res.graph = MultiGraph::from_edges(n, std::move(edges));
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    return res;
}

void write_weights(const std::string& path, const PolyaWeights& w, std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) fail(path, "cannot open for writing");
    out << "PAWEIGHTS v1 n=" << w.n << " m=" << w.consts.m
        << " alpha=" << fmt_double(w.consts.alpha) << " seed=" << seed << "\n";
    for (int j = 1; j <= w.n; ++j) out << fmt_double(w.psi[j]) << "\n";
    if (!out) fail(path, "write error");
}

PolyaWeights read_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open");
    std::string line;
    if (!std::getline(in, line)) fail(path, "empty file");
    std::istringstream hdr(line);
    std::string magic, version;
    hdr >> magic >> version;
    if (magic != "PAWEIGHTS" || version != "v1")
        fail(path, "not a PAWEIGHTS v1 file");
    const int n = static_cast<int>(parse_kv_num(hdr, "n", path));
    const int m = static_cast<int>(parse_kv_num(hdr, "m", path));
    const double alpha = parse_kv_num(hdr, "alpha", path);
    if (n < 2) fail(path, "invalid n");

    PolyaWeights w;
    w.n = n;
    w.consts = derive_constants(m, alpha);
    w.psi.assign(n + 1, 0.0);
    for (int j = 1; j <= n; ++j) {
        if (!std::getline(in, line)) fail(path, "truncated weights list");
        try {
            w.psi[j] = std::stod(line);
        } catch (const std::exception&) {
            fail(path, "malformed weight at line " + std::to_string(j + 1));
        }
        if (!(w.psi[j] > 0.0 && w.psi[j] <= 1.0))
            fail(path, "weight out of (0,1] at line " + std::to_string(j + 1));
    }
    if (w.psi[1] != 1.0) fail(path, "psi_1 must be 1");

    w.log_tail.assign(n + 1, 0.0);
    for (int j = n - 1; j >= 0; --j)
        w.log_tail[j] = w.log_tail[j + 1] + std::log1p(-w.psi[j + 1]);
    w.s_prefix.assign(n + 1, 0.0);
    for (int j = 1; j <= n; ++j) w.s_prefix[j] = std::exp(w.log_tail[j]);
    return w;
}

} // namespace pacp
