#include "pacp/multigraph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pacp {

namespace {

void build_adjacency(MultiGraph& g) {
    g.degree.assign(g.n, 0);
    std::vector<std::int64_t> fanout(g.n, 0);
    for (const auto& e : g.edges) {
        g.degree[e.u] += e.mult;
        g.degree[e.v] += e.mult;
        ++fanout[e.u];
        ++fanout[e.v];
    }
    g.adj_offset.assign(g.n + 1, 0);
    for (int v = 0; v < g.n; ++v) g.adj_offset[v + 1] = g.adj_offset[v] + fanout[v];
    g.adj_vertex.assign(g.adj_offset[g.n], 0);
    g.adj_mult.assign(g.adj_offset[g.n], 0);
    std::vector<std::int64_t> cursor(g.adj_offset.begin(), g.adj_offset.end() - 1);
    for (const auto& e : g.edges) {
        g.adj_vertex[cursor[e.u]] = e.v;
        g.adj_mult[cursor[e.u]++] = e.mult;
        g.adj_vertex[cursor[e.v]] = e.u;
        g.adj_mult[cursor[e.v]++] = e.mult;
    }
}

} // namespace

MultiGraph MultiGraph::from_endpoints(int n,
                                      std::vector<std::pair<std::int32_t, std::int32_t>> pairs) {
    std::vector<Edge> edge_list;
    edge_list.reserve(pairs.size());
    for (auto& [a, b] : pairs) {
        if (a > b) std::swap(a, b);
        edge_list.push_back({a, b, 1});
    }
    return from_edges(n, std::move(edge_list));
}

MultiGraph MultiGraph::from_edges(int n, std::vector<Edge> edge_list) {
    if (n < 1) throw std::invalid_argument("MultiGraph: n must be >= 1");
    for (auto& e : edge_list) {
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u == e.v)
            throw std::invalid_argument("MultiGraph: self-loop at vertex " +
                                        std::to_string(e.u));
        if (e.u < 0 || e.v >= n)
            throw std::invalid_argument("MultiGraph: endpoint out of range");
        if (e.mult < 1)
            throw std::invalid_argument("MultiGraph: multiplicity must be >= 1");
    }
    std::sort(edge_list.begin(), edge_list.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    MultiGraph g;
    g.n = n;
    g.edges.reserve(edge_list.size());
    for (const auto& e : edge_list) {
        if (!g.edges.empty() && g.edges.back().u == e.u && g.edges.back().v == e.v)
            g.edges.back().mult += e.mult;
        else
            g.edges.push_back(e);
    }
    build_adjacency(g);
    return g;
}

std::int64_t MultiGraph::total_multiplicity() const {
    std::int64_t s = 0;
    for (const auto& e : edges) s += e.mult;
    return s;
}

int MultiGraph::distinct_neighbors(int v) const {
    return static_cast<int>(adj_offset[v + 1] - adj_offset[v]);
}

MultiGraph::NeighborRange MultiGraph::neighbors(int v) const {
    const std::int64_t off = adj_offset[v];
    return {adj_vertex.data() + off, adj_mult.data() + off,
            static_cast<std::size_t>(adj_offset[v + 1] - off)};
}

MultiGraph make_single_vertex() { return MultiGraph::from_edges(1, {}); }

MultiGraph make_edge_graph() { return MultiGraph::from_edges(2, {{0, 1, 1}}); }

MultiGraph make_multi_edge_pair(int multiplicity) {
    return MultiGraph::from_edges(2, {{0, 1, multiplicity}});
}

MultiGraph make_triangle() {
    return MultiGraph::from_edges(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
}

MultiGraph make_star(int leaves) {
    std::vector<MultiGraph::Edge> e;
    for (int i = 1; i <= leaves; ++i) e.push_back({0, i, 1});
    return MultiGraph::from_edges(leaves + 1, std::move(e));
}

MultiGraph make_path(int vertices) {
    std::vector<MultiGraph::Edge> e;
    for (int i = 0; i + 1 < vertices; ++i) e.push_back({i, i + 1, 1});
    return MultiGraph::from_edges(vertices, std::move(e));
}

MultiGraph make_complete(int vertices) {
    std::vector<MultiGraph::Edge> e;
    for (int i = 0; i < vertices; ++i)
        for (int j = i + 1; j < vertices; ++j) e.push_back({i, j, 1});
    return MultiGraph::from_edges(vertices, std::move(e));
}

TwoStarGraph make_two_stars_with_path(int leaves_a, int leaves_b, int path_len) {
    if (leaves_a < 1 || leaves_b < 1 || path_len < 1)
        throw std::invalid_argument("make_two_stars_with_path: sizes must be >= 1");
    // layout: 0 = center a, 1..leaves_a = its leaves, then path interior,
    // then center b, then its leaves
    std::vector<MultiGraph::Edge> e;
    const int ca = 0;
    for (int i = 1; i <= leaves_a; ++i) e.push_back({ca, i, 1});
    int prev = ca;
    int next_id = leaves_a + 1;
    for (int k = 0; k < path_len - 1; ++k) {
        e.push_back({prev, next_id, 1});
        prev = next_id++;
    }
    const int cb = next_id++;
    e.push_back({prev, cb, 1});
    for (int i = 0; i < leaves_b; ++i) {
        e.push_back({cb, next_id, 1});
        ++next_id;
    }
    TwoStarGraph out;
    out.graph = MultiGraph::from_edges(next_id, std::move(e));
    out.center_a = ca;
    out.center_b = cb;
    return out;
}

} // namespace pacp
