#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace pacp {

// Immutable undirected multigraph with explicit edge multiplicities.
// Vertices are 0-based internally; file formats are 1-based.
struct MultiGraph {
    struct Edge {
        std::int32_t u = 0; // u < v
        std::int32_t v = 0;
        std::int32_t mult = 0;
    };

    int n = 0;
    std::vector<Edge> edges;              // sorted lexicographically by (u, v)
    std::vector<std::int64_t> degree;     // multiplicity-weighted degree
    std::vector<std::int64_t> adj_offset; // n + 1 entries into adj arrays
    std::vector<std::int32_t> adj_vertex;
    std::vector<std::int32_t> adj_mult;

    // Collapses duplicate endpoint pairs into multiplicities. Rejects
    // self-loops and out-of-range endpoints.
    static MultiGraph from_endpoints(int n,
                                     std::vector<std::pair<std::int32_t, std::int32_t>> pairs);
    static MultiGraph from_edges(int n, std::vector<Edge> edge_list);

    std::int64_t total_multiplicity() const;
    int distinct_neighbors(int v) const;

    // adjacency range helpers
    struct NeighborRange {
        const std::int32_t* vtx_begin;
        const std::int32_t* mult_begin;
        std::size_t count;
    };
    NeighborRange neighbors(int v) const;
};

// Small builders used by experiments and tests.
MultiGraph make_single_vertex();
MultiGraph make_edge_graph();                     // 2 vertices, 1 edge
MultiGraph make_multi_edge_pair(int multiplicity); // 2 vertices, 1 multi-edge
MultiGraph make_triangle();
MultiGraph make_star(int leaves);                 // vertex 0 is the center
MultiGraph make_path(int vertices);
MultiGraph make_complete(int vertices);
// Two stars whose centers are joined by a path with `path_len` edges.
// Returns the graph plus the two center ids (first, second).
struct TwoStarGraph {
    MultiGraph graph;
    int center_a = 0;
    int center_b = 0;
};
TwoStarGraph make_two_stars_with_path(int leaves_a, int leaves_b, int path_len);

} // namespace pacp
