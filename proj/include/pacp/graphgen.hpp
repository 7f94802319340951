#pragma once

#include "pacp/constants.hpp"
#include "pacp/multigraph.hpp"
#include "pacp/polya_weights.hpp"
#include "pacp/rng.hpp"

namespace pacp {

// Urn construction: for k = 2..n and i = 1..m draw U uniform on [0, S_{k-1}]
// and connect v_k to the vertex whose interval [S_{j-1}, S_j) contains U.
MultiGraph build_polya_graph(const PolyaWeights& weights, RandomStream& rng);

// Convenience: samples fresh weights, builds the graph, optionally hands the
// weights back.
MultiGraph build_polya_graph(int n, const Constants& c, RandomStream& rng,
                             PolyaWeights* weights_out = nullptr);

// Direct sequential model: G_2 is two vertices with m parallel edges; each
// new vertex draws m endpoints, uniform with probability alpha_n^(i), else
// proportional to partially updated degrees.
MultiGraph build_sequential_graph(int n, const Constants& c, RandomStream& rng);

namespace detail {
// Test-only entry point that also admits alpha = 1 (pure uniform
// attachment); the public API requires alpha < 1.
MultiGraph sequential_graph_any_alpha(int n, int m, double alpha, RandomStream& rng);
} // namespace detail

} // namespace pacp
