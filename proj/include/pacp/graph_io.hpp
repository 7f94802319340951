#pragma once

#include <cstdint>
#include <string>

#include "pacp/multigraph.hpp"
#include "pacp/polya_weights.hpp"

namespace pacp {

// Metadata carried in the PAGRAPH/PAWEIGHTS headers. Hand-built test graphs
// use m=0, alpha=0, seed=0.
struct GraphMeta {
    int m = 0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
};

// PAGRAPH v1 text format:
//   PAGRAPH v1 n=<n> m=<m> alpha=<alpha> seed=<seed>
//   <j> <k> <mult>          (1-based, j < k, sorted lexicographically)
void write_graph(const std::string& path, const MultiGraph& g, const GraphMeta& meta);

struct LoadedGraph {
    MultiGraph graph;
    GraphMeta meta;
};
LoadedGraph read_graph(const std::string& path);

// PAWEIGHTS v1 text format:
//   PAWEIGHTS v1 n=<n> m=<m> alpha=<alpha> seed=<seed>
//   <psi_j>                 (full precision, one per line, j = 1..n)
void write_weights(const std::string& path, const PolyaWeights& w, std::uint64_t seed);
PolyaWeights read_weights(const std::string& path);

} // namespace pacp
