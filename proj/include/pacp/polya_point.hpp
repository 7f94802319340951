#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pacp/constants.hpp"
#include "pacp/rng.hpp"

namespace pacp {

enum class NodeType : std::uint8_t { Root, L, R };

// Rooted tree sampled breadth-first; children of a node are contiguous
// (L-children first, then R-children, positions ascending within each block).
struct PointTree {
    struct Node {
        double x = 0.0;          // position in (0, 1]
        double gamma = 0.0;      // Gamma weight used for the R-child count
        NodeType type = NodeType::Root;
        std::int32_t parent = -1;
        std::int32_t depth = 0;
        std::int64_t child_begin = 0; // index range into nodes
        std::int64_t child_end = 0;
        bool truncated = false;  // R-child count hit the degree cap
    };

    Constants consts;
    std::int32_t depth = 0;      // truncation depth the tree was sampled to
    std::vector<Node> nodes;     // nodes[0] is the root

    std::int64_t size() const { return static_cast<std::int64_t>(nodes.size()); }
    int child_count(std::int64_t v) const {
        return static_cast<int>(nodes[v].child_end - nodes[v].child_begin);
    }
    // m for Root/L nodes, m-1 for R nodes
    int m_v(std::int64_t v) const {
        return nodes[v].type == NodeType::R ? consts.m - 1 : consts.m;
    }
    std::int64_t truncated_nodes() const;
    // "0" for the root, then dot-separated 1-based child indices
    std::string path_of(std::int64_t v) const;
};

// Pólya-point tree truncated at the given depth. R-child counts are capped
// at degree_cap (cap hits set the node's truncated flag; sampling is
// otherwise exact). Requires depth >= 0, degree_cap >= m + 1.
PointTree sample_ppt(const Constants& c, int depth, std::int64_t degree_cap,
                     RandomStream& rng);

// Mixed-Poisson degree law of the offspring distributions:
//   P(count = k) = Gamma(k+a) / (Gamma(a) k!) * (1 - x^psi)^k * x^(a psi)
struct DegreeLawParams {
    double a = 0.0;   // Gamma shape; m + 2mr + 1 for q_i (i >= 1)
    double psi = 0.0;
    double x = 0.0;   // position in (0, 1]
};

double degree_pmf(std::int64_t k, const DegreeLawParams& p);

// x_i ~ U_i ... U_1 U_0^{1/(1+psi)}; i = 0 gives U^chi.
double sample_position_chain(int i, const Constants& c, RandomStream& rng);

// Degree of the i-th vertex on the Polya-point backbone: base degree plus a
// Gamma-mixed Poisson count. i = 0 is the root (shape m + 2mr, base m);
// i >= 1 uses shape m + 2mr + 1 and base m + 1.
std::int64_t sample_qi_degree(int i, const Constants& c, RandomStream& rng);

// Galton-Watson comparison tree GW(q_0, q_1, q_{i-1}): root offspring count
// drawn from the q_0 degree law, its children's from q_1 minus one, deeper
// generations from q_{i-1} minus one. Requires i >= 2 and depth <= i.
PointTree sample_gw_ball(int i, int depth, const Constants& c,
                         std::int64_t degree_cap, RandomStream& rng);

// PPTREE v1 serialization: header, then `path x type gamma truncated` rows.
void write_tree(const std::string& path, const PointTree& t, std::uint64_t seed,
                std::int64_t degree_cap);
PointTree read_tree(const std::string& path);

} // namespace pacp
