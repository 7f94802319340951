#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pacp/multigraph.hpp"
#include "pacp/polya_point.hpp"
#include "pacp/rng.hpp"
#include "pacp/stats.hpp"

namespace pacp {

// degree -> vertex count; sums to n, and sum of degree*count equals the
// total multiplicity-weighted degree (2 * total edge multiplicity)
std::map<std::int64_t, std::int64_t> degree_histogram(const MultiGraph& g);

struct TailFit {
    std::int64_t d_min = 0;
    std::int64_t d_max = 0;
    double slope = 0.0;       // of log10 P(deg >= d) against log10 d
    double intercept = 0.0;
    double r_squared = 0.0;
    std::string estimator;    // "loglog-LS" or "Hill"
    std::size_t n_points = 0; // distinct degrees used
};

// Fits the empirical survival function P(deg >= d) over distinct degrees in
// [d_min, d_max]. Requires d_min < d_max, the range to intersect the
// observed degrees, and >= 10 distinct degrees inside it (so regular graphs
// are rejected). estimator "Hill" uses the conditional-MLE tail index with
// threshold d_min; the slope reported is -1/gamma_hat.
TailFit degree_tail_fit(const MultiGraph& g, std::int64_t d_min,
                        std::int64_t d_max,
                        const std::string& estimator = "loglog-LS");

// distances from source; -1 for unreachable vertices
std::vector<std::int32_t> bfs_distances(const MultiGraph& g, int source);

// max distance from v; throws naming a disconnected pair if one exists
std::int64_t bfs_eccentricity(const MultiGraph& g, int v);

struct DiameterEstimate {
    std::int64_t value = 0;
    std::string method; // "bfs-exact" (n <= 1e4) or "double-sweep"
    bool exact = false;
};

// Exact for n <= 10^4 (BFS from every vertex); otherwise a repeated
// double-sweep lower bound. sweeps >= 1. Throws on disconnected input.
DiameterEstimate diameter_estimate(const MultiGraph& g, int sweeps);

struct DistanceSummary {
    std::size_t pairs = 0;
    double mean = 0.0;
    double median = 0.0;
    std::int64_t min = 0;
    std::int64_t max = 0;
    std::vector<std::int64_t> distances;
};

// BFS distances between `pairs` uniform pairs u != v. Requires pairs >= 1
// and n >= 2; throws naming the pair if a sampled pair is disconnected.
DistanceSummary typical_distance_sample(const MultiGraph& g, std::size_t pairs,
                                        RandomStream& rng);

struct Ball {
    MultiGraph graph;                    // induced subgraph on the ball
    std::vector<std::int32_t> vertex_ids; // ball index -> original vertex
    std::vector<std::int32_t> distance;   // ball index -> distance to center
    int center = 0;                       // ball index of the center (0)
};

// All vertices within distance `radius` of v plus every edge among them
// (multiplicities preserved). Requires radius >= 0 and v in range.
Ball ball_extract(const MultiGraph& g, int v, std::int64_t radius);

// |B(v, radius)| only (distinct vertices), without building the subgraph.
std::int64_t ball_size(const MultiGraph& g, int v, std::int64_t radius);

// nodes within depth `radius` of the tree root
std::int64_t tree_ball_size(const PointTree& t, std::int64_t radius);

struct LocalLimitReport {
    std::int64_t radius = 0;
    Chi2Result root_degree_chi2; // uniform-root degrees vs tree root degrees
    KSResult ball_size_ks;       // |B(u, R)| vs tree ball sizes
    std::size_t graph_samples = 0;
    std::size_t tree_samples = 0;
};

// Compares uniform-root neighborhood statistics of the graphs against
// Polya-point tree samples: chi-square on root degree (multiplicity
// counted), KS on ball sizes. Requires 0 <= radius <= 2, radius <= each
// tree's sampled depth, and nonempty inputs.
LocalLimitReport local_limit_compare(const std::vector<MultiGraph>& graphs,
                                     const std::vector<PointTree>& trees,
                                     std::int64_t radius,
                                     std::size_t roots_per_graph,
                                     RandomStream& rng);

} // namespace pacp
