#include "pacp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pacp {

std::map<std::int64_t, std::int64_t> degree_histogram(const MultiGraph& g) {
    std::map<std::int64_t, std::int64_t> hist;
    for (int v = 0; v < g.n; ++v) ++hist[g.degree[v]];
    return hist;
}

TailFit degree_tail_fit(const MultiGraph& g, std::int64_t d_min,
                        std::int64_t d_max, const std::string& estimator) {
    if (estimator != "loglog-LS" && estimator != "Hill")
        throw std::invalid_argument("degree_tail_fit: unknown estimator '" +
                                    estimator + "'");
    if (d_min < 1 || d_min >= d_max)
        throw std::invalid_argument("degree_tail_fit: need 1 <= d_min < d_max");

    const auto hist = degree_histogram(g);
    std::vector<std::int64_t> ds;     // distinct degrees in range, ascending
    std::vector<std::int64_t> counts; // vertices at exactly that degree
    for (const auto& [d, c] : hist) {
        if (d >= d_min && d <= d_max) {
            ds.push_back(d);
            counts.push_back(c);
        }
    }
    if (ds.size() < 10)
        throw std::invalid_argument(
            "degree_tail_fit: insufficient degree range: only " +
            std::to_string(ds.size()) + " distinct degrees in [" +
            std::to_string(d_min) + ", " + std::to_string(d_max) +
            "], need 10");

    // survival counts #\{v : deg >= d\} for each retained degree
    std::int64_t at_or_above = 0;
    for (const auto& [d, c] : hist)
        if (d >= ds.front()) at_or_above += c;
    std::vector<std::int64_t> surv(ds.size());
    for (std::size_t k = 0; k < ds.size(); ++k) {
        surv[k] = at_or_above;
        at_or_above -= counts[k];
        // degrees above d_max still count toward every survival value;
        // subtracting only in-range bin counts keeps them included
    }

    TailFit fit;
    fit.d_min = ds.front();
    fit.d_max = ds.back();
    fit.estimator = estimator;
    fit.n_points = ds.size();

    const double n = static_cast<double>(g.n);
    if (estimator == "loglog-LS") {
        std::vector<std::vector<double>> X;
        std::vector<double> y;
        for (std::size_t k = 0; k < ds.size(); ++k) {
            X.push_back({1.0, std::log10(static_cast<double>(ds[k]))});
            y.push_back(std::log10(static_cast<double>(surv[k]) / n));
        }
        const LinFit ls = least_squares(X, y);
        fit.intercept = ls.beta[0];
        fit.slope = ls.beta[1];
        fit.r_squared = ls.r2;
    } else {
        // Hill with deterministic threshold d_min: gamma_hat is the mean of
        // log(deg / d_min) over vertices with deg >= d_min (within range)
        double log_sum = 0.0;
        std::int64_t k_count = 0;
        for (std::size_t k = 0; k < ds.size(); ++k) {
            log_sum += counts[k] * std::log(static_cast<double>(ds[k]) /
                                            static_cast<double>(d_min));
            k_count += counts[k];
        }
        const double gamma_hat = log_sum / static_cast<double>(k_count);
        if (gamma_hat <= 0.0)
            throw std::invalid_argument(
                "degree_tail_fit: degenerate tail (all degrees at d_min)");
        fit.slope = -1.0 / gamma_hat;
        // anchor the survival line at d_min
        fit.intercept =
            std::log10(static_cast<double>(surv[0]) / n) -
            fit.slope * std::log10(static_cast<double>(ds.front()));
        fit.r_squared = 0.0;
    }
    return fit;
}

std::vector<std::int32_t> bfs_distances(const MultiGraph& g, int source) {
    if (source < 0 || source >= g.n)
        throw std::invalid_argument("bfs_distances: source out of range");
    std::vector<std::int32_t> dist(g.n, -1);
    std::vector<std::int32_t> queue;
    queue.reserve(g.n);
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int u = queue[head];
        const auto nb = g.neighbors(u);
        for (std::size_t k = 0; k < nb.count; ++k) {
            const int w = nb.vtx_begin[k];
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

std::int64_t bfs_eccentricity(const MultiGraph& g, int v) {
    const auto dist = bfs_distances(g, v);
    std::int64_t ecc = 0;
    for (int u = 0; u < g.n; ++u) {
        if (dist[u] < 0)
            throw std::runtime_error(
                "bfs_eccentricity: graph disconnected: no path from vertex " +
                std::to_string(v) + " to vertex " + std::to_string(u));
        ecc = std::max<std::int64_t>(ecc, dist[u]);
    }
    return ecc;
}

namespace {

// farthest vertex from `dist`, throwing on unreachable vertices
int farthest_vertex(const std::vector<std::int32_t>& dist, int source) {
    int far = source;
    for (int u = 0; u < static_cast<int>(dist.size()); ++u) {
        if (dist[u] < 0)
            throw std::runtime_error(
                "diameter_estimate: graph disconnected: no path from vertex " +
                std::to_string(source) + " to vertex " + std::to_string(u));
        if (dist[u] > dist[far]) far = u;
    }
    return far;
}

} // namespace

DiameterEstimate diameter_estimate(const MultiGraph& g, int sweeps) {
    if (sweeps < 1)
        throw std::invalid_argument("diameter_estimate: sweeps must be >= 1");
    if (g.n == 0) throw std::invalid_argument("diameter_estimate: empty graph");

    DiameterEstimate est;
    if (g.n <= 10'000) {
        est.method = "bfs-exact";
        est.exact = true;
        for (int v = 0; v < g.n; ++v)
            est.value = std::max(est.value, bfs_eccentricity(g, v));
        return est;
    }

    est.method = "double-sweep";
    est.exact = false;
    int start = 0;
    for (int v = 1; v < g.n; ++v)
        if (g.degree[v] > g.degree[start]) start = v;
    for (int s = 0; s < sweeps; ++s) {
        const auto d1 = bfs_distances(g, start);
        const int w = farthest_vertex(d1, start);
        const auto d2 = bfs_distances(g, w);
        const int z = farthest_vertex(d2, w);
        est.value = std::max<std::int64_t>(est.value, d2[z]);
        start = z; // chain sweeps from the newest far endpoint
    }
    return est;
}

DistanceSummary typical_distance_sample(const MultiGraph& g, std::size_t pairs,
                                        RandomStream& rng) {
    if (pairs < 1)
        throw std::invalid_argument("typical_distance_sample: pairs must be >= 1");
    if (g.n < 2)
        throw std::invalid_argument("typical_distance_sample: need >= 2 vertices");

    DistanceSummary out;
    out.pairs = pairs;
    out.distances.reserve(pairs);
    for (std::size_t k = 0; k < pairs; ++k) {
        const int u = static_cast<int>(rng.uniform_below(g.n));
        int v = static_cast<int>(rng.uniform_below(g.n - 1));
        if (v >= u) ++v;
        const auto dist = bfs_distances(g, u);
        if (dist[v] < 0)
            throw std::runtime_error(
                "typical_distance_sample: no path from vertex " +
                std::to_string(u) + " to vertex " + std::to_string(v));
        out.distances.push_back(dist[v]);
    }
    std::vector<double> xs(out.distances.begin(), out.distances.end());
    out.mean = summarize(xs).mean;
    out.median = quantile(xs, 0.5);
    out.min = *std::min_element(out.distances.begin(), out.distances.end());
    out.max = *std::max_element(out.distances.begin(), out.distances.end());
    return out;
}

Ball ball_extract(const MultiGraph& g, int v, std::int64_t radius) {
    if (v < 0 || v >= g.n)
        throw std::invalid_argument("ball_extract: vertex out of range");
    if (radius < 0)
        throw std::invalid_argument("ball_extract: radius must be >= 0");

    Ball ball;
    std::vector<std::int32_t> local(g.n, -1); // original -> ball index
    ball.vertex_ids.push_back(v);
    ball.distance.push_back(0);
    local[v] = 0;
    for (std::size_t head = 0; head < ball.vertex_ids.size(); ++head) {
        const int u = ball.vertex_ids[head];
        if (ball.distance[head] == radius) break; // BFS order: all deeper too
        const auto nb = g.neighbors(u);
        for (std::size_t k = 0; k < nb.count; ++k) {
            const int w = nb.vtx_begin[k];
            if (local[w] < 0) {
                local[w] = static_cast<std::int32_t>(ball.vertex_ids.size());
                ball.vertex_ids.push_back(w);
                ball.distance.push_back(ball.distance[head] + 1);
            }
        }
    }

    std::vector<MultiGraph::Edge> edges;
    for (std::size_t lu = 0; lu < ball.vertex_ids.size(); ++lu) {
        const int u = ball.vertex_ids[lu];
        const auto nb = g.neighbors(u);
        for (std::size_t k = 0; k < nb.count; ++k) {
            const int w = nb.vtx_begin[k];
            if (local[w] >= 0 && u < w)
                edges.push_back({static_cast<std::int32_t>(lu), local[w],
                                 nb.mult_begin[k]});
        }
    }
    ball.graph = MultiGraph::from_edges(
        static_cast<int>(ball.vertex_ids.size()), std::move(edges));
    ball.center = 0;
    return ball;
}

std::int64_t ball_size(const MultiGraph& g, int v, std::int64_t radius) {
    if (v < 0 || v >= g.n)
        throw std::invalid_argument("ball_size: vertex out of range");
    if (radius < 0) throw std::invalid_argument("ball_size: radius must be >= 0");
    std::vector<std::int32_t> dist(g.n, -1);
    std::vector<std::int32_t> queue;
    dist[v] = 0;
    queue.push_back(v);
    std::int64_t count = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int u = queue[head];
        if (dist[u] == radius) break;
        const auto nb = g.neighbors(u);
        for (std::size_t k = 0; k < nb.count; ++k) {
            const int w = nb.vtx_begin[k];
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
                ++count;
            }
        }
    }
    return count;
}

std::int64_t tree_ball_size(const PointTree& t, std::int64_t radius) {
    if (radius < 0)
        throw std::invalid_argument("tree_ball_size: radius must be >= 0");
    std::int64_t count = 0;
    for (const auto& node : t.nodes)
        if (node.depth <= radius) ++count;
    return count;
}

LocalLimitReport local_limit_compare(const std::vector<MultiGraph>& graphs,
                                     const std::vector<PointTree>& trees,
                                     std::int64_t radius,
                                     std::size_t roots_per_graph,
                                     RandomStream& rng) {
    if (graphs.empty() || trees.empty())
        throw std::invalid_argument("local_limit_compare: empty sample");
    if (radius < 0 || radius > 2)
        throw std::invalid_argument("local_limit_compare: radius must be in [0, 2]");
    if (roots_per_graph < 1)
        throw std::invalid_argument("local_limit_compare: roots_per_graph must be >= 1");
    for (const auto& t : trees)
        if (t.depth < radius)
            throw std::invalid_argument(
                "local_limit_compare: tree sampled shallower than radius");

    std::vector<std::int64_t> graph_degrees;
    std::vector<double> graph_balls;
    for (const auto& g : graphs) {
        for (std::size_t k = 0; k < roots_per_graph; ++k) {
            const int u = static_cast<int>(rng.uniform_below(g.n));
            graph_degrees.push_back(g.degree[u]);
            graph_balls.push_back(static_cast<double>(ball_size(g, u, radius)));
        }
    }

    std::vector<std::int64_t> tree_degrees;
    std::vector<double> tree_balls;
    for (const auto& t : trees) {
        tree_degrees.push_back(t.child_count(0));
        tree_balls.push_back(static_cast<double>(tree_ball_size(t, radius)));
    }

    const std::int64_t max_deg = std::max(
        *std::max_element(graph_degrees.begin(), graph_degrees.end()),
        *std::max_element(tree_degrees.begin(), tree_degrees.end()));
    std::vector<std::int64_t> gh(max_deg + 1, 0), th(max_deg + 1, 0);
    for (auto d : graph_degrees) ++gh[d];
    for (auto d : tree_degrees) ++th[d];

    LocalLimitReport report;
    report.radius = radius;
    report.graph_samples = graph_degrees.size();
    report.tree_samples = tree_degrees.size();
    report.root_degree_chi2 = chi2_two_sample(gh, th);
    report.ball_size_ks = ks_two_sample(graph_balls, tree_balls);
    return report;
}

} // namespace pacp
