#include "pacp/graphgen.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pacp {

MultiGraph build_polya_graph(const PolyaWeights& weights, RandomStream& rng) {
    const int n = weights.n;
    const int m = weights.consts.m;
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
    pairs.reserve(static_cast<std::size_t>(m) * (n - 1));
    // upper_bound over s_prefix[1..n] finds the first S_j > U, i.e. the j
    // with U in I_j = [S_{j-1}, S_j)
    const auto begin = weights.s_prefix.begin() + 1;
    for (int k = 2; k <= n; ++k) {
        const double sk1 = weights.s_prefix[k - 1];
        const auto end = begin + (k - 1); // candidate intervals I_1..I_{k-1}
        for (int i = 0; i < m; ++i) {
            const double u = rng.uniform01() * sk1;
            auto it = std::upper_bound(begin, end, u);
            int j = static_cast<int>(it - begin) + 1;
            if (j > k - 1) j = k - 1; // guard: u == S_{k-1} cannot select I_k
            pairs.emplace_back(j - 1, k - 1);
        }
    }
    return MultiGraph::from_endpoints(n, std::move(pairs));
}

MultiGraph build_polya_graph(int n, const Constants& c, RandomStream& rng,
                             PolyaWeights* weights_out) {
    PolyaWeights w = sample_weights(n, c, rng);
    MultiGraph g = build_polya_graph(w, rng);
    if (weights_out) *weights_out = std::move(w);
    return g;
}

namespace detail {

MultiGraph sequential_graph_any_alpha(int n, int m, double alpha, RandomStream& rng) {
    if (n < 2)
        throw std::invalid_argument("build_sequential_graph: n must be >= 2");
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
    pairs.reserve(static_cast<std::size_t>(m) * (n - 1));

    // Endpoint-occurrence list over vertices v_1..v_{n-1}: vertex k appears
    // deg^{(i)}(v_k) times, including endpoints already placed for the
    // current vertex. Uniform selection from it is degree-proportional
    // sampling with normalizer Z^{(i)} = 2m(n-2) + i - 1.
    std::vector<std::int32_t> occurrences;
    occurrences.reserve(static_cast<std::size_t>(2) * m * (n - 1));

    // base case G_2: m parallel edges v_1 - v_2
    for (int i = 0; i < m; ++i) {
        pairs.emplace_back(0, 1);
        occurrences.push_back(0);
        occurrences.push_back(1);
    }

    for (int v = 3; v <= n; ++v) {
        const double nn = v; // graph size once this vertex is added
        for (int i = 1; i <= m; ++i) {
            double a_ni;
            if (i == 1) {
                a_ni = alpha;
            } else {
                a_ni = alpha * 2.0 * m * (nn - 1.0) /
                       (2.0 * m * (nn - 2.0) + 2.0 * m * alpha +
                        (1.0 - alpha) * (i - 1.0));
            }
            std::int32_t w;
            if (rng.uniform01() < a_ni) {
                w = static_cast<std::int32_t>(rng.uniform_below(v - 1));
            } else {
                w = occurrences[rng.uniform_below(occurrences.size())];
            }
            pairs.emplace_back(w, v - 1);
            occurrences.push_back(w); // deg^{(i+1)} sees this endpoint
        }
        // v itself becomes eligible only after all its endpoints are placed
        for (int i = 0; i < m; ++i)
            occurrences.push_back(static_cast<std::int32_t>(v - 1));
    }
    return MultiGraph::from_endpoints(n, std::move(pairs));
}

} // namespace detail

MultiGraph build_sequential_graph(int n, const Constants& c, RandomStream& rng) {
    return detail::sequential_graph_any_alpha(n, c.m, c.alpha, rng);
}

} // namespace pacp
