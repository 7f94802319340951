#include "pacp/graphical.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pacp {

EventTimeline graphical_window(const MultiGraph& g, double lambda, double T,
                               RandomStream& rng, double max_expected_events) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("graphical_window: lambda must be > 0");
    if (!(T >= 0.0) || !std::isfinite(T))
        throw std::invalid_argument("graphical_window: T must be finite and >= 0");
    const double mult_total = static_cast<double>(g.total_multiplicity());
    const double expected = g.n * T + 2.0 * lambda * mult_total * T;
    if (expected > max_expected_events)
        throw std::runtime_error(
            "graphical_window: expected event count " + std::to_string(expected) +
            " exceeds limit " + std::to_string(max_expected_events));

    EventTimeline tl;
    tl.T = T;
    if (T == 0.0) return tl;

    for (int v = 0; v < g.n; ++v) {
        const std::int64_t k = rng.poisson(T);
        for (std::int64_t i = 0; i < k; ++i)
            tl.events.push_back({rng.uniform01() * T, v, -1});
        tl.mark_count += k;
    }
    for (const auto& e : g.edges) {
        // one Poisson stream per direction
        for (int dir = 0; dir < 2; ++dir) {
            const std::int32_t from = dir == 0 ? e.u : e.v;
            const std::int32_t to = dir == 0 ? e.v : e.u;
            const std::int64_t k = rng.poisson(lambda * e.mult * T);
            for (std::int64_t i = 0; i < k; ++i)
                tl.events.push_back({rng.uniform01() * T, from, to});
            tl.arrow_count += k;
        }
    }
    std::sort(tl.events.begin(), tl.events.end(),
              [](const EventTimeline::Event& x, const EventTimeline::Event& y) {
                  return x.t < y.t;
              });
    return tl;
}

std::pair<std::int64_t, std::int64_t> slab_counts(const EventTimeline& tl,
                                                  const MultiGraph& g) {
    const int n = g.n;
    std::vector<std::uint8_t> inf(n, 1);

    // forward sweep from full occupancy: b = |xi^full_T|
    for (const auto& ev : tl.events) {
        if (ev.b < 0) {
            inf[ev.a] = 0;
        } else if (inf[ev.a]) {
            inf[ev.b] = 1;
        }
    }
    std::int64_t b = 0;
    for (auto f : inf) b += f;

    // backward sweep on the reversed window (arrows flipped): the vertices
    // still infected at reversed time T are exactly those whose single-seed
    // process survives to T in the original window
    std::fill(inf.begin(), inf.end(), 1);
    for (auto it = tl.events.rbegin(); it != tl.events.rend(); ++it) {
        if (it->b < 0) {
            inf[it->a] = 0;
        } else if (inf[it->b]) {
            inf[it->a] = 1;
        }
    }
    std::int64_t a = 0;
    for (auto f : inf) a += f;
    return {a, b};
}

} // namespace pacp
