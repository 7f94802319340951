#include "pacp/contact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pacp/fenwick.hpp"

namespace pacp {

namespace {

constexpr std::uint64_t kSelfCheckStride = 10'000;

struct EngineState {
    const MultiGraph* g = nullptr;
    std::vector<std::uint8_t> infected;
    std::vector<std::int32_t> pos_in_list; // -1 when healthy
    std::vector<std::int32_t> infected_list;
    std::vector<std::int64_t> pressure; // maintained for every vertex
    FenwickTree tree;                   // weight = pressure for healthy, else 0
    std::int64_t watch_count = 0;

    void init(const MultiGraph& graph, const std::vector<int>& seeds, int watch) {
        g = &graph;
        const int n = graph.n;
        infected.assign(n, 0);
        pos_in_list.assign(n, -1);
        infected_list.clear();
        pressure.assign(n, 0);
        tree.reset(n);
        for (int v : seeds) {
            if (v < 0 || v >= n)
                throw std::invalid_argument("gillespie_run: seed vertex " +
                                            std::to_string(v) + " out of range");
            if (infected[v]) continue;
            infected[v] = 1;
            pos_in_list[v] = static_cast<std::int32_t>(infected_list.size());
            infected_list.push_back(v);
        }
        for (int v = 0; v < n; ++v) {
            std::int64_t p = 0;
            const auto nb = graph.neighbors(v);
            for (std::size_t i = 0; i < nb.count; ++i)
                if (infected[nb.vtx_begin[i]]) p += nb.mult_begin[i];
            pressure[v] = p;
            if (!infected[v] && p > 0) tree.add(v, p);
        }
        watch_count = 0;
        if (watch >= 0) {
            const auto nb = graph.neighbors(watch);
            for (std::size_t i = 0; i < nb.count; ++i)
                if (infected[nb.vtx_begin[i]]) watch_count += nb.mult_begin[i];
        }
    }

    void infect(int v, int watch) {
        infected[v] = 1;
        pos_in_list[v] = static_cast<std::int32_t>(infected_list.size());
        infected_list.push_back(v);
        if (pressure[v] > 0) tree.add(v, -pressure[v]);
        const auto nb = g->neighbors(v);
        for (std::size_t i = 0; i < nb.count; ++i) {
            const int w = nb.vtx_begin[i];
            const std::int64_t mu = nb.mult_begin[i];
            pressure[w] += mu;
            if (!infected[w]) tree.add(w, mu);
            if (w == watch) watch_count += mu;
        }
    }

    void recover(int v, int watch) {
        infected[v] = 0;
        const std::int32_t pos = pos_in_list[v];
        const std::int32_t last = infected_list.back();
        infected_list[pos] = last;
        pos_in_list[last] = pos;
        infected_list.pop_back();
        pos_in_list[v] = -1;
        if (pressure[v] > 0) tree.add(v, pressure[v]);
        const auto nb = g->neighbors(v);
        for (std::size_t i = 0; i < nb.count; ++i) {
            const int w = nb.vtx_begin[i];
            const std::int64_t mu = nb.mult_begin[i];
            pressure[w] -= mu;
            if (!infected[w]) tree.add(w, -mu);
            if (w == watch) watch_count -= mu;
        }
    }

    // full recomputation; throws on any disagreement with incremental state
    void verify() const {
        const int n = g->n;
        std::int64_t fenwick_total = 0;
        for (int v = 0; v < n; ++v) {
            std::int64_t p = 0;
            const auto nb = g->neighbors(v);
            for (std::size_t i = 0; i < nb.count; ++i)
                if (infected[nb.vtx_begin[i]]) p += nb.mult_begin[i];
            if (p != pressure[v])
                throw std::logic_error("contact engine: pressure drift at vertex " +
                                       std::to_string(v));
            const std::int64_t want = infected[v] ? 0 : p;
            const std::int64_t got = tree.prefix(v) - (v ? tree.prefix(v - 1) : 0);
            if (want != got)
                throw std::logic_error("contact engine: fenwick drift at vertex " +
                                       std::to_string(v));
            fenwick_total += want;
        }
        if (fenwick_total != tree.total())
            throw std::logic_error("contact engine: fenwick total drift");
    }
};

std::vector<int> seeds_of(const InitialCondition& init, int n) {
    switch (init.kind) {
        case InitialCondition::Kind::Full: {
            std::vector<int> all(n);
            for (int i = 0; i < n; ++i) all[i] = i;
            return all;
        }
        case InitialCondition::Kind::Single:
            return {init.vertex};
        case InitialCondition::Kind::Set:
            return init.vertices;
    }
    return {};
}

} // namespace

Outcome gillespie_run(const MultiGraph& g, const InitialCondition& init,
                      const ContactConfig& cfg, RandomStream& rng) {
    if (g.n < 1) throw std::invalid_argument("gillespie_run: empty graph");
    if (!(cfg.lambda >= 0.0))
        throw std::invalid_argument("gillespie_run: lambda must be >= 0");
    if (!(cfg.t_max >= 0.0)) throw std::invalid_argument("gillespie_run: t_max < 0");
    for (std::size_t i = 0; i < cfg.observe_times.size(); ++i) {
        const double t = cfg.observe_times[i];
        if (t < 0.0 || t > cfg.t_max)
            throw std::invalid_argument("gillespie_run: observe time outside [0, t_max]");
        if (i > 0 && t < cfg.observe_times[i - 1])
            throw std::invalid_argument("gillespie_run: observe_times not sorted");
    }
    const std::vector<int> seeds = seeds_of(init, g.n);
    if (seeds.empty())
        throw std::invalid_argument("gillespie_run: initial set is empty");
    std::vector<std::uint8_t> stop_mask;
    if (!cfg.stop_set.empty()) {
        stop_mask.assign(g.n, 0);
        for (int v : cfg.stop_set) {
            if (v < 0 || v >= g.n)
                throw std::invalid_argument("gillespie_run: stop vertex out of range");
            stop_mask[v] = 1;
        }
    }

    EngineState st;
    st.init(g, seeds, cfg.watch_vertex);

    Outcome out;
    double t = 0.0;
    std::size_t next_obs = 0;
    auto record_until = [&](double up_to) {
        while (next_obs < cfg.observe_times.size() &&
               cfg.observe_times[next_obs] <= up_to) {
            out.observations.emplace_back(cfg.observe_times[next_obs],
                                          static_cast<std::int64_t>(st.infected_list.size()));
            ++next_obs;
        }
    };

    // the initial state may already satisfy a stop condition
    if (!stop_mask.empty())
        for (int v : seeds)
            if (stop_mask[v]) out.stop_hit = true;
    if (cfg.watch_vertex >= 0 && st.watch_count >= cfg.watch_threshold &&
        cfg.watch_threshold > 0)
        out.watch_hit = true;

    while (!out.stop_hit && !out.watch_hit) {
        if (st.infected_list.empty()) {
            out.extinct = true;
            out.extinction_time = t;
            record_until(cfg.t_max); // remaining observations see count 0
            break;
        }
        const double rec_rate = static_cast<double>(st.infected_list.size());
        const double inf_rate = cfg.lambda * static_cast<double>(st.tree.total());
        const double total = rec_rate + inf_rate;
        const double t_next = t + rng.exponential(total);
        record_until(std::min(t_next, cfg.t_max));
        if (t_next >= cfg.t_max) {
            t = cfg.t_max;
            break;
        }
        t = t_next;
        if (out.events_used >= cfg.event_cap) {
            out.capped = true;
            break;
        }
        ++out.events_used;

        const bool recovery = rng.uniform01() * total < rec_rate;
        if (recovery) {
            const int v = st.infected_list[rng.uniform_below(st.infected_list.size())];
            st.recover(v, cfg.watch_vertex);
        } else {
            const std::int64_t r =
                static_cast<std::int64_t>(rng.uniform_below(
                    static_cast<std::uint64_t>(st.tree.total())));
            const int v = static_cast<int>(st.tree.find(r));
            st.infect(v, cfg.watch_vertex);
            if (!stop_mask.empty() && stop_mask[v]) out.stop_hit = true;
        }
        if (cfg.watch_vertex >= 0 && cfg.watch_threshold > 0 &&
            st.watch_count >= cfg.watch_threshold)
            out.watch_hit = true;
        if (cfg.self_check && out.events_used % kSelfCheckStride == 0) st.verify();
    }

    record_until(t);
    out.final_time = t;
    out.final_infected = static_cast<std::int64_t>(st.infected_list.size());
    return out;
}

namespace {

bool threshold_check(const std::vector<std::uint8_t>& infected, const MultiGraph& g,
                     int v, double lambda, double denom_factor) {
    if (v < 0 || v >= g.n)
        throw std::invalid_argument("is_lit/is_hot: vertex out of range");
    const std::int64_t deg = g.degree[v];
    if (deg == 0) return false; // convention: isolated vertices are never lit
    std::int64_t infected_deg = 0;
    const auto nb = g.neighbors(v);
    for (std::size_t i = 0; i < nb.count; ++i)
        if (infected[nb.vtx_begin[i]]) infected_deg += nb.mult_begin[i];
    const double threshold = lambda / denom_factor;
    return static_cast<double>(infected_deg) >=
           threshold * static_cast<double>(deg);
}

} // namespace

bool is_lit(const std::vector<std::uint8_t>& infected, const MultiGraph& g,
            int v, double lambda) {
    return threshold_check(infected, g, v, lambda, 16.0 * std::exp(1.0));
}

bool is_hot(const std::vector<std::uint8_t>& infected, const MultiGraph& g,
            int v, double lambda) {
    return threshold_check(infected, g, v, lambda, 8.0 * std::exp(1.0));
}

StarTrialResult star_survival_trial(int leaf_count, double lambda,
                                    std::uint64_t event_cap, RandomStream& rng) {
    if (leaf_count < 0)
        throw std::invalid_argument("star_survival_trial: leaf_count must be >= 0");
    const MultiGraph g = leaf_count == 0 ? make_single_vertex() : make_star(leaf_count);
    ContactConfig cfg;
    cfg.lambda = lambda;
    cfg.event_cap = event_cap;
    const Outcome o = gillespie_run(g, InitialCondition::single(0), cfg, rng);
    StarTrialResult r;
    r.capped = o.capped;
    r.events = o.events_used;
    r.time = o.extinct ? *o.extinction_time : o.final_time;
    return r;
}

MultiGraph tree_to_graph(const PointTree& tree, int max_depth) {
    std::vector<MultiGraph::Edge> edges;
    std::int64_t count = 0;
    for (std::int64_t v = 1; v < tree.size(); ++v)
        if (tree.nodes[v].depth < tree.nodes[v - 1].depth)
            throw std::invalid_argument("tree_to_graph: nodes not in BFS order");
    for (std::int64_t v = 0; v < tree.size(); ++v) {
        if (max_depth >= 0 && tree.nodes[v].depth > max_depth) break; // BFS order
        count = v + 1;
        if (tree.nodes[v].parent >= 0)
            edges.push_back({tree.nodes[v].parent, static_cast<std::int32_t>(v), 1});
    }
    if (count == 0) throw std::invalid_argument("tree_to_graph: empty tree");
    return MultiGraph::from_edges(static_cast<int>(count), std::move(edges));
}

EscapeResult escape_trial(const PointTree& tree, int radius, double lambda,
                          std::uint64_t event_cap, RandomStream& rng) {
    if (radius < 0) throw std::invalid_argument("escape_trial: radius must be >= 0");
    // the frontier (depth R+1) must have been sampled
    if (tree.depth < radius + 1)
        throw std::invalid_argument(
            "escape_trial: tree sampled to depth " + std::to_string(tree.depth) +
            ", need radius + 1 = " + std::to_string(radius + 1));
    const MultiGraph g = tree_to_graph(tree, radius + 1);
    ContactConfig cfg;
    cfg.lambda = lambda;
    cfg.event_cap = event_cap;
    for (int v = 0; v < g.n; ++v)
        if (tree.nodes[v].depth == radius + 1) cfg.stop_set.push_back(v);
    // a tree truncated inside the ball may legitimately have no frontier:
    // then escape is impossible by construction
    const Outcome o = gillespie_run(g, InitialCondition::single(0), cfg, rng);
    EscapeResult r;
    r.escaped = o.stop_hit;
    r.indeterminate = o.capped;
    r.events = o.events_used;
    return r;
}

} // namespace pacp
