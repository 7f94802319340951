#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "pacp/multigraph.hpp"
#include "pacp/polya_point.hpp"
#include "pacp/rng.hpp"

namespace pacp {

struct InitialCondition {
    enum class Kind { Full, Single, Set };
    Kind kind = Kind::Full;
    int vertex = 0;
    std::vector<int> vertices;

    static InitialCondition full() { return {}; }
    static InitialCondition single(int v) {
        InitialCondition ic;
        ic.kind = Kind::Single;
        ic.vertex = v;
        return ic;
    }
    static InitialCondition set(std::vector<int> vs) {
        InitialCondition ic;
        ic.kind = Kind::Set;
        ic.vertices = std::move(vs);
        return ic;
    }
};

struct ContactConfig {
    double lambda = 1.0; // >= 0 (0 admitted for pure-death oracles)
    double t_max = std::numeric_limits<double>::infinity();
    std::uint64_t event_cap = 100'000'000;
    std::vector<double> observe_times; // sorted, within [0, t_max]
    // stop early when a vertex of this set becomes infected (escape trials)
    std::vector<int> stop_set;
    // stop early when `watch_vertex` has >= watch_threshold infected
    // neighbors counted with multiplicity (lit-transfer experiments)
    int watch_vertex = -1;
    std::int64_t watch_threshold = 0;
    // recompute all rates from scratch every 10^4 events and compare (tests)
    bool self_check = false;
};

struct Outcome {
    bool extinct = false;
    std::optional<double> extinction_time;
    std::vector<std::pair<double, std::int64_t>> observations;
    std::uint64_t events_used = 0;
    bool capped = false;
    bool stop_hit = false;   // a stop_set vertex got infected
    bool watch_hit = false;  // watch threshold reached
    double final_time = 0.0;
    std::int64_t final_infected = 0;
};

Outcome gillespie_run(const MultiGraph& g, const InitialCondition& init,
                      const ContactConfig& cfg, RandomStream& rng);

// Infected-neighbor proportion thresholds (with multiplicity). Isolated
// vertices are never lit/hot.
bool is_lit(const std::vector<std::uint8_t>& infected, const MultiGraph& g,
            int v, double lambda);
bool is_hot(const std::vector<std::uint8_t>& infected, const MultiGraph& g,
            int v, double lambda);

struct StarTrialResult {
    double time = 0.0; // extinction time, or the cap time if capped
    bool capped = false;
    std::uint64_t events = 0;
};

// Contact process on a star with `leaf_count` leaves, center initially
// infected; runs to extinction or the event cap.
StarTrialResult star_survival_trial(int leaf_count, double lambda,
                                    std::uint64_t event_cap, RandomStream& rng);

struct EscapeResult {
    bool escaped = false;
    bool indeterminate = false; // event cap hit before either outcome
    std::uint64_t events = 0;
};

// Root-seeded contact process on a tree sampled to depth >= R+1: true at the
// first infection of a depth-(R+1) vertex, false at extinction inside B(o,R).
EscapeResult escape_trial(const PointTree& tree, int radius, double lambda,
                          std::uint64_t event_cap, RandomStream& rng);

// Tree as a multigraph (unit multiplicities), vertex ids = node indices.
MultiGraph tree_to_graph(const PointTree& tree, int max_depth = -1);

} // namespace pacp
