#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pacp/multigraph.hpp"
#include "pacp/rng.hpp"

namespace pacp {

// Space-time window [0, T] over a graph: recovery marks (Poisson rate 1 per
// vertex) and directed infection arrows (Poisson rate lambda * multiplicity
// per ordered adjacent pair), merged into one chronological stream.
struct EventTimeline {
    struct Event {
        double t = 0.0;
        std::int32_t a = 0;  // mark vertex, or arrow source
        std::int32_t b = -1; // -1 for a recovery mark, else arrow target
    };

    double T = 0.0;
    std::vector<Event> events; // sorted by time
    std::int64_t mark_count = 0;
    std::int64_t arrow_count = 0;
};

// Throws if the expected event count n*T + 2*lambda*mult_total*T exceeds
// max_expected_events.
EventTimeline graphical_window(const MultiGraph& g, double lambda, double T,
                               RandomStream& rng,
                               double max_expected_events = 5e7);

// (a_count, b_count): a = #{v : xi^v survives to T} via the time-reversed
// sweep; b = |xi^full_T| via the forward sweep. Equal in law by self-duality.
std::pair<std::int64_t, std::int64_t> slab_counts(const EventTimeline& tl,
                                                  const MultiGraph& g);

} // namespace pacp
