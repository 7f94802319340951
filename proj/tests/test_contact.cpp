#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pacp/contact.hpp"
#include "pacp/multigraph.hpp"
#include "pacp/rng.hpp"
#include "pacp/stats.hpp"

using namespace pacp;

namespace {

std::vector<double> extinction_times(const MultiGraph& g, const InitialCondition& init,
                                     double lambda, int reps, RandomStream& rng) {
    ContactConfig cfg;
    cfg.lambda = lambda;
    std::vector<double> out;
    out.reserve(reps);
    for (int i = 0; i < reps; ++i) {
        const Outcome o = gillespie_run(g, init, cfg, rng);
        REQUIRE(o.extinct);
        out.push_back(*o.extinction_time);
    }
    return out;
}

} // namespace

TEST_CASE("single vertex dies at rate one") {
    const MultiGraph g = make_single_vertex();
    RandomStream rng(11);
    const auto times = extinction_times(g, InitialCondition::single(0), 1.0, 20000, rng);
    const Summary s = summarize(times);
    CHECK(std::abs(s.mean - 1.0) < 4.0 * s.se);
    // median of Exp(1) is ln 2
    CHECK(std::abs(quantile(times, 0.5) - std::log(2.0)) < 0.03);

    // survival to a horizon is e^{-t}
    ContactConfig cfg;
    cfg.lambda = 1.0;
    cfg.t_max = 1.5;
    int survived = 0;
    const int reps = 20000;
    for (int i = 0; i < reps; ++i) {
        const Outcome o = gillespie_run(g, InitialCondition::single(0), cfg, rng);
        if (!o.extinct) {
            ++survived;
            CHECK(o.final_time == cfg.t_max);
        } else {
            CHECK(*o.extinction_time <= cfg.t_max);
        }
    }
    const double p = std::exp(-1.5);
    const double se = std::sqrt(p * (1 - p) / reps);
    CHECK(std::abs(survived / static_cast<double>(reps) - p) < 4.0 * se);
}

TEST_CASE("edge graph mean extinction time from full occupancy") {
    // exact chain: E[T] = (3 + lambda) / 2
    const MultiGraph g = make_edge_graph();
    RandomStream rng(13);
    const auto t1 = extinction_times(g, InitialCondition::full(), 1.0, 20000, rng);
    const Summary s1 = summarize(t1);
    CHECK(std::abs(s1.mean - 2.0) < 4.0 * s1.se);

    const auto t0 = extinction_times(g, InitialCondition::full(), 0.0, 20000, rng);
    const Summary s0 = summarize(t0);
    CHECK(std::abs(s0.mean - 1.5) < 4.0 * s0.se);
}

TEST_CASE("a doubled edge behaves like a doubled rate") {
    // multiplicity 2 at lambda = 0.5 has the edge chain at lambda = 1
    const MultiGraph g = make_multi_edge_pair(2);
    RandomStream rng(17);
    const auto times = extinction_times(g, InitialCondition::full(), 0.5, 20000, rng);
    const Summary s = summarize(times);
    CHECK(std::abs(s.mean - 2.0) < 4.0 * s.se);
}

TEST_CASE("pure death on a fully infected star") {
    // lambda = 0: extinction is the max of 21 unit exponentials
    const MultiGraph g = make_star(20);
    RandomStream rng(19);
    const auto times = extinction_times(g, InitialCondition::full(), 0.0, 20000, rng);
    const Summary s = summarize(times);
    double h21 = 0.0;
    for (int k = 1; k <= 21; ++k) h21 += 1.0 / k;
    CHECK(std::abs(s.mean - h21) < 4.0 * s.se);

    int survived = 0;
    ContactConfig cfg;
    cfg.lambda = 0.0;
    cfg.t_max = 2.0;
    const int reps = 20000;
    for (int i = 0; i < reps; ++i)
        if (!gillespie_run(g, InitialCondition::full(), cfg, rng).extinct) ++survived;
    const double p = 1.0 - std::pow(1.0 - std::exp(-2.0), 21);
    const double se = std::sqrt(p * (1 - p) / reps);
    CHECK(std::abs(survived / static_cast<double>(reps) - p) < 4.0 * se);
}

TEST_CASE("observations are recorded at every requested time") {
    const MultiGraph g = make_single_vertex();
    ContactConfig cfg;
    cfg.lambda = 1.0;
    cfg.t_max = 3.0;
    cfg.observe_times = {0.0, 0.5, 1.0, 2.0, 3.0};
    RandomStream rng(23);
    for (int i = 0; i < 500; ++i) {
        const Outcome o = gillespie_run(g, InitialCondition::single(0), cfg, rng);
        REQUIRE(o.observations.size() == cfg.observe_times.size());
        CHECK(o.observations.front().first == 0.0);
        CHECK(o.observations.front().second == 1);
        std::int64_t prev = 1;
        for (const auto& [t, c] : o.observations) {
            CHECK(c <= prev); // a lone vertex can only lose infection
            CHECK(c >= 0);
            prev = c;
            if (o.extinct && t > *o.extinction_time) CHECK(c == 0);
        }
    }
}

TEST_CASE("observe time validation") {
    const MultiGraph g = make_single_vertex();
    RandomStream rng(1);
    ContactConfig cfg;
    cfg.t_max = 2.0;
    cfg.observe_times = {1.0, 0.5};
    CHECK_THROWS_AS(gillespie_run(g, InitialCondition::single(0), cfg, rng),
                    std::invalid_argument);
    cfg.observe_times = {1.0, 3.0};
    CHECK_THROWS_AS(gillespie_run(g, InitialCondition::single(0), cfg, rng),
                    std::invalid_argument);
    cfg.observe_times = {-0.5};
    CHECK_THROWS_AS(gillespie_run(g, InitialCondition::single(0), cfg, rng),
                    std::invalid_argument);
}

TEST_CASE("config and initial condition validation") {
    const MultiGraph g = make_path(3);
    RandomStream rng(2);
    ContactConfig cfg;
    cfg.lambda = -0.5;
    CHECK_THROWS_AS(gillespie_run(g, InitialCondition::full(), cfg, rng),
                    std::invalid_argument);
    cfg.lambda = 1.0;
    cfg.t_max = -1.0;
    CHECK_THROWS_AS(gillespie_run(g, InitialCondition::full(), cfg, rng),
                    std::invalid_argument);
    cfg.t_max = 1.0;
    CHECK_THROWS_AS(gillespie_run(g, InitialCondition::set({}), cfg, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(gillespie_run(g, InitialCondition::single(3), cfg, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(gillespie_run(g, InitialCondition::set({0, -1}), cfg, rng),
                    std::invalid_argument);
    ContactConfig bad_stop;
    bad_stop.stop_set = {7};
    CHECK_THROWS_AS(gillespie_run(g, InitialCondition::single(0), bad_stop, rng),
                    std::invalid_argument);
}

TEST_CASE("stop set fires on first infection of a watched vertex") {
    const MultiGraph g = make_path(3);
    RandomStream rng(29);
    ContactConfig cfg;
    cfg.lambda = 5.0;
    cfg.stop_set = {2};
    int stopped = 0;
    const int reps = 2000;
    for (int i = 0; i < reps; ++i) {
        const Outcome o = gillespie_run(g, InitialCondition::single(0), cfg, rng);
        CHECK(o.stop_hit != o.extinct); // exactly one resolution
        if (o.stop_hit) {
            ++stopped;
            CHECK(o.final_infected >= 1);
        }
    }
    CHECK(stopped > reps / 2);

    // lambda = 0 can never reach the stop vertex
    cfg.lambda = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Outcome o = gillespie_run(g, InitialCondition::single(0), cfg, rng);
        CHECK(o.extinct);
        CHECK(!o.stop_hit);
    }

    // a seed inside the stop set resolves immediately
    cfg.lambda = 1.0;
    cfg.stop_set = {0};
    const Outcome o = gillespie_run(g, InitialCondition::single(0), cfg, rng);
    CHECK(o.stop_hit);
    CHECK(o.events_used == 0);
    CHECK(o.final_time == 0.0);
}

TEST_CASE("watch vertex counts infected neighbors with multiplicity") {
    const MultiGraph g = make_star(5);
    RandomStream rng(31);
    ContactConfig cfg;
    cfg.lambda = 0.0;
    cfg.watch_vertex = 0;
    cfg.watch_threshold = 2;
    // two infected leaves already meet the threshold
    const Outcome o = gillespie_run(g, InitialCondition::set({1, 2}), cfg, rng);
    CHECK(o.watch_hit);
    CHECK(o.final_time == 0.0);

    // one leaf never can at lambda = 0
    const Outcome o1 = gillespie_run(g, InitialCondition::single(1), cfg, rng);
    CHECK(!o1.watch_hit);
    CHECK(o1.extinct);

    // multiplicity counts: a double edge from one infected neighbor
    const MultiGraph pair2 = make_multi_edge_pair(2);
    ContactConfig cfg2;
    cfg2.lambda = 0.0;
    cfg2.watch_vertex = 1;
    cfg2.watch_threshold = 2;
    const Outcome o2 = gillespie_run(pair2, InitialCondition::single(0), cfg2, rng);
    CHECK(o2.watch_hit);

    // threshold 0 disables the watch entirely
    ContactConfig cfg3;
    cfg3.lambda = 0.0;
    cfg3.watch_vertex = 0;
    cfg3.watch_threshold = 0;
    const Outcome o3 = gillespie_run(g, InitialCondition::full(), cfg3, rng);
    CHECK(!o3.watch_hit);
    CHECK(o3.extinct);
}

TEST_CASE("event cap reports a capped run") {
    const MultiGraph g = make_complete(6);
    RandomStream rng(37);
    ContactConfig cfg;
    cfg.lambda = 6.0; // strongly supercritical: the cap will be hit
    cfg.event_cap = 50000;
    cfg.self_check = true; // exercises the full-recompute audit every 10^4 events
    const Outcome o = gillespie_run(g, InitialCondition::full(), cfg, rng);
    CHECK(o.capped);
    CHECK(o.events_used == 50000);
    CHECK(o.final_infected > 0);
    CHECK(!o.extinct);
}

TEST_CASE("runs are deterministic in the seed") {
    const MultiGraph g = make_star(8);
    ContactConfig cfg;
    cfg.lambda = 1.3;
    cfg.observe_times = {0.5, 1.0};
    cfg.t_max = 50.0;
    RandomStream a = RandomStream::child(99, 4);
    RandomStream b = RandomStream::child(99, 4);
    const Outcome oa = gillespie_run(g, InitialCondition::full(), cfg, a);
    const Outcome ob = gillespie_run(g, InitialCondition::full(), cfg, b);
    CHECK(oa.extinct == ob.extinct);
    CHECK(oa.events_used == ob.events_used);
    CHECK(oa.final_time == ob.final_time);
    if (oa.extinct) CHECK(*oa.extinction_time == *ob.extinction_time);
    REQUIRE(oa.observations.size() == ob.observations.size());
    for (std::size_t i = 0; i < oa.observations.size(); ++i)
        CHECK(oa.observations[i].second == ob.observations[i].second);
}

TEST_CASE("lit and hot thresholds") {
    // degree 100, three infected neighbors, lambda = 0.5:
    // lit needs 100 * 0.5/(16e) ~ 1.15, hot needs 100 * 0.5/(8e) ~ 2.30
    const MultiGraph g = make_star(100);
    std::vector<std::uint8_t> infected(g.n, 0);
    infected[1] = infected[2] = infected[3] = 1;
    CHECK(is_lit(infected, g, 0, 0.5));
    CHECK(is_hot(infected, g, 0, 0.5));

    std::vector<std::uint8_t> one(g.n, 0);
    one[1] = 1;
    CHECK(!is_lit(one, g, 0, 0.5));
    CHECK(!is_hot(one, g, 0, 0.5));

    std::vector<std::uint8_t> two(g.n, 0);
    two[1] = two[2] = 1;
    CHECK(is_lit(two, g, 0, 0.5));  // 2 >= 1.15
    CHECK(!is_hot(two, g, 0, 0.5)); // 2 <  2.30

    // the comparison is non-strict: at lambda = 8e the lit threshold on a
    // degree-2 vertex is exactly 1
    const MultiGraph p3 = make_path(3);
    std::vector<std::uint8_t> half(p3.n, 0);
    half[0] = 1;
    CHECK(is_lit(half, p3, 1, 8.0 * std::exp(1.0)));

    // isolated vertices are never lit
    const MultiGraph lone = make_single_vertex();
    std::vector<std::uint8_t> none(1, 0);
    CHECK(!is_lit(none, lone, 0, 1.0));
    CHECK(!is_hot(none, lone, 0, 1.0));
    CHECK_THROWS_AS(is_lit(none, lone, 5, 1.0), std::invalid_argument);
}

TEST_CASE("star trials") {
    RandomStream rng(41);
    // zero leaves degenerates to the single vertex: Exp(1) extinction
    std::vector<double> times;
    for (int i = 0; i < 20000; ++i)
        times.push_back(star_survival_trial(0, 2.0, 1000, rng).time);
    const Summary s = summarize(times);
    CHECK(std::abs(s.mean - 1.0) < 4.0 * s.se);

    // lambda = 0 from the center alone: median ln 2, never capped
    times.clear();
    for (int i = 0; i < 20000; ++i) {
        const StarTrialResult r = star_survival_trial(50, 0.0, 1000, rng);
        CHECK(!r.capped);
        times.push_back(r.time);
    }
    CHECK(std::abs(quantile(times, 0.5) - std::log(2.0)) < 0.03);

    CHECK_THROWS_AS(star_survival_trial(-1, 1.0, 10, rng), std::invalid_argument);
}

TEST_CASE("tree to graph conversion") {
    const Constants c = derive_constants(2, 1.0 / 3.0);
    RandomStream rng(43);
    const PointTree t = sample_ppt(c, 2, 20, rng);
    const MultiGraph g = tree_to_graph(t);
    CHECK(g.n == t.size());
    CHECK(static_cast<std::int64_t>(g.edges.size()) == t.size() - 1);
    CHECK(g.degree[0] == t.child_count(0));

    // depth-limited extraction keeps the BFS prefix
    const MultiGraph b1 = tree_to_graph(t, 1);
    CHECK(b1.n == 1 + t.child_count(0));
    CHECK(static_cast<std::int64_t>(b1.edges.size()) == b1.n - 1);
}

TEST_CASE("escape from a ball of radius zero is a single race") {
    // from the root, frontier infection (rate lambda * c) races recovery
    // (rate 1): P(escape) = lambda c / (1 + lambda c)
    const Constants c = derive_constants(2, 0.0);
    RandomStream rng(47);
    const PointTree t = sample_ppt(c, 1, 30, rng);
    const int kids = t.child_count(0);
    REQUIRE(kids >= 2);

    const double lambda = 0.7;
    const double p = lambda * kids / (1.0 + lambda * kids);
    int escaped = 0;
    const int reps = 20000;
    for (int i = 0; i < reps; ++i) {
        const EscapeResult r = escape_trial(t, 0, lambda, 100000, rng);
        CHECK(!r.indeterminate);
        if (r.escaped) ++escaped;
    }
    const double se = std::sqrt(p * (1 - p) / reps);
    CHECK(std::abs(escaped / static_cast<double>(reps) - p) < 4.0 * se);

    // lambda = 0 never escapes
    for (int i = 0; i < 100; ++i)
        CHECK(!escape_trial(t, 0, 0.0, 1000, rng).escaped);
}

TEST_CASE("escape probability grows with lambda") {
    const Constants c = derive_constants(2, 1.0 / 3.0);
    RandomStream rng(53);
    const PointTree t = sample_ppt(c, 3, 15, rng);
    const int reps = 4000;
    int lo = 0, hi = 0;
    for (int i = 0; i < reps; ++i) {
        if (escape_trial(t, 2, 0.2, 100000, rng).escaped) ++lo;
        if (escape_trial(t, 2, 2.0, 100000, rng).escaped) ++hi;
    }
    CHECK(hi > lo + 4 * static_cast<int>(std::sqrt(reps) / 2));
    CHECK_THROWS_AS(escape_trial(t, 3, 1.0, 1000, rng), std::invalid_argument);
    CHECK_THROWS_AS(escape_trial(t, -1, 1.0, 1000, rng), std::invalid_argument);
}
