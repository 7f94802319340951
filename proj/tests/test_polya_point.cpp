#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pacp/constants.hpp"
#include "pacp/polya_point.hpp"
#include "pacp/rng.hpp"
#include "pacp/stats.hpp"

using namespace pacp;

namespace {

constexpr std::int64_t kBigCap = 100000;

// marginal probability of an R-child count k at the root: the position is
// U^chi, so integrate the fixed-position pmf over u
double integrated_root_pmf(std::int64_t k, const Constants& c) {
    const double a = c.m + 2.0 * c.m * c.r;
    const auto f = [&](double u) {
        DegreeLawParams p;
        p.a = a;
        p.psi = c.psi;
        p.x = std::pow(u, c.chi);
        return degree_pmf(k, p);
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, 0.0, 1.0, 8, 1e-10);
}

} // namespace

TEST_CASE("depth-0 trees are a bare root with the right position law") {
    const Constants c = derive_constants(2, 1.0 / 3.0);
    RandomStream rng(3);
    double acc = 0.0;
    const int reps = 20000;
    for (int i = 0; i < reps; ++i) {
        const PointTree t = sample_ppt(c, 0, 100, rng);
        REQUIRE(t.size() == 1);
        CHECK(t.nodes[0].type == NodeType::Root);
        CHECK(t.nodes[0].depth == 0);
        CHECK(t.nodes[0].parent == -1);
        CHECK(t.child_count(0) == 0);
        CHECK(t.nodes[0].x > 0.0);
        CHECK(t.nodes[0].x <= 1.0);
        acc += t.nodes[0].x;
    }
    // root position is U^chi with mean 1/(1+chi)
    const double mean = 1.0 / (1.0 + c.chi);
    const double se = 0.30 / std::sqrt(static_cast<double>(reps)); // sd < 0.3
    CHECK(std::abs(acc / reps - mean) < 4.0 * se);
}

TEST_CASE("children are stored L-block then R-block, positions ascending") {
    const Constants c = derive_constants(3, 0.25);
    RandomStream rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        const PointTree t = sample_ppt(c, 2, 40, rng);
        for (std::int64_t v = 0; v < t.size(); ++v) {
            const auto& nd = t.nodes[v];
            if (nd.depth >= t.depth) continue;
            int l_seen = 0;
            bool in_r_block = false;
            double prev_l = 0.0, prev_r = 0.0;
            for (std::int64_t ch = nd.child_begin; ch < nd.child_end; ++ch) {
                const auto& cn = t.nodes[ch];
                CHECK(cn.parent == v);
                CHECK(cn.depth == nd.depth + 1);
                if (cn.type == NodeType::L) {
                    CHECK(!in_r_block); // L-children precede all R-children
                    CHECK(cn.x <= nd.x);
                    CHECK(cn.x >= prev_l);
                    prev_l = cn.x;
                    ++l_seen;
                } else {
                    CHECK(cn.type == NodeType::R);
                    if (!in_r_block) {
                        in_r_block = true;
                        prev_r = 0.0;
                    }
                    CHECK(cn.x >= nd.x);
                    CHECK(cn.x >= prev_r);
                    prev_r = cn.x;
                }
            }
            CHECK(l_seen == t.m_v(v)); // m for Root/L nodes, m-1 for R nodes
            const int r_seen = t.child_count(v) - l_seen;
            CHECK(r_seen <= 40);
            if (nd.type == NodeType::R) CHECK(t.m_v(v) == c.m - 1);
            else CHECK(t.m_v(v) == c.m);
        }
    }
}

TEST_CASE("the degree cap truncates and flags") {
    const Constants c = derive_constants(2, 0.0);
    RandomStream rng(29);
    std::int64_t truncated_total = 0;
    for (int rep = 0; rep < 40; ++rep) {
        const PointTree t = sample_ppt(c, 2, c.m + 1, rng); // smallest legal cap
        truncated_total += t.truncated_nodes();
        for (std::int64_t v = 0; v < t.size(); ++v)
            CHECK(t.child_count(v) <= t.m_v(v) + c.m + 1);
    }
    CHECK(truncated_total > 0);
}

TEST_CASE("degree pmf closed form") {
    DegreeLawParams p;
    p.a = 4.0;
    p.psi = 0.5;
    p.x = 0.3;
    // k = 0 collapses to x^(a psi)
    CHECK(degree_pmf(0, p) == doctest::Approx(std::pow(0.3, 2.0)).epsilon(1e-12));
    // normalization
    double total = 0.0;
    for (std::int64_t k = 0; k < 4000; ++k) total += degree_pmf(k, p);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    // degenerate position: all mass at k = 0
    p.x = 1.0;
    CHECK(degree_pmf(0, p) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(degree_pmf(3, p) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(degree_pmf(-1, p), std::invalid_argument);
    p.x = 0.0;
    CHECK_THROWS_AS(degree_pmf(0, p), std::invalid_argument);
    p.x = 1.5;
    CHECK_THROWS_AS(degree_pmf(0, p), std::invalid_argument);
}

TEST_CASE("root offspring counts match the integrated degree law") {
    const Constants c = derive_constants(2, 1.0 / 3.0);
    RandomStream rng(41);
    const int reps = 20000;
    const int k_max = 60;
    std::vector<std::int64_t> counts(k_max + 2, 0);
    for (int i = 0; i < reps; ++i) {
        const PointTree t = sample_ppt(c, 1, kBigCap, rng);
        const std::int64_t r_count = t.child_count(0) - c.m;
        REQUIRE(r_count >= 0);
        ++counts[std::min<std::int64_t>(r_count, k_max + 1)];
    }
    std::vector<double> probs(k_max + 2, 0.0);
    double mass = 0.0;
    for (int k = 0; k <= k_max; ++k) {
        probs[k] = integrated_root_pmf(k, c);
        mass += probs[k];
    }
    probs[k_max + 1] = 1.0 - mass; // overflow bin
    const Chi2Result r = chi2_gof(counts, probs);
    REQUIRE(r.valid);
    CHECK(r.p > 1e-3);
}

TEST_CASE("position chain means") {
    const Constants c = derive_constants(2, 0.0); // chi = 1/2
    RandomStream rng(53);
    const int reps = 40000;
    double s0 = 0.0, s1 = 0.0;
    for (int i = 0; i < reps; ++i) {
        s0 += sample_position_chain(0, c, rng);
        s1 += sample_position_chain(1, c, rng);
    }
    const double m0 = 1.0 / (1.0 + c.chi);
    const double m1 = m0 / 2.0;
    CHECK(std::abs(s0 / reps - m0) < 4.0 * 0.3 / std::sqrt(reps));
    CHECK(std::abs(s1 / reps - m1) < 4.0 * 0.3 / std::sqrt(reps));
    CHECK_THROWS_AS(sample_position_chain(-1, c, rng), std::invalid_argument);
}

TEST_CASE("backbone degree floors") {
    const Constants c = derive_constants(3, 0.25);
    RandomStream rng(67);
    std::int64_t min0 = 1 << 30, min1 = 1 << 30;
    for (int i = 0; i < 4000; ++i) {
        min0 = std::min(min0, sample_qi_degree(0, c, rng));
        min1 = std::min(min1, sample_qi_degree(1, c, rng));
    }
    CHECK(min0 >= c.m);
    CHECK(min1 >= c.m + 1);
    CHECK(min0 == c.m);     // the floor is attained
    CHECK(min1 == c.m + 1);
    CHECK_THROWS_AS(sample_qi_degree(-1, c, rng), std::invalid_argument);
}

TEST_CASE("deeper backbone degrees dominate the root degree") {
    // positions shrink along the chain, so q_1 degrees should push mass
    // upward relative to q_0; compare empirical CDFs with sampling slack
    const Constants c = derive_constants(2, 1.0 / 3.0);
    RandomStream rng(71);
    const int reps = 20000;
    const int k_hi = 200;
    std::vector<double> cdf0(k_hi + 1, 0.0), cdf1(k_hi + 1, 0.0);
    for (int i = 0; i < reps; ++i) {
        const auto d0 = std::min<std::int64_t>(sample_qi_degree(0, c, rng), k_hi);
        const auto d1 = std::min<std::int64_t>(sample_qi_degree(1, c, rng), k_hi);
        for (std::int64_t k = d0; k <= k_hi; ++k) cdf0[k] += 1.0;
        for (std::int64_t k = d1; k <= k_hi; ++k) cdf1[k] += 1.0;
    }
    for (int k = 0; k <= k_hi; ++k) {
        cdf0[k] /= reps;
        cdf1[k] /= reps;
        CHECK(cdf1[k] <= cdf0[k] + 0.02);
    }
}

TEST_CASE("comparison-tree root matches the point-tree root law") {
    // the GW root offspring count and the point-tree root child count share
    // one law; the point-tree side is itself pinned to the analytic pmf above
    const Constants c = derive_constants(2, 1.0 / 3.0);
    RandomStream rng(83);
    const int reps = 20000;
    const int k_max = 80;
    std::vector<std::int64_t> gw(k_max + 2, 0), ppt(k_max + 2, 0);
    for (int i = 0; i < reps; ++i) {
        const PointTree g = sample_gw_ball(2, 1, c, kBigCap, rng);
        ++gw[std::min<std::int64_t>(g.child_count(0), k_max + 1)];
        const PointTree t = sample_ppt(c, 1, kBigCap, rng);
        ++ppt[std::min<std::int64_t>(t.child_count(0), k_max + 1)];
    }
    const Chi2Result r = chi2_two_sample(gw, ppt);
    REQUIRE(r.valid);
    CHECK(r.p > 1e-3);
}

TEST_CASE("comparison-tree structure and validation") {
    const Constants c = derive_constants(2, 1.0 / 3.0);
    RandomStream rng(97);
    const PointTree t = sample_gw_ball(3, 3, c, 50, rng);
    for (std::int64_t v = 0; v < t.size(); ++v) {
        CHECK(t.nodes[v].depth <= 3);
        CHECK(t.child_count(v) <= 50);
    }
    CHECK_THROWS_AS(sample_gw_ball(1, 1, c, 50, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_gw_ball(2, 3, c, 50, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_gw_ball(2, -1, c, 50, rng), std::invalid_argument);
}

TEST_CASE("tree paths") {
    const Constants c = derive_constants(2, 0.0);
    RandomStream rng(5);
    PointTree t;
    for (;;) {
        t = sample_ppt(c, 2, 10, rng);
        if (t.size() > 3 && t.child_count(1) > 0) break;
    }
    CHECK(t.path_of(0) == "0");
    CHECK(t.path_of(t.nodes[0].child_begin) == "0.1");
    CHECK(t.path_of(t.nodes[0].child_begin + 1) == "0.2");
    CHECK(t.path_of(t.nodes[1].child_begin) == "0.1.1");
}

TEST_CASE("trees round-trip through the text format") {
    const Constants c = derive_constants(2, 1.0 / 3.0);
    RandomStream rng(201);
    const PointTree t = sample_ppt(c, 2, 30, rng);
    const std::string path = "pacp_test_tree_roundtrip.ppt";
    write_tree(path, t, 9001, 30);
    const PointTree back = read_tree(path);

    REQUIRE(back.size() == t.size());
    CHECK(back.depth == t.depth);
    CHECK(back.consts.m == c.m);
    CHECK(back.consts.alpha == doctest::Approx(c.alpha).epsilon(1e-15));
    for (std::int64_t v = 0; v < t.size(); ++v) {
        CHECK(back.nodes[v].x == t.nodes[v].x); // shortest round-trip format
        CHECK(back.nodes[v].gamma == t.nodes[v].gamma);
        CHECK(back.nodes[v].type == t.nodes[v].type);
        CHECK(back.nodes[v].parent == t.nodes[v].parent);
        CHECK(back.nodes[v].depth == t.nodes[v].depth);
        CHECK(back.nodes[v].truncated == t.nodes[v].truncated);
        CHECK(back.nodes[v].child_begin == t.nodes[v].child_begin);
        CHECK(back.nodes[v].child_end == t.nodes[v].child_end);
    }
    std::remove(path.c_str());
}

TEST_CASE("tree read errors name the offending path") {
    const std::string path = "pacp_test_tree_corrupt.ppt";
    {
        std::ofstream out(path);
        out << "PPTREE v1 m=2 alpha=0 depth=1 degree_cap=10 seed=0\n";
        out << "0 0.5 root 1.0 0\n";
        out << "0.7.9 0.2 L 1.0 0\n"; // orphan: no node 0.7
    }
    try {
        read_tree(path);
        FAIL("expected a throw");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(path) != std::string::npos);
    }
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_tree("definitely_missing_tree.ppt"), std::runtime_error);
}

TEST_CASE("sampler validation") {
    const Constants c = derive_constants(2, 0.0);
    RandomStream rng(1);
    CHECK_THROWS_AS(sample_ppt(c, -1, 100, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_ppt(c, 1, c.m, rng), std::invalid_argument);
    CHECK_NOTHROW(sample_ppt(c, 1, c.m + 1, rng));
}
