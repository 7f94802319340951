#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pacp/stats.hpp"

using namespace pacp;

TEST_CASE("summarize") {
    const Summary s = summarize({1.0, 2.0, 3.0, 4.0});
    CHECK(s.n == 4);
    CHECK(s.mean == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(s.var == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(s.se == doctest::Approx(std::sqrt(5.0 / 12.0)).epsilon(1e-15));

    const Summary empty = summarize({});
    CHECK(empty.n == 0);
    CHECK(empty.mean == 0.0);

    const Summary one = summarize({7.0});
    CHECK(one.n == 1);
    CHECK(one.mean == 7.0);
    CHECK(one.var == 0.0);
    CHECK(one.se == 0.0);
}

TEST_CASE("type-7 quantiles interpolate linearly") {
    const std::vector<double> xs = {4.0, 1.0, 3.0, 2.0}; // sorted internally
    CHECK(quantile(xs, 0.0) == 1.0);
    CHECK(quantile(xs, 1.0) == 4.0);
    CHECK(quantile(xs, 0.5) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(quantile(xs, 0.25) == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(quantile(xs, 1.0 / 3.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(quantile({10.0, 20.0}, 0.75) == doctest::Approx(17.5).epsilon(1e-15));
    CHECK(quantile({42.0}, 0.3) == 42.0);
    CHECK_THROWS_AS(quantile({}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(quantile({1.0}, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(quantile({1.0}, 1.0001), std::invalid_argument);
}

TEST_CASE("pearson correlation on exact linear data") {
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0};
    std::vector<double> up, down;
    for (double v : x) {
        up.push_back(2.0 * v + 1.0);
        down.push_back(-v);
    }
    CHECK(pearson_correlation(x, up) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pearson_correlation(x, down) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK_THROWS_AS(pearson_correlation(x, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(pearson_correlation({1.0, 1.0}, {1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("Kolmogorov tail values") {
    CHECK(kolmogorov_sf(0.0) == 1.0);
    CHECK(kolmogorov_sf(-3.0) == 1.0);
    CHECK(kolmogorov_sf(0.5) == doctest::Approx(0.9639452436).epsilon(1e-6));
    // the classical 5% critical point
    CHECK(kolmogorov_sf(1.358) == doctest::Approx(0.05).epsilon(2e-3));
    CHECK(kolmogorov_sf(2.5) < 1e-4);
    double prev = 1.0;
    for (double x = 0.1; x < 3.0; x += 0.1) {
        const double q = kolmogorov_sf(x);
        CHECK(q <= prev);
        prev = q;
    }
}

TEST_CASE("two-sample KS extremes") {
    const std::vector<double> a = {1.0, 2.0, 3.0, 4.0};
    const KSResult same = ks_two_sample(a, a);
    CHECK(same.d == 0.0);
    CHECK(same.p == 1.0);

    const KSResult apart = ks_two_sample({1.0, 2.0, 3.0}, {10.0, 11.0, 12.0});
    CHECK(apart.d == 1.0);
    CHECK(apart.p < 0.05); // exact permutation p would be 1/C(6,3) = 0.05

    std::vector<double> lo, hi;
    for (int i = 0; i < 10; ++i) {
        lo.push_back(i);
        hi.push_back(100.0 + i);
    }
    const KSResult far = ks_two_sample(lo, hi);
    CHECK(far.d == 1.0);
    CHECK(far.p < 1e-3);

    CHECK_THROWS_AS(ks_two_sample({}, a), std::invalid_argument);
    CHECK_THROWS_AS(ks_two_sample(a, {}), std::invalid_argument);
}

TEST_CASE("chi-square survival at df = 2 is a pure exponential") {
    for (double x : {0.5, 1.0, 3.0, 10.0})
        CHECK(chi2_sf(x, 2.0) == doctest::Approx(std::exp(-x / 2.0)).epsilon(1e-12));
    CHECK(chi2_sf(0.0, 5.0) == 1.0);
    CHECK(chi2_sf(-1.0, 5.0) == 1.0);
}

TEST_CASE("two-sample chi-square vanishes on proportional counts") {
    const std::vector<std::int64_t> a = {40, 30, 20, 10};
    const std::vector<std::int64_t> b = {20, 15, 10, 5};
    const Chi2Result r = chi2_two_sample(a, b);
    REQUIRE(r.valid);
    CHECK(r.stat == 0.0); // the scaling constants cancel exactly
    CHECK(r.p == 1.0);
    CHECK(r.df == 3);
}

TEST_CASE("two-sample chi-square pools sparse bins") {
    const std::vector<std::int64_t> a = {6, 6, 6};
    const std::vector<std::int64_t> b = {6, 6, 6};
    const Chi2Result r = chi2_two_sample(a, b, 10);
    REQUIRE(r.valid);
    CHECK(r.df == 2); // each bin already holds 12 >= 10 combined

    // everything pools into one bin: not a valid test
    const Chi2Result collapsed = chi2_two_sample({1, 1, 8}, {1, 1, 8}, 25);
    CHECK(!collapsed.valid);

    CHECK_THROWS_AS(chi2_two_sample({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("goodness of fit on exact proportions") {
    const Chi2Result r = chi2_gof({50, 30, 20}, {0.5, 0.3, 0.2});
    REQUIRE(r.valid);
    CHECK(r.stat == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(r.df == 2);
    CHECK(r.p == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(chi2_gof({1, 2}, {0.5, 0.3, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(chi2_gof({0, 0}, {0.5, 0.5}), std::invalid_argument);

    // min_expected pooling folds the three middle bins into one
    const Chi2Result pooled =
        chi2_gof({50, 2, 2, 2, 44}, {0.5, 0.02, 0.02, 0.02, 0.44}, 5.0);
    REQUIRE(pooled.valid);
    CHECK(pooled.df == 2);

    // everything pooling into a single bin is not a valid test
    const Chi2Result collapsed = chi2_gof({3, 2}, {0.6, 0.4}, 100.0);
    CHECK(!collapsed.valid);
}

TEST_CASE("least squares recovers an exact line") {
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    for (double x = 0.0; x < 6.0; x += 1.0) {
        X.push_back({1.0, x});
        y.push_back(3.0 + 2.0 * x);
    }
    const LinFit fit = least_squares(X, y);
    REQUIRE(fit.beta.size() == 2);
    CHECK(fit.beta[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.beta[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.sigma2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-18));
    for (double rres : fit.residuals)
        CHECK(std::abs(rres) < 1e-9);
}

TEST_CASE("least squares error paths") {
    CHECK_THROWS_AS(least_squares({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(least_squares({{1.0, 2.0}}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(least_squares({{1.0}, {1.0, 2.0}}, {1.0, 2.0}),
                    std::invalid_argument);
    // duplicated column makes the normal equations singular
    CHECK_THROWS_AS(least_squares({{1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}},
                                  {1.0, 2.0, 3.0}),
                    std::runtime_error);
}

TEST_CASE("least squares with noise reports sensible uncertainty") {
    // y = 1 + x with +/- h alternating noise: slope stays exact, intercept
    // absorbs nothing, sigma2 reflects h^2
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    const double h = 0.5;
    for (int i = 0; i < 8; ++i) {
        X.push_back({1.0, static_cast<double>(i)});
        y.push_back(1.0 + i + (i % 2 == 0 ? h : -h));
    }
    const LinFit fit = least_squares(X, y);
    CHECK(fit.beta[1] == doctest::Approx(1.0).epsilon(0.05));
    CHECK(fit.sigma2 > 0.0);
    CHECK(fit.se[0] > 0.0);
    CHECK(fit.se[1] > 0.0);
    CHECK(fit.r2 > 0.9);
    CHECK(fit.r2 < 1.0);
}
