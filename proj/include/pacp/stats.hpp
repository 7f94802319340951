#pragma once

#include <cstdint>
#include <vector>

namespace pacp {

struct Summary {
    double mean = 0.0;
    double var = 0.0; // unbiased sample variance
    double se = 0.0;  // standard error of the mean
    std::size_t n = 0;
};

Summary summarize(const std::vector<double>& xs);

// type-7 (linear interpolation) sample quantile; q in [0, 1]
double quantile(std::vector<double> xs, double q);

double pearson_correlation(const std::vector<double>& xs,
                           const std::vector<double>& ys);

// Kolmogorov distribution tail Q(x) = 2 sum (-1)^{k-1} exp(-2 k^2 x^2)
double kolmogorov_sf(double x);

struct KSResult {
    double d = 0.0;
    double p = 0.0; // asymptotic; conservative for discrete data
};
KSResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// chi-square survival function Q(df/2, x/2)
double chi2_sf(double x, double df);

struct Chi2Result {
    double stat = 0.0;
    int df = 0;
    double p = 0.0;
    bool valid = false; // false if pooling left < 2 bins
};

// Two-sample chi-square on aligned count vectors; bins are pooled greedily
// (left to right) until each pooled bin's combined count is >= min_count.
Chi2Result chi2_two_sample(const std::vector<std::int64_t>& a,
                           const std::vector<std::int64_t>& b,
                           std::int64_t min_count = 10);

// Goodness of fit of counts against a model pmf. Bins align index-for-index
// and must cover the sample; fold any tail into a final overflow bin with
// its remaining model mass. Pools left-to-right to expected >= min_expected.
Chi2Result chi2_gof(const std::vector<std::int64_t>& counts,
                    const std::vector<double>& probs, double min_expected = 5.0);

struct LinFit {
    std::vector<double> beta;
    std::vector<double> se;
    double r2 = 0.0;
    double sigma2 = 0.0; // residual variance
    std::size_t n = 0;
    std::vector<double> residuals;
};

// Ordinary least squares; rows of X are observations. Throws if the normal
// equations are singular.
LinFit least_squares(const std::vector<std::vector<double>>& X,
                     const std::vector<double>& y);

} // namespace pacp
