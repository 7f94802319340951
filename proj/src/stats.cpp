#include "pacp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace pacp {

Summary summarize(const std::vector<double>& xs) {
    Summary s;
    s.n = xs.size();
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / s.n;
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.var = ss / (s.n - 1);
        s.se = std::sqrt(s.var / s.n);
    }
    return s;
}

double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q in [0,1]");
    std::sort(xs.begin(), xs.end());
    const double h = (xs.size() - 1) * q;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= xs.size()) return xs.back();
    const double frac = h - lo;
    return xs[lo] * (1.0 - frac) + xs[lo + 1] * frac;
}

double pearson_correlation(const std::vector<double>& xs,
                           const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("pearson_correlation: need matched samples, n >= 2");
    const Summary sx = summarize(xs);
    const Summary sy = summarize(ys);
    double cov = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        cov += (xs[i] - sx.mean) * (ys[i] - sy.mean);
    cov /= (xs.size() - 1);
    const double denom = std::sqrt(sx.var * sy.var);
    if (denom == 0.0)
        throw std::invalid_argument("pearson_correlation: zero variance");
    return cov / denom;
}

double kolmogorov_sf(double x) {
    if (x <= 0.0) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    const double p = 2.0 * sum;
    return std::clamp(p, 0.0, 1.0);
}

KSResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    KSResult r;
    r.d = d;
    const double ne = std::sqrt(na * nb / (na + nb));
    r.p = kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d);
    return r;
}

double chi2_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(df / 2.0, x / 2.0);
}

Chi2Result chi2_two_sample(const std::vector<std::int64_t>& a,
                           const std::vector<std::int64_t>& b,
                           std::int64_t min_count) {
    if (a.size() != b.size())
        throw std::invalid_argument("chi2_two_sample: bin vectors must align");
    std::vector<double> pa, pb;
    double ca = 0.0, cb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ca += static_cast<double>(a[i]);
        cb += static_cast<double>(b[i]);
        if (ca + cb >= static_cast<double>(min_count)) {
            pa.push_back(ca);
            pb.push_back(cb);
            ca = cb = 0.0;
        }
    }
    // trailing remainder merges into the last pooled bin
    if ((ca > 0.0 || cb > 0.0) && !pa.empty()) {
        pa.back() += ca;
        pb.back() += cb;
    }
    Chi2Result r;
    if (pa.size() < 2) return r;
    double na = 0.0, nb = 0.0;
    for (double v : pa) na += v;
    for (double v : pb) nb += v;
    if (na == 0.0 || nb == 0.0) return r;
    // standard two-sample statistic with scaling constants K1, K2
    const double k1 = std::sqrt(nb / na);
    const double k2 = std::sqrt(na / nb);
    double stat = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double tot = pa[i] + pb[i];
        if (tot == 0.0) continue;
        const double diff = k1 * pa[i] - k2 * pb[i];
        stat += diff * diff / tot;
    }
    r.stat = stat;
    r.df = static_cast<int>(pa.size()) - 1;
    r.p = chi2_sf(stat, r.df);
    r.valid = true;
    return r;
}

Chi2Result chi2_gof(const std::vector<std::int64_t>& counts,
                    const std::vector<double>& probs, double min_expected) {
    if (counts.size() != probs.size())
        throw std::invalid_argument("chi2_gof: counts/probs must align");
    double n = 0.0;
    for (auto c : counts) n += static_cast<double>(c);
    if (n == 0.0) throw std::invalid_argument("chi2_gof: empty sample");

    std::vector<double> exp_counts;
    std::vector<double> obs_counts;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        exp_counts.push_back(probs[i] * n);
        obs_counts.push_back(static_cast<double>(counts[i]));
    }

    // pool left-to-right to expected >= min_expected
    std::vector<double> pe, po;
    double ce = 0.0, co = 0.0;
    for (std::size_t i = 0; i < exp_counts.size(); ++i) {
        ce += exp_counts[i];
        co += obs_counts[i];
        if (ce >= min_expected) {
            pe.push_back(ce);
            po.push_back(co);
            ce = co = 0.0;
        }
    }
    if (ce > 0.0 || co > 0.0) {
        if (!pe.empty()) {
            pe.back() += ce;
            po.back() += co;
        } else {
            pe.push_back(ce);
            po.push_back(co);
        }
    }
    Chi2Result r;
    if (pe.size() < 2) return r;
    double stat = 0.0;
    for (std::size_t i = 0; i < pe.size(); ++i)
        if (pe[i] > 0.0) stat += (po[i] - pe[i]) * (po[i] - pe[i]) / pe[i];
    r.stat = stat;
    r.df = static_cast<int>(pe.size()) - 1;
    r.p = chi2_sf(stat, r.df);
    r.valid = true;
    return r;
}

LinFit least_squares(const std::vector<std::vector<double>>& X,
                     const std::vector<double>& y) {
    const std::size_t n = X.size();
    if (n == 0 || n != y.size())
        throw std::invalid_argument("least_squares: shape mismatch");
    const std::size_t k = X[0].size();
    if (n <= k) throw std::invalid_argument("least_squares: need n > #regressors");

    // normal equations with Gaussian elimination (k <= 3 in this project)
    std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
    std::vector<double> xty(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (X[i].size() != k)
            throw std::invalid_argument("least_squares: ragged design matrix");
        for (std::size_t a = 0; a < k; ++a) {
            xty[a] += X[i][a] * y[i];
            for (std::size_t b = 0; b < k; ++b) xtx[a][b] += X[i][a] * X[i][b];
        }
    }
    // invert xtx (augmented elimination) to get the covariance scale
    std::vector<std::vector<double>> inv(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) inv[i][i] = 1.0;
    auto a = xtx;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t rrow = col + 1; rrow < k; ++rrow)
            if (std::abs(a[rrow][col]) > std::abs(a[piv][col])) piv = rrow;
        if (std::abs(a[piv][col]) < 1e-12)
            throw std::runtime_error("least_squares: singular design matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const double d = a[col][col];
        for (std::size_t j = 0; j < k; ++j) {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for (std::size_t rrow = 0; rrow < k; ++rrow) {
            if (rrow == col) continue;
            const double f = a[rrow][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < k; ++j) {
                a[rrow][j] -= f * a[col][j];
                inv[rrow][j] -= f * inv[col][j];
            }
        }
    }

    LinFit fit;
    fit.n = n;
    fit.beta.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) fit.beta[i] += inv[i][j] * xty[j];

    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= n;
    double ss_res = 0.0, ss_tot = 0.0;
    fit.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double pred = 0.0;
        for (std::size_t j = 0; j < k; ++j) pred += X[i][j] * fit.beta[j];
        fit.residuals[i] = y[i] - pred;
        ss_res += fit.residuals[i] * fit.residuals[i];
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    fit.sigma2 = ss_res / (n - k);
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.se.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) fit.se[i] = std::sqrt(fit.sigma2 * inv[i][i]);
    return fit;
}

} // namespace pacp
