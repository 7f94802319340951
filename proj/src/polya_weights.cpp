#include "pacp/polya_weights.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pacp {

namespace {

void check_pair(const PolyaWeights& w, int i, int j, const char* who) {
    if (i < 1 || j <= i || j > w.n)
        throw std::invalid_argument(std::string(who) +
                                    ": requires 1 <= i < j <= n, got i=" +
                                    std::to_string(i) + " j=" + std::to_string(j));
}

} // namespace

double PolyaWeights::phi(int j) const {
    if (j < 1 || j > n)
        throw std::invalid_argument("PolyaWeights::phi: j out of range");
    return psi[j] * std::exp(log_tail[j]);
}

double PolyaWeights::tail_product(int i, int j) const {
    if (i < 0 || j < i || j > n)
        throw std::invalid_argument("PolyaWeights::tail_product: bad (i, j)");
    return std::exp(log_tail[i] - log_tail[j]);
}

PolyaWeights sample_weights(int n, const Constants& c, RandomStream& rng) {
    if (n < 2)
        throw std::invalid_argument("sample_weights: n must be >= 2, got " +
                                    std::to_string(n));
    PolyaWeights w;
    w.n = n;
    w.consts = c;
    w.psi.assign(n + 1, 0.0);
    w.log_tail.assign(n + 1, 0.0);
    w.s_prefix.assign(n + 1, 0.0);

    w.psi[1] = 1.0;
    for (int j = 2; j <= n; ++j) {
        const BetaParams p = beta_params(j, c);
        double v = rng.beta(p.a, p.b);
        // keep log1p(-v) finite; Beta mass at the endpoints is zero
        if (v >= 1.0) v = 1.0 - 1e-16;
        if (v <= 0.0) v = 1e-300;
        w.psi[j] = v;
    }

    w.log_tail[n] = 0.0;
    for (int j = n - 1; j >= 0; --j)
        w.log_tail[j] = w.log_tail[j + 1] + std::log1p(-w.psi[j + 1]);

    w.s_prefix[0] = 0.0; // log_tail[0] = -inf conceptually (psi_1 = 1)
    for (int j = 1; j <= n; ++j) w.s_prefix[j] = std::exp(w.log_tail[j]);
    return w;
}

double edge_probability(const PolyaWeights& w, int i, int j) {
    check_pair(w, i, j, "edge_probability");
    // phi_i / S_{j-1} = psi_i * S_i^{(j-1)}
    const double x = w.psi[i] * w.tail_product(i, j - 1);
    const int m = w.consts.m;
    if (x >= 1.0) return 1.0;
    double p = -std::expm1(static_cast<double>(m) * std::log1p(-x));
    // the exact value satisfies x <= p <= m*x; clamp away sub-ulp rounding
    if (p < x) p = x;
    if (p > m * x) p = m * x;
    return p;
}

EdgeProbBounds edge_probability_bounds(const PolyaWeights& w, int i, int j) {
    check_pair(w, i, j, "edge_probability_bounds");
    const double x = w.psi[i] * w.tail_product(i, j - 1);
    return {x, w.consts.m * x};
}

} // namespace pacp
