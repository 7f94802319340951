#pragma once

#include <vector>

#include "pacp/constants.hpp"
#include "pacp/rng.hpp"

namespace pacp {

// Urn weights for n vertices. Vectors are 1-based (index 0 unused) so that
// index j corresponds to vertex v_j; psi[1] == 1.
//
//   log_tail[k] = sum_{t=k+1..n} log(1 - psi[t]), log_tail[n] == 0
//   s_prefix[k] = S_k = exp(log_tail[k]) for k >= 1, s_prefix[0] = S_0 = 0
//   phi(k)      = psi[k] * exp(log_tail[k]) = S_k - S_{k-1}
//
// S_n == 1 holds exactly by construction and S_k is strictly increasing,
// which makes s_prefix directly usable for interval location.
struct PolyaWeights {
    int n = 0;
    Constants consts;
    std::vector<double> psi;
    std::vector<double> log_tail;
    std::vector<double> s_prefix;

    double phi(int j) const;
    // product over t in (i, j] of (1 - psi_t); equals S_i^{(j)}
    double tail_product(int i, int j) const;
};

PolyaWeights sample_weights(int n, const Constants& c, RandomStream& rng);

// P(v_i ~ v_j | weights) = 1 - (1 - phi_i / S_{j-1})^m for 1 <= i < j <= n.
double edge_probability(const PolyaWeights& w, int i, int j);

// Analytic envelope [psi_i * S_i^{(j-1)}, m * psi_i * S_i^{(j-1)}] that the
// exact probability always lies in.
struct EdgeProbBounds {
    double lower = 0.0;
    double upper = 0.0;
};

EdgeProbBounds edge_probability_bounds(const PolyaWeights& w, int i, int j);

} // namespace pacp
