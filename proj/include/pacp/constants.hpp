#pragma once

namespace pacp {

// Model constants derived from (m, alpha). Requires m >= 2 and alpha in [0, 1).
struct Constants {
    int m = 0;          // edges attached per new vertex
    double alpha = 0.0; // uniform-attachment mixture weight
    double r = 0.0;     // alpha / (1 - alpha)
    double chi = 0.0;   // (1 + 2r) / (2 + 2r), in [1/2, 1)
    double psi = 0.0;   // 1 / (1 + 2r) == (1 - chi) / chi, in (0, 1]
    double nu = 0.0;    // 2 + 1/psi, degree power-law exponent, >= 3
};

Constants derive_constants(int m, double alpha);

// Beta(a, b) parameters for the urn weight psi_j; defined for j >= 2
// (psi_1 is the constant 1).
struct BetaParams {
    double a = 0.0;
    double b = 0.0;
};

BetaParams beta_params(int j, const Constants& c);

} // namespace pacp
