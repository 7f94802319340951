#include "pacp/constants.hpp"

#include <stdexcept>
#include <string>

namespace pacp {

Constants derive_constants(int m, double alpha) {
    if (m < 2)
        throw std::invalid_argument("derive_constants: m must be >= 2, got " +
                                    std::to_string(m));
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::invalid_argument(
            "derive_constants: alpha must lie in [0, 1), got " +
            std::to_string(alpha));
    Constants c;
    c.m = m;
    c.alpha = alpha;
    c.r = alpha / (1.0 - alpha);
    c.chi = (1.0 + 2.0 * c.r) / (2.0 + 2.0 * c.r);
    c.psi = 1.0 / (1.0 + 2.0 * c.r);
    c.nu = 2.0 + 1.0 / c.psi;
    return c;
}

BetaParams beta_params(int j, const Constants& c) {
    if (j < 2)
        throw std::invalid_argument("beta_params: requires j >= 2, got " +
                                    std::to_string(j) +
                                    " (psi_1 is the constant 1)");
    const double m = c.m;
    const double mr2 = 2.0 * c.m * c.r;
    BetaParams p;
    p.a = m + mr2;
    p.b = (2.0 * j - 3.0) * m + mr2 * (j - 1.0);
    return p;
}

} // namespace pacp
