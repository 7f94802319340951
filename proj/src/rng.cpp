#include "pacp/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace pacp {

std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RandomStream RandomStream::child(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::uint64_t s = master_seed;
    splitmix64_next(s);
    s ^= stream_id * 0xda942042e4dd58b5ULL;
    std::uint64_t seed = splitmix64_next(s);
    // a second round decorrelates adjacent stream ids
    seed ^= splitmix64_next(s);
    return RandomStream(seed);
}

double RandomStream::uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open01() {
    double u;
    do {
        u = uniform01();
    } while (u == 0.0);
    return u;
}

double RandomStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double RandomStream::exponential(double rate) {
    if (!(rate > 0.0))
        throw std::invalid_argument("exponential: rate must be > 0");
    return -std::log(uniform_open01()) / rate;
}

double RandomStream::normal(double mean, double sd) {
    std::normal_distribution<double> d(mean, sd);
    return d(eng_);
}

double RandomStream::gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
        throw std::invalid_argument("gamma: shape and scale must be > 0");
    std::gamma_distribution<double> d(shape, scale);
    return d(eng_);
}

double RandomStream::beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
}

std::int64_t RandomStream::poisson(double mean) {
    if (mean < 0.0)
        throw std::invalid_argument("poisson: mean must be >= 0");
    if (mean == 0.0) return 0;
    if (mean > 1e9) {
        // normal approximation; relative skew ~ mean^{-1/2} < 3e-5 here
        const long long v = std::llround(normal(mean, std::sqrt(mean)));
        return v < 0 ? 0 : static_cast<std::int64_t>(v);
    }
    std::poisson_distribution<std::int64_t> d(mean);
    return d(eng_);
}

std::uint64_t RandomStream::uniform_below(std::uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("uniform_below: n must be >= 1");
    std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
    return d(eng_);
}

} // namespace pacp
