#pragma once

#include <cstdint>
#include <random>

namespace pacp {

// One splitmix64 step; used to mix (master_seed, stream_id) into child seeds.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Deterministic random stream. Distribution objects are created fresh per
// call so the stream's state is exactly the underlying mt19937_64; child
// streams for (master_seed, stream_id) pairs are reproducible and
// independent for distinct ids.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

    static RandomStream child(std::uint64_t master_seed, std::uint64_t stream_id);

    std::mt19937_64& engine() { return eng_; }

    double uniform01();                       // [0, 1)
    double uniform_open01();                  // (0, 1)
    double uniform(double lo, double hi);     // [lo, hi)
    double exponential(double rate);          // rate > 0
    double normal(double mean, double sd);
    double gamma(double shape, double scale = 1.0);
    double beta(double a, double b);          // Gamma ratio
    std::int64_t poisson(double mean);        // normal approx above 1e9
    std::uint64_t uniform_below(std::uint64_t n); // {0, ..., n-1}, n >= 1

private:
    std::mt19937_64 eng_;
};

} // namespace pacp
