#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pacp/constants.hpp"
#include "pacp/stats.hpp"

namespace pacp {

// One config type for every experiment kind; unused fields keep their
// defaults. JSON serialization round-trips exactly (doubles at full
// precision, seed as an unsigned 64-bit integer).
struct ExperimentConfig {
    std::string kind;                 // density | sweep | escape | star | lit
    int m = 2;
    double alpha = 0.0;
    std::int64_t n = 0;               // graph size (density, sweep)
    std::vector<double> lambda_grid;  // sweep-style kinds
    double lambda = 0.0;              // single-lambda kinds (star, lit)
    double t = 0.0;                   // horizon for density/sweep
    std::vector<double> observe_times; // optional extra density readouts
    std::int64_t replicas = 1;
    std::uint64_t seed = 0;
    std::uint64_t event_cap = 100'000'000;
    int threads = 1;
    std::string out_dir;              // empty = no files written

    // escape sweeps
    int radius = 0;                   // R; trees are sampled to depth R+1
    std::int64_t degree_cap = 100;    // Polya-point R-child cap
    std::int64_t trials_per_tree = 20;

    // star scaling
    std::vector<std::int64_t> sizes;
    std::vector<std::uint64_t> event_caps; // optional per-size caps

    // lit transfer
    std::int64_t path_length = 1;
    std::vector<std::int64_t> star_sizes;
    double horizon = 0.0;

    std::string to_json_text() const;
    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    void save(const std::string& path) const;
};

// log rho = b0 + b1 log(lambda) + b2 log|log(lambda)|, fitted free and with
// b2 pinned to -1/psi. Requires >= 5 grid points, every lambda in (0,1),
// and positive responses.
struct ScalingFit {
    std::vector<double> beta;     // free fit: b0, b1, b2
    std::vector<double> se;
    double r_squared = 0.0;
    std::vector<double> residuals;
    std::vector<double> beta_constrained; // b0, b1 with b2 = -1/psi
    std::vector<double> se_constrained;
    double r_squared_constrained = 0.0;
    double psi = 0.0;
    std::size_t n_points = 0;
};

ScalingFit fit_scaling_law(const std::vector<double>& lambdas,
                           const std::vector<double>& rho, double psi);

// index-parallel loop; bodies must touch only their own slot of any shared
// output. threads <= 1 runs inline.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

struct DensityResult {
    std::vector<double> densities;          // per replica, at time t
    std::vector<std::vector<double>> extra; // per replica, at observe_times
    std::vector<std::uint8_t> capped;
    std::int64_t cap_count = 0;
    Summary summary;
};

// Per replica: fresh urn graph, contact process from full occupancy to t,
// density |xi_t| / n recorded. kind must be "density".
DensityResult run_density_experiment(const ExperimentConfig& cfg);

struct SweepPoint {
    double lambda = 0.0;
    std::vector<double> densities;
    double mean = 0.0;
    double se = 0.0;
    std::int64_t cap_count = 0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    ScalingFit fit;
};

// Density at t per lambda over a fresh graph per replica, plus the scaling
// fit over the per-lambda means. Requires >= 5 grid points; the fit demands
// every lambda in (0, 1) and positive mean densities.
SweepResult run_lambda_sweep(const ExperimentConfig& cfg);

struct EscapePoint {
    double lambda = 0.0;
    double escape_rate = 0.0;
    double se = 0.0;         // clustered by tree
    std::int64_t trials = 0;
    std::int64_t escaped = 0;
    std::int64_t indeterminate = 0; // cap hits, counted as non-escapes
    double truncation_rate = 0.0;   // trees with any degree-cap hit
};

struct EscapeSweepResult {
    std::vector<EscapePoint> points;
    std::optional<ScalingFit> fit; // present when the grid has >= 5 points
};

// Per lambda: `replicas` fresh trees (depth R+1), `trials_per_tree` escape
// trials each; escape frequency with a tree-clustered standard error.
EscapeSweepResult run_escape_sweep(const ExperimentConfig& cfg);

struct StarPoint {
    std::int64_t size = 0;
    std::vector<double> times; // extinction times (cap time when capped)
    double median = 0.0;
    double log_median = 0.0;
    std::int64_t cap_count = 0;
    bool median_censored = false; // >= half the runs hit the cap
};

struct StarScalingResult {
    std::vector<StarPoint> points;
    LinFit fit;               // log(median) against lambda^2 * size;
                              // empty unless lambda > 0 and >= 3 sizes
    double correlation = 0.0; // of log(median) with size
};

// Center-seeded star survival per leaf count. Requires >= 2 sizes;
// event_caps (when set) must match sizes element-wise.
StarScalingResult run_star_scaling(const ExperimentConfig& cfg);

struct LitPoint {
    std::int64_t size = 0;
    double frequency = 0.0; // watch threshold reached within the horizon
    double se = 0.0;
    std::int64_t replicas = 0;
    std::int64_t seeded = 0;    // infected neighbors planted at center a
    std::int64_t threshold = 0; // lit count watched for at center b
};

struct LitTransferResult {
    std::vector<LitPoint> points;
};

// Two stars of equal size joined by a path; center a starts lit
// (ceil(deg * lambda / 16e) of its neighbors infected), success = center b
// accumulating its own lit count within the horizon.
LitTransferResult run_lit_transfer(const ExperimentConfig& cfg);

struct BatteryCheck {
    std::string name;
    bool pass = false;
    double statistic = 0.0;
    std::string detail;
};

struct BatteryReport {
    std::vector<BatteryCheck> checks;
    bool all_pass = false;
    std::string to_json_text() const;
};

// Bundled consistency checks: oracle agreement, duality, urn vs sequential,
// weight moments, weight concentration, degree tail. Deterministic for a
// fixed seed. quick = reduced sample sizes (seconds instead of minutes).
BatteryReport run_validation_battery(std::uint64_t seed, bool quick);

// Persistence helpers. Files are deterministic: no timestamps, doubles at
// full precision, rows in index order.
void write_manifest(const std::string& path, const ExperimentConfig& cfg);
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);
std::string format_double(double v); // shortest round-trip decimal form

} // namespace pacp
