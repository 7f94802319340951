#include "pacp/ctmc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/MatrixFunctions>

namespace pacp {

ContactCTMC::ContactCTMC(const MultiGraph& g, double lambda) {
    if (g.n > 12)
        throw std::invalid_argument("ContactCTMC: vertex bound is 12, got " +
                                    std::to_string(g.n));
    if (g.n < 1) throw std::invalid_argument("ContactCTMC: empty graph");
    if (!(lambda >= 0.0))
        throw std::invalid_argument("ContactCTMC: lambda must be >= 0");
    n_ = g.n;
    lambda_ = lambda;
    const std::uint32_t states = 1u << n_;
    transitions_.resize(states);
    exit_rate_.assign(states, 0.0);

    for (std::uint32_t s = 1; s < states; ++s) {
        auto& out = transitions_[s];
        std::int64_t pressure_total = 0;
        int infected_count = 0;
        for (int v = 0; v < n_; ++v) {
            if (s & (1u << v)) {
                ++infected_count;
                out.push_back({s & ~(1u << v), 1, false});
            } else {
                std::int32_t pressure = 0;
                const auto nb = g.neighbors(v);
                for (std::size_t i = 0; i < nb.count; ++i)
                    if (s & (1u << nb.vtx_begin[i])) pressure += nb.mult_begin[i];
                if (pressure > 0) {
                    out.push_back({s | (1u << v), pressure, true});
                    pressure_total += pressure;
                }
            }
        }
        exit_rate_[s] = infected_count + lambda_ * static_cast<double>(pressure_total);
    }
    uniformization_rate_ = 0.0;
    for (std::uint32_t s = 1; s < states; ++s)
        uniformization_rate_ = std::max(uniformization_rate_, exit_rate_[s]);
    if (uniformization_rate_ <= 0.0) uniformization_rate_ = 1.0;
}

std::int64_t ContactCTMC::max_integer_row_imbalance() const {
    // the diagonal is defined by the integer transition sums; recomputing
    // them from the transition list must reproduce popcount (recoveries) and
    // the stored exit rate bit-for-bit
    std::int64_t worst = 0;
    for (std::uint32_t s = 1; s < transitions_.size(); ++s) {
        std::int64_t rec = 0, inf = 0;
        for (const auto& tr : transitions_[s])
            (tr.infection ? inf : rec) += tr.weight;
        worst = std::max<std::int64_t>(worst,
                                       std::llabs(rec - __builtin_popcount(s)));
        const double recon =
            static_cast<double>(rec) + lambda_ * static_cast<double>(inf);
        if (recon != exit_rate_[s]) worst = std::max<std::int64_t>(worst, 1);
    }
    return worst;
}

double ContactCTMC::expected_extinction_time(std::uint32_t init) const {
    if (init == 0 || init >= transitions_.size())
        throw std::invalid_argument("expected_extinction_time: bad initial state");
    const std::uint32_t states = 1u << n_;
    const int dim = static_cast<int>(states) - 1; // transient states 1..2^n-1

    Eigen::SparseMatrix<double> M(dim, dim);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(dim) * (n_ + 1));
    for (std::uint32_t s = 1; s < states; ++s) {
        trip.emplace_back(s - 1, s - 1, exit_rate_[s]);
        for (const auto& tr : transitions_[s]) {
            if (tr.to == 0) continue; // absorbing column dropped
            const double rate =
                tr.infection ? lambda_ * tr.weight : static_cast<double>(tr.weight);
            trip.emplace_back(s - 1, tr.to - 1, -rate);
        }
    }
    M.setFromTriplets(trip.begin(), trip.end());
    M.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
    solver.analyzePattern(M);
    solver.factorize(M);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("expected_extinction_time: singular system");
    Eigen::VectorXd rhs = Eigen::VectorXd::Ones(dim);
    Eigen::VectorXd tau = solver.solve(rhs);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("expected_extinction_time: solve failed");
    return tau[init - 1];
}

void ContactCTMC::uniformized_step(const std::vector<double>& in,
                                   std::vector<double>& out) const {
    const double L = uniformization_rate_;
    out.assign(in.size(), 0.0);
    for (std::uint32_t s = 0; s < in.size(); ++s) {
        const double mass = in[s];
        if (mass == 0.0) continue;
        if (s == 0) {
            out[0] += mass; // absorbing
            continue;
        }
        out[s] += mass * (1.0 - exit_rate_[s] / L);
        for (const auto& tr : transitions_[s]) {
            const double rate =
                tr.infection ? lambda_ * tr.weight : static_cast<double>(tr.weight);
            out[tr.to] += mass * rate / L;
        }
    }
}

std::vector<double> ContactCTMC::transient_distribution(std::uint32_t init,
                                                        double t,
                                                        double eps) const {
    if (init >= transitions_.size())
        throw std::invalid_argument("ContactCTMC: bad initial state");
    if (!(t >= 0.0)) throw std::invalid_argument("ContactCTMC: t must be >= 0");
    std::vector<double> acc(transitions_.size(), 0.0);
    std::vector<double> cur(transitions_.size(), 0.0);
    std::vector<double> nxt(transitions_.size(), 0.0);
    cur[init] = 1.0;
    const double Lt = uniformization_rate_ * t;
    if (Lt == 0.0) {
        acc = cur;
        return acc;
    }
    // Poisson(Lt) weights via stable log recurrence; accumulate until the
    // cumulative weight reaches 1 - eps, which certifies |error| <= eps
    double cum = 0.0;
    const int k_max = static_cast<int>(Lt + 12.0 * std::sqrt(Lt) + 60.0);
    for (int k = 0; k <= k_max; ++k) {
        const double logw = -Lt + k * std::log(Lt) - std::lgamma(k + 1.0);
        const double w = std::exp(logw);
        if (k > 0) {
            uniformized_step(cur, nxt);
            cur.swap(nxt);
        }
        if (w > 0.0) {
            for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += w * cur[s];
            cum += w;
        }
        if (cum >= 1.0 - eps) return acc;
    }
    throw std::runtime_error("ContactCTMC: uniformization failed to converge");
}

double ContactCTMC::survival_probability(std::uint32_t init, double t,
                                         double eps) const {
    if (init == 0)
        throw std::invalid_argument("survival_probability: empty initial set");
    const auto dist = transient_distribution(init, t, eps);
    return 1.0 - dist[0];
}

double ContactCTMC::expected_infected(std::uint32_t init, double t,
                                      double eps) const {
    if (init == 0)
        throw std::invalid_argument("expected_infected: empty initial set");
    const auto dist = transient_distribution(init, t, eps);
    double e = 0.0;
    for (std::uint32_t s = 1; s < dist.size(); ++s)
        e += dist[s] * __builtin_popcount(s);
    return e;
}

std::pair<double, double> ContactCTMC::duality_identity(double t) const {
    double lhs = 0.0;
    for (int v = 0; v < n_; ++v) lhs += survival_probability(1u << v, t);
    const double rhs = expected_infected(full_state(), t);
    return {lhs, rhs};
}

double ContactCTMC::survival_probability_dense_expm(std::uint32_t init,
                                                    double t) const {
    if (n_ > 10)
        throw std::invalid_argument(
            "survival_probability_dense_expm: capped at 10 vertices");
    if (init == 0 || init >= transitions_.size())
        throw std::invalid_argument("survival_probability_dense_expm: bad init");
    const int dim = static_cast<int>(transitions_.size());
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(dim, dim);
    for (int s = 1; s < dim; ++s) {
        for (const auto& tr : transitions_[s]) {
            const double rate =
                tr.infection ? lambda_ * tr.weight : static_cast<double>(tr.weight);
            Q(s, tr.to) += rate;
        }
        Q(s, s) = -exit_rate_[s];
    }
    const Eigen::MatrixXd P = (Q * t).exp();
    return 1.0 - P(init, 0);
}

} // namespace pacp
