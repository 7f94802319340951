#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pacp/constants.hpp"
#include "pacp/contact.hpp"
#include "pacp/graph_io.hpp"
#include "pacp/graphgen.hpp"
#include "pacp/harness.hpp"
#include "pacp/metrics.hpp"
#include "pacp/polya_point.hpp"
#include "pacp/polya_weights.hpp"
#include "pacp/rng.hpp"

namespace {

using pacp::ExperimentConfig;
using ordered_json = nlohmann::ordered_json;

struct GlobalOpts {
    std::uint64_t seed = 12345;
    int threads = 1;
    std::string out_dir;
    std::string config_path;
};

// config file (if any) supplies the base; explicitly passed flags override
ExperimentConfig base_config(const GlobalOpts& g, const CLI::App& cmd,
                             const std::string& kind) {
    ExperimentConfig cfg;
    if (!g.config_path.empty()) cfg = ExperimentConfig::load(g.config_path);
    if (cfg.kind.empty()) cfg.kind = kind;
    if (cfg.kind != kind)
        throw std::invalid_argument("config: kind '" + cfg.kind +
                                    "' does not match subcommand '" + kind + "'");
    const CLI::App* root = cmd.get_parent() ? cmd.get_parent() : &cmd;
    if (root->get_option("--seed")->count() || g.config_path.empty())
        cfg.seed = g.seed;
    if (root->get_option("--threads")->count() || g.config_path.empty())
        cfg.threads = g.threads;
    if (root->get_option("--out-dir")->count() || g.config_path.empty())
        cfg.out_dir = g.out_dir;
    return cfg;
}

// apply a flag value only when the user typed it (config wins otherwise)
template <typename T>
void override_if_set(const CLI::App& cmd, const std::string& name, T& field,
                     const T& cli_value, bool have_config) {
    if (cmd.get_option(name)->count() || !have_config) field = cli_value;
}

std::string resolve_out_path(const std::string& explicit_path,
                             const std::string& out_dir,
                             const std::string& default_name) {
    if (!explicit_path.empty()) return explicit_path;
    if (!out_dir.empty())
        return (std::filesystem::path(out_dir) / default_name).string();
    throw std::invalid_argument("no output path: pass --out or --out-dir");
}

void ensure_parent_dir(const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
}

int cmd_gen(const GlobalOpts& g, const CLI::App& cmd, std::int64_t n, int m,
            double alpha, const std::string& model, const std::string& out,
            const std::string& weights_out) {
    const pacp::Constants c = pacp::derive_constants(m, alpha);
    if (model != "urn" && model != "sequential")
        throw std::invalid_argument("gen: --model must be 'urn' or 'sequential'");
    if (model == "sequential" && !weights_out.empty())
        throw std::invalid_argument("gen: --weights-out requires --model urn");
    (void)cmd;

    pacp::RandomStream rng = pacp::RandomStream::child(g.seed, 0);
    pacp::MultiGraph graph;
    if (model == "urn") {
        pacp::PolyaWeights weights;
        graph = pacp::build_polya_graph(static_cast<int>(n), c, rng, &weights);
        if (!weights_out.empty()) {
            ensure_parent_dir(weights_out);
            pacp::write_weights(weights_out, weights, g.seed);
        }
    } else {
        graph = pacp::build_sequential_graph(static_cast<int>(n), c, rng);
    }
    const std::string path = resolve_out_path(out, g.out_dir, "graph.pag");
    ensure_parent_dir(path);
    pacp::write_graph(path, graph, {m, alpha, g.seed});
    std::cout << "wrote " << path << " (n=" << graph.n
              << ", edges=" << graph.edges.size()
              << ", total multiplicity=" << graph.total_multiplicity() << ")\n";
    if (!weights_out.empty()) std::cout << "wrote " << weights_out << "\n";
    return 0;
}

ordered_json outcome_to_json(const pacp::Outcome& out, int n) {
    ordered_json j;
    j["extinct"] = out.extinct;
    if (out.extinction_time)
        j["extinction_time"] = *out.extinction_time;
    else
        j["extinction_time"] = nullptr;
    j["final_time"] = out.final_time;
    j["final_infected"] = out.final_infected;
    j["final_density"] = static_cast<double>(out.final_infected) / n;
    j["events_used"] = out.events_used;
    j["capped"] = out.capped;
    j["stop_hit"] = out.stop_hit;
    j["watch_hit"] = out.watch_hit;
    ordered_json obs = ordered_json::array();
    for (const auto& [t, count] : out.observations) obs.push_back({t, count});
    j["observations"] = obs;
    return j;
}

int cmd_simulate(const GlobalOpts& g, const CLI::App& cmd,
                 const std::string& graph_path, double lambda, double t,
                 const std::string& init, int vertex,
                 const std::vector<double>& observe, std::uint64_t event_cap,
                 std::int64_t replicas) {
    const bool have_config = !g.config_path.empty();
    if (have_config) {
        // replicated density experiment driven entirely by the config file
        ExperimentConfig cfg = base_config(g, cmd, "density");
        override_if_set(cmd, "--lambda", cfg.lambda, lambda, have_config);
        override_if_set(cmd, "--t", cfg.t, t, have_config);
        override_if_set(cmd, "--replicas", cfg.replicas, replicas, have_config);
        override_if_set(cmd, "--event-cap", cfg.event_cap, event_cap, have_config);
        const pacp::DensityResult res = pacp::run_density_experiment(cfg);
        ordered_json j;
        j["replicas"] = res.densities.size();
        j["mean_density"] = res.summary.mean;
        j["se"] = res.summary.se;
        j["cap_count"] = res.cap_count;
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    if (graph_path.empty())
        throw std::invalid_argument("simulate: pass --graph, or --config with kind 'density'");
    const pacp::LoadedGraph loaded = pacp::read_graph(graph_path);

    pacp::InitialCondition ic = pacp::InitialCondition::full();
    if (init == "single") {
        ic = pacp::InitialCondition::single(vertex);
    } else if (init != "full") {
        throw std::invalid_argument("simulate: --init must be 'full' or 'single'");
    }

    pacp::ContactConfig cc;
    cc.lambda = lambda;
    cc.t_max = t;
    cc.event_cap = event_cap;
    cc.observe_times = observe;
    pacp::RandomStream rng = pacp::RandomStream::child(g.seed, 0);
    const pacp::Outcome out = pacp::gillespie_run(loaded.graph, ic, cc, rng);

    const ordered_json j = outcome_to_json(out, loaded.graph.n);
    std::cout << j.dump(2) << "\n";
    if (!g.out_dir.empty()) {
        std::filesystem::create_directories(g.out_dir);
        const auto path = std::filesystem::path(g.out_dir) / "simulate.json";
        std::ofstream f(path);
        f << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_sweep(const GlobalOpts& g, const CLI::App& cmd, std::int64_t n, int m,
              double alpha, const std::vector<double>& lambdas, double t,
              std::int64_t replicas, std::uint64_t event_cap) {
    const bool have_config = !g.config_path.empty();
    ExperimentConfig cfg = base_config(g, cmd, "sweep");
    override_if_set(cmd, "--n", cfg.n, n, have_config);
    override_if_set(cmd, "--m", cfg.m, m, have_config);
    override_if_set(cmd, "--alpha", cfg.alpha, alpha, have_config);
    override_if_set(cmd, "--lambdas", cfg.lambda_grid, lambdas, have_config);
    override_if_set(cmd, "--t", cfg.t, t, have_config);
    override_if_set(cmd, "--replicas", cfg.replicas, replicas, have_config);
    override_if_set(cmd, "--event-cap", cfg.event_cap, event_cap, have_config);

    const pacp::SweepResult res = pacp::run_lambda_sweep(cfg);
    for (const auto& pt : res.points)
        std::cout << "lambda=" << pacp::format_double(pt.lambda)
                  << " mean_density=" << pacp::format_double(pt.mean)
                  << " se=" << pacp::format_double(pt.se)
                  << " caps=" << pt.cap_count << "\n";
    std::cout << "free fit: b1=" << pacp::format_double(res.fit.beta[1])
              << " +- " << pacp::format_double(res.fit.se[1])
              << " b2=" << pacp::format_double(res.fit.beta[2])
              << " r2=" << pacp::format_double(res.fit.r_squared) << "\n";
    std::cout << "constrained (b2=-1/psi): b1="
              << pacp::format_double(res.fit.beta_constrained[1]) << " +- "
              << pacp::format_double(res.fit.se_constrained[1]) << "\n";
    return 0;
}

int cmd_tree(const GlobalOpts& g, const CLI::App& cmd, int m, double alpha,
             int depth, std::int64_t degree_cap, std::int64_t count,
             const std::string& out) {
    (void)cmd;
    const pacp::Constants c = pacp::derive_constants(m, alpha);
    if (count < 1) throw std::invalid_argument("tree: --count must be >= 1");
    for (std::int64_t i = 0; i < count; ++i) {
        pacp::RandomStream rng = pacp::RandomStream::child(g.seed, i);
        const pacp::PointTree tree = pacp::sample_ppt(c, depth, degree_cap, rng);
        std::string path;
        if (count == 1) {
            path = resolve_out_path(out, g.out_dir, "tree.pptree");
        } else {
            const std::string name = "tree_" + std::to_string(i) + ".pptree";
            path = out.empty()
                       ? resolve_out_path("", g.out_dir, name)
                       : (std::filesystem::path(out).parent_path() /
                          (std::filesystem::path(out).stem().string() + "_" +
                           std::to_string(i) +
                           std::filesystem::path(out).extension().string()))
                             .string();
        }
        ensure_parent_dir(path);
        pacp::write_tree(path, tree, g.seed, degree_cap);
        std::cout << "wrote " << path << " (nodes=" << tree.size()
                  << ", truncated=" << tree.truncated_nodes() << ")\n";
    }
    return 0;
}

int cmd_escape(const GlobalOpts& g, const CLI::App& cmd, int m, double alpha,
               int radius, const std::vector<double>& lambdas,
               std::int64_t replicas, std::int64_t trials_per_tree,
               std::int64_t degree_cap, std::uint64_t event_cap) {
    const bool have_config = !g.config_path.empty();
    ExperimentConfig cfg = base_config(g, cmd, "escape");
    override_if_set(cmd, "--m", cfg.m, m, have_config);
    override_if_set(cmd, "--alpha", cfg.alpha, alpha, have_config);
    override_if_set(cmd, "--radius", cfg.radius, radius, have_config);
    override_if_set(cmd, "--lambdas", cfg.lambda_grid, lambdas, have_config);
    override_if_set(cmd, "--replicas", cfg.replicas, replicas, have_config);
    override_if_set(cmd, "--trials-per-tree", cfg.trials_per_tree,
                    trials_per_tree, have_config);
    override_if_set(cmd, "--degree-cap", cfg.degree_cap, degree_cap, have_config);
    override_if_set(cmd, "--event-cap", cfg.event_cap, event_cap, have_config);

    const pacp::EscapeSweepResult res = pacp::run_escape_sweep(cfg);
    for (const auto& pt : res.points)
        std::cout << "lambda=" << pacp::format_double(pt.lambda)
                  << " escape_rate=" << pacp::format_double(pt.escape_rate)
                  << " se=" << pacp::format_double(pt.se)
                  << " trials=" << pt.trials
                  << " indeterminate=" << pt.indeterminate
                  << " truncation_rate=" << pacp::format_double(pt.truncation_rate)
                  << "\n";
    if (res.fit)
        std::cout << "free fit: b1=" << pacp::format_double(res.fit->beta[1])
                  << " +- " << pacp::format_double(res.fit->se[1])
                  << " r2=" << pacp::format_double(res.fit->r_squared) << "\n";
    return 0;
}

int cmd_star(const GlobalOpts& g, const CLI::App& cmd, double lambda,
             const std::vector<std::int64_t>& sizes, std::int64_t replicas,
             std::uint64_t event_cap,
             const std::vector<std::uint64_t>& event_caps) {
    const bool have_config = !g.config_path.empty();
    ExperimentConfig cfg = base_config(g, cmd, "star");
    override_if_set(cmd, "--lambda", cfg.lambda, lambda, have_config);
    override_if_set(cmd, "--sizes", cfg.sizes, sizes, have_config);
    override_if_set(cmd, "--replicas", cfg.replicas, replicas, have_config);
    override_if_set(cmd, "--event-cap", cfg.event_cap, event_cap, have_config);
    override_if_set(cmd, "--event-caps", cfg.event_caps, event_caps, have_config);

    const pacp::StarScalingResult res = pacp::run_star_scaling(cfg);
    for (const auto& pt : res.points)
        std::cout << "size=" << pt.size
                  << " median=" << pacp::format_double(pt.median)
                  << " log_median=" << pacp::format_double(pt.log_median)
                  << " caps=" << pt.cap_count
                  << (pt.median_censored ? " (median censored)" : "") << "\n";
    std::cout << "correlation(size, log_median)="
              << pacp::format_double(res.correlation) << "\n";
    return 0;
}

int cmd_check(const GlobalOpts& g, bool full) {
    const pacp::BatteryReport report = pacp::run_validation_battery(g.seed, !full);
    for (const auto& c : report.checks)
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": "
                  << c.detail << "\n";
    if (!g.out_dir.empty()) {
        std::filesystem::create_directories(g.out_dir);
        const auto path = std::filesystem::path(g.out_dir) / "battery.json";
        std::ofstream f(path);
        f << report.to_json_text();
    }
    std::cout << (report.all_pass ? "all checks passed" : "SOME CHECKS FAILED")
              << "\n";
    return report.all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"preferential-attachment contact-process toolkit"};
    app.require_subcommand(1);
    app.fallthrough(true);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "master seed");
    app.add_option("--threads", g.threads, "worker threads");
    app.add_option("--out-dir", g.out_dir, "directory for result files");
    app.add_option("--config", g.config_path, "JSON experiment config");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a graph to a file");
    std::int64_t gen_n = 0;
    int gen_m = 2;
    double gen_alpha = 0.0;
    std::string gen_model = "urn", gen_out, gen_weights_out;
    gen->add_option("--n", gen_n, "vertex count")->required();
    gen->add_option("--m", gen_m, "edges per new vertex");
    gen->add_option("--alpha", gen_alpha, "uniform-attachment weight");
    gen->add_option("--model", gen_model, "urn | sequential");
    gen->add_option("--out", gen_out, "output path (.pag)");
    gen->add_option("--weights-out", gen_weights_out, "urn weights path");

    // simulate
    auto* sim = app.add_subcommand("simulate",
                                   "contact process run from a graph file");
    std::string sim_graph, sim_init = "full";
    double sim_lambda = 1.0, sim_t = 10.0;
    int sim_vertex = 0;
    std::vector<double> sim_observe;
    std::uint64_t sim_cap = 100'000'000;
    std::int64_t sim_replicas = 1;
    sim->add_option("--graph", sim_graph, "PAGRAPH file");
    sim->add_option("--lambda", sim_lambda, "infection rate");
    sim->add_option("--t", sim_t, "time horizon");
    sim->add_option("--init", sim_init, "full | single");
    sim->add_option("--vertex", sim_vertex, "seed vertex for --init single");
    sim->add_option("--observe", sim_observe, "observation times")->delimiter(',');
    sim->add_option("--event-cap", sim_cap, "event budget");
    sim->add_option("--replicas", sim_replicas, "replicas (density config mode)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "density lambda sweep with fits");
    std::int64_t sw_n = 100000, sw_replicas = 30;
    int sw_m = 2;
    double sw_alpha = 0.0, sw_t = 100.0;
    std::vector<double> sw_lambdas;
    std::uint64_t sw_cap = 100'000'000;
    sweep->add_option("--n", sw_n, "graph size");
    sweep->add_option("--m", sw_m, "edges per new vertex");
    sweep->add_option("--alpha", sw_alpha, "uniform-attachment weight");
    sweep->add_option("--lambdas", sw_lambdas, "lambda grid")->delimiter(',');
    sweep->add_option("--t", sw_t, "time horizon");
    sweep->add_option("--replicas", sw_replicas, "replicas per lambda");
    sweep->add_option("--event-cap", sw_cap, "event budget per replica");

    // tree
    auto* tree = app.add_subcommand("tree", "sample Polya-point trees");
    int tr_m = 2, tr_depth = 2;
    double tr_alpha = 0.0;
    std::int64_t tr_cap = 1000, tr_count = 1;
    std::string tr_out;
    tree->add_option("--m", tr_m, "edges per new vertex");
    tree->add_option("--alpha", tr_alpha, "uniform-attachment weight");
    tree->add_option("--depth", tr_depth, "truncation depth");
    tree->add_option("--degree-cap", tr_cap, "R-child cap");
    tree->add_option("--count", tr_count, "number of trees");
    tree->add_option("--out", tr_out, "output path (.pptree)");

    // escape
    auto* esc = app.add_subcommand("escape", "escape-probability sweep on trees");
    int esc_m = 2, esc_radius = 3;
    double esc_alpha = 0.0;
    std::vector<double> esc_lambdas;
    std::int64_t esc_replicas = 1000, esc_trials = 20, esc_degree_cap = 100;
    std::uint64_t esc_cap = 100'000;
    esc->add_option("--m", esc_m, "edges per new vertex");
    esc->add_option("--alpha", esc_alpha, "uniform-attachment weight");
    esc->add_option("--radius", esc_radius, "escape radius R");
    esc->add_option("--lambdas", esc_lambdas, "lambda grid")->delimiter(',');
    esc->add_option("--replicas", esc_replicas, "trees per lambda");
    esc->add_option("--trials-per-tree", esc_trials, "trials per tree");
    esc->add_option("--degree-cap", esc_degree_cap, "R-child cap");
    esc->add_option("--event-cap", esc_cap, "event budget per trial");

    // star
    auto* star = app.add_subcommand("star", "star survival-time scaling");
    double st_lambda = 0.5;
    std::vector<std::int64_t> st_sizes;
    std::int64_t st_replicas = 1000;
    std::uint64_t st_cap = 10'000'000;
    std::vector<std::uint64_t> st_caps;
    star->add_option("--lambda", st_lambda, "infection rate");
    star->add_option("--sizes", st_sizes, "leaf counts")->delimiter(',');
    star->add_option("--replicas", st_replicas, "runs per size");
    star->add_option("--event-cap", st_cap, "event budget per run");
    star->add_option("--event-caps", st_caps, "per-size event budgets")
        ->delimiter(',');

    // check
    auto* check = app.add_subcommand("check", "run the validation battery");
    bool check_full = false;
    check->add_flag("--full", check_full, "full-depth battery");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed())
            return cmd_gen(g, *gen, gen_n, gen_m, gen_alpha, gen_model, gen_out,
                           gen_weights_out);
        if (sim->parsed())
            return cmd_simulate(g, *sim, sim_graph, sim_lambda, sim_t, sim_init,
                                sim_vertex, sim_observe, sim_cap, sim_replicas);
        if (sweep->parsed())
            return cmd_sweep(g, *sweep, sw_n, sw_m, sw_alpha, sw_lambdas, sw_t,
                             sw_replicas, sw_cap);
        if (tree->parsed())
            return cmd_tree(g, *tree, tr_m, tr_alpha, tr_depth, tr_cap, tr_count,
                            tr_out);
        if (esc->parsed())
            return cmd_escape(g, *esc, esc_m, esc_alpha, esc_radius, esc_lambdas,
                              esc_replicas, esc_trials, esc_degree_cap, esc_cap);
        if (star->parsed())
            return cmd_star(g, *star, st_lambda, st_sizes, st_replicas, st_cap,
                            st_caps);
        if (check->parsed()) return cmd_check(g, check_full);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
