// Command-line surface for the branching-random-walk toolkit: environment
// sampling, spectral reports, probability bounds, moment evolution, particle
// simulation, and parameter sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "brw/criteria.hpp"
#include "brw/env.hpp"
#include "brw/evolver.hpp"
#include "brw/io.hpp"
#include "brw/parallel.hpp"
#include "brw/probability.hpp"
#include "brw/rng.hpp"
#include "brw/sim.hpp"
#include "brw/spectral.hpp"
#include "brw/stats.hpp"

namespace {

using brw::io::fmt_double;

struct RunConfig {
    // model
    double lambda = 1.0;
    double kappa = 1.0;
    double c = 0.0;
    double p0 = 1.0;
    double pc = 0.0;
    double continuous_weight = 0.0;
    std::string continuous_family = "uniform";
    double beta_alpha = 1.0;
    double beta_beta = 1.0;
    // run parameters
    std::uint64_t seed = 0;
    bool seed_set = false;
    int half_width = brw::spectral::kDefaultHalfWidth;
    int max_half_width = 8 * brw::spectral::kDefaultHalfWidth;
    std::int64_t n_envs = 2000;
    std::int64_t n_replicas = 10000;
    double t_end = 10.0;
    double dt = 0.0;  // 0 = stability limit
    double tol = brw::spectral::kDefaultPositivityTol;
    double confidence = 0.95;
    std::string a_grid = "0.25,0.5,1,2,4";
    int l_max = 60;
    std::string lambda_grid;
    int y = 0;
    int site = 0;
    std::int64_t cap = 1000000;
    int checkpoints = 51;
    int threads = 0;
    bool per_replica = false;
    std::string out;
    std::string format;

    brw::env::EnvironmentSpec to_spec() const {
        brw::env::EnvironmentSpec spec;
        spec.lambda_source = lambda;
        spec.kappa = kappa;
        spec.c = c;
        spec.mu_dist.atom_at_zero_prob = p0;
        spec.mu_dist.atom_at_c_prob = pc;
        spec.mu_dist.continuous_weight = continuous_weight;
        if (continuous_family == "uniform") {
            spec.mu_dist.family = brw::env::ContinuousFamily::uniform;
        } else if (continuous_family == "scaled-beta") {
            spec.mu_dist.family = brw::env::ContinuousFamily::scaled_beta;
        } else {
            throw std::invalid_argument("unknown continuous family: " + continuous_family);
        }
        spec.mu_dist.beta_alpha = beta_alpha;
        spec.mu_dist.beta_beta = beta_beta;
        spec.validate();
        return spec;
    }

    std::string echo_json(const std::string& command) const {
        return brw::io::JsonObject{}
            .field("command", command)
            .field("lambda", lambda)
            .field("kappa", kappa)
            .field("c", c)
            .field("p0", p0)
            .field("pc", pc)
            .field("continuous-weight", continuous_weight)
            .field("continuous-family", continuous_family)
            .field("beta-alpha", beta_alpha)
            .field("beta-beta", beta_beta)
            .field("seed", seed)
            .field("half-width", half_width)
            .field("max-half-width", max_half_width)
            .field("n-envs", n_envs)
            .field("n-replicas", n_replicas)
            .field("t-end", t_end)
            .field("dt", dt)
            .field("tol", tol)
            .field("confidence", confidence)
            .field("a-grid", a_grid)
            .field("l-max", l_max)
            .field("lambda-grid", lambda_grid)
            .field("y", y)
            .field("site", site)
            .field("cap", cap)
            .field("checkpoints", checkpoints)
            .field("threads", threads)
            .str();
    }
};

std::vector<double> parse_grid_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) values.push_back(std::stod(token));
    }
    if (values.empty()) throw std::invalid_argument("empty list: " + text);
    return values;
}

std::vector<double> parse_range(const std::string& text) {
    // "lo:hi:step", inclusive of hi up to rounding.
    double lo = 0.0, hi = 0.0, step = 0.0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || !(step > 0.0)) {
        throw std::invalid_argument("expected lo:hi:step, got: " + text);
    }
    std::vector<double> values;
    for (int i = 0;; ++i) {
        const double v = lo + step * i;
        if (v > hi + step * 1e-9) break;
        values.push_back(v);
    }
    return values;
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "lambda") cfg.lambda = value.get<double>();
        else if (key == "kappa") cfg.kappa = value.get<double>();
        else if (key == "c") cfg.c = value.get<double>();
        else if (key == "p0") cfg.p0 = value.get<double>();
        else if (key == "pc") cfg.pc = value.get<double>();
        else if (key == "continuous-weight") cfg.continuous_weight = value.get<double>();
        else if (key == "continuous-family") cfg.continuous_family = value.get<std::string>();
        else if (key == "beta-alpha") cfg.beta_alpha = value.get<double>();
        else if (key == "beta-beta") cfg.beta_beta = value.get<double>();
        else if (key == "seed") { cfg.seed = value.get<std::uint64_t>(); cfg.seed_set = true; }
        else if (key == "half-width") cfg.half_width = value.get<int>();
        else if (key == "max-half-width") cfg.max_half_width = value.get<int>();
        else if (key == "n-envs") cfg.n_envs = value.get<std::int64_t>();
        else if (key == "n-replicas") cfg.n_replicas = value.get<std::int64_t>();
        else if (key == "t-end") cfg.t_end = value.get<double>();
        else if (key == "dt") cfg.dt = value.get<double>();
        else if (key == "tol") cfg.tol = value.get<double>();
        else if (key == "confidence") cfg.confidence = value.get<double>();
        else if (key == "a-grid") cfg.a_grid = value.get<std::string>();
        else if (key == "l-max") cfg.l_max = value.get<int>();
        else if (key == "lambda-grid") cfg.lambda_grid = value.get<std::string>();
        else if (key == "y") cfg.y = value.get<int>();
        else if (key == "site") cfg.site = value.get<int>();
        else if (key == "cap") cfg.cap = value.get<std::int64_t>();
        else if (key == "checkpoints") cfg.checkpoints = value.get<int>();
        else if (key == "threads") cfg.threads = value.get<int>();
        else if (key == "per-replica") cfg.per_replica = value.get<bool>();
        else if (key == "out") cfg.out = value.get<std::string>();
        else if (key == "format") cfg.format = value.get<std::string>();
        else throw std::invalid_argument("unknown config key: " + key);
    }
}

void require_seed(const RunConfig& cfg) {
    if (!cfg.seed_set) {
        throw std::invalid_argument("--seed is required (no wall-clock seeding)");
    }
}

brw::prob::EstimateOptions estimate_options(const RunConfig& cfg) {
    brw::prob::EstimateOptions opts;
    opts.initial_half_width = cfg.half_width;
    opts.max_half_width = cfg.max_half_width;
    opts.positivity_tol = cfg.tol;
    opts.confidence = cfg.confidence;
    return opts;
}

brw::prob::BoundsConfig bounds_config(const RunConfig& cfg) {
    brw::prob::BoundsConfig bc;
    bc.n_envs = cfg.n_envs;
    bc.seed = cfg.seed;
    bc.a_grid = parse_grid_list(cfg.a_grid);
    bc.l_max = cfg.l_max;
    bc.estimate = estimate_options(cfg);
    return bc;
}

std::string wrap_json(const RunConfig& cfg, const std::string& command,
                      const std::string& payload_key, const std::string& payload) {
    return brw::io::JsonObject{}
        .field_raw(payload_key, payload)
        .field_raw("config", cfg.echo_json(command))
        .str();
}

std::string bounds_csv_header() {
    return "lambda,kappa,c,p0,estimate,ci_low,ci_high,upper2,lower3,best_a,lower4,l_hat";
}

std::string bounds_csv_row(const RunConfig& cfg, double lambda,
                           const brw::prob::BoundsReport& report) {
    std::string row;
    row += fmt_double(lambda) + ',';
    row += fmt_double(cfg.kappa) + ',';
    row += fmt_double(cfg.c) + ',';
    row += fmt_double(cfg.p0) + ',';
    row += fmt_double(report.p_estimate.point) + ',';
    row += fmt_double(report.p_estimate.ci_low) + ',';
    row += fmt_double(report.p_estimate.ci_high) + ',';
    row += fmt_double(report.upper_thm2) + ',';
    row += fmt_double(report.lower_thm3) + ',';
    row += fmt_double(report.lower_thm3_best_a) + ',';
    row += fmt_double(report.lower_thm4) + ',';
    if (report.lower_thm4_l_hat) row += std::to_string(*report.lower_thm4_l_hat);
    return row;
}

std::string run_env_sample(const RunConfig& cfg) {
    require_seed(cfg);
    const auto window = brw::env::sample_environment(cfg.to_spec(), cfg.half_width, cfg.seed);
    return wrap_json(cfg, "env-sample", "window", window.to_json()) + "\n";
}

std::string run_spectrum(const RunConfig& cfg) {
    require_seed(cfg);
    const auto spec = cfg.to_spec();
    const auto window = brw::env::sample_environment(spec, cfg.half_width, cfg.seed);
    const auto report = brw::spectral::analyze(window, spec, cfg.tol);
    return wrap_json(cfg, "spectrum", "eigen_report", report.to_json()) + "\n";
}

std::string run_estimate_p(const RunConfig& cfg) {
    require_seed(cfg);
    const auto estimate =
        brw::prob::estimate_p_spectral(cfg.to_spec(), cfg.n_envs, cfg.seed, estimate_options(cfg));
    return wrap_json(cfg, "estimate-p", "estimate", estimate.to_json()) + "\n";
}

std::string run_bounds(const RunConfig& cfg) {
    require_seed(cfg);
    const auto report = brw::prob::bounds_report(cfg.to_spec(), bounds_config(cfg));
    if (cfg.format == "csv") {
        std::string text = "# config " + cfg.echo_json("bounds") + "\n";
        text += bounds_csv_header() + "\n";
        text += bounds_csv_row(cfg, cfg.lambda, report) + "\n";
        return text;
    }
    return wrap_json(cfg, "bounds", "bounds_report", report.to_json()) + "\n";
}

std::string run_evolve(const RunConfig& cfg) {
    require_seed(cfg);
    const auto spec = cfg.to_spec();
    const double dt = cfg.dt > 0.0 ? cfg.dt : brw::evolve::max_stable_dt(spec);
    const auto window = brw::env::sample_environment(spec, cfg.half_width, cfg.seed);
    const auto traj = brw::evolve::integrate_moments(window, spec, cfg.y, cfg.t_end, dt);
    std::string text = "# config " + cfg.echo_json("evolve") + "\n";
    text += "t,x,m1\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        for (int x = -traj.half_width; x <= traj.half_width; ++x) {
            text += fmt_double(traj.times[k]) + ',';
            text += std::to_string(x) + ',';
            text += fmt_double(traj.value(k, x)) + '\n';
        }
    }
    return text;
}

std::string run_simulate(const RunConfig& cfg) {
    require_seed(cfg);
    const auto spec = cfg.to_spec();
    const auto window = brw::env::sample_environment(spec, cfg.half_width, cfg.seed);
    brw::sim::SimOptions opts;
    opts.cap = cfg.cap;
    opts.start_site = cfg.site;
    opts.n_checkpoints = cfg.checkpoints;
    std::string text = "# config " + cfg.echo_json("simulate") + "\n";
    if (cfg.per_replica) {
        text += "replica,t,site,count\n";
        for (std::int64_t r = 0; r < cfg.n_replicas; ++r) {
            const auto states = brw::sim::simulate(window, spec, cfg.t_end,
                                                   brw::derive_seed(cfg.seed, r), opts);
            for (const auto& state : states) {
                for (int x = -window.half_width(); x <= window.half_width(); ++x) {
                    const auto count =
                        state.counts[static_cast<std::size_t>(x + window.half_width())];
                    if (count == 0) continue;
                    text += std::to_string(r) + ',';
                    text += fmt_double(state.time) + ',';
                    text += std::to_string(x) + ',';
                    text += std::to_string(count) + '\n';
                }
            }
        }
        return text;
    }
    const auto agg =
        brw::sim::run_replicas(window, spec, cfg.n_replicas, cfg.t_end, cfg.seed, opts);
    text += "t,site,mean,stderr,n_alive\n";
    for (std::size_t k = 0; k < agg.times.size(); ++k) {
        for (int x = -agg.half_width; x <= agg.half_width; ++x) {
            text += fmt_double(agg.times[k]) + ',';
            text += std::to_string(x) + ',';
            text += fmt_double(agg.mean(k, x)) + ',';
            text += fmt_double(agg.std_error(k, x)) + ',';
            text += std::to_string(agg.n_contributing[k]) + '\n';
        }
    }
    return text;
}

std::string run_sweep(const RunConfig& cfg) {
    require_seed(cfg);
    if (cfg.lambda_grid.empty()) {
        throw std::invalid_argument("sweep requires --lambda-grid lo:hi:step");
    }
    const auto grid = parse_range(cfg.lambda_grid);
    std::string text = "# config " + cfg.echo_json("sweep") + "\n";
    text += bounds_csv_header() + "\n";
    for (double lambda : grid) {
        RunConfig point = cfg;
        point.lambda = lambda;
        // Common random numbers: the seed (and so the environment stream) is
        // shared across the whole grid.
        const auto report = brw::prob::bounds_report(point.to_spec(), bounds_config(point));
        text += bounds_csv_row(point, lambda, report) + "\n";
    }
    return text;
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out);
    if (!out) throw std::invalid_argument("cannot open output path: " + cfg.out);
    out << text;
}

void add_options(CLI::App* cmd, RunConfig& cfg, std::string& config_path, bool& seed_flag) {
    cmd->add_option("--config", config_path, "JSON config file; flags override file values");
    cmd->add_option("--lambda", cfg.lambda, "reproduction intensity at the origin");
    cmd->add_option("--kappa", cfg.kappa, "walk intensity");
    cmd->add_option("--c", cfg.c, "upper bound of the killing support");
    cmd->add_option("--p0", cfg.p0, "probability of killing rate 0");
    cmd->add_option("--pc", cfg.pc, "probability of killing rate c");
    cmd->add_option("--continuous-weight", cfg.continuous_weight,
                    "weight of the continuous component on [0,c]");
    cmd->add_option("--continuous-family", cfg.continuous_family, "uniform | scaled-beta");
    cmd->add_option("--beta-alpha", cfg.beta_alpha, "scaled-beta shape alpha");
    cmd->add_option("--beta-beta", cfg.beta_beta, "scaled-beta shape beta");
    cmd->add_option("--seed", cfg.seed, "base seed (required for stochastic commands)")
        ->each([&seed_flag](const std::string&) { seed_flag = true; });
    cmd->add_option("--half-width", cfg.half_width, "lattice window radius");
    cmd->add_option("--max-half-width", cfg.max_half_width,
                    "adaptive enlargement ceiling for near-threshold verdicts");
    cmd->add_option("--n-envs", cfg.n_envs, "environments per Monte Carlo estimate");
    cmd->add_option("--n-replicas", cfg.n_replicas, "simulation replicas");
    cmd->add_option("--t-end", cfg.t_end, "time horizon");
    cmd->add_option("--dt", cfg.dt, "integrator step (default: stability limit)");
    cmd->add_option("--tol", cfg.tol, "positivity tolerance for spectral verdicts");
    cmd->add_option("--confidence", cfg.confidence, "confidence level for intervals");
    cmd->add_option("--a-grid", cfg.a_grid, "comma-separated test-function exponents");
    cmd->add_option("--l-max", cfg.l_max, "largest island radius tried");
    cmd->add_option("--lambda-grid", cfg.lambda_grid, "sweep grid lo:hi:step");
    cmd->add_option("--y", cfg.y, "moment source site");
    cmd->add_option("--site", cfg.site, "initial particle site / report site");
    cmd->add_option("--cap", cfg.cap, "population cap per replica");
    cmd->add_option("--checkpoints", cfg.checkpoints, "number of recording times");
    cmd->add_option("--threads", cfg.threads, "thread budget (BRW_THREADS overrides)");
    cmd->add_flag("--per-replica", cfg.per_replica, "emit per-replica counts instead of means");
    cmd->add_option("--out", cfg.out, "output path (default: stdout)");
    cmd->add_option("--format", cfg.format, "csv | json where both are supported");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"branching random walks on Z in a random killing environment"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    bool seed_flag = false;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"env-sample", "sample one killing environment and print it"},
        {"spectrum", "top eigenvalue report for one sampled environment"},
        {"estimate-p", "Monte Carlo probability of a positive eigenvalue"},
        {"bounds", "probability estimate plus closed-form bounds"},
        {"evolve", "integrate the first-moment equations"},
        {"simulate", "event-driven particle simulation"},
        {"sweep", "bounds across a lambda grid, CSV"},
    };
    for (const auto& [name, help] : commands) {
        add_options(app.add_subcommand(name, help), cfg, config_path, seed_flag);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        // File values fill in anything not given on the command line; re-parse
        // so explicit flags win.
        if (!config_path.empty()) {
            load_config_file(cfg, config_path);
            const bool seed_from_file = cfg.seed_set;
            app.clear();
            seed_flag = false;
            app.parse(argc, argv);
            cfg.seed_set = seed_from_file || seed_flag;
        } else {
            cfg.seed_set = seed_flag;
        }
        if (cfg.threads > 0) brw::set_max_threads(cfg.threads);

        std::string text;
        if (command == "env-sample") text = run_env_sample(cfg);
        else if (command == "spectrum") text = run_spectrum(cfg);
        else if (command == "estimate-p") text = run_estimate_p(cfg);
        else if (command == "bounds") text = run_bounds(cfg);
        else if (command == "evolve") text = run_evolve(cfg);
        else if (command == "simulate") text = run_simulate(cfg);
        else if (command == "sweep") text = run_sweep(cfg);
        emit(cfg, text);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
