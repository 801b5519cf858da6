#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stablevol/stablevol.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitCheckFailed = 3;

struct CheckParamsArgs {
    double alpha = 1.8;
    double mu = 1.5;
    double lambda = 2.0;
    double kappa = 0.5;
    double x0 = 1.0;
};

int cmd_check_params(const CheckParamsArgs& args) {
    const stablevol::ModelParams params{args.mu, args.lambda, args.kappa, args.x0, args.alpha};
    const stablevol::AssumptionReport report = stablevol::validate(params);
    auto line = [](const char* name, bool ok) {
        std::cout << "  " << name << ": " << (ok ? "pass" : "FAIL") << '\n';
    };
    std::cout << "C_alpha    = " << stablevol::format_double(report.c_alpha) << '\n';
    std::cout << "threshold  = " << stablevol::format_double(report.threshold)
              << "  (lambda must exceed 2*kappa^0.5*C_alpha/(2*alpha-1))\n";
    std::cout << "delta_max  = " << stablevol::format_double(report.delta_max)
              << "  (admissible steps: 0 < delta < min((mu-1)/lambda, 1/lambda))\n";
    std::cout << "jump_floor = " << stablevol::format_double(report.jump_floor)
              << "  (hypothesised lower bound on negative jumps; not enforced)\n";
    line("1 < alpha < 2", report.alpha_ok);
    line("mu > 1", report.mu_ok);
    line("lambda > 0", report.lambda_ok);
    line("0 < kappa < 1", report.kappa_ok);
    line("x0 > 0", report.x0_ok);
    line("lambda > threshold", report.reversion_ok);
    std::cout << (report.all_pass() ? "all conditions hold" : "conditions violated") << '\n';
    return report.all_pass() ? kExitOk : kExitValidation;
}

struct SampleArgs {
    double alpha = 1.5;
    double beta = 0.0;
    double sigma = 1.0;
    std::int64_t n = 1000;
    std::uint64_t seed = 1;
    std::string out = "sample.csv";
};

int cmd_sample(const SampleArgs& args) {
    const stablevol::StableLaw law(args.alpha, args.beta, args.sigma);
    stablevol::run_sample(law, args.n, args.seed, args.out);
    std::cout << "wrote " << args.n << " variates to " << args.out << '\n';
    return kExitOk;
}

struct SimulateArgs {
    double alpha = 1.8;
    double beta = 0.0;
    double mu = 1.5;
    double lambda = 2.0;
    double kappa = 0.5;
    double x0 = 1.0;
    std::string delta = "2^-10";  // dyadic 2^-k tokens accepted
    double horizon = 1.0;
    std::int64_t paths = 3;
    std::uint64_t seed = 1;
    std::string out = "paths.csv";
};

int cmd_simulate(const SimulateArgs& args) {
    const stablevol::ModelParams params{args.mu, args.lambda, args.kappa, args.x0, args.alpha};
    stablevol::require_admissible(params);
    const stablevol::StableLaw law(args.alpha, args.beta, 1.0);
    const stablevol::TimeGrid grid(stablevol::detail::parse_real_token(args.delta), args.horizon);
    stablevol::run_simulate(params, law, grid, args.paths, args.seed, args.out);
    std::cout << "wrote " << args.paths << " trajectories (" << grid.n_steps + 1
              << " points each) to " << args.out << '\n';
    return kExitOk;
}

struct ConvergenceArgs {
    stablevol::ExperimentConfig cfg;
    std::optional<std::string> preset;
    std::optional<std::string> config_file;
    bool paper_scale = false;
    bool check = false;
    std::vector<std::string> overrides;  // key=value pairs collected from flags
};

int cmd_convergence(ConvergenceArgs& args) {
    stablevol::ExperimentConfig cfg =
        args.preset ? stablevol::preset_config(*args.preset) : stablevol::ExperimentConfig{};
    if (args.config_file) stablevol::load_config_file(cfg, *args.config_file);
    if (args.paper_scale) cfg.apply_paper_scale();
    for (const std::string& kv : args.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw std::domain_error("--set expects key=value, got '" + kv + "'");
        }
        stablevol::apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    const stablevol::ConvergenceResult result = stablevol::run_convergence(cfg);

    bool all_in_band = true;
    for (const stablevol::ErrorTable& table : result.tables) {
        const double target = 1.0 / table.alpha;
        const bool in_band = std::abs(table.fitted_slope - target) <= 0.20;
        all_in_band = all_in_band && in_band;
        std::cout << "alpha " << stablevol::format_double(table.alpha) << ": slope "
                  << stablevol::format_double(table.fitted_slope) << " (target "
                  << stablevol::format_double(target) << ", stderr "
                  << stablevol::format_double(table.slope_stderr) << ")"
                  << (args.check ? (in_band ? "  [ok]" : "  [out of band]") : "") << '\n';
        if (table.excluded_trajectories > 0) {
            std::cout << "  excluded faulted trajectories: " << table.excluded_trajectories
                      << " of " << table.m_trajectories << '\n';
        }
    }
    std::cout << "results written to " << cfg.out_dir << '\n';
    if (args.check && !all_in_band) {
        std::cout << "check failed: at least one fitted slope misses 1/alpha +/- 0.20\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo toolkit for a linear stochastic volatility model driven by a "
                 "strictly stable process, with a positivity preserving explicit scheme"};
    app.require_subcommand(1);

    CheckParamsArgs check_args;
    auto* check = app.add_subcommand("check-params", "evaluate the model admissibility conditions");
    check->add_option("--alpha", check_args.alpha, "stability index in (1,2)")->capture_default_str();
    check->add_option("--mu", check_args.mu, "drift level")->capture_default_str();
    check->add_option("--lambda", check_args.lambda, "mean-reversion rate")->capture_default_str();
    check->add_option("--kappa", check_args.kappa, "volatility of volatility")->capture_default_str();
    check->add_option("--x0", check_args.x0, "initial value")->capture_default_str();

    SampleArgs sample_args;
    auto* sample = app.add_subcommand("sample", "draw stable variates to CSV (index,value)");
    sample->add_option("--alpha", sample_args.alpha, "stability index in (1,2)")->capture_default_str();
    sample->add_option("--beta", sample_args.beta, "skewness in [-1,1]")->capture_default_str();
    sample->add_option("--sigma", sample_args.sigma, "scale > 0")->capture_default_str();
    sample->add_option("--n", sample_args.n, "number of draws")->capture_default_str();
    sample->add_option("--seed", sample_args.seed, "master seed")->capture_default_str();
    sample->add_option("--out", sample_args.out, "output CSV path")->capture_default_str();

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate",
                                   "simulate trajectories to CSV (trajectory,step,time,value)");
    sim->add_option("--alpha", sim_args.alpha, "stability index in (1,2)")->capture_default_str();
    sim->add_option("--beta", sim_args.beta, "skewness in [-1,1]")->capture_default_str();
    sim->add_option("--mu", sim_args.mu, "drift level")->capture_default_str();
    sim->add_option("--lambda", sim_args.lambda, "mean-reversion rate")->capture_default_str();
    sim->add_option("--kappa", sim_args.kappa, "volatility of volatility")->capture_default_str();
    sim->add_option("--x0", sim_args.x0, "initial value")->capture_default_str();
    sim->add_option("--delta", sim_args.delta, "step size (2^-k accepted)")->capture_default_str();
    sim->add_option("--horizon", sim_args.horizon, "time horizon T")->capture_default_str();
    sim->add_option("--paths", sim_args.paths, "number of trajectories")->capture_default_str();
    sim->add_option("--seed", sim_args.seed, "master seed")->capture_default_str();
    sim->add_option("--out", sim_args.out, "output CSV path")->capture_default_str();

    ConvergenceArgs conv_args;
    auto* conv = app.add_subcommand("convergence",
                                    "coupled-path strong-error tables and order fits");
    std::string preset, config_file, alphas_csv, deltas_csv;
    conv->add_option("--preset", preset, "parameter preset: table1, table2 or table3");
    conv->add_option("--config", config_file, "key=value config file");
    conv->add_flag("--paper-scale", conv_args.paper_scale,
                   "full-size grid: ref 2^-16, deltas 2^-10..2^-14, m=1000");
    conv->add_flag("--check", conv_args.check,
                   "exit 3 unless every fitted slope lies within 1/alpha +/- 0.20");
    conv->add_option("--alpha", alphas_csv, "comma-separated list of stability indices");
    conv->add_option("--deltas", deltas_csv, "comma-separated step sizes (2^-k accepted)");
    std::string ref_str, q_str, m_str, seed_str, out_str, threads_str, mu_str, lambda_str,
        kappa_str, x0_str, horizon_str, beta_str;
    conv->add_option("--ref", ref_str, "reference step size (2^-k accepted)");
    conv->add_option("--q", q_str, "moment order in [1, alpha)");
    conv->add_option("--m", m_str, "trajectories per step size");
    conv->add_option("--seed", seed_str, "master seed");
    conv->add_option("--out", out_str, "output directory");
    conv->add_option("--threads", threads_str, "worker threads (results identical for any count)");
    conv->add_option("--mu", mu_str, "drift level");
    conv->add_option("--lambda", lambda_str, "mean-reversion rate");
    conv->add_option("--kappa", kappa_str, "volatility of volatility");
    conv->add_option("--x0", x0_str, "initial value");
    conv->add_option("--horizon", horizon_str, "time horizon T");
    conv->add_option("--beta", beta_str, "skewness of the driving noise");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (check->parsed()) return cmd_check_params(check_args);
        if (sample->parsed()) return cmd_sample(sample_args);
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (conv->parsed()) {
            if (!preset.empty()) conv_args.preset = preset;
            if (!config_file.empty()) conv_args.config_file = config_file;
            auto push = [&conv_args](const char* key, const std::string& value) {
                if (!value.empty()) conv_args.overrides.push_back(std::string(key) + "=" + value);
            };
            push("alphas", alphas_csv);
            push("deltas", deltas_csv);
            push("ref", ref_str);
            push("q", q_str);
            push("m", m_str);
            push("seed", seed_str);
            push("out", out_str);
            push("threads", threads_str);
            push("mu", mu_str);
            push("lambda", lambda_str);
            push("kappa", kappa_str);
            push("x0", x0_str);
            push("horizon", horizon_str);
            push("beta", beta_str);
            return cmd_convergence(conv_args);
        }
    } catch (const stablevol::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitOk;
}
