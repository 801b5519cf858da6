#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "stablevol/analysis.hpp"
#include "stablevol/config.hpp"
#include "stablevol/csv.hpp"
#include "stablevol/model.hpp"
#include "stablevol/rng.hpp"
#include "stablevol/sampler.hpp"
#include "stablevol/scheme.hpp"

namespace stablevol {

/// Emit `n` standard stable variates as CSV (index,value).
inline void run_sample(const StableLaw& law, std::int64_t n, std::uint64_t seed,
                       const std::filesystem::path& out) {
    RngStream rng(seed, 0);
    const std::vector<std::string> header = {"index", "value"};
    std::vector<std::vector<std::string>> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        rows.push_back({format_int(i), format_double(law.sigma() * sample_standard(law, rng))});
    }
    emit_csv(header, rows, out);
}

/// Simulate `n_paths` trajectories and emit CSV (trajectory,step,time,value).
inline void run_simulate(const ModelParams& params, const StableLaw& law, const TimeGrid& grid,
                         std::int64_t n_paths, std::uint64_t seed,
                         const std::filesystem::path& out) {
    const std::vector<std::string> header = {"trajectory", "step", "time", "value"};
    std::vector<std::vector<std::string>> rows;
    rows.reserve(static_cast<std::size_t>(n_paths * (grid.n_steps + 1)));
    for (std::int64_t traj = 0; traj < n_paths; ++traj) {
        RngStream rng(seed, static_cast<std::uint64_t>(traj));
        std::vector<double> increments(static_cast<std::size_t>(grid.n_steps));
        const double scale = law.sigma() * std::pow(grid.delta, 1.0 / law.alpha());
        for (double& dL : increments) dL = scale * sample_standard(law, rng);
        const Path path = simulate_path(params, grid, increments);
        for (std::size_t k = 0; k < path.values.size(); ++k) {
            rows.push_back({format_int(traj), format_int(static_cast<std::int64_t>(k)),
                            format_double(static_cast<double>(k) * grid.delta),
                            format_double(path.values[k])});
        }
    }
    emit_csv(header, rows, out);
}

/// Result of one full convergence run: the per-alpha tables, in the order of
/// cfg.alphas.
struct ConvergenceResult {
    std::vector<ErrorTable> tables;
};

/// Run the full experiment described by cfg and write, under cfg.out_dir:
///   errors_alpha_<a>.csv   delta,error,stderr            (one per alpha)
///   loglog_alpha_<a>.dat   log10(delta) log10(error)     (gnuplot-ready)
///   slopes.csv             alpha,slope,stderr,target
///   plot.gp                gnuplot script for the .dat files
///   config.txt             the resolved configuration
/// Deterministic: the bytes depend only on cfg (including its seed), never
/// on the thread count.
inline ConvergenceResult run_convergence(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("run_convergence: cannot create '" + dir.string() + "': " + ec.message());

    ConvergenceResult result;
    std::vector<std::vector<std::string>> slope_rows;
    for (const double alpha : cfg.alphas) {
        ExperimentOptions opts;
        opts.horizon = cfg.horizon;
        opts.threads = cfg.threads;
        opts.sup_over_grid = cfg.sup_over_grid;
        const ErrorTable table =
            strong_error_experiment(cfg.model_for(alpha), cfg.law_for(alpha), cfg.deltas,
                                    cfg.delta_ref, cfg.q, cfg.m, cfg.master_seed, opts);

        const std::string tag = format_double(alpha);
        std::vector<std::vector<std::string>> err_rows;
        for (std::size_t i = 0; i < table.deltas.size(); ++i) {
            err_rows.push_back({format_double(table.deltas[i]), format_double(table.errors[i]),
                                format_double(table.standard_errors[i])});
        }
        const std::vector<std::string> err_header = {"delta", "error", "stderr"};
        emit_csv(err_header, err_rows, dir / ("errors_alpha_" + tag + ".csv"));

        {
            std::ofstream dat(dir / ("loglog_alpha_" + tag + ".dat"), std::ios::binary);
            if (!dat) throw IoError("run_convergence: cannot write loglog data for alpha " + tag);
            dat << "# log10(delta) log10(error)\n";
            for (std::size_t i = 0; i < table.deltas.size(); ++i) {
                dat << format_double(std::log10(table.deltas[i])) << ' '
                    << format_double(std::log10(table.errors[i])) << '\n';
            }
        }

        slope_rows.push_back({tag, format_double(table.fitted_slope),
                              format_double(table.slope_stderr),
                              format_double(1.0 / alpha)});
        result.tables.push_back(table);
    }

    const std::vector<std::string> slope_header = {"alpha", "slope", "stderr", "target"};
    emit_csv(slope_header, slope_rows, dir / "slopes.csv");

    {
        std::ofstream gp(dir / "plot.gp", std::ios::binary);
        if (!gp) throw IoError("run_convergence: cannot write plot.gp");
        gp << "set logscale xy\n"
              "set xlabel 'step size'\n"
              "set ylabel 'strong error'\n"
              "set key left top\n"
              "plot ";
        for (std::size_t i = 0; i < cfg.alphas.size(); ++i) {
            const std::string tag = format_double(cfg.alphas[i]);
            if (i > 0) gp << ", \\\n     ";
            gp << "'errors_alpha_" << tag << ".csv' using 1:2 skip 1 with linespoints"
               << " title 'alpha=" << tag << "'"
               << ", [x=" << format_double(cfg.deltas.front()) << ':'
               << format_double(cfg.deltas.back()) << "] x**(" << format_double(1.0 / cfg.alphas[i])
               << ") * " << format_double(result.tables[i].errors.front() /
                                          std::pow(cfg.deltas.front(), 1.0 / cfg.alphas[i]))
               << " dashtype 2 title 'order 1/" << tag << "'";
        }
        gp << '\n';
    }

    {
        std::ofstream cfg_out(dir / "config.txt", std::ios::binary);
        if (!cfg_out) throw IoError("run_convergence: cannot write config.txt");
        cfg_out << serialize_config(cfg);
    }
    return result;
}

}  // namespace stablevol
