#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "stablevol/lattice.hpp"
#include "stablevol/model.hpp"
#include "stablevol/rng.hpp"
#include "stablevol/sampler.hpp"
#include "stablevol/scheme.hpp"
#include "stablevol/stable_law.hpp"

namespace stablevol {

/// Strong-error estimates for one alpha across a ladder of step sizes,
/// with the fitted log-log convergence order.
struct ErrorTable {
    double alpha = 0.0;
    double q = 1.0;
    std::vector<double> deltas;           ///< strictly increasing
    std::vector<double> errors;           ///< Monte Carlo estimates of E|x_ref(T) - x_delta(T)|^q
    std::vector<double> standard_errors;  ///< normal-approximation SE per estimate
    std::int64_t m_trajectories = 0;
    std::int64_t excluded_trajectories = 0;  ///< faulted paths left out of the averages
    double fitted_slope = 0.0;
    double slope_stderr = 0.0;
};

struct FitResult {
    double slope;
    double std_error;
};

/// Ordinary least squares of log(error) against log(delta).
inline FitResult fit_order(std::span<const double> deltas, std::span<const double> errors) {
    const std::size_t n = deltas.size();
    if (n < 3 || errors.size() != n) {
        throw std::domain_error("fit_order: need at least 3 (delta, error) points");
    }
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(deltas[i] > 0.0) || !(errors[i] > 0.0)) {
            throw std::domain_error("fit_order: deltas and errors must be positive");
        }
        x[i] = std::log(deltas[i]);
        y[i] = std::log(errors[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        rss += r * r;
    }
    const double stderr_ =
        std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    return {slope, stderr_};
}

inline FitResult fit_order(const ErrorTable& table) {
    return fit_order(table.deltas, table.errors);
}

namespace detail {

/// Run fn(i) for i in [0, m) across `threads` workers. Work is claimed by
/// atomic index, so the execution order varies, but each index owns its own
/// output slot; callers reduce sequentially afterwards, which keeps results
/// bit-identical for every thread count.
template <typename Fn>
void parallel_trajectories(std::int64_t m, int threads, Fn&& fn) {
    if (threads <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        threads = hc > 0 ? static_cast<int>(hc) : 1;
    }
    threads = static_cast<int>(std::min<std::int64_t>(threads, std::max<std::int64_t>(m, 1)));
    if (threads <= 1) {
        for (std::int64_t i = 0; i < m; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= m) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

struct ExperimentOptions {
    double horizon = 1.0;
    int threads = 1;
    /// When true, the error functional is the max over coarse grid times of
    /// |x_ref(t) - x_delta(t)|^q instead of the terminal-time difference.
    bool sup_over_grid = false;
};

/// Coupled-path strong-error measurement: per trajectory, one lattice at
/// delta_ref drives the reference solution; blockwise sums of the same
/// lattice drive the solution at every coarser delta. The per-delta estimate
/// is the trajectory average of |x_ref(T) - x_delta(T)|^q. Deterministic
/// function of (inputs, master_seed), independent of the thread count.
inline ErrorTable strong_error_experiment(const ModelParams& params, const StableLaw& law,
                                          std::span<const double> deltas, double delta_ref,
                                          double q, std::int64_t m, std::uint64_t master_seed,
                                          const ExperimentOptions& opts = {}) {
    require_admissible(params);
    if (!(q >= 1.0) || !(q < params.alpha)) {
        throw std::domain_error("strong_error_experiment: q must lie in [1, alpha); moments of "
                                "order >= alpha need not exist");
    }
    if (m < 1) throw std::domain_error("strong_error_experiment: m must be >= 1");
    if (deltas.empty()) throw std::domain_error("strong_error_experiment: no step sizes given");

    const double window = delta_max(params);
    std::vector<double> sorted(deltas.begin(), deltas.end());
    std::sort(sorted.begin(), sorted.end());
    for (const double d : sorted) {
        if (!detail::is_power_of_two_value(d)) {
            throw std::domain_error("strong_error_experiment: step sizes must be powers of two");
        }
        if (!(d < window)) {
            throw std::domain_error("strong_error_experiment: delta " + std::to_string(d) +
                                    " outside the admissible window (0, " + std::to_string(window) +
                                    ")");
        }
    }
    if (!detail::is_power_of_two_value(delta_ref) || !(delta_ref <= sorted.front())) {
        throw std::domain_error("strong_error_experiment: delta_ref must be a power of two no "
                                "larger than the smallest delta");
    }

    const std::size_t n_levels = sorted.size();
    const TimeGrid ref_grid(delta_ref, opts.horizon);
    // One slot per (level, trajectory); faulted trajectories are marked NaN
    // and excluded from the averages afterwards.
    std::vector<std::vector<double>> samples(n_levels,
                                             std::vector<double>(static_cast<std::size_t>(m)));
    std::vector<std::uint8_t> faulted(static_cast<std::size_t>(m), 0);

    detail::parallel_trajectories(m, opts.threads, [&](std::int64_t traj) {
        RngStream rng(master_seed, static_cast<std::uint64_t>(traj));
        const NoiseLattice lattice = build_lattice(law, delta_ref, opts.horizon, rng);

        if (!opts.sup_over_grid) {
            const TerminalResult ref = simulate_terminal(params, ref_grid, lattice.increments);
            for (std::size_t lvl = 0; lvl < n_levels; ++lvl) {
                const TimeGrid grid(sorted[lvl], opts.horizon);
                const std::vector<double> coarse = aggregate(lattice, sorted[lvl]);
                const TerminalResult approx = simulate_terminal(params, grid, coarse);
                if (ref.faulted || approx.faulted) {
                    faulted[static_cast<std::size_t>(traj)] = 1;
                    samples[lvl][static_cast<std::size_t>(traj)] =
                        std::numeric_limits<double>::quiet_NaN();
                } else {
                    samples[lvl][static_cast<std::size_t>(traj)] =
                        std::pow(std::abs(ref.x_tilde_T - approx.x_tilde_T), q);
                }
            }
        } else {
            const Path ref = simulate_path(params, ref_grid, lattice.increments);
            for (std::size_t lvl = 0; lvl < n_levels; ++lvl) {
                const TimeGrid grid(sorted[lvl], opts.horizon);
                const std::vector<double> coarse = aggregate(lattice, sorted[lvl]);
                const Path approx = simulate_path(params, grid, coarse);
                if (ref.faulted || approx.faulted) {
                    faulted[static_cast<std::size_t>(traj)] = 1;
                    samples[lvl][static_cast<std::size_t>(traj)] =
                        std::numeric_limits<double>::quiet_NaN();
                    continue;
                }
                const auto ratio = static_cast<std::size_t>(
                    std::llround(sorted[lvl] / delta_ref));
                double worst = 0.0;
                for (std::size_t j = 0; j < approx.values.size(); ++j) {
                    const double diff =
                        std::abs(ref.values[j * ratio] - approx.values[j]);
                    worst = std::max(worst, diff);
                }
                samples[lvl][static_cast<std::size_t>(traj)] = std::pow(worst, q);
            }
        }
    });

    ErrorTable table;
    table.alpha = params.alpha;
    table.q = q;
    table.deltas = sorted;
    table.m_trajectories = m;
    for (std::int64_t traj = 0; traj < m; ++traj) {
        table.excluded_trajectories += faulted[static_cast<std::size_t>(traj)];
    }
    const std::int64_t kept = m - table.excluded_trajectories;
    if (kept < 2) {
        throw std::runtime_error("strong_error_experiment: fewer than two usable trajectories");
    }
    for (std::size_t lvl = 0; lvl < n_levels; ++lvl) {
        double sum = 0.0;
        for (std::int64_t traj = 0; traj < m; ++traj) {
            if (!faulted[static_cast<std::size_t>(traj)]) {
                sum += samples[lvl][static_cast<std::size_t>(traj)];
            }
        }
        const double mean = sum / static_cast<double>(kept);
        double ss = 0.0;
        for (std::int64_t traj = 0; traj < m; ++traj) {
            if (!faulted[static_cast<std::size_t>(traj)]) {
                const double d = samples[lvl][static_cast<std::size_t>(traj)] - mean;
                ss += d * d;
            }
        }
        const double var = ss / static_cast<double>(kept - 1);
        table.errors.push_back(mean);
        table.standard_errors.push_back(std::sqrt(var / static_cast<double>(kept)));
    }
    // A slope needs >= 3 positive error estimates; degenerate tables (for
    // example a self-comparison against delta_ref) stay fit-free.
    const bool fittable = n_levels >= 3 && std::all_of(table.errors.begin(), table.errors.end(),
                                                       [](double e) { return e > 0.0; });
    if (fittable) {
        const FitResult fit = fit_order(table.deltas, table.errors);
        table.fitted_slope = fit.slope;
        table.slope_stderr = fit.std_error;
    } else {
        table.fitted_slope = std::numeric_limits<double>::quiet_NaN();
        table.slope_stderr = std::numeric_limits<double>::quiet_NaN();
    }
    return table;
}

/// Positivity summary over a batch of simulated paths.
struct PositivityReport {
    double min_value = std::numeric_limits<double>::infinity();
    std::int64_t violations = 0;       ///< grid values strictly below delta (beyond t=0)
    std::int64_t total_steps = 0;
    std::int64_t truncated_steps = 0;
    double truncation_frequency = 0.0;
    std::int64_t faulted_paths = 0;
};

/// Scan every stored grid value; the clamp makes violations impossible by
/// construction, and the audit proves it ran by reporting the count anyway.
inline PositivityReport positivity_audit(std::span<const Path> paths) {
    PositivityReport report;
    for (const Path& p : paths) {
        if (p.faulted) {
            ++report.faulted_paths;
            continue;
        }
        for (std::size_t k = 1; k < p.values.size(); ++k) {
            if (p.values[k] < p.grid.delta) ++report.violations;
            report.min_value = std::min(report.min_value, p.values[k]);
        }
        if (!p.values.empty()) report.min_value = std::min(report.min_value, p.values[0]);
        report.total_steps += static_cast<std::int64_t>(p.values.size()) - 1;
        report.truncated_steps += p.truncation_count;
    }
    if (report.total_steps > 0) {
        report.truncation_frequency = static_cast<double>(report.truncated_steps) /
                                      static_cast<double>(report.total_steps);
    }
    return report;
}

/// Empirical q-th moments along the grid.
struct MomentReport {
    double q = 1.0;
    std::vector<double> grid_means;  ///< mean of value^q at each grid time
    double max_over_grid = 0.0;
    /// max-over-grid recomputed from the first half of the paths, divided by
    /// the full-sample value: a stability ratio under doubling of m.
    double half_sample_ratio = 1.0;
};

inline MomentReport moment_audit(std::span<const Path> paths, double q, double alpha) {
    if (!(q >= 1.0) || !(q < alpha)) {
        throw std::domain_error("moment_audit: q must lie in [1, alpha); moments of order >= "
                                "alpha need not exist for the driving noise");
    }
    if (paths.empty()) throw std::domain_error("moment_audit: no paths given");
    const std::size_t n_times = paths.front().values.size();
    std::vector<double> sums(n_times, 0.0);
    std::vector<double> half_sums(n_times, 0.0);
    std::int64_t kept = 0;
    const std::size_t half = (paths.size() + 1) / 2;
    std::int64_t kept_half = 0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const Path& p = paths[i];
        if (p.faulted) continue;
        if (p.values.size() != n_times) {
            throw std::domain_error("moment_audit: paths must share one grid");
        }
        ++kept;
        const bool in_half = i < half;
        if (in_half) ++kept_half;
        for (std::size_t k = 0; k < n_times; ++k) {
            const double v = std::pow(p.values[k], q);
            sums[k] += v;
            if (in_half) half_sums[k] += v;
        }
    }
    if (kept == 0) throw std::domain_error("moment_audit: all paths faulted");

    MomentReport report;
    report.q = q;
    report.grid_means.resize(n_times);
    double max_full = 0.0, max_half = 0.0;
    for (std::size_t k = 0; k < n_times; ++k) {
        report.grid_means[k] = sums[k] / static_cast<double>(kept);
        max_full = std::max(max_full, report.grid_means[k]);
        if (kept_half > 0) {
            max_half = std::max(max_half, half_sums[k] / static_cast<double>(kept_half));
        }
    }
    report.max_over_grid = max_full;
    report.half_sample_ratio = (max_full > 0.0) ? max_half / max_full : 1.0;
    return report;
}

}  // namespace stablevol
