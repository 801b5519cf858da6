#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stablevol/model.hpp"

namespace stablevol {

/// Uniform time grid with step delta on [0, horizon]; covers the first
/// n_steps = floor(horizon/delta) whole steps, any fractional remainder of
/// the horizon is not simulated.
struct TimeGrid {
    TimeGrid(double delta_, double horizon_) : delta(delta_), horizon(horizon_) {
        if (!(delta > 0.0)) throw std::domain_error("TimeGrid: delta must be positive");
        if (!(horizon > 0.0)) throw std::domain_error("TimeGrid: horizon must be positive");
        n_steps = static_cast<std::int64_t>(std::floor(horizon / delta));
        if (n_steps < 1) throw std::domain_error("TimeGrid: horizon shorter than one step");
    }

    double delta;
    double horizon;
    std::int64_t n_steps;
};

/// State of the positivity preserving recursion after step_index steps.
/// x_raw may dip to delta or below transiently; x_tilde is the clamped value
/// max(x_raw, delta) that feeds both the drift and the diffusion.
struct SchemeState {
    double x_raw;
    double x_tilde;
    std::int64_t step_index = 0;
    std::int64_t truncation_count = 0;
};

/// One discrete trajectory: the clamped values at t_0..t_N. `faulted` marks
/// a trajectory that met a non-finite noise increment; such paths are kept
/// (never silently dropped) so callers can count and exclude them.
struct Path {
    TimeGrid grid;
    std::vector<double> values;
    std::int64_t truncation_count = 0;
    bool faulted = false;
};

/// Advance the recursion one step:
///
///   x_raw'   = x_raw + (mu - lambda x_tilde) delta + kappa x_tilde dL
///   x_tilde' = max(x_raw', delta)
///
/// The clamped state enters both the drift and the diffusion; the update is
/// anchored at the raw state. truncation_count increments exactly when the
/// clamp engages (x_raw' < delta).
inline SchemeState em_step(const SchemeState& s, const ModelParams& p, double delta, double dL) {
    const double x_next =
        s.x_raw + (p.mu - p.lambda * s.x_tilde) * delta + p.kappa * s.x_tilde * dL;
    SchemeState out;
    out.x_raw = x_next;
    out.x_tilde = (x_next >= delta) ? x_next : delta;
    out.step_index = s.step_index + 1;
    out.truncation_count = s.truncation_count + ((x_next < delta) ? 1 : 0);
    return out;
}

/// Run the recursion over the whole grid. Deterministic function of
/// (params, grid, increments); the result holds N+1 clamped values starting
/// at x0. A non-finite increment flags the path as faulted and freezes the
/// remaining values at the last good state.
inline Path simulate_path(const ModelParams& params, const TimeGrid& grid,
                          std::span<const double> increments) {
    if (static_cast<std::int64_t>(increments.size()) != grid.n_steps) {
        throw std::domain_error("simulate_path: expected " + std::to_string(grid.n_steps) +
                                " increments, got " + std::to_string(increments.size()));
    }
    require_admissible(params);
    if (!(grid.delta < delta_max(params))) {
        throw std::domain_error("simulate_path: delta " + std::to_string(grid.delta) +
                                " outside the admissible window (0, " +
                                std::to_string(delta_max(params)) + ")");
    }

    Path path{grid, {}, 0, false};
    path.values.resize(static_cast<std::size_t>(grid.n_steps) + 1);
    path.values[0] = params.x0;

    SchemeState s{params.x0, params.x0, 0, 0};
    for (std::int64_t k = 0; k < grid.n_steps; ++k) {
        const double dL = increments[static_cast<std::size_t>(k)];
        if (!std::isfinite(dL)) {
            path.faulted = true;
            for (std::int64_t j = k; j < grid.n_steps; ++j) {
                path.values[static_cast<std::size_t>(j) + 1] = s.x_tilde;
            }
            break;
        }
        s = em_step(s, params, grid.delta, dL);
        path.values[static_cast<std::size_t>(k) + 1] = s.x_tilde;
    }
    path.truncation_count = s.truncation_count;
    return path;
}

/// Terminal-value summary of one trajectory, for callers that do not need
/// the whole path in memory.
struct TerminalResult {
    double x_tilde_T;
    double min_value;
    std::int64_t truncation_count;
    bool faulted;
};

/// Same recursion as simulate_path without materialising the values.
inline TerminalResult simulate_terminal(const ModelParams& params, const TimeGrid& grid,
                                        std::span<const double> increments) {
    if (static_cast<std::int64_t>(increments.size()) != grid.n_steps) {
        throw std::domain_error("simulate_terminal: expected " + std::to_string(grid.n_steps) +
                                " increments, got " + std::to_string(increments.size()));
    }
    SchemeState s{params.x0, params.x0, 0, 0};
    double min_value = params.x0;
    for (std::int64_t k = 0; k < grid.n_steps; ++k) {
        const double dL = increments[static_cast<std::size_t>(k)];
        if (!std::isfinite(dL)) return {s.x_tilde, min_value, s.truncation_count, true};
        s = em_step(s, params, grid.delta, dL);
        if (s.x_tilde < min_value) min_value = s.x_tilde;
    }
    return {s.x_tilde, min_value, s.truncation_count, false};
}

}  // namespace stablevol
