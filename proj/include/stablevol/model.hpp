#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stablevol {

/// Normalisation constant of the stable Levy measure nu(dz) = C_alpha |z|^(-alpha-1) dz:
///
///   C_alpha = alpha 2^(alpha-1) Gamma((alpha+1)/2) / ( sqrt(pi) Gamma(1 - alpha/2) ).
///
/// Finite and positive on all of (1,2); Gamma(1 - alpha/2) has a pole at
/// alpha = 2, so the endpoints are rejected.
inline double compute_c_alpha(double alpha) {
    if (!(alpha > 1.0) || !(alpha < 2.0)) {
        throw std::domain_error("compute_c_alpha: alpha must lie strictly in (1,2), got " +
                                std::to_string(alpha));
    }
    return alpha * std::exp2(alpha - 1.0) * std::tgamma(0.5 * (alpha + 1.0)) /
           (std::sqrt(std::numbers::pi) * std::tgamma(1.0 - 0.5 * alpha));
}

/// Coefficients of the linear stochastic volatility equation
///   dx(t) = (mu - lambda x(t)) dt + kappa x(t-) dL(t),   x(0) = x0,
/// driven by a strictly stable process with index alpha.
struct ModelParams {
    double mu;      ///< drift level
    double lambda;  ///< mean-reversion rate
    double kappa;   ///< volatility of volatility
    double x0;      ///< initial value
    double alpha;   ///< stability index of the driving noise

    /// Fixed point of the deterministic drift x' = mu - lambda x.
    double mean_reversion_level() const { return mu / lambda; }
};

/// Outcome of checking the model admissibility conditions. Failures are
/// reported, never thrown: inspecting an inadmissible parameter set is a
/// legitimate use of the library.
struct AssumptionReport {
    double c_alpha = std::numeric_limits<double>::quiet_NaN();
    /// Mean-reversion dominance bound 2 kappa^(1/2) C_alpha / (2 alpha - 1);
    /// lambda must exceed it.
    double threshold = std::numeric_limits<double>::quiet_NaN();
    /// Admissible step-size window (0, delta_max) for the scheme,
    /// delta_max = min((mu-1)/lambda, 1/lambda).
    double delta_max = std::numeric_limits<double>::quiet_NaN();
    /// Hypothesised lower bound -1/kappa on negative jump heights. This is a
    /// model-level assumption about the noise, reported for information only;
    /// sampled increments are never clipped to it, because altering the noise
    /// law would change the solution the scheme converges to. Positivity of
    /// the discrete scheme is enforced by its own clamp instead.
    double jump_floor = std::numeric_limits<double>::quiet_NaN();

    bool alpha_ok = false;        ///< 1 < alpha < 2
    bool mu_ok = false;           ///< mu > 1
    bool lambda_ok = false;       ///< lambda > 0
    bool kappa_ok = false;        ///< 0 < kappa < 1
    bool x0_ok = false;           ///< x0 > 0
    bool reversion_ok = false;    ///< lambda > threshold

    bool all_pass() const {
        return alpha_ok && mu_ok && lambda_ok && kappa_ok && x0_ok && reversion_ok;
    }
};

/// Evaluate every admissibility inequality for the given parameters.
/// Pure: identical inputs produce identical reports.
inline AssumptionReport validate(const ModelParams& p) {
    AssumptionReport r;
    r.alpha_ok = (p.alpha > 1.0) && (p.alpha < 2.0);
    r.mu_ok = p.mu > 1.0;
    r.lambda_ok = p.lambda > 0.0;
    r.kappa_ok = (p.kappa > 0.0) && (p.kappa < 1.0);
    r.x0_ok = p.x0 > 0.0;
    if (r.alpha_ok) {
        r.c_alpha = compute_c_alpha(p.alpha);
        if (p.kappa > 0.0) {
            r.threshold = 2.0 * std::sqrt(p.kappa) * r.c_alpha / (2.0 * p.alpha - 1.0);
            r.reversion_ok = p.lambda > r.threshold;
        }
    }
    if (p.lambda != 0.0) {
        r.delta_max = std::min((p.mu - 1.0) / p.lambda, 1.0 / p.lambda);
    }
    if (p.kappa != 0.0) {
        r.jump_floor = -1.0 / p.kappa;
    }
    return r;
}

/// Upper end of the admissible step-size window for validated parameters.
inline double delta_max(const ModelParams& p) {
    return std::min((p.mu - 1.0) / p.lambda, 1.0 / p.lambda);
}

/// Throw unless the parameters satisfy every admissibility condition.
/// The message names each violated inequality.
inline void require_admissible(const ModelParams& p) {
    const AssumptionReport r = validate(p);
    if (r.all_pass()) return;
    std::string msg = "model parameters violate admissibility conditions:";
    if (!r.alpha_ok) msg += " [1 < alpha < 2]";
    if (!r.mu_ok) msg += " [mu > 1]";
    if (!r.lambda_ok) msg += " [lambda > 0]";
    if (!r.kappa_ok) msg += " [0 < kappa < 1]";
    if (!r.x0_ok) msg += " [x0 > 0]";
    if (!r.reversion_ok) {
        msg += " [lambda > 2*kappa^0.5*C_alpha/(2*alpha-1) = " + std::to_string(r.threshold) + "]";
    }
    throw std::invalid_argument(msg);
}

}  // namespace stablevol
