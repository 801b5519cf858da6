#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>

#include "stablevol/rng.hpp"
#include "stablevol/stable_law.hpp"

namespace stablevol {

/// Draw one standard strictly stable variate X ~ S_alpha(1, beta, 0) with the
/// Chambers-Mallows-Stuck transform (exact and rejection-free for alpha != 1):
/// with U uniform on (-pi/2, pi/2), W standard exponential,
/// B = arctan(beta tan(pi alpha/2))/alpha and
/// S = (1 + beta^2 tan^2(pi alpha/2))^(1/(2 alpha)),
///
///   X = S * sin(alpha (U + B)) / cos(U)^(1/alpha)
///         * ( cos(U - alpha (U + B)) / W )^((1-alpha)/alpha).
///
/// The scale parameter of the law is deliberately not applied here; callers
/// that need S_alpha(sigma, beta, 0) multiply by sigma (see sample_increment).
/// Degenerate draws that land on a floating-point singularity are re-drawn;
/// the returned value is always finite.
template <RandomSource Rng>
double sample_standard(const StableLaw& law, Rng& rng) {
    const double alpha = law.alpha();
    const double inv_alpha = 1.0 / alpha;
    const double tail_exp = (1.0 - alpha) * inv_alpha;
    const double shift = law.skew_shift();
    const double scale = law.skew_scale();

    for (;;) {
        const double u = std::numbers::pi * (rng.uniform_open01() - 0.5);
        const double w = rng.exponential();
        const double au = alpha * (u + shift);
        const double x = scale * std::sin(au) / std::pow(std::cos(u), inv_alpha) *
                         std::pow(std::cos(u - au) / w, tail_exp);
        if (std::isfinite(x)) return x;
    }
}

/// Increment of the stable process over a window of length dt:
/// L(t+dt) - L(t) ~ S_alpha(sigma dt^(1/alpha), beta, 0). Constructed exactly
/// as dt^(1/alpha) * sigma * sample_standard, so the self-similarity scaling
/// holds pathwise, not only in law.
template <RandomSource Rng>
double sample_increment(const StableLaw& law, double dt, Rng& rng) {
    if (!(dt > 0.0)) {
        throw std::domain_error("sample_increment: dt must be positive");
    }
    return std::pow(dt, 1.0 / law.alpha()) * law.sigma() * sample_standard(law, rng);
}

/// Empirical characteristic function (1/n) sum_j exp(i u x_j).
inline std::complex<double> empirical_cf(std::span<const double> samples, double u) {
    if (samples.empty()) {
        throw std::domain_error("empirical_cf: sample set must be non-empty");
    }
    double re = 0.0;
    double im = 0.0;
    for (const double x : samples) {
        re += std::cos(u * x);
        im += std::sin(u * x);
    }
    const double n = static_cast<double>(samples.size());
    return {re / n, im / n};
}

/// Characteristic function of S_alpha(sigma, beta, 0) at u, for reference
/// checks against the empirical one.
inline std::complex<double> stable_cf(const StableLaw& law, double u) {
    const double a = law.alpha();
    const double mag = std::pow(law.sigma(), a) * std::pow(std::abs(u), a);
    const double sgn = (u > 0.0) ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
    const std::complex<double> expo =
        -mag * std::complex<double>(1.0, -law.beta() * sgn * std::tan(std::numbers::pi * a / 2.0));
    return std::exp(expo);
}

}  // namespace stablevol
