#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stablevol {

/// Parameters (alpha, beta, sigma) of a strictly stable distribution
/// S_alpha(sigma, beta, 0) with characteristic function
///   E exp(iuX) = exp{ -sigma^alpha |u|^alpha (1 - i beta sgn(u) tan(pi alpha / 2)) }.
/// The location is fixed at zero. Only the heavy-tailed regime
/// alpha in (1,2) is supported; both endpoints are rejected (alpha = 2 is
/// Gaussian, alpha <= 1 loses the first moment and needs the log-form CF).
class StableLaw {
public:
    explicit StableLaw(double alpha, double beta = 0.0, double sigma = 1.0)
        : alpha_(alpha), beta_(beta), sigma_(sigma) {
        if (!(alpha > 1.0) || !(alpha < 2.0)) {
            throw std::domain_error("StableLaw: alpha must lie strictly in (1,2), got " +
                                    std::to_string(alpha));
        }
        if (!(beta >= -1.0) || !(beta <= 1.0)) {
            throw std::domain_error("StableLaw: beta must lie in [-1,1], got " +
                                    std::to_string(beta));
        }
        if (!(sigma > 0.0)) {
            throw std::domain_error("StableLaw: sigma must be positive, got " +
                                    std::to_string(sigma));
        }
        // Precomputed CMS constants; for beta = 0 they collapse to the
        // symmetric fast path (shift 0, scale 1).
        if (beta_ != 0.0) {
            const double bt = beta_ * std::tan(std::numbers::pi * alpha_ / 2.0);
            skew_shift_ = std::atan(bt) / alpha_;
            skew_scale_ = std::pow(1.0 + bt * bt, 1.0 / (2.0 * alpha_));
        }
    }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double sigma() const { return sigma_; }

    /// CMS shift B = arctan(beta tan(pi alpha/2)) / alpha.
    double skew_shift() const { return skew_shift_; }
    /// CMS scale S = (1 + beta^2 tan^2(pi alpha/2))^(1/(2 alpha)).
    double skew_scale() const { return skew_scale_; }

private:
    double alpha_;
    double beta_;
    double sigma_;
    double skew_shift_ = 0.0;
    double skew_scale_ = 1.0;
};

}  // namespace stablevol
