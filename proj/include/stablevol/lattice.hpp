#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stablevol/rng.hpp"
#include "stablevol/sampler.hpp"
#include "stablevol/stable_law.hpp"

namespace stablevol {

/// Fine-resolution noise increments for one trajectory. Coarse and reference
/// solutions are both driven from this single lattice, so their difference
/// measures discretisation error only. Immutable after construction and safe
/// to share read-only.
struct NoiseLattice {
    StableLaw law;
    double delta_fine;
    std::int64_t n_fine;
    std::vector<double> increments;
    std::uint64_t stream_index;
};

namespace detail {

/// True iff d is an exact power of two (any sign of exponent).
inline bool is_power_of_two_value(double d) {
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    int exp = 0;
    return std::frexp(d, &exp) == 0.5;
}

/// Block sum over a power-of-two number of addends, evaluated as a balanced
/// binary tree: sum(x[0..2n)) = fl( sum(x[0..n)) + sum(x[n..2n)) ).
/// The tree splits align with every dyadic sub-block, which makes blockwise
/// aggregation exactly associative across dyadic levels, bit for bit, and
/// keeps the rounding error at O(log n) ulps.
inline double dyadic_block_sum(const double* x, std::int64_t n) {
    if (n == 1) return x[0];
    if (n == 2) return x[0] + x[1];
    const std::int64_t half = n / 2;
    return dyadic_block_sum(x, half) + dyadic_block_sum(x + half, half);
}

}  // namespace detail

/// Draw the full lattice of i.i.d. increments, each distributed
/// S_alpha(sigma delta_fine^(1/alpha), beta, 0). horizon/delta_fine must be
/// an integer number of cells.
template <RandomSource Rng>
NoiseLattice build_lattice(const StableLaw& law, double delta_fine, double horizon, Rng& rng) {
    if (!(delta_fine > 0.0)) {
        throw std::domain_error("build_lattice: delta_fine must be positive");
    }
    const double ratio = horizon / delta_fine;
    const double rounded = std::round(ratio);
    if (!(std::abs(ratio - rounded) < 1e-9) || rounded < 1.0) {
        throw std::domain_error("build_lattice: horizon must be an integer multiple of delta_fine");
    }
    const auto n_fine = static_cast<std::int64_t>(rounded);

    NoiseLattice lattice{law, delta_fine, n_fine, {}, 0};
    if constexpr (std::is_same_v<std::remove_cvref_t<Rng>, RngStream>) {
        lattice.stream_index = rng.stream_index();
    }
    lattice.increments.resize(static_cast<std::size_t>(n_fine));
    const double scale = law.sigma() * std::pow(delta_fine, 1.0 / law.alpha());
    for (double& dL : lattice.increments) {
        dL = scale * sample_standard(law, rng);
    }
    return lattice;
}

/// Sum fine increments blockwise into coarse ones with ratio r = a power of
/// two. The j-th output is the dyadic tree sum of fine cells [j*r, (j+1)*r),
/// so aggregating to delta and then to 2*delta is bitwise identical to
/// aggregating straight to 2*delta.
inline std::vector<double> aggregate(std::span<const double> fine, std::int64_t ratio) {
    if (ratio < 1 || (ratio & (ratio - 1)) != 0) {
        throw std::domain_error("aggregate: block ratio must be a power of two, got " +
                                std::to_string(ratio));
    }
    const auto n = static_cast<std::int64_t>(fine.size());
    if (n % ratio != 0) {
        throw std::domain_error("aggregate: block ratio " + std::to_string(ratio) +
                                " does not divide the lattice size " + std::to_string(n));
    }
    std::vector<double> coarse(static_cast<std::size_t>(n / ratio));
    for (std::int64_t j = 0; j < n / ratio; ++j) {
        coarse[static_cast<std::size_t>(j)] = detail::dyadic_block_sum(fine.data() + j * ratio, ratio);
    }
    return coarse;
}

/// Aggregate a lattice to the coarser step delta_coarse = r * delta_fine.
inline std::vector<double> aggregate(const NoiseLattice& lattice, double delta_coarse) {
    const double ratio = delta_coarse / lattice.delta_fine;
    const double rounded = std::round(ratio);
    if (!(std::abs(ratio - rounded) < 1e-9) || rounded < 1.0) {
        throw std::domain_error("aggregate: delta_coarse must be an integer multiple of "
                                "delta_fine");
    }
    return aggregate(std::span<const double>(lattice.increments),
                     static_cast<std::int64_t>(rounded));
}

}  // namespace stablevol
