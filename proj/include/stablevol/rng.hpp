#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <random>

namespace stablevol {

/// Anything that can hand out open-interval uniforms and unit exponentials.
/// Samplers are templated on this so tests can substitute scripted sources.
template <typename R>
concept RandomSource = requires(R r) {
    { r.uniform_open01() } -> std::convertible_to<double>;
    { r.exponential() } -> std::convertible_to<double>;
};

/// One independent, reproducible random stream, addressed by
/// (master_seed, stream_index). Identical addresses yield bit-identical
/// sequences on every conforming platform; distinct stream indices give
/// statistically independent streams. A stream is a value type: move it
/// between threads freely, but never share one instance concurrently.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : master_seed_(master_seed), stream_index_(stream_index) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(master_seed & 0xffffffffu),
            static_cast<std::uint32_t>(master_seed >> 32),
            static_cast<std::uint32_t>(stream_index & 0xffffffffu),
            static_cast<std::uint32_t>(stream_index >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0,1); never returns 0 or 1, so
    /// log() and the CMS trigonometry below stay finite.
    double uniform_open01() {
        const std::uint64_t bits = engine_() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    /// Standard exponential variate, strictly positive.
    double exponential() { return -std::log(uniform_open01()); }

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
};

}  // namespace stablevol
