#pragma once

// Philox4x32-10 counter-based generator. Every (key, stream) pair names an
// independent random sequence, so replicate i of a simulation draws the same
// numbers no matter which thread runs it.

#include <array>
#include <cstdint>
#include <limits>

namespace coincidence {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// The Philox4x32 bijection with 10 rounds.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Sequential view of one Philox stream: key = seed, counter = (block, stream).
/// Satisfies UniformRandomBitGenerator.
class PhiloxStream {
public:
    using result_type = std::uint64_t;

    PhiloxStream(std::uint64_t seed, std::uint64_t stream) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform double in the open interval (0, 1) with 53 random bits.
    double uniform() noexcept;

private:
    void refill() noexcept;

    PhiloxKey key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    PhiloxCounter buffer_{};
    int used_ = 4;
};

} // namespace coincidence
