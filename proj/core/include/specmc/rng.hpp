/*
 * Copyright 2026 The specmc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SPECMC_RNG_HPP
#define SPECMC_RNG_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace specmc
{

/**
 * Philox4x32-10 counter-based generator (Salmon et al., SC'11).
 *
 * The 64-bit seed is the Philox key; the 128-bit counter starts at zero and
 * advances by one per block of four 32-bit outputs. Two generators with the
 * same seed produce the same stream on every platform. All variate helpers
 * below are implemented here rather than through <random> distributions,
 * whose algorithms are implementation-defined.
 *
 * Satisfies std::uniform_random_bit_generator.
 */
class Philox
{
public:
    using result_type = std::uint32_t;

    explicit Philox(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept;

    std::uint64_t next_u64() noexcept;

    /// Uniform on the open interval (0, 1) with 53-bit resolution.
    double uniform() noexcept;

    /// Uniform on the open interval (lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// True with probability p.
    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Uniform on {0, ..., bound - 1}; bound must be positive.
    std::uint64_t index(std::uint64_t bound) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }

private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::array<std::uint32_t, 4> counter_{};
    std::array<std::uint32_t, 4> buffer_{};
    std::size_t used_ = 4;
};

/// SplitMix64 finalizer; a bijective 64-bit mixing function.
std::uint64_t mix64(std::uint64_t x) noexcept;

/**
 * Seed of an independent stream derived from a master seed.
 *
 * stream_seed(master, i) = mix64(master ^ mix64(i + 0x9E3779B97F4A7C15)).
 * Nested derivation (replicate, then grid point) composes the function.
 */
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) noexcept;

}  // namespace specmc

#endif  // SPECMC_RNG_HPP
