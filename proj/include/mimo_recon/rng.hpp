// SPDX-License-Identifier: Apache-2.0
//
// mimo-recon: MIMO channel correlation reconstruction and simulation library
// Copyright (C) 2026 The mimo-recon authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MIMO_RECON_RNG_HPP
#define MIMO_RECON_RNG_HPP

// Reproducible random streams. Every snapshot (or every time-series process)
// derives its own generator from (seed, stream, index), so results do not
// depend on how work is split across threads.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

namespace mimo_recon
{

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// xoshiro256** keyed by (seed, stream, index).
class StreamRng
{
public:
    using result_type = std::uint64_t;

    StreamRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept
    {
        std::uint64_t key = splitmix64(seed);
        key = splitmix64(key ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
        key = splitmix64(key ^ splitmix64(index + 0x8CB92BA72F3D8DD7ULL));
        for (auto &w : s_)
        {
            key += 0x9E3779B97F4A7C15ULL;
            w = splitmix64(key);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept
    {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via the Box-Muller transform (pairs are cached).
    double normal() noexcept
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    /// Circularly symmetric CN(0,1): variance 1/2 per real component.
    std::complex<double> complex_normal() noexcept
    {
        const double re = normal();
        const double im = normal();
        return {re * std::numbers::sqrt2 * 0.5, im * std::numbers::sqrt2 * 0.5};
    }

    /// Uniform phase on [0, 2pi).
    double phase() noexcept
    {
        return 2.0 * std::numbers::pi * uniform();
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4]{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace mimo_recon

#endif
