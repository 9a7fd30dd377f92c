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

#ifndef MIMO_RECON_FFT_HPP
#define MIMO_RECON_FFT_HPP

// In-place complex DFT. Power-of-two lengths use iterative radix-2; other
// lengths fall back to the direct O(n^2) sum.

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

namespace mimo_recon::fft
{

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// X[k] = sum_n x[n] exp(sign * j 2 pi k n / N), unnormalized.
inline void dft(std::vector<std::complex<double>> &x, int sign = -1)
{
    const std::size_t n = x.size();
    if (n <= 1)
        return;
    const double s = sign < 0 ? -1.0 : 1.0;
    if (!is_pow2(n))
    {
        std::vector<std::complex<double>> out(n);
        for (std::size_t k = 0; k < n; ++k)
        {
            std::complex<double> acc = 0.0;
            for (std::size_t m = 0; m < n; ++m)
                acc += x[m] * std::polar(1.0, s * 2.0 * std::numbers::pi * static_cast<double>((k * m) % n) /
                                                  static_cast<double>(n));
            out[k] = acc;
        }
        x.swap(out);
        return;
    }

    for (std::size_t i = 1, j = 0; i < n; ++i)
    {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1)
    {
        const std::size_t half = len / 2;
        for (std::size_t k = 0; k < half; ++k)
        {
            // twiddles computed directly rather than by recurrence to avoid drift
            const auto w = std::polar(1.0, s * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len));
            for (std::size_t i = k; i < n; i += len)
            {
                const auto u = x[i];
                const auto v = x[i + half] * w;
                x[i] = u + v;
                x[i + half] = u - v;
            }
        }
    }
}

} // namespace mimo_recon::fft

#endif
