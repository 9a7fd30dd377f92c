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

#ifndef MIMO_RECON_PARALLEL_HPP
#define MIMO_RECON_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace mimo_recon
{

/// Worker count: MIMO_RECON_THREADS if set and positive, else the hardware
/// concurrency.
inline std::size_t worker_count()
{
    if (const char *env = std::getenv("MIMO_RECON_THREADS"))
    {
        try
        {
            const long n = std::stol(env);
            if (n > 0)
                return static_cast<std::size_t>(n);
        }
        catch (const std::exception &)
        {
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Splits [0, n) into fixed-size blocks and calls fn(begin, end, block) for
/// each, spreading blocks over the workers. Block boundaries depend only on n
/// and block_size, so per-block partial results combined in block order are
/// identical for any thread count.
template <class Fn>
void parallel_blocks(std::size_t n, std::size_t block_size, Fn &&fn)
{
    if (n == 0)
        return;
    block_size = std::max<std::size_t>(1, block_size);
    const std::size_t n_blocks = (n + block_size - 1) / block_size;
    const std::size_t workers = std::min(worker_count(), n_blocks);

    auto run_block = [&](std::size_t b) {
        const std::size_t begin = b * block_size;
        fn(begin, std::min(n, begin + block_size), b);
    };

    if (workers <= 1)
    {
        for (std::size_t b = 0; b < n_blocks; ++b)
            run_block(b);
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
    {
        pool.emplace_back([&, w] {
            try
            {
                for (std::size_t b = w; b < n_blocks; b += workers)
                    run_block(b);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
            }
        });
    }
    for (auto &t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace mimo_recon

#endif
