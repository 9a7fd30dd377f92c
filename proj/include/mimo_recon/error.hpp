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

#ifndef MIMO_RECON_ERROR_HPP
#define MIMO_RECON_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mimo_recon
{

// Failures of numerical origin (indefinite covariance, eigensolver stall).
// The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class NotPsdError : public NumericalError
{
public:
    NotPsdError(const std::string &what, double min_eigenvalue)
        : NumericalError(what + " (smallest eigenvalue " + std::to_string(min_eigenvalue) + ")"),
          min_eigenvalue_(min_eigenvalue) {}

    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

class ConvergenceError : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

// Shape or dimension disagreement between arguments.
class DimensionError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// A stitching step asked for an antenna gap that no partial measurement covers.
class MissingGapError : public std::invalid_argument
{
public:
    explicit MissingGapError(std::size_t gap)
        : std::invalid_argument("no partial correlation for antenna gap " + std::to_string(gap)), gap_(gap) {}

    std::size_t gap() const noexcept { return gap_; }

private:
    std::size_t gap_;
};

// Invalid configuration or out-of-range physical parameter. Exit code 2.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace mimo_recon

#endif
