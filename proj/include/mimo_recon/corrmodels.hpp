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

#ifndef MIMO_RECON_CORRMODELS_HPP
#define MIMO_RECON_CORRMODELS_HPP

// Correlation-matrix families: exponential and uniform stochastic models,
// steering-vector cluster models and the Gaussian power-angular-spectrum
// correlation coefficient.

#include "mimo_recon/matcore.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

namespace mimo_recon
{

inline constexpr double deg2rad(double deg) noexcept { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double rad) noexcept { return rad * 180.0 / std::numbers::pi; }

/// Uniform linear array: element count and spacing in wavelengths (d / lambda).
struct ArrayGeometry
{
    std::size_t n_elements = 1;
    double spacing_wl = 0.5;

    void validate() const
    {
        if (n_elements < 1)
            throw std::invalid_argument("array must have at least one element");
        if (!std::isfinite(spacing_wl) || spacing_wl < 0.0)
            throw std::invalid_argument("array spacing must be finite and nonnegative");
    }
};

struct Cluster
{
    double aoa_deg = 0.0;
    double aod_deg = 0.0;
};

using ClusterSet = std::vector<Cluster>;

struct GaussianAngularProfile
{
    double mean_deg = 0.0;
    double sigma_deg = 20.0;

    void validate() const
    {
        if (!(sigma_deg > 0.0) || !std::isfinite(sigma_deg) || !std::isfinite(mean_deg))
            throw std::invalid_argument("angular spread must be positive and finite");
    }
};

namespace detail
{
inline void check_rho(cplx rho, const char *who)
{
    if (!std::isfinite(rho.real()) || !std::isfinite(rho.imag()) || std::abs(rho) > 1.0 + 1e-12)
        throw std::invalid_argument(std::string(who) + ": |rho| must not exceed 1");
}
} // namespace detail

/// Exponential model: [m,n] = rho^(n-m) for n >= m, conjugate mirror below.
inline CorrelationMatrix exp_corr(std::size_t n, cplx rho)
{
    detail::check_rho(rho, "exp_corr");
    const auto dim = static_cast<Index>(n);
    ComplexMatrix r(dim, dim);
    for (Index m = 0; m < dim; ++m)
    {
        r(m, m) = 1.0;
        cplx p = 1.0;
        for (Index k = m + 1; k < dim; ++k)
        {
            p *= rho;
            r(m, k) = p;
            r(k, m) = std::conj(p);
        }
    }
    return CorrelationMatrix::from(r);
}

/// Uniform model: unit diagonal, rho above, conj(rho) below. With complex rho
/// and n >= 3 the result can be indefinite, which is reported as NotPsdError.
inline CorrelationMatrix uniform_corr(std::size_t n, cplx rho)
{
    detail::check_rho(rho, "uniform_corr");
    const auto dim = static_cast<Index>(n);
    ComplexMatrix r(dim, dim);
    for (Index m = 0; m < dim; ++m)
        for (Index k = 0; k < dim; ++k)
            r(m, k) = m == k ? cplx(1.0) : (m < k ? rho : std::conj(rho));
    return CorrelationMatrix::from(r);
}

/// Element m = exp(j 2 pi m (d/lambda) sin(phi)).
inline ComplexVector steering_vector(const ArrayGeometry &g, double phi_deg)
{
    g.validate();
    const double k = 2.0 * std::numbers::pi * g.spacing_wl * std::sin(deg2rad(phi_deg));
    ComplexVector a(static_cast<Index>(g.n_elements));
    for (Index m = 0; m < a.size(); ++m)
        a[m] = std::polar(1.0, k * static_cast<double>(m));
    return a;
}

/// Joint Tx-Rx steering vector vec(a_rx a_tx^T) = a_tx (x) a_rx, matching the
/// column-major vec of an N_rx x N_tx channel matrix.
inline ComplexVector joint_steering_vector(const ArrayGeometry &rx, const ArrayGeometry &tx, double aoa_deg,
                                           double aod_deg)
{
    const ComplexVector ar = steering_vector(rx, aoa_deg);
    const ComplexVector at = steering_vector(tx, aod_deg);
    ComplexVector u(ar.size() * at.size());
    for (Index j = 0; j < at.size(); ++j)
        u.segment(j * ar.size(), ar.size()) = at[j] * ar;
    return u;
}

/// Cluster covariance sum_k u_k u_k^H with u_k = vec(a_rx(aoa_k) a_tx(aod_k)^T).
/// Each diagonal entry equals the cluster count, so the trace is K*N_rx*N_tx.
inline CovarianceMatrix cluster_corr(const ArrayGeometry &rx, const ArrayGeometry &tx, const ClusterSet &clusters)
{
    if (clusters.empty())
        throw std::invalid_argument("cluster_corr: at least one cluster is required");
    const auto dim = static_cast<Index>(rx.n_elements * tx.n_elements);
    ComplexMatrix r = ComplexMatrix::Zero(dim, dim);
    for (const auto &c : clusters)
    {
        const ComplexVector u = joint_steering_vector(rx, tx, c.aoa_deg, c.aod_deg);
        r.noalias() += u * u.adjoint();
    }
    return CovarianceMatrix::from(r);
}

/// Closed-form correlation at separation d_wl wavelengths for a Gaussian
/// angular profile: exp(j 2pi d sin(mean)) * exp(-1/2 (2pi d sigma cos(mean))^2).
/// The Gaussian tails beyond +-pi are not truncated.
inline cplx gauss_pas_rho(double d_wl, const GaussianAngularProfile &profile)
{
    if (!(d_wl >= 0.0))
        throw std::invalid_argument("gauss_pas_rho: separation must be nonnegative");
    profile.validate();
    const double mean = deg2rad(profile.mean_deg);
    const double sigma = deg2rad(profile.sigma_deg);
    const double spread = 2.0 * std::numbers::pi * d_wl * sigma * std::cos(mean);
    return std::polar(std::exp(-0.5 * spread * spread), 2.0 * std::numbers::pi * d_wl * std::sin(mean));
}

/// Numerical value of the defining integral over [mean - pi, mean + pi]
/// (composite Simpson, truncated unnormalized Gaussian). Kept next to the
/// closed form for comparison.
inline cplx gauss_pas_rho_integral(double d_wl, const GaussianAngularProfile &profile, std::size_t intervals = 4096)
{
    profile.validate();
    if (intervals % 2 != 0)
        ++intervals;
    const double mean = deg2rad(profile.mean_deg);
    const double sigma = deg2rad(profile.sigma_deg);
    const double a = mean - std::numbers::pi;
    const double h = 2.0 * std::numbers::pi / static_cast<double>(intervals);
    const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma);
    auto f = [&](double phi) {
        const double z = (phi - mean) / sigma;
        return std::polar(norm * std::exp(-0.5 * z * z), 2.0 * std::numbers::pi * d_wl * std::sin(phi));
    };
    cplx sum = f(a) + f(a + 2.0 * std::numbers::pi);
    for (std::size_t i = 1; i < intervals; ++i)
        sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
    return sum * (h / 3.0);
}

/// Toeplitz ULA correlation [m,n] = rho(spacing * |m-n|), conjugated below the
/// diagonal.
inline CorrelationMatrix ula_corr_from_rho(const ArrayGeometry &g, const GaussianAngularProfile &profile)
{
    g.validate();
    const auto n = static_cast<Index>(g.n_elements);
    std::vector<cplx> lag(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k)
        lag[static_cast<std::size_t>(k)] = gauss_pas_rho(g.spacing_wl * static_cast<double>(k), profile);
    ComplexMatrix r(n, n);
    for (Index m = 0; m < n; ++m)
        for (Index k = 0; k < n; ++k)
        {
            const cplx v = lag[static_cast<std::size_t>(std::abs(k - m))];
            r(m, k) = k >= m ? v : std::conj(v);
        }
    r.diagonal().setOnes();
    return CorrelationMatrix::from(r);
}

} // namespace mimo_recon

#endif
