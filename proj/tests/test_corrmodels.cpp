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

#include "mimo_recon/corrmodels.hpp"
#include "test_common.hpp"

#include <catch_amalgamated.hpp>

#include <numbers>

using namespace mimo_recon;
using Catch::Approx;

namespace
{
bool is_toeplitz(const ComplexMatrix &r, double tol)
{
    for (Index i = 1; i < r.rows(); ++i)
        for (Index j = 1; j < r.cols(); ++j)
            if (std::abs(r(i, j) - r(i - 1, j - 1)) > tol)
                return false;
    return true;
}
} // namespace

TEST_CASE("exponential model entries")
{
    const auto r = exp_corr(2, 0.5);
    CHECK(r(0, 1) == cplx(0.5));
    CHECK(r(1, 0) == cplx(0.5));
    CHECK((exp_corr(4, 0.0).matrix() - ComplexMatrix::Identity(4, 4)).norm() == 0.0);

    const auto r8 = exp_corr(4, 0.8);
    CHECK(r8(0, 1).real() == Approx(0.8));
    CHECK(r8(0, 2).real() == Approx(0.64));
    CHECK(r8(0, 3).real() == Approx(0.512));
    CHECK(r8(1, 3).real() == Approx(0.64));
    CHECK(is_toeplitz(r8.matrix(), 1e-15));

    const cplx rho(0.3, 0.6);
    const auto rc = exp_corr(5, rho);
    CHECK(std::abs(rc(1, 3) - rho * rho) < 1e-15);
    CHECK(std::abs(rc(3, 1) - std::conj(rho * rho)) < 1e-15);
    CHECK(is_toeplitz(rc.matrix(), 1e-15));

    CHECK_THROWS_AS(exp_corr(3, 1.2), std::invalid_argument);
}

TEST_CASE("uniform model entries")
{
    const auto r = uniform_corr(2, 0.2);
    CHECK(r(0, 1) == cplx(0.2));
    CHECK((uniform_corr(3, 0.0).matrix() - ComplexMatrix::Identity(3, 3)).norm() == 0.0);
    const auto ones = uniform_corr(3, 1.0);
    const auto ev = herm_eigvals(ones.matrix());
    CHECK(ev[2] == Approx(3.0));
    CHECK(std::abs(ev[0]) < 1e-12);
    CHECK(std::abs(ev[1]) < 1e-12);
    CHECK_THROWS_AS(uniform_corr(2, cplx(0.0, 1.01)), std::invalid_argument);
}

TEST_CASE("steering vectors")
{
    const auto a0 = steering_vector({5, 0.5}, 0.0);
    for (Index m = 0; m < 5; ++m)
        CHECK(std::abs(a0[m] - 1.0) < 1e-15);

    const auto a90 = steering_vector({2, 0.5}, 90.0);
    CHECK(std::abs(a90[0] - 1.0) < 1e-15);
    CHECK(std::abs(a90[1] + 1.0) < 1e-15);

    const auto a = steering_vector({4, 0.25}, -50.0);
    for (int m = 0; m < 4; ++m)
    {
        const double phase = 2.0 * std::numbers::pi * m * 0.25 * std::sin(-50.0 * std::numbers::pi / 180.0);
        CHECK(std::abs(a[m] - cplx(std::cos(phase), std::sin(phase))) < 1e-14);
    }
}

TEST_CASE("cluster covariance")
{
    const ArrayGeometry rx{4, 0.25};
    const ArrayGeometry tx{3, 0.5};

    const auto one = cluster_corr(rx, tx, {{20.0, -30.0}});
    const auto ev1 = herm_eigvals(one.matrix());
    CHECK(ev1[ev1.size() - 1] == Approx(12.0));
    CHECK(std::abs(ev1[ev1.size() - 2]) < 1e-10);

    const auto two = cluster_corr(rx, tx, {{-50.0, 60.0}, {20.0, -30.0}});
    const auto ev2 = herm_eigvals(two.matrix());
    CHECK(ev2[ev2.size() - 2] > 1e-3);
    CHECK(std::abs(ev2[ev2.size() - 3]) < 1e-10);
    CHECK(trace(two.matrix()).real() == Approx(2.0 * 12.0));

    // Brute-force sum of outer products of vec(a_rx a_tx^T).
    StreamRng rng(5, 0, 0);
    ClusterSet cs;
    for (int k = 0; k < 3; ++k)
        cs.push_back({rng.uniform() * 180.0 - 90.0, rng.uniform() * 180.0 - 90.0});
    const auto r = cluster_corr(rx, tx, cs);
    ComplexMatrix ref = ComplexMatrix::Zero(12, 12);
    for (const auto &c : cs)
    {
        const auto ar = steering_vector(rx, c.aoa_deg);
        const auto at = steering_vector(tx, c.aod_deg);
        ComplexMatrix h(4, 3);
        for (Index i = 0; i < 4; ++i)
            for (Index j = 0; j < 3; ++j)
                h(i, j) = ar[i] * at[j];
        const auto u = vec(h);
        for (Index p = 0; p < 12; ++p)
            for (Index q = 0; q < 12; ++q)
                ref(p, q) += u[p] * std::conj(u[q]);
    }
    CHECK((r.matrix() - ref).norm() < 1e-12);
    CHECK(trace(r.matrix()).real() == Approx(3.0 * 12.0).epsilon(1e-10));
}

TEST_CASE("Gaussian angular profile correlation coefficient")
{
    CHECK(std::abs(gauss_pas_rho(0.0, {10.0, 20.0}) - 1.0) < 1e-15);

    const double sigma = 20.0 * std::numbers::pi / 180.0;
    const cplx r = gauss_pas_rho(0.5, {0.0, 20.0});
    const double spread = 2.0 * std::numbers::pi * 0.5 * sigma;
    CHECK(r.real() == Approx(std::exp(-0.5 * spread * spread)));
    CHECK(std::abs(r.imag()) < 1e-15);
    // small-spread approximation: a few percent off the exact integral at 20 deg
    CHECK(std::abs(r - gauss_pas_rho_integral(0.5, {0.0, 20.0})) < 0.03);

    StreamRng rng(11, 0, 0);
    for (int i = 0; i < 50; ++i)
    {
        const double d = rng.uniform() * 2.0;
        const GaussianAngularProfile p{rng.uniform() * 120.0 - 60.0, 1.0 + rng.uniform() * 29.0};
        CHECK(std::abs(gauss_pas_rho(d, p)) <= 1.0 + 1e-15);
    }
}

TEST_CASE("closed form agrees with quadrature for small spreads at broadside")
{
    // The closed form uses the mean angle in the spread term, so the agreement
    // is tight at broadside and degrades with the mean angle and spread.
    for (const auto &[sigma, tol] : {std::pair{2.0, 2e-4}, {5.0, 2e-3}, {10.0, 1e-2}, {20.0, 0.03}, {30.0, 0.06}})
        for (const double d : {0.0, 0.25, 0.5, 1.0, 2.0})
            CHECK(std::abs(gauss_pas_rho(d, {0.0, sigma}) - gauss_pas_rho_integral(d, {0.0, sigma})) < tol);
}

TEST_CASE("ULA correlation from the angular profile")
{
    CHECK(ula_corr_from_rho({1, 0.5}, {}).dim() == 1);

    const GaussianAngularProfile p{25.0, 15.0};
    const auto r = ula_corr_from_rho({4, 0.5}, p);
    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(r(0, k) - gauss_pas_rho(0.5 * k, p)) < 1e-15);
    CHECK(is_toeplitz(r.matrix(), 1e-15));
    CHECK(r.matrix().isApprox(r.matrix().adjoint()));

    const auto wide = ula_corr_from_rho({4, 0.5}, {0.0, 1e4});
    CHECK((wide.matrix() - ComplexMatrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("constructor outputs are valid correlation matrices")
{
    StreamRng rng(3, 0, 0);
    for (int i = 0; i < 20; ++i)
    {
        const cplx rho = std::polar(rng.uniform(), rng.phase());
        const auto r = exp_corr(6, rho);
        CHECK(herm_eigvals(r.matrix())[0] >= -1e-8);
        const auto u = ula_corr_from_rho({5, 0.1 + rng.uniform()}, {rng.uniform() * 60.0 - 30.0, 5.0 + rng.uniform() * 25.0});
        CHECK(herm_eigvals(u.matrix())[0] >= -1e-8);
    }
}
