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

#include "mimo_recon/error.hpp"
#include "mimo_recon/matcore.hpp"
#include "mimo_recon/corrmodels.hpp"
#include "test_common.hpp"

#include <catch_amalgamated.hpp>

using namespace mimo_recon;
using Catch::Approx;

TEST_CASE("kron of identities is identity")
{
    const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
    CHECK((kron(i2, i2) - ComplexMatrix::Identity(4, 4)).norm() == 0.0);
}

TEST_CASE("kron matches the index formula entry by entry")
{
    const auto a = test::random_matrix(3, 2, 1);
    const auto b = test::random_matrix(2, 3, 2);
    const auto k = kron(a, b);
    REQUIRE(k.rows() == 6);
    REQUIRE(k.cols() == 6);
    for (Index p = 0; p < 3; ++p)
        for (Index r = 0; r < 2; ++r)
            for (Index q = 0; q < 2; ++q)
                for (Index s = 0; s < 3; ++s)
                    CHECK(std::abs(k(p * 2 + q, r * 3 + s) - a(p, r) * b(q, s)) == 0.0);
}

TEST_CASE("kron of two 2x2 correlations has rho-scaled blocks")
{
    const auto r_rx = exp_corr(2, 0.7);
    const auto r_tx = uniform_corr(2, 0.2);
    const auto k = kron(r_rx.matrix(), r_tx.matrix());
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 2; ++j)
            CHECK((k.block(2 * i, 2 * j, 2, 2) - r_rx(i, j) * r_tx.matrix()).norm() < 1e-15);
}

TEST_CASE("kron is bilinear and satisfies the mixed product rule")
{
    const auto a = test::random_matrix(2, 3, 3);
    const auto b = test::random_matrix(3, 2, 4);
    const auto c = test::random_matrix(3, 2, 5);
    const auto d = test::random_matrix(2, 4, 6);
    const cplx alpha(0.3, -1.7);
    CHECK((kron(alpha * a, b) - alpha * kron(a, b)).norm() < 1e-12);
    CHECK((kron(a, alpha * b) - alpha * kron(a, b)).norm() < 1e-12);
    const ComplexMatrix lhs = kron(a, b) * kron(c, d);
    const ComplexMatrix rhs = kron(a * c, b * d);
    CHECK((lhs - rhs).norm() <= 1e-10 * rhs.norm());
}

TEST_CASE("vec stacks columns")
{
    ComplexMatrix a(2, 2);
    a << 1.0, 3.0, 2.0, 4.0;
    const auto v = vec(a);
    REQUIRE(v.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(v[i] == cplx(i + 1.0));

    ComplexMatrix row(1, 3);
    row << 5.0, 6.0, 7.0;
    const auto vr = vec(row);
    CHECK(vr[0] == cplx(5.0));
    CHECK(vr[2] == cplx(7.0));
}

TEST_CASE("unvec inverts vec")
{
    const auto a = test::random_matrix(3, 5, 7);
    const auto v = vec(a);
    for (Index j = 0; j < 5; ++j)
        for (Index i = 0; i < 3; ++i)
            CHECK(v[j * 3 + i] == a(i, j));
    CHECK((unvec(v, 3, 5) - a).norm() == 0.0);
    CHECK_THROWS_AS(unvec(v, 4, 4), DimensionError);
}

TEST_CASE("chol_sqrt closed forms")
{
    CHECK((chol_sqrt(ComplexMatrix(ComplexMatrix::Identity(3, 3))) - ComplexMatrix::Identity(3, 3)).norm() < 1e-14);
    ComplexMatrix r(2, 2);
    r << 1.0, 0.5, 0.5, 1.0;
    const auto l = chol_sqrt(r);
    CHECK(std::abs(l(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(l(0, 1)) < 1e-14);
    CHECK(std::abs(l(1, 0) - 0.5) < 1e-14);
    CHECK(std::abs(l(1, 1) - std::sqrt(0.75)) < 1e-14);
}

namespace
{
bool lower_triangular(const ComplexMatrix &l)
{
    for (Index i = 0; i < l.rows(); ++i)
        for (Index j = i + 1; j < l.cols(); ++j)
            if (std::abs(l(i, j)) > 1e-12)
                return false;
    return true;
}
} // namespace

TEST_CASE("chol_sqrt reconstructs random full-rank and rank-deficient PSD matrices")
{
    for (const Index rank : {6, 3, 1})
    {
        const auto r = test::random_psd(6, rank, 10 + static_cast<std::uint64_t>(rank));
        const auto l = chol_sqrt(r);
        CHECK(lower_triangular(l));
        CHECK((l * l.adjoint() - r).norm() <= 1e-8 * 6 * std::max(1.0, r.norm()));
    }
    // Exactly singular correlation: all-ones.
    const auto ones = uniform_corr(3, 1.0);
    const auto l = chol_sqrt(ones);
    CHECK(lower_triangular(l));
    CHECK((l * l.adjoint() - ones.matrix()).norm() <= 1e-8 * 3);
}

TEST_CASE("chol_sqrt clamps noise-level negative eigenvalues and rejects indefinite input")
{
    ComplexMatrix r(2, 2);
    r << 1.0, 1.0 + 1e-9, 1.0 + 1e-9, 1.0;  // eigenvalues 2 and -1e-9
    const auto l = chol_sqrt(r);
    CHECK((l * l.adjoint() - r).norm() < 1e-8);

    ComplexMatrix bad(2, 2);
    bad << 1.0, 0.0, 0.0, -1.0;
    CHECK_THROWS_AS(chol_sqrt(bad), NotPsdError);
}

TEST_CASE("norms, traces, singular values and eigenvalues")
{
    CHECK(fro_norm(ComplexMatrix::Identity(4, 4)) == Approx(2.0));
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 3.0;
    const auto s = singular_values(d);
    CHECK(s[0] == Approx(3.0));
    CHECK(s[1] == Approx(1.0));
    CHECK(trace(d) == cplx(4.0));

    const auto a = test::random_matrix(5, 3, 21);
    const auto sa = singular_values(a);
    CHECK(sa.squaredNorm() == Approx(fro_norm(a) * fro_norm(a)).epsilon(1e-12));
    for (Index i = 1; i < sa.size(); ++i)
        CHECK(sa[i - 1] >= sa[i]);

    const auto r = exp_corr(6, cplx(0.4, 0.5));
    CHECK(herm_eigvals(r.matrix()).sum() == Approx(6.0).epsilon(1e-10));
    CHECK_THROWS(herm_eigvals(test::random_matrix(3, 3, 5)));
}

TEST_CASE("CorrelationMatrix validation")
{
    ComplexMatrix m(2, 2);
    m << 1.0, 0.3, 0.3, 1.0;
    CHECK_NOTHROW(CorrelationMatrix::from(m));

    ComplexMatrix not_unit = m;
    not_unit(1, 1) = 2.0;
    CHECK_THROWS(CorrelationMatrix::from(not_unit));

    ComplexMatrix not_herm = m;
    not_herm(0, 1) = cplx(0.3, 0.1);
    CHECK_THROWS(CorrelationMatrix::from(not_herm));

    ComplexMatrix indefinite(2, 2);
    indefinite << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS(CorrelationMatrix::from(indefinite));

    ComplexMatrix nan = m;
    nan(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS(CorrelationMatrix::from(nan));

    ComplexMatrix cov(2, 2);
    cov << 4.0, cplx(1.0, 1.0), cplx(1.0, -1.0), 1.0;
    const auto c = CorrelationMatrix::from_covariance(cov);
    CHECK(c(0, 0) == cplx(1.0));
    CHECK(std::abs(c(0, 1) - cplx(0.5, 0.5)) < 1e-15);

    ComplexMatrix dead = ComplexMatrix::Zero(2, 2);
    dead(0, 0) = 1.0;
    CHECK_THROWS_AS(CorrelationMatrix::from_covariance(dead), NumericalError);
}
