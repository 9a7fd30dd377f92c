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

#include "mimo_recon/metrics.hpp"
#include "test_common.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace mimo_recon;
using Catch::Approx;

TEST_CASE("matrix similarity metrics on known pairs")
{
    const ComplexMatrix a = test::random_psd(4, 4, 1);
    CHECK(rel_err(a, a) == 0.0);
    CHECK(cmd(a, a) == Approx(0.0).margin(1e-14));
    CHECK(cmc(a, a) == Approx(1.0).margin(1e-14));
    CHECK(cmd(a, 3.5 * a) == Approx(0.0).margin(1e-14));

    ComplexMatrix d1 = ComplexMatrix::Zero(2, 2), d2 = d1;
    d1(0, 0) = 1.0;
    d2(1, 1) = 1.0;
    CHECK(cmd(d1, d2) == Approx(1.0));
    CHECK(cmc(d1, d2) == Approx(0.0).margin(1e-15));

    // ||I - 2I|| / sqrt(||I|| ||2I||) = 1/sqrt(2) for any size
    const ComplexMatrix i3 = ComplexMatrix::Identity(3, 3);
    CHECK(rel_err(i3, ComplexMatrix(2.0 * i3)) == Approx(1.0 / std::sqrt(2.0)));

    CHECK_THROWS_AS(cmd(a, ComplexMatrix::Identity(3, 3)), DimensionError);
    CHECK_THROWS_AS(cmc(a, ComplexMatrix::Zero(4, 4)), std::invalid_argument);
    CHECK_THROWS_AS(rel_err(ComplexMatrix::Zero(4, 4), a), std::invalid_argument);
}

TEST_CASE("collinearity complements distance for positive semidefinite pairs")
{
    for (std::uint64_t s = 1; s <= 50; ++s)
    {
        const ComplexMatrix a = test::random_psd(5, 1 + s % 5, s);
        const ComplexMatrix b = test::random_psd(5, 1 + (s + 2) % 5, s + 100);
        CHECK(cmc(a, b) == Approx(1.0 - cmd(a, b)).margin(1e-12));
        CHECK(cmd(a, b) >= -1e-15);
        CHECK(cmd(a, b) <= 1.0 + 1e-15);
    }
}

TEST_CASE("capacity agrees with the determinant form")
{
    const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
    CHECK(capacity(i2, 10.0) == Approx(2.0 * std::log2(6.0)));
    CHECK(capacity(ComplexMatrix::Ones(2, 2), 10.0) == Approx(std::log2(21.0)));

    for (const auto &[r, c] : {std::pair<Index, Index>{3, 2}, {2, 4}, {4, 4}})
    {
        const ComplexMatrix h = test::random_matrix(r, c, static_cast<std::uint64_t>(r * 10 + c));
        const double g = db_to_linear(7.0) / static_cast<double>(c);
        const ComplexMatrix m = ComplexMatrix::Identity(r, r) + g * h * h.adjoint();
        const double oracle = std::log2(m.determinant().real());
        CHECK(capacity(h, 7.0) == Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("ergodic capacity of a scalar Rayleigh channel")
{
    // E log2(1 + g |h|^2) = log2(e) e^{1/g} E1(1/g), E1(x) = -Ei(-x)
    const double g = 10.0;
    const double oracle = std::exp(1.0 / g) * -std::expint(-1.0 / g) / std::log(2.0);
    const auto e = rayleigh_ensemble(CorrelationMatrix::identity(1), 1, 1, 200000, 3);
    CHECK(ergodic_capacity(e, 10.0) == Approx(oracle).margin(0.01));

    const auto curve = ergodic_capacity_curve(e, {0.0, 10.0, 20.0});
    CHECK(curve[1] == Approx(ergodic_capacity(e, 10.0)).epsilon(1e-12));
    CHECK(curve[0] < curve[1]);
    CHECK(curve[1] < curve[2]);
}

TEST_CASE("conditioning and singular values")
{
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    CHECK(cond_number(d) == Approx(3.0));
    CHECK(std::isinf(cond_number(ComplexMatrix::Ones(2, 2))));
    CHECK_THROWS_AS(cond_number(ComplexMatrix::Zero(2, 2)), std::invalid_argument);

    ChannelEnsemble e(2, 3, 2);
    e.snapshot(0) = test::random_matrix(2, 3, 5);
    e.snapshot(1) = test::random_matrix(2, 3, 6);
    const auto sv = snapshot_singular_values(e);
    const auto kappa = snapshot_cond_numbers(e);
    for (std::size_t i = 0; i < 2; ++i)
    {
        const RealVector ref = singular_values(ComplexMatrix(e.snapshot(i)));
        REQUIRE(sv[i].size() == 2);
        CHECK(sv[i][0] == Approx(ref[0]));
        CHECK(sv[i][1] == Approx(ref[1]));
        CHECK(kappa[i] == Approx(ref[0] / ref[1]));
    }
}

TEST_CASE("empirical CDF and Kolmogorov-Smirnov distance")
{
    const auto c = empirical_cdf({3.0, 1.0, 2.0, 2.0});
    REQUIRE(c.values == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(c.probs[1] == Approx(0.75));
    CHECK(c(0.5) == 0.0);
    CHECK(c(2.5) == Approx(0.75));
    CHECK(c(10.0) == 1.0);
    CHECK_THROWS_AS(empirical_cdf({}), std::invalid_argument);

    CHECK(ks_statistic({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
    CHECK(ks_statistic({1.0, 2.0}, {5.0, 6.0}) == 1.0);
    CHECK(ks_statistic({1.0, 2.0, 3.0}, {2.0, 3.0, 4.0}) == Approx(1.0 / 3.0));
    CHECK(ks_statistic({1.0, 2.0, 3.0}, {2.0, 3.0, 4.0}) == ks_statistic({2.0, 3.0, 4.0}, {1.0, 2.0, 3.0}));
}

TEST_CASE("Bartlett spectrum of cluster covariances")
{
    const ArrayGeometry rx{8, 0.5};
    const ArrayGeometry tx{4, 0.5};
    const auto r = cluster_corr(rx, tx, {{30.0, -20.0}});
    const auto g = bartlett_pas(r, rx, tx);
    REQUIRE(g.aoa_deg.size() == 181);
    const auto peaks = pas_peaks(g, 1);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].aoa_deg == 30.0);
    CHECK(peaks[0].aod_deg == -20.0);
    CHECK(peaks[0].power_db == Approx(0.0).margin(1e-12));

    // direct evaluation at an off-peak grid point
    const ComplexVector u = joint_steering_vector(rx, tx, -10.0, 45.0);
    const ComplexVector v = joint_steering_vector(rx, tx, 30.0, -20.0);
    const double lin = std::norm(u.dot(v)) / std::pow(32.0, 2);
    CHECK(g.power_db(80, 135) == Approx(std::max(pas_floor_db, 10.0 * std::log10(lin))).margin(1e-8));

    const auto flat = bartlett_pas(CovarianceMatrix::from(ComplexMatrix::Identity(32, 32)), rx, tx, 5.0);
    CHECK(flat.power_db.cwiseAbs().maxCoeff() < 1e-9);

    CHECK_THROWS_AS(bartlett_pas(r, rx, ArrayGeometry{2, 0.5}), DimensionError);
    CHECK_THROWS_AS(angle_grid(0.0), std::invalid_argument);
}

TEST_CASE("two-cluster spectrum peaks and grid differences")
{
    const ArrayGeometry rx{8, 0.5};
    const ArrayGeometry tx{4, 0.5};
    const ClusterSet cl{{-50.0, 60.0}, {20.0, -30.0}};
    const auto g = bartlett_pas(cluster_corr(rx, tx, cl), rx, tx);
    auto peaks = pas_peaks(g, 2);
    REQUIRE(peaks.size() == 2);
    std::sort(peaks.begin(), peaks.end(), [](const PasPeak &a, const PasPeak &b) { return a.aoa_deg < b.aoa_deg; });
    CHECK(peaks[0].aoa_deg == -50.0);
    CHECK(peaks[0].aod_deg == 60.0);
    CHECK(peaks[1].aoa_deg == 20.0);
    CHECK(peaks[1].aod_deg == -30.0);

    const auto same = pas_diff_stats(g, g);
    CHECK(std::isinf(same.max_db));
    CHECK(same.max_db < 0.0);

    const auto other = bartlett_pas(cluster_corr(rx, tx, {{-50.0, 60.0}}), rx, tx);
    const auto d = pas_diff_stats(g, other);
    CHECK(d.max_db <= 0.0);
    CHECK(d.mean_db < d.max_db);
    CHECK_THROWS_AS(pas_diff_stats(g, bartlett_pas(cluster_corr(rx, tx, cl), rx, tx, 2.0)), DimensionError);
}
