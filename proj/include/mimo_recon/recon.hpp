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

#ifndef MIMO_RECON_RECON_HPP
#define MIMO_RECON_RECON_HPP

// Reconstruction of full-dimensional correlation matrices and channel
// ensembles from lower-dimensional partial measurements.

#include "mimo_recon/chgen.hpp"
#include "mimo_recon/matcore.hpp"
#include "mimo_recon/parallel.hpp"

#include <cstddef>
#include <map>
#include <vector>

namespace mimo_recon
{

/// Antenna-index gap g -> off-diagonal of a 2x2 Rx correlation measured with
/// the two antennas g element spacings apart.
using PartialPairSet = std::map<std::size_t, cplx>;

inline void validate_pairs(const PartialPairSet &pairs)
{
    for (const auto &[gap, rho] : pairs)
    {
        if (gap < 1)
            throw std::invalid_argument("partial pair gaps start at 1");
        if (!(std::abs(rho) <= 1.0 + 1e-9))
            throw std::invalid_argument("partial correlation for gap " + std::to_string(gap) + " exceeds unit magnitude");
    }
}

/// Largest downward eigenvalue shift tolerated when projecting a stitched
/// matrix back onto the PSD cone.
inline constexpr double stitch_max_clamp = 0.05;

/// Extends an N0 x N0 baseline Rx correlation to n1 x n1. The baseline fills
/// the upper-left block; every other entry [m,n], m < n, is rho_(n-m) from the
/// partial pairs, conjugated below the diagonal. With gap-consistent inputs and
/// n1 = 2 N0 the lower-right block reproduces the baseline. Negative
/// eigenvalues are clamped to zero; a clamp deeper than max_clamp throws.
inline CorrelationMatrix stitch_rx_corr(const CorrelationMatrix &baseline, const PartialPairSet &pairs, std::size_t n1,
                                        double max_clamp = stitch_max_clamp)
{
    validate_pairs(pairs);
    const Index n0 = baseline.dim();
    const auto n = static_cast<Index>(n1);
    if (n < n0)
        throw DimensionError("stitch_rx_corr: target dimension is smaller than the baseline");
    if (n == n0)
        return baseline;

    ComplexMatrix r = ComplexMatrix::Identity(n, n);
    r.topLeftCorner(n0, n0) = baseline.matrix();
    for (Index m = 0; m < n; ++m)
        for (Index k = m + 1; k < n; ++k)
        {
            if (k < n0)
                continue;
            const auto gap = static_cast<std::size_t>(k - m);
            const auto it = pairs.find(gap);
            if (it == pairs.end())
                throw MissingGapError(gap);
            r(m, k) = it->second;
            r(k, m) = std::conj(it->second);
        }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(r)};
    if (es.info() != Eigen::Success)
        throw ConvergenceError("stitch_rx_corr: eigensolver did not converge");
    const double min_ev = es.eigenvalues().minCoeff();
    if (min_ev < -max_clamp)
        throw NotPsdError("stitched correlation is inconsistent with a valid covariance", min_ev);
    if (min_ev < 0.0)
    {
        const RealVector clamped = es.eigenvalues().cwiseMax(0.0);
        const Eigen::MatrixXcd v = es.eigenvectors();
        r = v * clamped.asDiagonal() * v.adjoint();
    }
    return CorrelationMatrix::from_covariance(r);
}

/// How the second block of a zero-padded pair is chosen when the same partial
/// matrix fills both halves of a combination.
enum class ZeroPadPairing
{
    independent,    // the next snapshot (cyclic), an independent realization
    same_snapshot,  // the identical snapshot in both halves
};

/// Builds a 4 x N_tx ensemble from three 2 x N_tx partial ensembles. Each input
/// index i yields three output snapshots (rows listed top to bottom):
///   [H12 rows 1,2 ; H12' rows 1,2]
///   [H14 row 1 ; H12 rows 1,2 ; H14 row 2]
///   [H13 row 1 ; H13' row 1 ; H13 row 2 ; H13' row 2]
/// where the primed matrices come from snapshot (i+1) mod n under the
/// independent pairing and from snapshot i otherwise. H12 at index i is reused
/// by the first two combinations.
inline ChannelEnsemble combine_zero_padded(const ChannelEnsemble &h12, const ChannelEnsemble &h13,
                                           const ChannelEnsemble &h14,
                                           ZeroPadPairing pairing = ZeroPadPairing::independent)
{
    for (const auto *h : {&h12, &h13, &h14})
        if (h->n_rx() != 2 || h->n_tx() != h12.n_tx() || h->size() != h12.size())
            throw DimensionError("combine_zero_padded: inputs must be 2 x N_tx ensembles of equal size");

    const std::size_t n = h12.size();
    const Index n_tx = h12.n_tx();
    ChannelEnsemble out(4, n_tx, 3 * n, h12.seed());
    for (std::size_t i = 0; i < n; ++i)
    {
        const std::size_t j = pairing == ZeroPadPairing::independent ? (i + 1) % n : i;
        auto s1 = out.snapshot(3 * i);
        s1.topRows(2) = h12.snapshot(i);
        s1.bottomRows(2) = h12.snapshot(j);

        auto s2 = out.snapshot(3 * i + 1);
        s2.row(0) = h14.snapshot(i).row(0);
        s2.middleRows(1, 2) = h12.snapshot(i);
        s2.row(3) = h14.snapshot(i).row(1);

        auto s3 = out.snapshot(3 * i + 2);
        s3.row(0) = h13.snapshot(i).row(0);
        s3.row(1) = h13.snapshot(j).row(0);
        s3.row(2) = h13.snapshot(i).row(1);
        s3.row(3) = h13.snapshot(j).row(1);
    }
    return out;
}

namespace detail
{
// Deterministic blocked sum of per-snapshot Hermitian outer products. The
// visitor adds snapshot i's contribution into acc.
template <class Visit>
ComplexMatrix blocked_outer_sum(std::size_t n, Index dim, Visit &&visit)
{
    constexpr std::size_t block = 4096;
    const std::size_t n_blocks = (n + block - 1) / block;
    std::vector<ComplexMatrix> partial(n_blocks, ComplexMatrix::Zero(dim, dim));
    parallel_blocks(n, block, [&](std::size_t begin, std::size_t end, std::size_t b) {
        for (std::size_t i = begin; i < end; ++i)
            visit(i, partial[b]);
    });
    ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
    for (const auto &p : partial)
        total += p;
    return total;
}
} // namespace detail

/// Unnormalized sum over snapshots [begin, end) of H H^H (Rx x Rx).
inline ComplexMatrix rx_covariance_sum(const ChannelEnsemble &e, std::size_t begin, std::size_t end)
{
    const Index nr = e.n_rx();
    const Index nt = e.n_tx();
    return detail::blocked_outer_sum(end - begin, nr, [&](std::size_t k, ComplexMatrix &acc) {
        const auto h = e.snapshot(begin + k);
        for (Index m = 0; m < nr; ++m)
            for (Index q = m; q < nr; ++q)
            {
                cplx s = 0.0;
                for (Index c = 0; c < nt; ++c)
                    s += h(m, c) * std::conj(h(q, c));
                acc(m, q) += s;
                if (q != m)
                    acc(q, m) += std::conj(s);
            }
    });
}

/// Unnormalized sum over all snapshots of H^T conj(H) (Tx x Tx).
inline ComplexMatrix tx_covariance_sum(const ChannelEnsemble &e)
{
    const Index nr = e.n_rx();
    const Index nt = e.n_tx();
    return detail::blocked_outer_sum(e.size(), nt, [&](std::size_t i, ComplexMatrix &acc) {
        const auto h = e.snapshot(i);
        for (Index p = 0; p < nt; ++p)
            for (Index q = p; q < nt; ++q)
            {
                cplx s = 0.0;
                for (Index r = 0; r < nr; ++r)
                    s += h(r, p) * std::conj(h(r, q));
                acc(p, q) += s;
                if (q != p)
                    acc(q, p) += std::conj(s);
            }
    });
}

/// Sample Rx correlation, [m,n] ~ E{h_m h_n^*} averaged over Tx branches and
/// rescaled to a unit diagonal.
inline CorrelationMatrix sample_rx_corr(const ChannelEnsemble &e)
{
    return CorrelationMatrix::from_covariance(rx_covariance_sum(e, 0, e.size()));
}

inline CorrelationMatrix sample_tx_corr(const ChannelEnsemble &e)
{
    return CorrelationMatrix::from_covariance(tx_covariance_sum(e));
}

/// Rx marginal of a vec(H) covariance (partial trace over Tx), unit diagonal.
inline CorrelationMatrix marginal_rx_corr(const CovarianceMatrix &r_h, Index n_rx, Index n_tx)
{
    if (r_h.dim() != n_rx * n_tx)
        throw DimensionError("marginal_rx_corr: dimension mismatch");
    ComplexMatrix acc = ComplexMatrix::Zero(n_rx, n_rx);
    for (Index j = 0; j < n_tx; ++j)
        acc += r_h.matrix().block(j * n_rx, j * n_rx, n_rx, n_rx);
    return CorrelationMatrix::from_covariance(acc);
}

inline CorrelationMatrix marginal_tx_corr(const CovarianceMatrix &r_h, Index n_rx, Index n_tx)
{
    if (r_h.dim() != n_rx * n_tx)
        throw DimensionError("marginal_tx_corr: dimension mismatch");
    ComplexMatrix acc = ComplexMatrix::Zero(n_tx, n_tx);
    for (Index p = 0; p < n_tx; ++p)
        for (Index q = 0; q < n_tx; ++q)
            for (Index i = 0; i < n_rx; ++i)
                acc(p, q) += r_h(p * n_rx + i, q * n_rx + i);
    return CorrelationMatrix::from_covariance(acc);
}

/// Which parts of a dual-polarized ensemble feed the spatial/polarimetric split.
enum class SplitSource
{
    all,      // every polarization pair for R_S, every antenna-unit pair for R_P
    partial,  // RR polarization only for R_S, unit pair (0, 0) only for R_P
};

struct SpatialPolarimetricSplit
{
    CorrelationMatrix r_s;
    CorrelationMatrix r_p;
};

/// Splits a 2n_rx_units x 2n_tx_units dual-polarized ensemble into the spatial
/// correlation (averaged over polarization pairs) and the 4x4 polarimetric
/// correlation (averaged over antenna-unit pairs).
inline SpatialPolarimetricSplit split_spatial_polarimetric(const ChannelEnsemble &e, Index n_rx_units,
                                                           Index n_tx_units, SplitSource source = SplitSource::all)
{
    if (e.n_rx() % 2 != 0 || e.n_tx() % 2 != 0)
        throw DimensionError("dual-polarized ensembles need even antenna counts");
    if (e.n_rx() != 2 * n_rx_units || e.n_tx() != 2 * n_tx_units)
        throw DimensionError("unit counts do not match the ensemble dimensions");

    const Index ds = n_rx_units * n_tx_units;
    const Index n_pol = source == SplitSource::all ? 2 : 1;
    const Index n_ur = source == SplitSource::all ? n_rx_units : 1;
    const Index n_ut = source == SplitSource::all ? n_tx_units : 1;

    const ComplexMatrix cs = detail::blocked_outer_sum(e.size(), ds, [&](std::size_t i, ComplexMatrix &acc) {
        const auto h = e.snapshot(i);
        ComplexVector s(ds);
        for (Index pr = 0; pr < n_pol; ++pr)
            for (Index pt = 0; pt < n_pol; ++pt)
            {
                for (Index ut = 0; ut < n_tx_units; ++ut)
                    for (Index ur = 0; ur < n_rx_units; ++ur)
                        s[ut * n_rx_units + ur] = h(ur * 2 + pr, ut * 2 + pt);
                acc.noalias() += s * s.adjoint();
            }
    });
    const ComplexMatrix cp = detail::blocked_outer_sum(e.size(), 4, [&](std::size_t i, ComplexMatrix &acc) {
        const auto h = e.snapshot(i);
        Eigen::Vector4cd x;
        for (Index ur = 0; ur < n_ur; ++ur)
            for (Index ut = 0; ut < n_ut; ++ut)
            {
                for (Index pt = 0; pt < 2; ++pt)
                    for (Index pr = 0; pr < 2; ++pr)
                        x[pt * 2 + pr] = h(ur * 2 + pr, ut * 2 + pt);
                acc.noalias() += x * x.adjoint();
            }
    });
    return {CorrelationMatrix::from_covariance(cs), CorrelationMatrix::from_covariance(cp)};
}

/// Regenerates a full dual-polarized ensemble from estimated spatial and
/// polarimetric correlations; mu and chi are taken from p.
inline ChannelEnsemble reconstruct_dualpol(const CorrelationMatrix &r_s, const CorrelationMatrix &r_p,
                                           const PolarimetricParams &p, Index n_rx_units, Index n_tx_units,
                                           std::size_t n_snap, std::uint64_t seed, std::uint64_t stream = 0)
{
    return dualpol_ensemble(r_s, PolarimetricParams{p.mu, p.chi, r_p}, n_rx_units, n_tx_units, n_snap, seed, stream);
}

} // namespace mimo_recon

#endif
