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

#ifndef MIMO_RECON_TFA_HPP
#define MIMO_RECON_TFA_HPP

// Multitaper time-frequency analysis of sampled non-stationary channels.

#include "mimo_recon/chgen.hpp"
#include "mimo_recon/fft.hpp"
#include "mimo_recon/matcore.hpp"
#include "mimo_recon/metrics.hpp"
#include "mimo_recon/parallel.hpp"
#include "mimo_recon/recon.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mimo_recon
{

/// Orthonormal Slepian family: tapers[k] has length m; concentrations are the
/// fractions of energy inside [-W, W], W = nw / m, in decreasing order.
struct DpssFamily
{
    std::vector<RealVector> tapers;
    std::vector<double> concentrations;
};

namespace detail
{
// Solves (T - shift I) x = b for symmetric tridiagonal T with Gaussian
// elimination and partial pivoting. d: diagonal, e: off-diagonal (e[i] couples i, i+1).
inline RealVector tridiag_shifted_solve(const RealVector &d, const RealVector &e, double shift, RealVector b)
{
    const Index n = d.size();
    RealVector dl = e, dd = d.array() - shift, du = e, du2 = RealVector::Zero(n);
    for (Index i = 0; i + 1 < n; ++i)
    {
        if (std::abs(dd[i]) >= std::abs(dl[i]))
        {
            if (dd[i] == 0.0)
                dd[i] = 1e-300;
            const double f = dl[i] / dd[i];
            dd[i + 1] -= f * du[i];
            b[i + 1] -= f * b[i];
            dl[i] = 0.0;
        }
        else
        {
            const double f = dd[i] / dl[i];
            dd[i] = dl[i];
            const double tmp = dd[i + 1];
            dd[i + 1] = du[i] - f * tmp;
            if (i + 2 < n)
            {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du2[i];
            }
            du[i] = tmp;
            std::swap(b[i], b[i + 1]);
            b[i + 1] -= f * b[i];
        }
    }
    if (dd[n - 1] == 0.0)
        dd[n - 1] = 1e-300;
    b[n - 1] /= dd[n - 1];
    if (n > 1)
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dd[n - 2];
    for (Index i = n - 3; i >= 0; --i)
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / dd[i];
    return b;
}

inline double sinc_kernel(Index k, double w)
{
    return k == 0 ? 2.0 * w : std::sin(2.0 * std::numbers::pi * w * static_cast<double>(k)) / (std::numbers::pi * static_cast<double>(k));
}

// v^T A v with A[m,n] = sin(2 pi W (m-n)) / (pi (m-n)).
inline double sinc_quadratic_form(const RealVector &v, double w)
{
    const Index m = v.size();
    double q = 0.0;
    for (Index k = 0; k < m; ++k)
    {
        const double c = sinc_kernel(k, w);
        const double s = v.head(m - k).dot(v.tail(m - k));
        q += k == 0 ? c * s : 2.0 * c * s;
    }
    return q;
}
} // namespace detail

/// First k discrete prolate spheroidal sequences of length m and
/// time-bandwidth product nw. Built from the symmetric tridiagonal operator
/// that commutes with the sinc kernel. Sign: even tapers have positive sum,
/// odd tapers a positive first moment about the centre.
inline DpssFamily dpss(std::size_t m, double nw, std::size_t k)
{
    if (m < 8)
        throw std::invalid_argument("dpss: length must be at least 8");
    if (!(nw > 0.0) || k < 1 || static_cast<double>(k) > 2.0 * nw || nw >= static_cast<double>(m) / 2.0)
        throw std::invalid_argument("dpss: need 1 <= k <= 2 nw and 0 < nw < m/2");

    const auto n = static_cast<Index>(m);
    const double w = nw / static_cast<double>(m);
    RealVector diag(n), off(n - 1);
    const double c2w = std::cos(2.0 * std::numbers::pi * w);
    for (Index i = 0; i < n; ++i)
    {
        const double h = (static_cast<double>(n - 1) - 2.0 * static_cast<double>(i)) / 2.0;
        diag[i] = h * h * c2w;
    }
    for (Index i = 1; i < n; ++i)
        off[i - 1] = static_cast<double>(i) * static_cast<double>(n - i) / 2.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("dpss: tridiagonal eigensolver did not converge");
    const RealVector &ev = es.eigenvalues();  // ascending
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());

    DpssFamily fam;
    for (std::size_t j = 0; j < k; ++j)
    {
        const double lambda = ev[n - 1 - static_cast<Index>(j)];
        const double shift = lambda + 1e-10 * scale;
        RealVector v = RealVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
        if (j % 2 == 1)
            for (Index i = 0; i < n; ++i)
                v[i] = (static_cast<double>(n - 1) - 2.0 * static_cast<double>(i)) / static_cast<double>(n);
        for (int it = 0; it < 4; ++it)
        {
            v = detail::tridiag_shifted_solve(diag, off, shift, v);
            for (const auto &u : fam.tapers)
                v -= u.dot(v) * u;
            v.normalize();
        }
        double orient = 0.0;
        for (Index i = 0; i < n; ++i)
            orient += j % 2 == 0 ? v[i] : (static_cast<double>(n - 1) - 2.0 * static_cast<double>(i)) * v[i];
        if (orient < 0.0)
            v = -v;
        fam.concentrations.push_back(detail::sinc_quadratic_form(v, w));
        fam.tapers.push_back(std::move(v));
    }
    return fam;
}

/// Product tapers G_w[i', k'] = u_i[i'] v_k[k'], w = i K_w + k, with weights
/// gamma_w. Narrowband banks (m_f = 1) use the single unit frequency taper.
struct TaperBank
{
    std::size_t m_t = 1024;
    std::size_t m_f = 1;
    std::size_t i_w = 8;
    std::size_t k_w = 1;
    double nw = 4.0;
    DpssFamily time;
    DpssFamily freq;
    std::vector<double> weights;

    static TaperBank make(std::size_t m_t, std::size_t m_f = 1, double nw = 4.0, std::size_t i_w = 8, std::size_t k_w = 1)
    {
        TaperBank b;
        b.m_t = m_t;
        b.m_f = m_f;
        b.i_w = i_w;
        b.k_w = k_w;
        b.nw = nw;
        b.time = dpss(m_t, nw, i_w);
        if (m_f == 1)
        {
            if (k_w != 1)
                throw std::invalid_argument("narrowband taper bank needs k_w = 1");
            b.freq.tapers.push_back(RealVector::Ones(1));
            b.freq.concentrations.push_back(1.0);
        }
        else
            b.freq = dpss(m_f, nw, k_w);
        b.weights.assign(i_w * k_w, 1.0 / static_cast<double>(i_w * k_w));
        return b;
    }

    std::size_t n_w() const { return i_w * k_w; }
};

struct StationarityGrid
{
    std::size_t n_ts = std::size_t{1} << 16;
    std::size_t n_sc = 1;
    std::size_t m_t = 1024;
    std::size_t m_f = 1;

    void validate() const
    {
        if (m_t == 0 || m_f == 0 || n_ts == 0 || n_sc == 0)
            throw std::invalid_argument("stationarity grid sizes must be positive");
        if (n_ts % m_t != 0)
            throw std::invalid_argument("m_t must divide n_ts");
        if (n_sc % m_f != 0)
            throw std::invalid_argument("m_f must divide n_sc");
    }
    std::size_t regions_t() const { return n_ts / m_t; }
    std::size_t regions_f() const { return n_sc / m_f; }
};

/// One spatial entry of a sampled channel, h[i, q] over time i and subcarrier q
/// (row-major, n_sc columns).
struct SampledChannel
{
    std::size_t n_ts = 0;
    std::size_t n_sc = 1;
    std::vector<cplx> data;

    cplx operator()(std::size_t i, std::size_t q) const { return data[i * n_sc + q]; }

    /// Narrowband series of entry (r, c) of a time-indexed ensemble.
    static SampledChannel from_entry(const ChannelEnsemble &e, Index r, Index c)
    {
        SampledChannel s{e.size(), 1, std::vector<cplx>(e.size())};
        for (std::size_t i = 0; i < e.size(); ++i)
            s.data[i] = e.at(i, r, c);
        return s;
    }
};

/// Local scattering function estimate C[rt, rf; l, p], with delay bin l in
/// [0, m_f) and Doppler bin index in [0, m_t) mapping to p = index - m_t/2.
struct LsfArray
{
    std::size_t regions_t = 0;
    std::size_t regions_f = 0;
    std::size_t m_f = 1;
    std::size_t m_t = 1;
    std::vector<double> data;

    double &operator()(std::size_t rt, std::size_t rf, std::size_t l, std::size_t p)
    {
        return data[((rt * regions_f + rf) * m_f + l) * m_t + p];
    }
    double operator()(std::size_t rt, std::size_t rf, std::size_t l, std::size_t p) const
    {
        return data[((rt * regions_f + rf) * m_f + l) * m_t + p];
    }
};

/// Multitaper LSF: per region, weighted average over tapers of
/// |sum_{i',k'} h G_w exp(-j2pi (p i'/M_t - l k'/M_f))|^2 (unnormalized DFT).
inline LsfArray lsf(const SampledChannel &h, const TaperBank &bank, const StationarityGrid &grid)
{
    grid.validate();
    if (bank.m_t != grid.m_t || bank.m_f != grid.m_f)
        throw DimensionError("lsf: taper bank and grid disagree on region size");
    if (h.n_ts < grid.n_ts || h.n_sc != grid.n_sc || h.data.size() != h.n_ts * h.n_sc)
        throw DimensionError("lsf: sampled channel is smaller than the grid");

    LsfArray out{grid.regions_t(), grid.regions_f(), grid.m_f, grid.m_t, {}};
    out.data.assign(out.regions_t * out.regions_f * grid.m_f * grid.m_t, 0.0);
    const std::size_t mt = grid.m_t;
    const std::size_t mf = grid.m_f;
    const std::size_t n_regions = out.regions_t * out.regions_f;

    parallel_blocks(n_regions, 1, [&](std::size_t begin, std::size_t end, std::size_t) {
        std::vector<std::vector<cplx>> work(mf, std::vector<cplx>(mt));
        std::vector<cplx> col(mf);
        for (std::size_t r = begin; r < end; ++r)
        {
            const std::size_t rt = r / out.regions_f;
            const std::size_t rf = r % out.regions_f;
            for (std::size_t ti = 0; ti < bank.i_w; ++ti)
                for (std::size_t fk = 0; fk < bank.k_w; ++fk)
                {
                    const RealVector &u = bank.time.tapers[ti];
                    const RealVector &v = bank.freq.tapers[fk];
                    const double gamma = bank.weights[ti * bank.k_w + fk];
                    // Doppler transform along time for every subcarrier
                    for (std::size_t k = 0; k < mf; ++k)
                    {
                        for (std::size_t i = 0; i < mt; ++i)
                            work[k][i] = h(rt * mt + i, rf * mf + k) * (u[static_cast<Index>(i)] * v[static_cast<Index>(k)]);
                        fft::dft(work[k], -1);
                    }
                    for (std::size_t p = 0; p < mt; ++p)
                    {
                        for (std::size_t k = 0; k < mf; ++k)
                            col[k] = work[k][p];
                        fft::dft(col, +1);
                        // fftshift: bin p maps to output index (p + mt/2) mod mt
                        const std::size_t pi = (p + mt / 2) % mt;
                        for (std::size_t l = 0; l < mf; ++l)
                            out(rt, rf, l, pi) += gamma * std::norm(col[l]);
                    }
                }
        }
    });
    return out;
}

/// Doppler spectral density per time region: power[rt, p], average over the
/// delay bins of one frequency region.
struct DsdMap
{
    std::vector<double> doppler_hz;
    std::vector<double> region_time_s;  // region centre times
    Eigen::MatrixXd power;              // rows: time regions, cols: Doppler bins

    /// Dominant Doppler frequency per region. With half_width = 0 this is the
    /// strongest bin; otherwise the power centroid over +-half_width bins,
    /// re-centred until it settles. A multitaper window is flat over +-NW bins,
    /// so the centroid with half_width = NW locates a tone inside that plateau.
    std::vector<double> peak_track(std::size_t half_width = 0) const
    {
        const Index nb = power.cols();
        const double df = nb > 1 ? doppler_hz[1] - doppler_hz[0] : 0.0;
        const auto hw = static_cast<Index>(half_width);
        std::vector<double> t(static_cast<std::size_t>(power.rows()));
        for (Index r = 0; r < power.rows(); ++r)
        {
            Index c = 0;
            power.row(r).maxCoeff(&c);
            double f = doppler_hz[static_cast<std::size_t>(c)];
            for (int it = 0; it < 8 && hw > 0; ++it)
            {
                double sp = 0.0;
                double sf = 0.0;
                for (Index b = std::max<Index>(0, c - hw); b <= std::min<Index>(nb - 1, c + hw); ++b)
                {
                    sp += power(r, b);
                    sf += power(r, b) * doppler_hz[static_cast<std::size_t>(b)];
                }
                if (!(sp > 0.0))
                    break;
                f = sf / sp;
                const Index next = std::clamp<Index>(static_cast<Index>(std::lround((f - doppler_hz[0]) / df)), 0, nb - 1);
                if (next == c)
                    break;
                c = next;
            }
            t[static_cast<std::size_t>(r)] = f;
        }
        return t;
    }
};

inline std::vector<double> doppler_bins_hz(std::size_t m_t, double t_step_s)
{
    std::vector<double> f(m_t);
    for (std::size_t i = 0; i < m_t; ++i)
        f[i] = (static_cast<double>(i) - static_cast<double>(m_t / 2)) / (static_cast<double>(m_t) * t_step_s);
    return f;
}

/// DSD from an LSF; rf selects the frequency region (narrowband: 0).
inline DsdMap dsd(const LsfArray &c, double t_step_s, std::size_t rf = 0)
{
    if (rf >= c.regions_f)
        throw DimensionError("dsd: frequency region out of range");
    if (!(t_step_s > 0.0))
        throw std::invalid_argument("dsd: sampling step must be positive");
    DsdMap d;
    d.doppler_hz = doppler_bins_hz(c.m_t, t_step_s);
    d.power = Eigen::MatrixXd::Zero(static_cast<Index>(c.regions_t), static_cast<Index>(c.m_t));
    for (std::size_t rt = 0; rt < c.regions_t; ++rt)
    {
        d.region_time_s.push_back((static_cast<double>(rt) + 0.5) * static_cast<double>(c.m_t) * t_step_s);
        for (std::size_t l = 0; l < c.m_f; ++l)
            for (std::size_t p = 0; p < c.m_t; ++p)
                d.power(static_cast<Index>(rt), static_cast<Index>(p)) += c(rt, rf, l, p);
    }
    d.power /= static_cast<double>(c.m_f);
    return d;
}

/// DSD averaged over every Rx/Tx entry of a narrowband time series.
inline DsdMap ensemble_dsd(const ChannelEnsemble &e, const TaperBank &bank, std::size_t m_t)
{
    if (!e.time_indexed())
        throw std::invalid_argument("ensemble_dsd: ensemble has no sampling step");
    const std::size_t n_ts = e.size() - e.size() % m_t;
    const StationarityGrid grid{n_ts, 1, m_t, 1};
    DsdMap acc;
    for (Index r = 0; r < e.n_rx(); ++r)
        for (Index c = 0; c < e.n_tx(); ++c)
        {
            const DsdMap d = dsd(lsf(SampledChannel::from_entry(e, r, c), bank, grid), e.time_step_s());
            if (acc.power.size() == 0)
                acc = d;
            else
                acc.power += d.power;
        }
    acc.power /= static_cast<double>(e.n_rx() * e.n_tx());
    return acc;
}

/// LOS Doppler shift of the HST geometry at time t, Hz.
inline double hst_doppler_ref(double t, const HstScenario &s)
{
    if (t < 0.0)
        throw std::invalid_argument("hst_doppler_ref: negative time");
    return s.max_doppler_hz() * hst_cos_aoa(t, s);
}

/// Per-region Rx correlation sums of a time series, unnormalized.
inline std::vector<ComplexMatrix> region_rx_cov(const ChannelEnsemble &e, std::size_t m_t)
{
    if (m_t == 0 || e.size() < m_t)
        throw DimensionError("region_rx_cov: series shorter than one region");
    std::vector<ComplexMatrix> out;
    for (std::size_t b = 0; b + m_t <= e.size(); b += m_t)
        out.push_back(rx_covariance_sum(e, b, b + m_t));
    return out;
}

/// Per-region pair sets {gap: rho} from the normalized 2x2 region correlations
/// of runs whose antenna pairs are 1..gaps.size() elements apart.
inline std::vector<PartialPairSet> region_pair_sets(const std::vector<std::vector<ComplexMatrix>> &runs_by_gap)
{
    std::vector<PartialPairSet> out;
    if (runs_by_gap.empty())
        return out;
    const std::size_t n_regions = runs_by_gap.front().size();
    out.resize(n_regions);
    for (std::size_t g = 0; g < runs_by_gap.size(); ++g)
    {
        if (runs_by_gap[g].size() != n_regions)
            throw DimensionError("region_pair_sets: runs have different region counts");
        for (std::size_t r = 0; r < n_regions; ++r)
            out[r][g + 1] = CorrelationMatrix::from_covariance(runs_by_gap[g][r])(0, 1);
    }
    return out;
}

inline constexpr std::size_t min_region_samples = 64;

/// CMD per stationarity region between the Rx correlation of the full 4-element
/// series and the one stitched from three 2-element runs at 1, 2 and 3 element
/// spacings. Region statistics are pooled over n_iter independent redraws.
inline std::vector<double> tv_recon_cmd(const HstScenario &s, std::size_t m_t, std::size_t n_iter, std::uint64_t seed)
{
    s.validate();
    if (n_iter < 1)
        throw std::invalid_argument("tv_recon_cmd: n_iter must be at least 1");
    if (m_t < min_region_samples)
        throw std::invalid_argument("tv_recon_cmd: stationarity regions need at least 64 samples");
    if (s.t_samples % m_t != 0)
        throw std::invalid_argument("tv_recon_cmd: m_t must divide the series length");
    if (s.rx.n_elements != 4)
        throw DimensionError("tv_recon_cmd: the full run needs four Rx elements");

    constexpr std::size_t n_gaps = 3;
    std::vector<ComplexMatrix> full;
    std::vector<std::vector<ComplexMatrix>> partial(n_gaps);
    for (std::size_t it = 0; it < n_iter; ++it)
    {
        const std::uint64_t base = it * (n_gaps + 1);
        auto acc = [](std::vector<ComplexMatrix> &dst, std::vector<ComplexMatrix> src) {
            if (dst.empty())
                dst = std::move(src);
            else
                for (std::size_t r = 0; r < dst.size(); ++r)
                    dst[r] += src[r];
        };
        acc(full, region_rx_cov(rician_series(s, seed, base), m_t));
        for (std::size_t g = 1; g <= n_gaps; ++g)
        {
            HstScenario sg = s;
            sg.rx = {2, s.rx.spacing_wl * static_cast<double>(g)};
            acc(partial[g - 1], region_rx_cov(rician_series(sg, seed, base + g), m_t));
        }
    }

    const auto pairs = region_pair_sets(partial);
    std::vector<double> out(full.size());
    for (std::size_t r = 0; r < full.size(); ++r)
    {
        const auto r_full = CorrelationMatrix::from_covariance(full[r]);
        const auto baseline = CorrelationMatrix::from_covariance(partial[0][r]);
        // single-realization regions can be far from consistent; keep them and let CMD show it
        const auto r_hat = stitch_rx_corr(baseline, pairs[r], 4, std::numeric_limits<double>::infinity());
        out[r] = cmd(r_hat, r_full);
    }
    return out;
}

} // namespace mimo_recon

#endif
