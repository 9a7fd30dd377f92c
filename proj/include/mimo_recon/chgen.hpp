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

#ifndef MIMO_RECON_CHGEN_HPP
#define MIMO_RECON_CHGEN_HPP

// Random channel generators: correlated Rayleigh snapshots, time-sampled
// Rician LOS+NLOS series for the high-speed-train geometry, and dual-polarized
// spatial (x) polarimetric channels.
//
// Orientation: a channel snapshot H is N_rx x N_tx and vec() stacks columns,
// so a separable covariance of vec(H) is R_tx (x) R_rx. Callers pass (R_rx,
// R_tx) to vec_covariance() and never build the product by hand.

#include "mimo_recon/corrmodels.hpp"
#include "mimo_recon/matcore.hpp"
#include "mimo_recon/parallel.hpp"
#include "mimo_recon/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace mimo_recon
{

inline constexpr double speed_of_light_mps = 299792458.0;

/// A set of N_rx x N_tx channel snapshots sharing one generation context.
/// Snapshots are stored contiguously, each one row-major. A nonzero time step
/// marks the ensemble as a uniformly sampled time series.
class ChannelEnsemble
{
public:
    using SnapshotView = Eigen::Map<const ComplexMatrix>;
    using MutableSnapshotView = Eigen::Map<ComplexMatrix>;

    ChannelEnsemble(Index n_rx, Index n_tx, std::size_t n_snap, std::uint64_t seed = 0, double time_step_s = 0.0)
        : n_rx_(n_rx), n_tx_(n_tx), n_snap_(n_snap), seed_(seed), time_step_s_(time_step_s)
    {
        if (n_rx < 1 || n_tx < 1)
            throw DimensionError("channel dimensions must be positive");
        if (n_snap < 1)
            throw DimensionError("channel ensemble must hold at least one snapshot");
        data_.assign(static_cast<std::size_t>(n_rx * n_tx) * n_snap, cplx(0.0));
    }

    Index n_rx() const noexcept { return n_rx_; }
    Index n_tx() const noexcept { return n_tx_; }
    std::size_t size() const noexcept { return n_snap_; }
    std::uint64_t seed() const noexcept { return seed_; }
    double time_step_s() const noexcept { return time_step_s_; }
    bool time_indexed() const noexcept { return time_step_s_ > 0.0; }
    std::size_t snapshot_stride() const noexcept { return static_cast<std::size_t>(n_rx_ * n_tx_); }

    SnapshotView snapshot(std::size_t i) const
    {
        return SnapshotView(data_.data() + i * snapshot_stride(), n_rx_, n_tx_);
    }

    MutableSnapshotView snapshot(std::size_t i)
    {
        return MutableSnapshotView(data_.data() + i * snapshot_stride(), n_rx_, n_tx_);
    }

    cplx at(std::size_t i, Index r, Index c) const
    {
        return data_[i * snapshot_stride() + static_cast<std::size_t>(r * n_tx_ + c)];
    }

    std::span<const cplx> raw() const noexcept { return data_; }
    std::span<cplx> raw() noexcept { return data_; }

private:
    Index n_rx_;
    Index n_tx_;
    std::size_t n_snap_;
    std::uint64_t seed_;
    double time_step_s_;
    std::vector<cplx> data_;
};

/// Covariance of vec(H) for separable fading with the given Rx and Tx
/// correlations.
inline CovarianceMatrix vec_covariance(const CovarianceMatrix &r_rx, const CovarianceMatrix &r_tx)
{
    return CovarianceMatrix::from(kron(r_tx.matrix(), r_rx.matrix()));
}

namespace detail
{
inline constexpr std::size_t snapshot_block = 8192;

// v = L w for lower-triangular L, written straight into a row-major N_rx x N_tx
// snapshot through the column-major vec index.
inline void correlate_into(const ComplexMatrix &lower, const cplx *w, cplx *snapshot, Index n_rx, Index n_tx)
{
    const Index d = lower.rows();
    for (Index r = 0; r < d; ++r)
    {
        cplx acc = 0.0;
        for (Index k = 0; k <= r; ++k)
            acc += lower(r, k) * w[k];
        const Index row = r % n_rx;
        const Index col = r / n_rx;
        snapshot[row * n_tx + col] = acc;
    }
}
} // namespace detail

/// Correlated Rayleigh snapshots vec(H) = R_H^{1/2} vec(H_iid), H_iid ~ CN(0,1).
/// Snapshot i draws from its own substream (seed, stream, i).
inline ChannelEnsemble rayleigh_ensemble(const CovarianceMatrix &r_h, Index n_rx, Index n_tx, std::size_t n_snap,
                                         std::uint64_t seed, std::uint64_t stream = 0)
{
    if (r_h.dim() != n_rx * n_tx)
        throw DimensionError("rayleigh_ensemble: covariance dimension " + std::to_string(r_h.dim()) +
                             " does not match " + std::to_string(n_rx) + "x" + std::to_string(n_tx));
    const ComplexMatrix lower = chol_sqrt(r_h);
    ChannelEnsemble e(n_rx, n_tx, n_snap, seed);
    const Index d = n_rx * n_tx;
    auto raw = e.raw();
    parallel_blocks(n_snap, detail::snapshot_block, [&](std::size_t begin, std::size_t end, std::size_t) {
        std::vector<cplx> w(static_cast<std::size_t>(d));
        for (std::size_t i = begin; i < end; ++i)
        {
            StreamRng rng(seed, stream, i);
            for (auto &x : w)
                x = rng.complex_normal();
            detail::correlate_into(lower, w.data(), raw.data() + i * e.snapshot_stride(), n_rx, n_tx);
        }
    });
    return e;
}

/// High-speed-train geometry: a train at constant speed along a track with a
/// row of base stations d_min from the rails, d_bs apart.
struct HstScenario
{
    double v_mps = 350.0 / 3.6;
    double d_min_m = 50.0;
    double d_bs_m = 1000.0;
    double fc_hz = 800e6;
    double k_rician_db = 0.0;
    double theta_v_deg = 0.0;       // LOS-to-velocity angle, used only with fixed_geometry
    ArrayGeometry rx{4, 0.5};
    ArrayGeometry tx{2, 0.5};
    double sigma_phi_deg = 20.0;
    double nlos_aoa_mean_deg = 0.0;
    double nlos_aod_mean_deg = 0.0;
    std::size_t t_samples = std::size_t{1} << 16;
    double t_step_s = 1e-4;
    bool doppler_filter = true;     // classical Doppler shaping of the NLOS part
    bool fixed_geometry = false;    // hold the LOS angle at theta_v instead of following the track
    std::size_t sinusoids = 32;     // sum-of-sinusoids count per NLOS process

    double wavelength_m() const noexcept { return speed_of_light_mps / fc_hz; }
    double max_doppler_hz() const noexcept { return fc_hz * v_mps / speed_of_light_mps; }
    double period_s() const noexcept { return 2.0 * d_bs_m / v_mps; }

    void validate() const
    {
        if (!(v_mps > 0.0) || !std::isfinite(v_mps))
            throw std::invalid_argument("train speed must be positive");
        if (!(d_min_m > 0.0) || !(d_bs_m > 0.0))
            throw std::invalid_argument("track geometry distances must be positive");
        if (!(fc_hz > 0.0))
            throw std::invalid_argument("carrier frequency must be positive");
        if (!(t_step_s > 0.0))
            throw std::invalid_argument("sampling step must be positive");
        if (t_samples == 0 || (t_samples & (t_samples - 1)) != 0)
            throw std::invalid_argument("time sample count must be a power of two");
        if (std::isnan(k_rician_db))
            throw std::invalid_argument("Rician factor must be a number");
        if (doppler_filter && sinusoids < 4)
            throw std::invalid_argument("at least four sinusoids are needed for Doppler shaping");
        rx.validate();
        tx.validate();
        GaussianAngularProfile{nlos_aoa_mean_deg, sigma_phi_deg}.validate();
    }
};

/// cos of the LOS arrival angle relative to the velocity at time t: the
/// piecewise track law, periodic with period 2 d_bs / v.
inline double hst_cos_aoa(double t, const HstScenario &s)
{
    if (s.fixed_geometry)
        return std::cos(deg2rad(s.theta_v_deg));
    const double leg = s.d_bs_m / s.v_mps;
    double tm = std::fmod(t, 2.0 * leg);
    if (tm < 0.0)
        tm += 2.0 * leg;
    const double x = tm <= leg ? s.d_bs_m / 2.0 - s.v_mps * tm : -1.5 * s.d_bs_m + s.v_mps * tm;
    return x / std::sqrt(s.d_min_m * s.d_min_m + x * x);
}

namespace detail
{
// Unit-power NLOS driving process. With Doppler shaping it is a sum of
// sinusoids whose arrival angles are evenly spread over the circle with a
// random offset (classical Jakes spectrum, max Doppler fc v / c); otherwise
// i.i.d. CN(0,1) samples.
inline std::vector<cplx> nlos_process(const HstScenario &s, std::uint64_t seed, std::uint64_t stream,
                                      std::uint64_t process)
{
    StreamRng rng(seed, stream, process);
    std::vector<cplx> w(s.t_samples, cplx(0.0));
    if (!s.doppler_filter)
    {
        for (auto &x : w)
            x = rng.complex_normal();
        return w;
    }
    const auto n = static_cast<double>(s.sinusoids);
    const double offset = rng.uniform();
    const double fd = s.max_doppler_hz();
    constexpr std::size_t resync = 4096;
    for (std::size_t k = 0; k < s.sinusoids; ++k)
    {
        const double alpha = 2.0 * std::numbers::pi * (static_cast<double>(k) + offset) / n;
        const double omega = 2.0 * std::numbers::pi * fd * std::cos(alpha) * s.t_step_s;
        const double phi0 = rng.phase();
        const cplx rot = std::polar(1.0, omega);
        cplx z;
        for (std::size_t i = 0; i < s.t_samples; ++i)
        {
            if (i % resync == 0)
                z = std::polar(1.0, phi0 + omega * static_cast<double>(i));
            w[i] += z;
            z *= rot;
        }
    }
    const double scale = 1.0 / std::sqrt(n);
    for (auto &x : w)
        x *= scale;
    return w;
}

inline void rician_weights(double k_db, double &los, double &nlos)
{
    if (std::isinf(k_db))
    {
        los = k_db > 0 ? 1.0 : 0.0;
        nlos = k_db > 0 ? 0.0 : 1.0;
        return;
    }
    const double k = std::pow(10.0, k_db / 10.0);
    los = std::sqrt(k / (k + 1.0));
    nlos = std::sqrt(1.0 / (k + 1.0));
}
} // namespace detail

/// Time-sampled narrowband Rician channel H(t_i), t_i = i T_s:
///   H = sqrt(K/(K+1)) H_LOS + sqrt(1/(K+1)) H_NLOS.
/// The LOS term is a_rx(phi) a_tx(phi)^T exp(j psi(t)) with phi the track
/// arrival angle and psi the accumulated Doppler phase 2 pi int nu_D dt, so the
/// instantaneous LOS frequency equals the Doppler law. The NLOS term has
/// covariance R_tx (x) R_rx built from Gaussian angular profiles.
inline ChannelEnsemble rician_series(const HstScenario &s, std::uint64_t seed, std::uint64_t stream = 0)
{
    s.validate();
    const auto n_rx = static_cast<Index>(s.rx.n_elements);
    const auto n_tx = static_cast<Index>(s.tx.n_elements);
    const Index d = n_rx * n_tx;

    const auto r_rx = ula_corr_from_rho(s.rx, {s.nlos_aoa_mean_deg, s.sigma_phi_deg});
    const auto r_tx = ula_corr_from_rho(s.tx, {s.nlos_aod_mean_deg, s.sigma_phi_deg});
    const ComplexMatrix lower = chol_sqrt(vec_covariance(r_rx, r_tx));

    std::vector<std::vector<cplx>> w(static_cast<std::size_t>(d));
    parallel_blocks(w.size(), 1, [&](std::size_t b, std::size_t, std::size_t) {
        w[b] = detail::nlos_process(s, seed, stream, b);
    });

    double los_w = 0.0;
    double nlos_w = 0.0;
    detail::rician_weights(s.k_rician_db, los_w, nlos_w);

    // Accumulated LOS phase by the trapezoid rule.
    std::vector<double> psi(s.t_samples);
    std::vector<double> aoa_deg(s.t_samples);
    const double fd = s.max_doppler_hz();
    double prev_nu = fd * hst_cos_aoa(0.0, s);
    psi[0] = 0.0;
    for (std::size_t i = 0; i < s.t_samples; ++i)
    {
        const double c = hst_cos_aoa(static_cast<double>(i) * s.t_step_s, s);
        aoa_deg[i] = rad2deg(std::acos(std::clamp(c, -1.0, 1.0)));
        if (i > 0)
        {
            const double nu = fd * c;
            psi[i] = psi[i - 1] + std::numbers::pi * s.t_step_s * (prev_nu + nu);
            prev_nu = nu;
        }
    }

    ChannelEnsemble e(n_rx, n_tx, s.t_samples, seed, s.t_step_s);
    auto raw = e.raw();
    parallel_blocks(s.t_samples, detail::snapshot_block, [&](std::size_t begin, std::size_t end, std::size_t) {
        std::vector<cplx> wi(static_cast<std::size_t>(d));
        for (std::size_t i = begin; i < end; ++i)
        {
            cplx *h = raw.data() + i * e.snapshot_stride();
            for (Index k = 0; k < d; ++k)
                wi[static_cast<std::size_t>(k)] = w[static_cast<std::size_t>(k)][i];
            detail::correlate_into(lower, wi.data(), h, n_rx, n_tx);
            const ComplexVector a_rx = steering_vector(s.rx, aoa_deg[i]);
            const ComplexVector a_tx = steering_vector(s.tx, aoa_deg[i]);
            const cplx rot = std::polar(los_w, psi[i]);
            for (Index r = 0; r < n_rx; ++r)
                for (Index c = 0; c < n_tx; ++c)
                    h[r * n_tx + c] = nlos_w * h[r * n_tx + c] + rot * a_rx[r] * a_tx[c];
        }
    });
    return e;
}

/// Polarimetric parameters: mu = 1/CPR, chi = 1/XPR and the 4x4 correlation
/// between polarization states (vec order RR, LR, RL, LL).
struct PolarimetricParams
{
    double mu = 1.0;
    double chi = 0.0;
    CorrelationMatrix r_p = CorrelationMatrix::identity(4);

    void validate() const
    {
        if (!(mu > 0.0) || !std::isfinite(mu))
            throw std::invalid_argument("mu (inverse CPR) must be positive");
        if (!(chi >= 0.0) || !std::isfinite(chi))
            throw std::invalid_argument("chi (inverse XPR) must be nonnegative");
        if (r_p.dim() != 4)
            throw DimensionError("polarimetric correlation must be 4x4");
    }
};

/// Dual-polarized channel H_x = H (x) X with vec(H) = R_S^{1/2} vec(H_iid) over
/// the n_rx_units x n_tx_units antenna units and vec(X) = R_P^{1/2} vec(X_w),
///   X_w = 1/sqrt(1+chi) [ e^{j p_RR}            sqrt(chi mu) e^{j p_RL} ]
///                       [ sqrt(chi) e^{j p_LR}  sqrt(mu) e^{j p_LL}     ]
/// with the four phases uniform on [0, 2pi). Output is 2n_rx_units x 2n_tx_units.
inline ChannelEnsemble dualpol_ensemble(const CovarianceMatrix &r_s, const PolarimetricParams &p, Index n_rx_units,
                                        Index n_tx_units, std::size_t n_snap, std::uint64_t seed,
                                        std::uint64_t stream = 0)
{
    p.validate();
    if (r_s.dim() != n_rx_units * n_tx_units)
        throw DimensionError("dualpol_ensemble: spatial correlation dimension does not match the unit counts");
    const ComplexMatrix l_s = chol_sqrt(r_s);
    const ComplexMatrix l_p = chol_sqrt(p.r_p);
    const double g = 1.0 / std::sqrt(1.0 + p.chi);
    // vec order (col-major 2x2): RR, LR, RL, LL.
    const double mag[4] = {g, g * std::sqrt(p.chi), g * std::sqrt(p.chi * p.mu), g * std::sqrt(p.mu)};

    const Index n_rx = 2 * n_rx_units;
    const Index n_tx = 2 * n_tx_units;
    ChannelEnsemble e(n_rx, n_tx, n_snap, seed);
    auto raw = e.raw();
    const Index ds = n_rx_units * n_tx_units;
    parallel_blocks(n_snap, detail::snapshot_block, [&](std::size_t begin, std::size_t end, std::size_t) {
        std::vector<cplx> w(static_cast<std::size_t>(ds));
        std::vector<cplx> h(static_cast<std::size_t>(ds));
        cplx xw[4];
        cplx x[4];
        for (std::size_t i = begin; i < end; ++i)
        {
            StreamRng rng(seed, stream, i);
            for (auto &v : w)
                v = rng.complex_normal();
            detail::correlate_into(l_s, w.data(), h.data(), n_rx_units, n_tx_units);
            for (int k = 0; k < 4; ++k)
                xw[k] = std::polar(mag[k], rng.phase());
            for (int r = 0; r < 4; ++r)
            {
                x[r] = 0.0;
                for (int k = 0; k <= r; ++k)
                    x[r] += l_p(r, k) * xw[k];
            }
            // x is vec(X) column-major; X(pr, pt) = x[pt * 2 + pr].
            cplx *out = raw.data() + i * e.snapshot_stride();
            for (Index ur = 0; ur < n_rx_units; ++ur)
                for (Index ut = 0; ut < n_tx_units; ++ut)
                {
                    const cplx hs = h[static_cast<std::size_t>(ur * n_tx_units + ut)];
                    for (Index pr = 0; pr < 2; ++pr)
                        for (Index pt = 0; pt < 2; ++pt)
                            out[(ur * 2 + pr) * n_tx + ut * 2 + pt] = hs * x[pt * 2 + pr];
                }
        }
    });
    return e;
}

} // namespace mimo_recon

#endif
