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

#ifndef MIMO_RECON_METRICS_HPP
#define MIMO_RECON_METRICS_HPP

#include "mimo_recon/chgen.hpp"
#include "mimo_recon/corrmodels.hpp"
#include "mimo_recon/matcore.hpp"
#include "mimo_recon/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mimo_recon
{

namespace detail
{
inline void check_pair(const ComplexMatrix &a, const ComplexMatrix &b, const char *who)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError(std::string(who) + ": dimension mismatch");
    if (fro_norm(a) == 0.0 || fro_norm(b) == 0.0)
        throw std::invalid_argument(std::string(who) + ": zero-norm input");
}
} // namespace detail

/// ||A - B||_F / sqrt(||A||_F ||B||_F)
inline double rel_err(const ComplexMatrix &r_hat, const ComplexMatrix &r)
{
    detail::check_pair(r_hat, r, "rel_err");
    return fro_norm(r_hat - r) / std::sqrt(fro_norm(r_hat) * fro_norm(r));
}

/// Correlation matrix distance, 1 - Re tr(A B^H) / (||A|| ||B||).
inline double cmd(const ComplexMatrix &r_hat, const ComplexMatrix &r)
{
    detail::check_pair(r_hat, r, "cmd");
    const cplx ip = (r_hat.array() * r.array().conjugate()).sum();
    return 1.0 - ip.real() / (fro_norm(r_hat) * fro_norm(r));
}

/// Correlation matrix collinearity, |tr(A B^H)| / (||A|| ||B||).
inline double cmc(const ComplexMatrix &r_hat, const ComplexMatrix &r)
{
    detail::check_pair(r_hat, r, "cmc");
    const cplx ip = (r_hat.array() * r.array().conjugate()).sum();
    return std::abs(ip) / (fro_norm(r_hat) * fro_norm(r));
}

inline double rel_err(const CovarianceMatrix &a, const CovarianceMatrix &b) { return rel_err(a.matrix(), b.matrix()); }
inline double cmd(const CovarianceMatrix &a, const CovarianceMatrix &b) { return cmd(a.matrix(), b.matrix()); }
inline double cmc(const CovarianceMatrix &a, const CovarianceMatrix &b) { return cmc(a.matrix(), b.matrix()); }

/// sigma_max / sigma_min, +inf when sigma_min < 1e-14 sigma_max.
inline double cond_number(const ComplexMatrix &h)
{
    const RealVector s = singular_values(h);
    if (s.size() == 0 || s[0] == 0.0)
        throw std::invalid_argument("cond_number: zero matrix");
    const double smin = s[s.size() - 1];
    if (smin < 1e-14 * s[0])
        return std::numeric_limits<double>::infinity();
    return s[0] / smin;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

namespace detail
{
// Eigenvalues (ascending) of the smaller Gram matrix of one snapshot.
template <class View>
RealVector gram_eigvals(const View &h)
{
    Eigen::MatrixXcd g = h.rows() <= h.cols() ? Eigen::MatrixXcd(h * h.adjoint()) : Eigen::MatrixXcd(h.adjoint() * h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("gram_eigvals: eigensolver did not converge");
    return es.eigenvalues().cwiseMax(0.0);
}
} // namespace detail

/// log2 det(I + gamma/N_tx H H^H) for one matrix.
inline double capacity(const ComplexMatrix &h, double snr_db)
{
    const double g = db_to_linear(snr_db) / static_cast<double>(h.cols());
    double c = 0.0;
    for (const double l : detail::gram_eigvals(h))
        c += std::log2(1.0 + g * l);
    return c;
}

/// Per-snapshot capacities at one SNR.
inline std::vector<double> capacities(const ChannelEnsemble &e, double snr_db)
{
    const double g = db_to_linear(snr_db) / static_cast<double>(e.n_tx());
    std::vector<double> out(e.size());
    parallel_blocks(e.size(), 4096, [&](std::size_t b, std::size_t end, std::size_t) {
        for (std::size_t i = b; i < end; ++i)
        {
            double c = 0.0;
            for (const double l : detail::gram_eigvals(e.snapshot(i)))
                c += std::log2(1.0 + g * l);
            out[i] = c;
        }
    });
    return out;
}

namespace detail
{
inline double ordered_mean(const std::vector<double> &v)
{
    // fixed left-to-right order keeps results independent of thread count
    double s = 0.0;
    for (const double x : v)
        s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}
} // namespace detail

/// Mean capacity over the ensemble, bit/s/Hz.
inline double ergodic_capacity(const ChannelEnsemble &e, double snr_db)
{
    return detail::ordered_mean(capacities(e, snr_db));
}

/// Ergodic capacity at several SNRs from one eigen-decomposition per snapshot.
inline std::vector<double> ergodic_capacity_curve(const ChannelEnsemble &e, const std::vector<double> &snr_db)
{
    constexpr std::size_t block = 4096;
    const std::size_t n_blocks = (e.size() + block - 1) / block;
    std::vector<std::vector<double>> partial(n_blocks, std::vector<double>(snr_db.size(), 0.0));
    std::vector<double> g(snr_db.size());
    for (std::size_t k = 0; k < snr_db.size(); ++k)
        g[k] = db_to_linear(snr_db[k]) / static_cast<double>(e.n_tx());
    parallel_blocks(e.size(), block, [&](std::size_t b, std::size_t end, std::size_t blk) {
        for (std::size_t i = b; i < end; ++i)
        {
            const RealVector l = detail::gram_eigvals(e.snapshot(i));
            for (std::size_t k = 0; k < g.size(); ++k)
            {
                double c = 0.0;
                for (const double x : l)
                    c += std::log2(1.0 + g[k] * x);
                partial[blk][k] += c;
            }
        }
    });
    std::vector<double> out(snr_db.size(), 0.0);
    for (const auto &p : partial)
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] += p[k];
    for (auto &x : out)
        x /= static_cast<double>(e.size());
    return out;
}

/// Singular values of every snapshot, descending; out[i][k] is sigma_k of snapshot i.
inline std::vector<std::vector<double>> snapshot_singular_values(const ChannelEnsemble &e)
{
    std::vector<std::vector<double>> out(e.size());
    parallel_blocks(e.size(), 4096, [&](std::size_t b, std::size_t end, std::size_t) {
        for (std::size_t i = b; i < end; ++i)
        {
            const RealVector l = detail::gram_eigvals(e.snapshot(i));
            auto &s = out[i];
            s.resize(static_cast<std::size_t>(l.size()));
            for (Index k = 0; k < l.size(); ++k)
                s[static_cast<std::size_t>(k)] = std::sqrt(l[l.size() - 1 - k]);
        }
    });
    return out;
}

inline std::vector<double> snapshot_cond_numbers(const ChannelEnsemble &e)
{
    const auto sv = snapshot_singular_values(e);
    std::vector<double> out(sv.size());
    for (std::size_t i = 0; i < sv.size(); ++i)
    {
        const double smax = sv[i].front();
        const double smin = sv[i].back();
        out[i] = smin < 1e-14 * smax ? std::numeric_limits<double>::infinity() : smax / smin;
    }
    return out;
}

struct CdfSeries
{
    std::vector<double> values;
    std::vector<double> probs;

    /// P(X <= x)
    double operator()(double x) const
    {
        const auto it = std::upper_bound(values.begin(), values.end(), x);
        if (it == values.begin())
            return 0.0;
        return probs[static_cast<std::size_t>(it - values.begin()) - 1];
    }
};

inline CdfSeries empirical_cdf(std::vector<double> samples)
{
    if (samples.empty())
        throw std::invalid_argument("empirical_cdf: no samples");
    std::sort(samples.begin(), samples.end());
    CdfSeries c;
    const auto n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        if (i + 1 < samples.size() && samples[i + 1] == samples[i])
            continue;
        c.values.push_back(samples[i]);
        c.probs.push_back(static_cast<double>(i + 1) / n);
    }
    c.probs.back() = 1.0;
    return c;
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double ks_statistic(const CdfSeries &a, const CdfSeries &b)
{
    double d = 0.0;
    for (const auto *s : {&a, &b})
        for (const double x : s->values)
            d = std::max(d, std::abs(a(x) - b(x)));
    return d;
}

inline double ks_statistic(const std::vector<double> &a, const std::vector<double> &b)
{
    return ks_statistic(empirical_cdf(a), empirical_cdf(b));
}

struct PasGrid
{
    std::vector<double> aoa_deg;
    std::vector<double> aod_deg;
    Eigen::MatrixXd power_db;  // rows follow aoa_deg, columns aod_deg
};

inline constexpr double pas_floor_db = -300.0;

inline std::vector<double> angle_grid(double step_deg)
{
    if (!(step_deg > 0.0) || step_deg > 180.0)
        throw std::invalid_argument("angle grid step must be in (0, 180]");
    std::vector<double> g;
    const auto n = static_cast<std::size_t>(std::floor(180.0 / step_deg + 1e-9));
    for (std::size_t i = 0; i <= n; ++i)
        g.push_back(-90.0 + static_cast<double>(i) * step_deg);
    return g;
}

/// Bartlett joint AoA/AoD spectrum u^H R_H u with u = a_tx(aod) (x) a_rx(aoa),
/// in dB relative to its peak.
inline PasGrid bartlett_pas(const CovarianceMatrix &r_h, const ArrayGeometry &rx, const ArrayGeometry &tx,
                            double grid_step_deg = 1.0)
{
    const auto n_rx = static_cast<Index>(rx.n_elements);
    const auto n_tx = static_cast<Index>(tx.n_elements);
    if (r_h.dim() != n_rx * n_tx)
        throw DimensionError("bartlett_pas: R_H dimension does not match the arrays");

    PasGrid g{angle_grid(grid_step_deg), angle_grid(grid_step_deg), {}};
    const auto na = static_cast<Index>(g.aoa_deg.size());
    const auto nd = static_cast<Index>(g.aod_deg.size());
    Eigen::MatrixXd lin(na, nd);

    std::vector<ComplexVector> a_rx(static_cast<std::size_t>(na));
    std::vector<ComplexVector> a_tx(static_cast<std::size_t>(nd));
    for (Index i = 0; i < na; ++i)
        a_rx[static_cast<std::size_t>(i)] = steering_vector(rx, g.aoa_deg[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < nd; ++j)
        a_tx[static_cast<std::size_t>(j)] = steering_vector(tx, g.aod_deg[static_cast<std::size_t>(j)]);

    const ComplexMatrix &r = r_h.matrix();
    parallel_blocks(static_cast<std::size_t>(na), 8, [&](std::size_t b, std::size_t end, std::size_t) {
        ComplexVector u(n_rx * n_tx);
        for (std::size_t i = b; i < end; ++i)
            for (Index j = 0; j < nd; ++j)
            {
                const auto &ar = a_rx[i];
                const auto &at = a_tx[static_cast<std::size_t>(j)];
                for (Index t = 0; t < n_tx; ++t)
                    u.segment(t * n_rx, n_rx) = at[t] * ar;
                lin(static_cast<Index>(i), j) = std::max(0.0, u.dot(r * u).real());
            }
    });

    const double peak = lin.maxCoeff();
    if (!(peak > 0.0))
        throw NumericalError("bartlett_pas: spectrum is identically zero");
    g.power_db = lin.unaryExpr([peak](double p) {
        return p > 0.0 ? std::max(pas_floor_db, 10.0 * std::log10(p / peak)) : pas_floor_db;
    });
    return g;
}

struct PasDiffStats
{
    double max_db;
    double mean_db;
};

/// Max and mean of |lin(a) - lin(b)| over the grid, in dB (10 log10) relative
/// to the unit peak. Equal spectra give -inf for both.
inline PasDiffStats pas_diff_stats(const PasGrid &a, const PasGrid &b)
{
    if (a.aoa_deg != b.aoa_deg || a.aod_deg != b.aod_deg || a.power_db.rows() != b.power_db.rows() ||
        a.power_db.cols() != b.power_db.cols())
        throw DimensionError("pas_diff_stats: grids differ");
    double mx = 0.0;
    double sum = 0.0;
    for (Index i = 0; i < a.power_db.rows(); ++i)
        for (Index j = 0; j < a.power_db.cols(); ++j)
        {
            const double d = std::abs(db_to_linear(a.power_db(i, j)) - db_to_linear(b.power_db(i, j)));
            mx = std::max(mx, d);
            sum += d;
        }
    const double mean = sum / static_cast<double>(a.power_db.size());
    const auto to_db = [](double x) { return x > 0.0 ? 10.0 * std::log10(x) : -std::numeric_limits<double>::infinity(); };
    return {to_db(mx), to_db(mean)};
}

struct PasPeak
{
    double aoa_deg;
    double aod_deg;
    double power_db;
};

/// Local maxima (8-neighbourhood, plateaus included) sorted by decreasing power; at most max_peaks.
inline std::vector<PasPeak> pas_peaks(const PasGrid &g, std::size_t max_peaks)
{
    std::vector<PasPeak> peaks;
    const Index na = g.power_db.rows();
    const Index nd = g.power_db.cols();
    for (Index i = 0; i < na; ++i)
        for (Index j = 0; j < nd; ++j)
        {
            const double p = g.power_db(i, j);
            bool is_max = true;
            for (Index di = -1; di <= 1 && is_max; ++di)
                for (Index dj = -1; dj <= 1; ++dj)
                {
                    if ((di == 0 && dj == 0) || i + di < 0 || i + di >= na || j + dj < 0 || j + dj >= nd)
                        continue;
                    if (g.power_db(i + di, j + dj) > p)
                    {
                        is_max = false;
                        break;
                    }
                }
            if (is_max)
                peaks.push_back({g.aoa_deg[static_cast<std::size_t>(i)], g.aod_deg[static_cast<std::size_t>(j)], p});
        }
    std::stable_sort(peaks.begin(), peaks.end(), [](const PasPeak &x, const PasPeak &y) { return x.power_db > y.power_db; });
    if (peaks.size() > max_peaks)
        peaks.resize(max_peaks);
    return peaks;
}

} // namespace mimo_recon

#endif
