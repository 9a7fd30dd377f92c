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

#ifndef MIMO_RECON_HARNESS_SCENARIOS_HPP
#define MIMO_RECON_HARNESS_SCENARIOS_HPP

// Experiment drivers. Each run_* computes its scenario, writes CSV artifacts
// and a JSON manifest into cfg.output_dir, and returns the summary values.

#include "mimo_recon/chgen.hpp"
#include "mimo_recon/corrmodels.hpp"
#include "mimo_recon/harness/config.hpp"
#include "mimo_recon/harness/output.hpp"
#include "mimo_recon/metrics.hpp"
#include "mimo_recon/recon.hpp"
#include "mimo_recon/tfa.hpp"
#include "mimo_recon/version.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

namespace mimo_recon::harness
{

inline nlohmann::json to_json(const ScenarioConfig &c)
{
    nlohmann::json j;
    j["kind"] = kind_name(c.kind);
    j["seed"] = c.seed;
    j["snapshots"] = c.snapshots();
    j["output_dir"] = c.output_dir;
    j["paper_scale"] = c.paper_scale;
    switch (c.kind)
    {
    case ScenarioKind::kron_gauss:
        j["kron_gauss"] = {{"rho_rx", c.kron.rho_rx}, {"rho_tx", c.kron.rho_tx},     {"n_tx", c.kron.n_tx},
                           {"snr_db", c.kron.snr_db}, {"pairing", c.kron.pairing}, {"cdf_points", c.kron.cdf_points}};
        break;
    case ScenarioKind::cluster_static:
        j["cluster_static"] = {{"rx_elements", c.cluster.rx_elements},
                               {"rx_spacing_wl", c.cluster.rx_spacing_wl},
                               {"tx_elements", c.cluster.tx_elements},
                               {"tx_spacing_wl", c.cluster.tx_spacing_wl},
                               {"clusters", c.cluster.clusters},
                               {"baseline_elements", c.cluster.baseline_elements},
                               {"partial_tx_elements", c.cluster.partial_tx_elements},
                               {"grid_step_deg", c.cluster.grid_step_deg}};
        break;
    case ScenarioKind::hst:
        j["hst"] = {{"speed_kmh", c.hst.speed_kmh},
                    {"fc_hz", c.hst.fc_hz},
                    {"d_min_m", c.hst.d_min_m},
                    {"d_bs_m", c.hst.d_bs_m},
                    {"k_rician_db", c.hst.k_rician_db},
                    {"theta_v_deg", c.hst.theta_v_deg},
                    {"rx_elements", c.hst.rx_elements},
                    {"rx_spacing_wl", c.hst.rx_spacing_wl},
                    {"tx_elements", c.hst.tx_elements},
                    {"tx_spacing_wl", c.hst.tx_spacing_wl},
                    {"sigma_phi_deg", c.hst.sigma_phi_deg},
                    {"nlos_aoa_mean_deg", c.hst.nlos_aoa_mean_deg},
                    {"nlos_aod_mean_deg", c.hst.nlos_aod_mean_deg},
                    {"t_samples", c.hst.t_samples},
                    {"cmd_samples", c.hst.cmd_samples},
                    {"t_step_s", c.hst.t_step_s},
                    {"m_t", c.hst.m_t},
                    {"nw", c.hst.nw},
                    {"i_w", c.hst.i_w},
                    {"n_iter", c.hst.n_iter},
                    {"doppler_filter", c.hst.doppler_filter},
                    {"fixed_geometry", c.hst.fixed_geometry},
                    {"sinusoids", c.hst.sinusoids}};
        break;
    case ScenarioKind::dualpol:
        j["dualpol"] = {{"mu", c.dualpol.mu},
                        {"chi", c.dualpol.chi},
                        {"rs_rho", c.dualpol.rs_rho},
                        {"rp_rho", c.dualpol.rp_rho},
                        {"configs", c.dualpol.configs},
                        {"snr_min_db", c.dualpol.snr_min_db},
                        {"snr_max_db", c.dualpol.snr_max_db},
                        {"snr_step_db", c.dualpol.snr_step_db}};
        break;
    }
    return j;
}

namespace detail
{
class Stopwatch
{
  public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline nlohmann::json manifest(const ScenarioConfig &cfg, double seconds, nlohmann::json summary)
{
    return {{"config", to_json(cfg)},
            {"library_version", version},
            {"wall_clock_s", seconds},
            {"summary", std::move(summary)}};
}

inline void check_kind(const ScenarioConfig &cfg, ScenarioKind k)
{
    if (cfg.kind != k)
        throw ConfigError(std::string("configuration kind is ") + kind_name(cfg.kind) + ", expected " + kind_name(k));
    cfg.validate();
}

// Values at probabilities k/(points-1) of the empirical distribution.
inline std::vector<std::pair<double, double>> quantiles(std::vector<double> v, std::size_t points)
{
    std::sort(v.begin(), v.end());
    std::vector<std::pair<double, double>> out;
    const auto n = static_cast<double>(v.size());
    for (std::size_t k = 0; k < points; ++k)
    {
        const double p = static_cast<double>(k) / static_cast<double>(points - 1);
        const auto idx = static_cast<std::size_t>(std::max(0.0, std::ceil(p * n) - 1.0));
        out.emplace_back(p, v[std::min(idx, v.size() - 1)]);
    }
    return out;
}

inline std::size_t numeric_rank(const std::vector<double> &sv)
{
    std::size_t r = 0;
    for (const double s : sv)
        if (s > 1e-10 * sv.front())
            ++r;
    return r;
}

// 2x2 Rx correlation of antennas 0 and g of a model R_rx.
inline CorrelationMatrix pair_corr(const CorrelationMatrix &r, Index g)
{
    ComplexMatrix m(2, 2);
    m << 1.0, r(0, g), std::conj(r(0, g)), 1.0;
    return CorrelationMatrix::from(m);
}
} // namespace detail

struct KronRow
{
    double rho_rx = 0.0;
    double eps = 0.0;
    double cmd = 0.0;
    double cmc = 0.0;
    double ks_capacity = 0.0;
    double mean_capacity_original = 0.0;
    double mean_capacity_reconstructed = 0.0;
    std::size_t rank_min_original = 0;
    std::size_t rank_max_original = 0;
    std::size_t rank_min_reconstructed = 0;
    std::size_t rank_max_reconstructed = 0;
    CorrelationMatrix r_hat = CorrelationMatrix::identity(1);
};

struct KronGaussResult
{
    std::size_t snapshots = 0;
    std::vector<KronRow> rows;
};

/// Exponential Rx / uniform Tx Kronecker channel, 4 Rx antennas: original
/// ensemble versus the one recombined from three 2-antenna ensembles.
inline KronGaussResult run_kron_gauss(const ScenarioConfig &cfg)
{
    detail::check_kind(cfg, ScenarioKind::kron_gauss);
    const detail::Stopwatch sw;
    const auto &k = cfg.kron;
    const std::size_t n = cfg.snapshots();
    const Index n_rx = 4;
    const Index n_tx = static_cast<Index>(k.n_tx);
    const auto pairing = k.pairing == "same_snapshot" ? ZeroPadPairing::same_snapshot : ZeroPadPairing::independent;
    const auto r_tx = uniform_corr(n_tx, k.rho_tx);

    KronGaussResult res;
    res.snapshots = n;
    CsvTable table({"rho_rx", "eps", "cmd", "cmc"});
    CsvTable cdf({"rho_rx", "ensemble", "metric", "prob", "value"});
    CsvTable ks({"rho_rx", "ks_capacity", "mean_capacity_original", "mean_capacity_reconstructed"});

    for (std::size_t row = 0; row < k.rho_rx.size(); ++row)
    {
        const double rho = k.rho_rx[row];
        const auto r_rx = exp_corr(n_rx, rho);
        const std::uint64_t st = 4 * row;
        const auto original = rayleigh_ensemble(vec_covariance(r_rx, r_tx), n_rx, n_tx, n, cfg.seed, st);
        const auto partial = [&](Index g) {
            return rayleigh_ensemble(vec_covariance(detail::pair_corr(r_rx, g), r_tx), 2, n_tx, n, cfg.seed,
                                     st + static_cast<std::uint64_t>(g));
        };
        const auto rec = combine_zero_padded(partial(1), partial(2), partial(3), pairing);

        KronRow kr;
        kr.rho_rx = rho;
        kr.r_hat = sample_rx_corr(rec);
        kr.eps = rel_err(kr.r_hat, r_rx);
        kr.cmd = cmd(kr.r_hat, r_rx);
        kr.cmc = cmc(kr.r_hat, r_rx);

        const auto cap_o = capacities(original, k.snr_db);
        const auto cap_r = capacities(rec, k.snr_db);
        kr.ks_capacity = ks_statistic(cap_o, cap_r);
        kr.mean_capacity_original = mimo_recon::detail::ordered_mean(cap_o);
        kr.mean_capacity_reconstructed = mimo_recon::detail::ordered_mean(cap_r);

        const auto emit = [&](const char *name, const ChannelEnsemble &e, const std::vector<double> &caps,
                              std::size_t &rmin, std::size_t &rmax) {
            const auto sv = snapshot_singular_values(e);
            rmin = std::numeric_limits<std::size_t>::max();
            rmax = 0;
            const std::size_t n_sv = sv.front().size();
            std::vector<std::vector<double>> cols(n_sv, std::vector<double>(sv.size()));
            std::vector<double> cond(sv.size());
            for (std::size_t i = 0; i < sv.size(); ++i)
            {
                const std::size_t r = detail::numeric_rank(sv[i]);
                rmin = std::min(rmin, r);
                rmax = std::max(rmax, r);
                for (std::size_t q = 0; q < n_sv; ++q)
                    cols[q][i] = sv[i][q];
                cond[i] = sv[i].back() < 1e-14 * sv[i].front() ? std::numeric_limits<double>::infinity()
                                                              : sv[i].front() / sv[i].back();
            }
            const auto add = [&](const std::string &metric, const std::vector<double> &v) {
                for (const auto &[p, x] : detail::quantiles(v, static_cast<std::size_t>(k.cdf_points)))
                    cdf.add_row({fmt(rho), name, metric, fmt(p), fmt(x)});
            };
            for (std::size_t q = 0; q < n_sv; ++q)
                add("sigma" + std::to_string(q + 1), cols[q]);
            add("cond", cond);
            add("capacity", caps);
        };
        emit("original", original, cap_o, kr.rank_min_original, kr.rank_max_original);
        emit("reconstructed", rec, cap_r, kr.rank_min_reconstructed, kr.rank_max_reconstructed);

        table.add_row({fmt(rho), fmt(kr.eps), fmt(kr.cmd), fmt(kr.cmc)});
        ks.add_row({fmt(rho), fmt(kr.ks_capacity), fmt(kr.mean_capacity_original), fmt(kr.mean_capacity_reconstructed)});
        res.rows.push_back(std::move(kr));
    }

    nlohmann::json summary = nlohmann::json::array();
    for (const auto &r : res.rows)
        summary.push_back({{"rho_rx", r.rho_rx},
                           {"eps", r.eps},
                           {"cmd", r.cmd},
                           {"cmc", r.cmc},
                           {"ks_capacity", r.ks_capacity},
                           {"rank_original", {r.rank_min_original, r.rank_max_original}},
                           {"rank_reconstructed", {r.rank_min_reconstructed, r.rank_max_reconstructed}}});
    StagedOutput out(cfg.output_dir);
    out.write("kron_table.csv", table);
    out.write("kron_capacity_ks.csv", ks);
    out.write("kron_cdf.csv", cdf);
    out.commit(detail::manifest(cfg, sw.seconds(), {{"rows", summary}}));
    return res;
}

struct ClusterStaticResult
{
    CorrelationMatrix r_rx_true = CorrelationMatrix::identity(1);
    CorrelationMatrix r_rx_hat = CorrelationMatrix::identity(1);
    CorrelationMatrix r_tx_true = CorrelationMatrix::identity(1);
    CorrelationMatrix r_tx_hat = CorrelationMatrix::identity(1);
    double eps = 0.0;
    double cmd = 0.0;
    double cmc = 0.0;
    PasGrid pas_original;
    PasGrid pas_kronecker;
    PasGrid pas_reconstructed;
    PasDiffStats diff{};
    /// Per PAS (original, Kronecker, reconstructed) and cluster: angular
    /// distance (max over both axes, degrees) to the nearest of the strongest peaks.
    std::vector<std::vector<double>> peak_offsets_deg;
};

/// Static two-cluster channel: the Rx correlation of the large array is
/// stitched from a small baseline array plus 2-antenna runs at every spacing.
inline ClusterStaticResult run_cluster_static(const ScenarioConfig &cfg)
{
    detail::check_kind(cfg, ScenarioKind::cluster_static);
    const detail::Stopwatch sw;
    const auto &c = cfg.cluster;
    const std::size_t n = cfg.snapshots();
    const ArrayGeometry rx{static_cast<std::size_t>(c.rx_elements), c.rx_spacing_wl};
    const ArrayGeometry tx{static_cast<std::size_t>(c.tx_elements), c.tx_spacing_wl};
    ClusterSet clusters;
    for (const auto &cl : c.clusters)
        clusters.push_back({cl[0], cl[1]});
    const Index n_rx = static_cast<Index>(rx.n_elements);
    const Index n_tx = static_cast<Index>(tx.n_elements);

    ClusterStaticResult res;
    const auto r_h = cluster_corr(rx, tx, clusters);
    res.r_rx_true = marginal_rx_corr(r_h, n_rx, n_tx);
    res.r_tx_true = marginal_tx_corr(r_h, n_rx, n_tx);

    const ArrayGeometry rx0{static_cast<std::size_t>(c.baseline_elements), c.rx_spacing_wl};
    const auto base = rayleigh_ensemble(cluster_corr(rx0, tx, clusters), static_cast<Index>(rx0.n_elements), n_tx, n,
                                        cfg.seed, 0);
    const auto baseline = sample_rx_corr(base);
    res.r_tx_hat = sample_tx_corr(base);

    PartialPairSet pairs;
    const ArrayGeometry tx_p{static_cast<std::size_t>(c.partial_tx_elements), c.tx_spacing_wl};
    for (Index g = 1; g < n_rx; ++g)
    {
        const ArrayGeometry rx_g{2, c.rx_spacing_wl * static_cast<double>(g)};
        const auto e = rayleigh_ensemble(cluster_corr(rx_g, tx_p, clusters), 2, static_cast<Index>(tx_p.n_elements), n,
                                         cfg.seed, static_cast<std::uint64_t>(g));
        pairs[static_cast<std::size_t>(g)] = sample_rx_corr(e)(0, 1);
    }
    res.r_rx_hat = stitch_rx_corr(baseline, pairs, rx.n_elements);
    res.eps = rel_err(res.r_rx_hat, res.r_rx_true);
    res.cmd = cmd(res.r_rx_hat, res.r_rx_true);
    res.cmc = cmc(res.r_rx_hat, res.r_rx_true);

    res.pas_original = bartlett_pas(r_h, rx, tx, c.grid_step_deg);
    res.pas_kronecker = bartlett_pas(vec_covariance(res.r_rx_true, res.r_tx_true), rx, tx, c.grid_step_deg);
    res.pas_reconstructed = bartlett_pas(vec_covariance(res.r_rx_hat, res.r_tx_hat), rx, tx, c.grid_step_deg);
    res.diff = pas_diff_stats(res.pas_kronecker, res.pas_reconstructed);

    // A Kronecker spectrum of K clusters has K^2 lobes, so search the K^2 strongest.
    const std::size_t n_peaks = clusters.size() * clusters.size();
    for (const auto *g : {&res.pas_original, &res.pas_kronecker, &res.pas_reconstructed})
    {
        const auto peaks = pas_peaks(*g, n_peaks);
        std::vector<double> off;
        for (const auto &cl : clusters)
        {
            double best = std::numeric_limits<double>::infinity();
            for (const auto &p : peaks)
                best = std::min(best, std::max(std::abs(p.aoa_deg - cl.aoa_deg), std::abs(p.aod_deg - cl.aod_deg)));
            off.push_back(best);
        }
        res.peak_offsets_deg.push_back(std::move(off));
    }

    const auto pas_csv = [](const PasGrid &g) {
        CsvTable t({"aoa_deg", "aod_deg", "power_db"});
        for (std::size_t i = 0; i < g.aoa_deg.size(); ++i)
            for (std::size_t j = 0; j < g.aod_deg.size(); ++j)
                t.add_row({fmt(g.aoa_deg[i]), fmt(g.aod_deg[j]), fmt(g.power_db(static_cast<Index>(i), static_cast<Index>(j)))});
        return t;
    };
    const nlohmann::json metrics = {{"eps", res.eps},
                                    {"cmd", res.cmd},
                                    {"cmc", res.cmc},
                                    {"one_minus_cmc", 1.0 - res.cmc},
                                    {"pas_diff_max_db", res.diff.max_db},
                                    {"pas_diff_mean_db", res.diff.mean_db},
                                    {"peak_offsets_deg", res.peak_offsets_deg}};
    StagedOutput out(cfg.output_dir);
    out.write("pas_original.csv", pas_csv(res.pas_original));
    out.write("pas_kronecker.csv", pas_csv(res.pas_kronecker));
    out.write("pas_reconstructed.csv", pas_csv(res.pas_reconstructed));
    out.write("rx_corr_true.csv", matrix_csv(res.r_rx_true.matrix()));
    out.write("rx_corr_reconstructed.csv", matrix_csv(res.r_rx_hat.matrix()));
    out.write("cluster_metrics.json", metrics.dump(2) + "\n");
    out.commit(detail::manifest(cfg, sw.seconds(), metrics));
    return res;
}

inline HstScenario hst_scenario(const HstConfig &h, std::size_t samples)
{
    HstScenario s;
    s.v_mps = h.speed_kmh / 3.6;
    s.fc_hz = h.fc_hz;
    s.d_min_m = h.d_min_m;
    s.d_bs_m = h.d_bs_m;
    s.k_rician_db = h.k_rician_db;
    s.theta_v_deg = h.theta_v_deg;
    s.rx = {static_cast<std::size_t>(h.rx_elements), h.rx_spacing_wl};
    s.tx = {static_cast<std::size_t>(h.tx_elements), h.tx_spacing_wl};
    s.sigma_phi_deg = h.sigma_phi_deg;
    s.nlos_aoa_mean_deg = h.nlos_aoa_mean_deg;
    s.nlos_aod_mean_deg = h.nlos_aod_mean_deg;
    s.t_samples = samples;
    s.t_step_s = h.t_step_s;
    s.doppler_filter = h.doppler_filter;
    s.fixed_geometry = h.fixed_geometry;
    s.sinusoids = static_cast<std::size_t>(h.sinusoids);
    return s;
}

struct HstResult
{
    DsdMap dsd;
    std::vector<double> track_hz;
    std::vector<double> reference_hz;
    double bin_hz = 0.0;
    double track_fraction_within_2_bins = 0.0;
    double doppler_at_zero_hz = 0.0;
    double max_abs_cos_aoa = 0.0;
    std::vector<std::size_t> n_iter;
    std::vector<std::vector<double>> region_cmd;  // per n_iter entry
    std::vector<double> max_cmd;
};

/// Stream offset separating the DSD series from the reconstruction runs.
inline constexpr std::uint64_t hst_dsd_stream = std::uint64_t{1} << 40;

/// High-speed-train Rician channel: DSD and Doppler track, plus per-region
/// reconstruction error of the 4-antenna Rx correlation for each n_iter.
inline HstResult run_hst(const ScenarioConfig &cfg)
{
    detail::check_kind(cfg, ScenarioKind::hst);
    const detail::Stopwatch sw;
    const auto &h = cfg.hst;
    const std::size_t m_t = static_cast<std::size_t>(h.m_t);
    const HstScenario s = hst_scenario(h, static_cast<std::size_t>(h.t_samples));

    HstResult res;
    const auto series = rician_series(s, cfg.seed, hst_dsd_stream);
    const auto bank = TaperBank::make(m_t, 1, h.nw, static_cast<std::size_t>(h.i_w), 1);
    res.dsd = ensemble_dsd(series, bank, m_t);
    res.bin_hz = 1.0 / (static_cast<double>(m_t) * s.t_step_s);
    res.track_hz = res.dsd.peak_track(static_cast<std::size_t>(std::lround(h.nw)));
    std::size_t hits = 0;
    for (std::size_t r = 0; r < res.track_hz.size(); ++r)
    {
        res.reference_hz.push_back(hst_doppler_ref(res.dsd.region_time_s[r], s));
        if (std::abs(res.track_hz[r] - res.reference_hz.back()) <= 2.0 * res.bin_hz)
            ++hits;
    }
    res.track_fraction_within_2_bins = static_cast<double>(hits) / static_cast<double>(res.track_hz.size());
    res.doppler_at_zero_hz = hst_doppler_ref(0.0, s);
    {
        HstScenario moving = s;
        moving.fixed_geometry = false;
        constexpr int steps = 200000;
        for (int i = 0; i <= steps; ++i)
            res.max_abs_cos_aoa = std::max(res.max_abs_cos_aoa,
                                           std::abs(hst_cos_aoa(moving.period_s() * i / steps, moving)));
    }

    const HstScenario sc = hst_scenario(h, static_cast<std::size_t>(h.cmd_samples));
    for (const auto it : h.n_iter)
    {
        res.n_iter.push_back(static_cast<std::size_t>(it));
        res.region_cmd.push_back(tv_recon_cmd(sc, m_t, static_cast<std::size_t>(it), cfg.seed));
        res.max_cmd.push_back(*std::max_element(res.region_cmd.back().begin(), res.region_cmd.back().end()));
    }

    CsvTable dsd_csv({"region", "time_s", "doppler_hz", "power"});
    for (Index r = 0; r < res.dsd.power.rows(); ++r)
        for (Index p = 0; p < res.dsd.power.cols(); ++p)
            dsd_csv.add_row({std::to_string(r), fmt(res.dsd.region_time_s[static_cast<std::size_t>(r)]),
                             fmt(res.dsd.doppler_hz[static_cast<std::size_t>(p)]), fmt(res.dsd.power(r, p))});
    CsvTable track({"region", "time_s", "reference_hz", "peak_hz", "error_bins"});
    for (std::size_t r = 0; r < res.track_hz.size(); ++r)
        track.add_row({std::to_string(r), fmt(res.dsd.region_time_s[r]), fmt(res.reference_hz[r]), fmt(res.track_hz[r]),
                       fmt(std::abs(res.track_hz[r] - res.reference_hz[r]) / res.bin_hz)});
    CsvTable cmd_csv({"n_iter", "region", "time_s", "cmd"});
    for (std::size_t k = 0; k < res.n_iter.size(); ++k)
        for (std::size_t r = 0; r < res.region_cmd[k].size(); ++r)
            cmd_csv.add_row({std::to_string(res.n_iter[k]), std::to_string(r),
                             fmt((static_cast<double>(r) + 0.5) * static_cast<double>(m_t) * sc.t_step_s),
                             fmt(res.region_cmd[k][r])});

    nlohmann::json max_cmd = nlohmann::json::object();
    for (std::size_t k = 0; k < res.n_iter.size(); ++k)
        max_cmd[std::to_string(res.n_iter[k])] = res.max_cmd[k];
    const nlohmann::json summary = {{"regions", res.track_hz.size()},
                                    {"doppler_bin_hz", res.bin_hz},
                                    {"track_fraction_within_2_bins", res.track_fraction_within_2_bins},
                                    {"doppler_at_t0_hz", res.doppler_at_zero_hz},
                                    {"max_abs_cos_aoa", res.max_abs_cos_aoa},
                                    {"max_region_cmd", max_cmd}};
    StagedOutput out(cfg.output_dir);
    out.write("hst_dsd.csv", dsd_csv);
    out.write("hst_track.csv", track);
    out.write("hst_cmd.csv", cmd_csv);
    out.commit(detail::manifest(cfg, sw.seconds(), summary));
    return res;
}

struct DualpolCurves
{
    std::string config;
    std::vector<double> snr_db;
    std::vector<double> original;
    std::vector<double> full;
    std::vector<double> partial;
    double cmd_rs_full = 0.0;
    double cmd_rp_full = 0.0;
    double cmd_rs_partial = 0.0;
    double cmd_rp_partial = 0.0;
    double cpr_measured = 0.0;  // E|h_RR|^2 / E|h_LL|^2
    double xpr_measured = 0.0;  // E|h_RR|^2 / E|h_RL|^2
    double max_gap_full = 0.0;
    double max_gap_partial_vs_full = 0.0;
};

struct DualpolResult
{
    std::vector<DualpolCurves> curves;
};

/// Synthetic dual-polarized channels: ergodic capacity of the ground truth and
/// of reconstructions from full and from partial spatial/polarimetric information.
inline DualpolResult run_dualpol(const ScenarioConfig &cfg)
{
    detail::check_kind(cfg, ScenarioKind::dualpol);
    const detail::Stopwatch sw;
    const auto &d = cfg.dualpol;
    const std::size_t n = cfg.snapshots();

    std::vector<double> snr;
    for (double x = d.snr_min_db; x <= d.snr_max_db + 1e-9; x += d.snr_step_db)
        snr.push_back(x);

    DualpolResult res;
    CsvTable cap({"config", "snr_db", "original", "full", "partial"});
    for (std::size_t ci = 0; ci < d.configs.size(); ++ci)
    {
        const Index n_rx_units = d.configs[ci] == "2x4" ? 2 : 1;
        const Index n_tx_units = 1;
        const auto r_s = exp_corr(n_rx_units * n_tx_units, d.rs_rho);
        const PolarimetricParams p{d.mu, d.chi, exp_corr(4, d.rp_rho)};
        const std::uint64_t st = 3 * ci;

        const auto orig = dualpol_ensemble(r_s, p, n_rx_units, n_tx_units, n, cfg.seed, st);
        const auto full = split_spatial_polarimetric(orig, n_rx_units, n_tx_units, SplitSource::all);
        const auto part = split_spatial_polarimetric(orig, n_rx_units, n_tx_units, SplitSource::partial);
        const auto e_full = reconstruct_dualpol(full.r_s, full.r_p, p, n_rx_units, n_tx_units, n, cfg.seed, st + 1);
        const auto e_part = reconstruct_dualpol(part.r_s, part.r_p, p, n_rx_units, n_tx_units, n, cfg.seed, st + 2);

        DualpolCurves c;
        c.config = d.configs[ci];
        c.snr_db = snr;
        c.original = ergodic_capacity_curve(orig, snr);
        c.full = ergodic_capacity_curve(e_full, snr);
        c.partial = ergodic_capacity_curve(e_part, snr);
        c.cmd_rs_full = cmd(full.r_s, r_s);
        c.cmd_rp_full = cmd(full.r_p, p.r_p);
        c.cmd_rs_partial = cmd(part.r_s, r_s);
        c.cmd_rp_partial = cmd(part.r_p, p.r_p);
        double rr = 0.0, ll = 0.0, rl = 0.0;
        for (std::size_t i = 0; i < orig.size(); ++i)
        {
            rr += std::norm(orig.at(i, 0, 0));
            ll += std::norm(orig.at(i, 1, 1));
            rl += std::norm(orig.at(i, 0, 1));
        }
        c.cpr_measured = rr / ll;
        c.xpr_measured = rl > 0.0 ? rr / rl : std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < snr.size(); ++k)
        {
            c.max_gap_full = std::max(c.max_gap_full, std::abs(c.full[k] - c.original[k]));
            c.max_gap_partial_vs_full = std::max(c.max_gap_partial_vs_full, std::abs(c.partial[k] - c.full[k]));
            cap.add_row({c.config, fmt(snr[k]), fmt(c.original[k]), fmt(c.full[k]), fmt(c.partial[k])});
        }
        res.curves.push_back(std::move(c));
    }

    nlohmann::json summary = nlohmann::json::array();
    for (const auto &c : res.curves)
        summary.push_back({{"config", c.config},
                           {"cmd_rs_full", c.cmd_rs_full},
                           {"cmd_rp_full", c.cmd_rp_full},
                           {"cmd_rs_partial", c.cmd_rs_partial},
                           {"cmd_rp_partial", c.cmd_rp_partial},
                           {"cpr_measured", c.cpr_measured},
                           {"xpr_measured", c.xpr_measured},
                           {"max_gap_full_vs_original", c.max_gap_full},
                           {"max_gap_partial_vs_full", c.max_gap_partial_vs_full}});
    StagedOutput out(cfg.output_dir);
    out.write("dualpol_capacity.csv", cap);
    out.commit(detail::manifest(cfg, sw.seconds(), {{"configs", summary}}));
    return res;
}

} // namespace mimo_recon::harness

#endif
