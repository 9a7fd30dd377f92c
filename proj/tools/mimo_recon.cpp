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

// mimo-recon command line: one subcommand per experiment.
//
//   mimo-recon kron-gauss     [--config F] [--seed S] [--out DIR] [--snapshots N] [--paper-scale]
//   mimo-recon cluster-static ...
//   mimo-recon hst ...
//   mimo-recon dualpol ...
//
// Exit codes: 0 success, 1 other failure, 2 configuration error, 3 numerical failure.

#include "mimo_recon/harness/scenarios.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace
{

using namespace mimo_recon;
using namespace mimo_recon::harness;

struct Overrides
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::int64_t> snapshots;
    bool paper_scale = false;
};

ScenarioConfig resolve(ScenarioKind kind, const Overrides &o)
{
    ScenarioConfig cfg;
    if (!o.config.empty())
    {
        cfg = load_config(o.config);
        if (cfg.kind != kind)
            throw ConfigError(std::string("config file describes '") + kind_name(cfg.kind) + "', not '" + kind_name(kind) + "'");
    }
    cfg.kind = kind;
    if (o.paper_scale)
        cfg.apply_paper_scale();
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.out)
        cfg.output_dir = *o.out;
    if (o.snapshots)
        cfg.n_snapshots = *o.snapshots;
    cfg.validate();
    return cfg;
}

nlohmann::json run(const ScenarioConfig &cfg)
{
    switch (cfg.kind)
    {
    case ScenarioKind::kron_gauss: {
        const auto r = run_kron_gauss(cfg);
        nlohmann::json rows = nlohmann::json::array();
        for (const auto &x : r.rows)
            rows.push_back({{"rho_rx", x.rho_rx}, {"eps", x.eps}, {"cmd", x.cmd}, {"cmc", x.cmc}, {"ks_capacity", x.ks_capacity}});
        return rows;
    }
    case ScenarioKind::cluster_static: {
        const auto r = run_cluster_static(cfg);
        return {{"eps", r.eps}, {"cmd", r.cmd}, {"cmc", r.cmc}, {"pas_diff_max_db", r.diff.max_db},
                {"pas_diff_mean_db", r.diff.mean_db}};
    }
    case ScenarioKind::hst: {
        const auto r = run_hst(cfg);
        nlohmann::json m = nlohmann::json::object();
        for (std::size_t k = 0; k < r.n_iter.size(); ++k)
            m[std::to_string(r.n_iter[k])] = r.max_cmd[k];
        return {{"track_fraction_within_2_bins", r.track_fraction_within_2_bins}, {"max_region_cmd", m}};
    }
    case ScenarioKind::dualpol: {
        const auto r = run_dualpol(cfg);
        nlohmann::json a = nlohmann::json::array();
        for (const auto &c : r.curves)
            a.push_back({{"config", c.config}, {"max_gap_full_vs_original", c.max_gap_full},
                         {"max_gap_partial_vs_full", c.max_gap_partial_vs_full}});
        return a;
    }
    }
    return {};
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"MIMO channel correlation reconstruction experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(mimo_recon::version));

    Overrides o;
    std::optional<ScenarioKind> chosen;
    const std::pair<const char *, ScenarioKind> subs[] = {
        {"kron-gauss", ScenarioKind::kron_gauss},
        {"cluster-static", ScenarioKind::cluster_static},
        {"hst", ScenarioKind::hst},
        {"dualpol", ScenarioKind::dualpol},
    };
    for (const auto &[name, kind] : subs)
    {
        auto *sub = app.add_subcommand(name, std::string("run the ") + kind_name(kind) + " scenario");
        sub->add_option("--config", o.config, "TOML-style scenario file")->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "RNG seed");
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--snapshots", o.snapshots, "snapshot / point count")->check(CLI::PositiveNumber);
        sub->add_flag("--paper-scale", o.paper_scale, "use the full-size settings");
        sub->callback([&chosen, kind = kind] { chosen = kind; });
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try
    {
        const auto cfg = resolve(*chosen, o);
        const auto summary = run(cfg);
        std::cout << summary.dump() << "\n";
        return 0;
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const NumericalError &e)
    {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
