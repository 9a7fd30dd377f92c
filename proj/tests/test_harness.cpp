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

#include "mimo_recon/harness/config.hpp"
#include "mimo_recon/harness/output.hpp"
#include "mimo_recon/harness/scenarios.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace mimo_recon;
using namespace mimo_recon::harness;
namespace fs = std::filesystem;

namespace
{
struct TempDir
{
    fs::path path;
    explicit TempDir(const std::string &tag)
        : path(fs::temp_directory_path() / ("mimo_recon_test_" + tag + "_" + std::to_string(::getpid())))
    {
        fs::remove_all(path);
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string config_error(const std::string &text)
{
    try
    {
        (void)parse_config(text);
    }
    catch (const ConfigError &e)
    {
        return e.what();
    }
    return {};
}
} // namespace

TEST_CASE("TOML subset parser")
{
    const auto doc = parse_toml("a = 1  # comment\nb = -2.5e-1\nc = \"x\\\"y\"\n"
                                "d = [1, 2,\n  3,]\ne = [[1, 2], [3, 4.5]]\nf = true\ng = 1_000\n[t]\nh = -inf\n");
    const auto &top = doc.at("");
    CHECK(std::get<std::int64_t>(top.at("a").v) == 1);
    CHECK(std::get<double>(top.at("b").v) == -0.25);
    CHECK(std::get<std::string>(top.at("c").v) == "x\"y");
    CHECK(std::get<std::vector<TomlValue>>(top.at("d").v).size() == 3);
    CHECK(std::get<std::vector<TomlValue>>(top.at("e").v).size() == 2);
    CHECK(std::get<bool>(top.at("f").v));
    CHECK(std::get<std::int64_t>(top.at("g").v) == 1000);
    CHECK(std::isinf(std::get<double>(doc.at("t").at("h").v)));

    CHECK_THROWS_WITH(parse_toml("a = 1\nb = \n"), Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THROWS_AS(parse_toml("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_toml("[t]\n[t]\n"), ConfigError);
    CHECK_THROWS_AS(parse_toml("a = \"open\n"), ConfigError);
    CHECK_THROWS_AS(parse_toml("a = 1 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_toml("a = 12abc\n"), ConfigError);
}

TEST_CASE("scenario config parsing and defaults")
{
    const auto cfg = parse_config("kind = \"kron_gauss\"\nseed = 7\n[kron_gauss]\nrho_rx = [0.5]\nn_tx = 3\n");
    CHECK(cfg.kind == ScenarioKind::kron_gauss);
    CHECK(cfg.seed == 7);
    CHECK(cfg.kron.rho_rx == std::vector<double>{0.5});
    CHECK(cfg.kron.n_tx == 3);
    CHECK(cfg.kron.rho_tx == 0.2);
    CHECK(cfg.snapshots() == 100000);

    auto paper = parse_config("kind = \"hst\"\npaper_scale = true\n");
    CHECK(paper.hst.t_samples == (std::int64_t{1} << 21));
    CHECK(paper.snapshots() == (std::size_t{1} << 21));
    CHECK(parse_config("kind = \"cluster_static\"\npaper_scale = true\n").snapshots() == 1000000);
    CHECK(parse_config("kind = \"dualpol\"\nsnapshots = 500\n").snapshots() == 500);

    const auto clusters = parse_config("kind = \"cluster_static\"\n[cluster_static]\nclusters = [[10, 20]]\n");
    REQUIRE(clusters.cluster.clusters.size() == 1);
    CHECK(clusters.cluster.clusters[0][1] == 20.0);
}

TEST_CASE("config validation rejects bad input with a reason")
{
    CHECK(config_error("seed = 1\n").find("kind") != std::string::npos);
    CHECK(config_error("kind = \"nope\"\n").find("nope") != std::string::npos);
    CHECK(config_error("kind = \"hst\"\nspeed = 3\n").find("speed") != std::string::npos);
    CHECK(config_error("kind = \"hst\"\n[extra]\n").find("extra") != std::string::npos);
    CHECK(config_error("kind = \"kron_gauss\"\n[kron_gauss]\nrho_rx = [0.2, 1.5]\n").find("rho_rx") != std::string::npos);
    CHECK(config_error("kind = \"kron_gauss\"\n[kron_gauss]\nn_tx = 2.5\n").find("integer") != std::string::npos);
    CHECK(config_error("kind = \"kron_gauss\"\n[kron_gauss]\npairing = \"odd\"\n").find("pairing") != std::string::npos);
    CHECK(config_error("kind = \"hst\"\n[hst]\nm_t = 1000\n").find("m_t") != std::string::npos);
    CHECK(config_error("kind = \"hst\"\n[hst]\ni_w = 9\n").find("i_w") != std::string::npos);
    CHECK(config_error("kind = \"dualpol\"\n[dualpol]\nconfigs = [\"3x3\"]\n").find("configs") != std::string::npos);
    CHECK(config_error("kind = \"dualpol\"\nsnapshots = -1\n").find("snapshots") != std::string::npos);
    CHECK_THROWS_AS(load_config("/nonexistent/config.toml"), ConfigError);
}

TEST_CASE("CSV formatting")
{
    CHECK(fmt(0.1) == "0.1");
    CHECK(fmt(1.0 / 3.0) == "0.333333333");
    CHECK(fmt(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");

    CsvTable t({"x", "y"});
    t.add_row({"1", "a,b"});
    CHECK(t.str() == "x,y\r\n1,\"a,b\"\r\n");
    CHECK_THROWS_AS(t.add_row({"1"}), std::invalid_argument);
    CHECK_THROWS_AS(CsvTable({}), std::invalid_argument);

    ComplexMatrix m(1, 2);
    m << cplx(1.0, -2.0), cplx(0.5, 0.0);
    CHECK(matrix_csv(m).str() == "row,col,re,im\r\n0,0,1,-2\r\n0,1,0.5,0\r\n");
}

TEST_CASE("staged output publishes on commit only")
{
    TempDir tmp("stage");
    {
        StagedOutput out(tmp.path);
        out.write("a.csv", "1\r\n");
        CHECK(!fs::exists(tmp.path / "a.csv"));
    }
    CHECK(!fs::exists(tmp.path / "a.csv"));
    for (const auto &e : fs::directory_iterator(tmp.path))
        FAIL("leftover entry " << e.path());

    {
        StagedOutput out(tmp.path);
        out.write("a.csv", "1\r\n");
        const auto files = out.commit({{"ok", true}});
        REQUIRE(files.size() == 2);
        CHECK(files.back().filename() == "manifest.json");
    }
    CHECK(slurp(tmp.path / "a.csv") == "1\r\n");
    CHECK(nlohmann::json::parse(slurp(tmp.path / "manifest.json"))["ok"] == true);
}

TEST_CASE("kron_gauss scenario runs and is reproducible")
{
    TempDir tmp("kron");
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::kron_gauss;
    cfg.n_snapshots = 3000;
    cfg.kron.rho_rx = {0.3, 0.7};
    cfg.output_dir = (tmp.path / "a").string();
    const auto a = run_kron_gauss(cfg);
    cfg.output_dir = (tmp.path / "b").string();
    const auto b = run_kron_gauss(cfg);

    REQUIRE(a.rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i)
    {
        CHECK(a.rows[i].eps == b.rows[i].eps);
        CHECK(a.rows[i].cmc == Catch::Approx(1.0 - a.rows[i].cmd).margin(1e-10));
        CHECK(a.rows[i].rank_max_original == 2);
    }
    for (const char *f : {"kron_table.csv", "kron_capacity_ks.csv", "kron_cdf.csv"})
        CHECK(slurp(tmp.path / "a" / f) == slurp(tmp.path / "b" / f));
    const auto m = nlohmann::json::parse(slurp(tmp.path / "a" / "manifest.json"));
    CHECK(m.contains("config"));

    cfg.kind = ScenarioKind::hst;
    CHECK_THROWS_AS(run_kron_gauss(cfg), ConfigError);
}

TEST_CASE("cluster_static scenario")
{
    TempDir tmp("cluster");
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::cluster_static;
    cfg.n_snapshots = 20000;
    cfg.cluster.grid_step_deg = 2.0;
    cfg.output_dir = tmp.path.string();
    const auto r = run_cluster_static(cfg);
    CHECK(r.r_rx_hat.dim() == 8);
    CHECK(r.cmd < 1e-3);
    REQUIRE(r.peak_offsets_deg.size() == 3);
    for (const double off : r.peak_offsets_deg[0])
        CHECK(off <= 2.0);
    CHECK(fs::exists(tmp.path / "pas_reconstructed.csv"));
    CHECK(fs::exists(tmp.path / "cluster_metrics.json"));
}

TEST_CASE("hst scenario")
{
    TempDir tmp("hst");
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::hst;
    cfg.hst.t_samples = 1 << 14;
    cfg.hst.cmd_samples = 1 << 13;
    cfg.hst.n_iter = {1, 4};
    cfg.output_dir = tmp.path.string();
    const auto r = run_hst(cfg);
    CHECK(r.track_hz.size() == 16);
    CHECK(r.doppler_at_zero_hz == Catch::Approx(258.15).margin(0.01));
    REQUIRE(r.max_cmd.size() == 2);
    CHECK(r.max_cmd[1] < r.max_cmd[0]);
    CHECK(fs::exists(tmp.path / "hst_track.csv"));
}

TEST_CASE("dualpol scenario")
{
    TempDir tmp("dualpol");
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::dualpol;
    cfg.n_snapshots = 4000;
    cfg.output_dir = tmp.path.string();
    const auto r = run_dualpol(cfg);
    REQUIRE(r.curves.size() == 2);
    for (const auto &c : r.curves)
    {
        CHECK(c.snr_db.size() == 16);
        CHECK(c.original.size() == 16);
        for (std::size_t i = 1; i < c.original.size(); ++i)
            CHECK(c.original[i] > c.original[i - 1]);
    }
    CHECK(fs::exists(tmp.path / "dualpol_capacity.csv"));
}
