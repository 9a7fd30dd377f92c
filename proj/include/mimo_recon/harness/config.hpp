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

#ifndef MIMO_RECON_HARNESS_CONFIG_HPP
#define MIMO_RECON_HARNESS_CONFIG_HPP

// Scenario configuration: a small TOML subset (tables, key = value, numbers,
// booleans, double-quoted strings, nested numeric arrays, # comments).

#include "mimo_recon/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace mimo_recon::harness
{

struct TomlValue
{
    std::variant<bool, std::int64_t, double, std::string, std::vector<TomlValue>> v;

    bool is_number() const { return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v); }
};

using TomlTable = std::map<std::string, TomlValue>;

/// Top-level keys live in the "" table.
using TomlDocument = std::map<std::string, TomlTable>;

namespace detail
{
class TomlParser
{
  public:
    explicit TomlParser(std::string_view text) : text_(text) {}

    TomlDocument parse()
    {
        TomlDocument doc;
        doc[""];
        std::string table;
        while (!eof())
        {
            skip_blank();
            if (eof())
                break;
            const char c = peek();
            if (c == '\n')
            {
                next_line();
                continue;
            }
            if (c == '[')
            {
                ++pos_;
                table = read_key();
                skip_ws();
                expect(']');
                if (doc.count(table) != 0 && table.size() > 0)
                    fail("duplicate table [" + table + "]");
                doc[table];
            }
            else
            {
                const std::string key = read_key();
                skip_ws();
                expect('=');
                skip_ws();
                TomlValue val = read_value();
                if (!doc[table].emplace(key, std::move(val)).second)
                    fail("duplicate key '" + key + "'");
            }
            skip_ws();
            if (!eof() && peek() != '\n')
                fail("unexpected trailing characters");
        }
        return doc;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    [[noreturn]] void fail(const std::string &msg) const
    {
        throw ConfigError("config line " + std::to_string(line_) + ": " + msg);
    }

    void next_line()
    {
        ++pos_;
        ++line_;
    }

    void skip_ws()
    {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r'))
            ++pos_;
        if (!eof() && peek() == '#')
            while (!eof() && peek() != '\n')
                ++pos_;
    }

    void skip_blank()
    {
        skip_ws();
    }

    // whitespace, comments and newlines (inside arrays)
    void skip_all()
    {
        for (;;)
        {
            skip_ws();
            if (!eof() && peek() == '\n')
                next_line();
            else
                return;
        }
    }

    void expect(char c)
    {
        if (eof() || peek() != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string read_key()
    {
        skip_ws();
        const std::size_t b = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
            ++pos_;
        if (b == pos_)
            fail("expected a key");
        return std::string(text_.substr(b, pos_ - b));
    }

    TomlValue read_value()
    {
        if (eof())
            fail("missing value");
        const char c = peek();
        if (c == '"')
        {
            ++pos_;
            std::string s;
            while (!eof() && peek() != '"' && peek() != '\n')
            {
                if (peek() == '\\')
                {
                    ++pos_;
                    if (eof())
                        break;
                    const char e = peek();
                    s += e == 'n' ? '\n' : e == 't' ? '\t' : e;
                }
                else
                    s += peek();
                ++pos_;
            }
            expect('"');
            return {s};
        }
        if (c == '[')
        {
            ++pos_;
            std::vector<TomlValue> items;
            skip_all();
            while (!eof() && peek() != ']')
            {
                items.push_back(read_value());
                skip_all();
                if (!eof() && peek() == ',')
                {
                    ++pos_;
                    skip_all();
                }
                else
                    break;
            }
            skip_all();
            expect(']');
            return {std::move(items)};
        }
        const std::size_t b = pos_;
        while (!eof() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ',' && peek() != ']' &&
               peek() != '#')
            ++pos_;
        std::string tok(text_.substr(b, pos_ - b));
        if (tok == "true")
            return {true};
        if (tok == "false")
            return {false};
        if (tok == "inf" || tok == "+inf")
            return {std::numeric_limits<double>::infinity()};
        if (tok == "-inf")
            return {-std::numeric_limits<double>::infinity()};
        std::string clean;
        for (const char ch : tok)
            if (ch != '_')
                clean += ch;
        if (clean.empty())
            fail("missing value");
        const bool is_float = clean.find_first_of(".eE") != std::string::npos;
        if (!is_float)
        {
            std::int64_t i = 0;
            const auto *first = clean.data() + (clean[0] == '+' ? 1 : 0);
            const auto [p, ec] = std::from_chars(first, clean.data() + clean.size(), i);
            if (ec == std::errc() && p == clean.data() + clean.size())
                return {i};
        }
        try
        {
            std::size_t used = 0;
            const double d = std::stod(clean, &used);
            if (used == clean.size())
                return {d};
        }
        catch (const std::exception &)
        {
        }
        fail("cannot parse value '" + tok + "'");
    }
};
} // namespace detail

inline TomlDocument parse_toml(std::string_view text) { return detail::TomlParser(text).parse(); }

enum class ScenarioKind
{
    kron_gauss,
    cluster_static,
    hst,
    dualpol,
};

inline const char *kind_name(ScenarioKind k)
{
    switch (k)
    {
    case ScenarioKind::kron_gauss:
        return "kron_gauss";
    case ScenarioKind::cluster_static:
        return "cluster_static";
    case ScenarioKind::hst:
        return "hst";
    case ScenarioKind::dualpol:
        return "dualpol";
    }
    return "?";
}

inline ScenarioKind parse_kind(const std::string &s)
{
    for (const auto k : {ScenarioKind::kron_gauss, ScenarioKind::cluster_static, ScenarioKind::hst, ScenarioKind::dualpol})
        if (s == kind_name(k))
            return k;
    throw ConfigError("unknown scenario kind '" + s + "'");
}

struct KronGaussConfig
{
    std::vector<double> rho_rx{0.2, 0.4, 0.6, 0.8};
    double rho_tx = 0.2;
    std::int64_t n_tx = 2;
    double snr_db = 20.0;
    std::string pairing = "independent";  // or "same_snapshot"
    std::int64_t cdf_points = 201;
};

struct ClusterStaticConfig
{
    std::int64_t rx_elements = 8;
    double rx_spacing_wl = 0.25;
    std::int64_t tx_elements = 4;
    double tx_spacing_wl = 0.5;
    std::vector<std::vector<double>> clusters{{-50.0, 60.0}, {20.0, -30.0}};
    std::int64_t baseline_elements = 4;
    std::int64_t partial_tx_elements = 2;
    double grid_step_deg = 1.0;
};

struct HstConfig
{
    double speed_kmh = 350.0;
    double fc_hz = 800e6;
    double d_min_m = 50.0;
    double d_bs_m = 1000.0;
    double k_rician_db = 0.0;
    double theta_v_deg = 0.0;
    std::int64_t rx_elements = 4;
    double rx_spacing_wl = 0.5;
    std::int64_t tx_elements = 2;
    double tx_spacing_wl = 0.5;
    double sigma_phi_deg = 20.0;
    double nlos_aoa_mean_deg = 0.0;
    double nlos_aod_mean_deg = 0.0;
    std::int64_t t_samples = std::int64_t{1} << 16;       // DSD series
    std::int64_t cmd_samples = std::int64_t{1} << 16;     // reconstruction-error series
    double t_step_s = 1e-4;
    std::int64_t m_t = 1024;
    double nw = 4.0;
    std::int64_t i_w = 8;
    std::vector<std::int64_t> n_iter{1, 10, 50};
    bool doppler_filter = true;
    bool fixed_geometry = false;
    std::int64_t sinusoids = 32;
};

struct DualpolConfig
{
    double mu = 0.8;
    double chi = 0.2;
    double rs_rho = 0.5;
    double rp_rho = 0.3;
    std::vector<std::string> configs{"2x2", "2x4"};
    double snr_min_db = 0.0;
    double snr_max_db = 30.0;
    double snr_step_db = 2.0;
};

struct ScenarioConfig
{
    ScenarioKind kind = ScenarioKind::kron_gauss;
    std::uint64_t seed = 1;
    std::int64_t n_snapshots = 0;  // 0: scenario default (desk or paper scale)
    std::string output_dir = "out";
    bool paper_scale = false;
    KronGaussConfig kron;
    ClusterStaticConfig cluster;
    HstConfig hst;
    DualpolConfig dualpol;

    /// Snapshot (or point) count actually used by the scenario.
    std::size_t snapshots() const
    {
        if (n_snapshots > 0)
            return static_cast<std::size_t>(n_snapshots);
        switch (kind)
        {
        case ScenarioKind::cluster_static:
            return paper_scale ? 1000000 : 200000;
        case ScenarioKind::hst:
            return static_cast<std::size_t>(hst.t_samples);
        default:
            return paper_scale ? 1000000 : 100000;
        }
    }

    /// Switches to paper-scale sizes; explicit snapshot counts are kept.
    void apply_paper_scale()
    {
        paper_scale = true;
        hst.t_samples = std::int64_t{1} << 21;
        hst.cmd_samples = std::int64_t{1} << 18;
    }

    void validate() const;
};

namespace detail
{
class Reader
{
  public:
    Reader(const TomlTable &t, std::string where) : t_(t), where_(std::move(where)) {}

    ~Reader() = default;

    void finish() const
    {
        for (const auto &[k, _] : t_)
            if (used_.count(k) == 0)
                throw ConfigError("unknown key '" + k + "' in " + where_);
    }

    void get(const char *key, double &out) { if (auto *v = find(key)) out = number(*v, key); }
    void get(const char *key, bool &out)
    {
        if (auto *v = find(key))
        {
            if (!std::holds_alternative<bool>(v->v))
                bad(key, "a boolean");
            out = std::get<bool>(v->v);
        }
    }
    void get(const char *key, std::int64_t &out) { if (auto *v = find(key)) out = integer(*v, key); }
    void get(const char *key, std::uint64_t &out)
    {
        if (auto *v = find(key))
        {
            const auto i = integer(*v, key);
            if (i < 0)
                bad(key, "a nonnegative integer");
            out = static_cast<std::uint64_t>(i);
        }
    }
    void get(const char *key, std::string &out)
    {
        if (auto *v = find(key))
        {
            if (!std::holds_alternative<std::string>(v->v))
                bad(key, "a string");
            out = std::get<std::string>(v->v);
        }
    }
    void get(const char *key, std::vector<double> &out)
    {
        if (auto *v = find(key))
        {
            out.clear();
            for (const auto &x : array(*v, key))
                out.push_back(number(x, key));
        }
    }
    void get(const char *key, std::vector<std::int64_t> &out)
    {
        if (auto *v = find(key))
        {
            out.clear();
            for (const auto &x : array(*v, key))
                out.push_back(integer(x, key));
        }
    }
    void get(const char *key, std::vector<std::string> &out)
    {
        if (auto *v = find(key))
        {
            out.clear();
            for (const auto &x : array(*v, key))
            {
                if (!std::holds_alternative<std::string>(x.v))
                    bad(key, "an array of strings");
                out.push_back(std::get<std::string>(x.v));
            }
        }
    }
    void get(const char *key, std::vector<std::vector<double>> &out)
    {
        if (auto *v = find(key))
        {
            out.clear();
            for (const auto &row : array(*v, key))
            {
                std::vector<double> r;
                for (const auto &x : array(row, key))
                    r.push_back(number(x, key));
                out.push_back(std::move(r));
            }
        }
    }

  private:
    const TomlTable &t_;
    std::string where_;
    std::set<std::string> used_;

    const TomlValue *find(const char *key)
    {
        const auto it = t_.find(key);
        if (it == t_.end())
            return nullptr;
        used_.insert(key);
        return &it->second;
    }

    [[noreturn]] void bad(const char *key, const char *what) const
    {
        throw ConfigError("key '" + std::string(key) + "' in " + where_ + " must be " + what);
    }

    double number(const TomlValue &v, const char *key) const
    {
        if (const auto *i = std::get_if<std::int64_t>(&v.v))
            return static_cast<double>(*i);
        if (const auto *d = std::get_if<double>(&v.v))
            return *d;
        bad(key, "a number");
    }

    std::int64_t integer(const TomlValue &v, const char *key) const
    {
        if (const auto *i = std::get_if<std::int64_t>(&v.v))
            return *i;
        bad(key, "an integer");
    }

    const std::vector<TomlValue> &array(const TomlValue &v, const char *key) const
    {
        if (const auto *a = std::get_if<std::vector<TomlValue>>(&v.v))
            return *a;
        bad(key, "an array");
    }
};

inline void require(bool ok, const std::string &msg)
{
    if (!ok)
        throw ConfigError(msg);
}

inline bool finite_in(double x, double lo, double hi) { return std::isfinite(x) && x >= lo && x <= hi; }

inline bool is_pow2(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }
} // namespace detail

inline void ScenarioConfig::validate() const
{
    using detail::finite_in;
    using detail::require;
    require(n_snapshots >= 0, "snapshots must be nonnegative");
    require(n_snapshots <= 100000000, "snapshots above 1e8 are not supported");
    require(!output_dir.empty(), "output_dir must not be empty");

    const auto &k = kron;
    require(!k.rho_rx.empty(), "kron_gauss.rho_rx must not be empty");
    for (const double r : k.rho_rx)
        require(finite_in(r, -1.0, 1.0), "kron_gauss.rho_rx entries need |rho| <= 1");
    require(finite_in(k.rho_tx, -1.0, 1.0), "kron_gauss.rho_tx needs |rho| <= 1");
    require(k.n_tx >= 1 && k.n_tx <= 16, "kron_gauss.n_tx must be in [1, 16]");
    require(std::isfinite(k.snr_db), "kron_gauss.snr_db must be finite");
    require(k.pairing == "independent" || k.pairing == "same_snapshot",
            "kron_gauss.pairing must be \"independent\" or \"same_snapshot\"");
    require(k.cdf_points >= 2 && k.cdf_points <= 100001, "kron_gauss.cdf_points must be in [2, 100001]");

    const auto &c = cluster;
    require(c.rx_elements >= 2 && c.rx_elements <= 64, "cluster_static.rx_elements must be in [2, 64]");
    require(c.tx_elements >= 1 && c.tx_elements <= 64, "cluster_static.tx_elements must be in [1, 64]");
    require(finite_in(c.rx_spacing_wl, 0.0, 100.0) && finite_in(c.tx_spacing_wl, 0.0, 100.0),
            "cluster_static spacings must be in [0, 100] wavelengths");
    require(!c.clusters.empty(), "cluster_static.clusters must not be empty");
    for (const auto &cl : c.clusters)
        require(cl.size() == 2 && finite_in(cl[0], -180.0, 180.0) && finite_in(cl[1], -180.0, 180.0),
                "cluster_static.clusters entries are [aoa_deg, aod_deg] pairs in [-180, 180]");
    require(c.baseline_elements >= 2 && c.baseline_elements <= c.rx_elements,
            "cluster_static.baseline_elements must be in [2, rx_elements]");
    require(c.partial_tx_elements >= 1 && c.partial_tx_elements <= c.tx_elements,
            "cluster_static.partial_tx_elements must be in [1, tx_elements]");
    require(finite_in(c.grid_step_deg, 0.01, 180.0), "cluster_static.grid_step_deg must be in [0.01, 180]");

    const auto &h = hst;
    require(std::isfinite(h.speed_kmh) && h.speed_kmh > 0.0, "hst.speed_kmh must be positive");
    require(std::isfinite(h.fc_hz) && h.fc_hz > 0.0, "hst.fc_hz must be positive");
    require(std::isfinite(h.d_min_m) && h.d_min_m > 0.0, "hst.d_min_m must be positive");
    require(std::isfinite(h.d_bs_m) && h.d_bs_m > 0.0, "hst.d_bs_m must be positive");
    require(!std::isnan(h.k_rician_db), "hst.k_rician_db must not be NaN");
    require(finite_in(h.theta_v_deg, -360.0, 360.0), "hst.theta_v_deg must be in [-360, 360]");
    require(h.rx_elements == 4, "hst.rx_elements must be 4 (stitching from gaps 1..3)");
    require(h.tx_elements >= 1 && h.tx_elements <= 16, "hst.tx_elements must be in [1, 16]");
    require(finite_in(h.rx_spacing_wl, 0.0, 100.0) && finite_in(h.tx_spacing_wl, 0.0, 100.0),
            "hst spacings must be in [0, 100] wavelengths");
    require(std::isfinite(h.sigma_phi_deg) && h.sigma_phi_deg > 0.0, "hst.sigma_phi_deg must be positive");
    require(std::isfinite(h.nlos_aoa_mean_deg) && std::isfinite(h.nlos_aod_mean_deg), "hst NLOS mean angles must be finite");
    require(detail::is_pow2(h.t_samples) && detail::is_pow2(h.cmd_samples),
            "hst.t_samples and hst.cmd_samples must be powers of two");
    require(h.t_samples <= (std::int64_t{1} << 24) && h.cmd_samples <= (std::int64_t{1} << 24),
            "hst series longer than 2^24 samples are not supported");
    require(std::isfinite(h.t_step_s) && h.t_step_s > 0.0, "hst.t_step_s must be positive");
    require(detail::is_pow2(h.m_t) && h.m_t >= 64, "hst.m_t must be a power of two >= 64");
    require(h.m_t <= h.t_samples && h.m_t <= h.cmd_samples, "hst.m_t must not exceed the series length");
    require(std::isfinite(h.nw) && h.nw > 0.0 && h.nw < static_cast<double>(h.m_t) / 2.0, "hst.nw must be in (0, m_t/2)");
    require(h.i_w >= 1 && static_cast<double>(h.i_w) <= 2.0 * h.nw, "hst.i_w must be in [1, 2 nw]");
    require(!h.n_iter.empty(), "hst.n_iter must not be empty");
    for (const auto n : h.n_iter)
        require(n >= 1 && n <= 10000, "hst.n_iter entries must be in [1, 10000]");
    require(h.sinusoids >= 1 && h.sinusoids <= 4096, "hst.sinusoids must be in [1, 4096]");

    const auto &d = dualpol;
    require(std::isfinite(d.mu) && d.mu > 0.0, "dualpol.mu must be positive");
    require(std::isfinite(d.chi) && d.chi >= 0.0, "dualpol.chi must be nonnegative");
    require(finite_in(d.rs_rho, -1.0, 1.0) && finite_in(d.rp_rho, -1.0, 1.0), "dualpol correlations need |rho| <= 1");
    require(!d.configs.empty(), "dualpol.configs must not be empty");
    for (const auto &cfg : d.configs)
        require(cfg == "2x2" || cfg == "2x4", "dualpol.configs entries must be \"2x2\" or \"2x4\"");
    require(std::isfinite(d.snr_min_db) && std::isfinite(d.snr_max_db) && d.snr_max_db >= d.snr_min_db,
            "dualpol SNR range is invalid");
    require(std::isfinite(d.snr_step_db) && d.snr_step_db > 0.0, "dualpol.snr_step_db must be positive");
    require((d.snr_max_db - d.snr_min_db) / d.snr_step_db <= 1000.0, "dualpol SNR grid is too long");
}

/// Parses config text. Values not present keep their defaults.
inline ScenarioConfig parse_config(std::string_view text)
{
    const TomlDocument doc = parse_toml(text);
    static const std::set<std::string> sections{"", "kron_gauss", "cluster_static", "hst", "dualpol"};
    for (const auto &[name, _] : doc)
        if (sections.count(name) == 0)
            throw ConfigError("unknown table [" + name + "]");

    ScenarioConfig cfg;
    const auto table = [&](const std::string &name) -> const TomlTable & {
        static const TomlTable empty;
        const auto it = doc.find(name);
        return it == doc.end() ? empty : it->second;
    };

    {
        detail::Reader r(table(""), "top level");
        std::string kind;
        r.get("kind", kind);
        if (kind.empty())
            throw ConfigError("missing top-level key 'kind'");
        cfg.kind = parse_kind(kind);
        r.get("seed", cfg.seed);
        r.get("snapshots", cfg.n_snapshots);
        r.get("output_dir", cfg.output_dir);
        bool paper = false;
        r.get("paper_scale", paper);
        if (paper)
            cfg.apply_paper_scale();
        r.finish();
    }
    {
        auto &k = cfg.kron;
        detail::Reader r(table("kron_gauss"), "[kron_gauss]");
        r.get("rho_rx", k.rho_rx);
        r.get("rho_tx", k.rho_tx);
        r.get("n_tx", k.n_tx);
        r.get("snr_db", k.snr_db);
        r.get("pairing", k.pairing);
        r.get("cdf_points", k.cdf_points);
        r.finish();
    }
    {
        auto &c = cfg.cluster;
        detail::Reader r(table("cluster_static"), "[cluster_static]");
        r.get("rx_elements", c.rx_elements);
        r.get("rx_spacing_wl", c.rx_spacing_wl);
        r.get("tx_elements", c.tx_elements);
        r.get("tx_spacing_wl", c.tx_spacing_wl);
        r.get("clusters", c.clusters);
        r.get("baseline_elements", c.baseline_elements);
        r.get("partial_tx_elements", c.partial_tx_elements);
        r.get("grid_step_deg", c.grid_step_deg);
        r.finish();
    }
    {
        auto &h = cfg.hst;
        detail::Reader r(table("hst"), "[hst]");
        r.get("speed_kmh", h.speed_kmh);
        r.get("fc_hz", h.fc_hz);
        r.get("d_min_m", h.d_min_m);
        r.get("d_bs_m", h.d_bs_m);
        r.get("k_rician_db", h.k_rician_db);
        r.get("theta_v_deg", h.theta_v_deg);
        r.get("rx_elements", h.rx_elements);
        r.get("rx_spacing_wl", h.rx_spacing_wl);
        r.get("tx_elements", h.tx_elements);
        r.get("tx_spacing_wl", h.tx_spacing_wl);
        r.get("sigma_phi_deg", h.sigma_phi_deg);
        r.get("nlos_aoa_mean_deg", h.nlos_aoa_mean_deg);
        r.get("nlos_aod_mean_deg", h.nlos_aod_mean_deg);
        r.get("t_samples", h.t_samples);
        r.get("cmd_samples", h.cmd_samples);
        r.get("t_step_s", h.t_step_s);
        r.get("m_t", h.m_t);
        r.get("nw", h.nw);
        r.get("i_w", h.i_w);
        r.get("n_iter", h.n_iter);
        r.get("doppler_filter", h.doppler_filter);
        r.get("fixed_geometry", h.fixed_geometry);
        r.get("sinusoids", h.sinusoids);
        r.finish();
    }
    {
        auto &d = cfg.dualpol;
        detail::Reader r(table("dualpol"), "[dualpol]");
        r.get("mu", d.mu);
        r.get("chi", d.chi);
        r.get("rs_rho", d.rs_rho);
        r.get("rp_rho", d.rp_rho);
        r.get("configs", d.configs);
        r.get("snr_min_db", d.snr_min_db);
        r.get("snr_max_db", d.snr_max_db);
        r.get("snr_step_db", d.snr_step_db);
        r.finish();
    }
    cfg.validate();
    return cfg;
}

inline ScenarioConfig load_config(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace mimo_recon::harness

#endif
