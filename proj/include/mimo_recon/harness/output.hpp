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

#ifndef MIMO_RECON_HARNESS_OUTPUT_HPP
#define MIMO_RECON_HARNESS_OUTPUT_HPP

// CSV formatting and all-or-nothing publication of run artifacts.

#include "mimo_recon/matcore.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

namespace mimo_recon::harness
{

/// Fixed 9-significant-digit formatting so reruns are byte-identical.
inline std::string fmt(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

inline std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (const char c : s)
    {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + '"';
}

class CsvTable
{
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header))
    {
        if (header_.empty())
            throw std::invalid_argument("CSV header must not be empty");
    }

    void add_row(std::vector<std::string> fields)
    {
        if (fields.size() != header_.size())
            throw std::invalid_argument("CSV row width does not match the header");
        rows_.push_back(std::move(fields));
    }

    std::size_t rows() const { return rows_.size(); }

    std::string str() const
    {
        std::string out;
        append(out, header_);
        for (const auto &r : rows_)
            append(out, r);
        return out;
    }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;

    static void append(std::string &out, const std::vector<std::string> &fields)
    {
        for (std::size_t i = 0; i < fields.size(); ++i)
        {
            if (i)
                out += ',';
            out += csv_field(fields[i]);
        }
        out += "\r\n";
    }
};

/// Complex matrix as rows (row, col, re, im).
inline CsvTable matrix_csv(const ComplexMatrix &m)
{
    CsvTable t({"row", "col", "re", "im"});
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            t.add_row({std::to_string(i), std::to_string(j), fmt(m(i, j).real()), fmt(m(i, j).imag())});
    return t;
}

/// Collects output files in a hidden staging directory next to the target and
/// moves them into place only on commit(); the manifest goes last. Destroying
/// an uncommitted stage removes everything it wrote.
class StagedOutput
{
  public:
    explicit StagedOutput(std::filesystem::path dir) : dir_(std::move(dir))
    {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec)
            throw std::runtime_error("cannot create output directory '" + dir_.string() + "': " + ec.message());
        stage_ = dir_ / (".staging-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::remove_all(stage_, ec);
        fs::create_directory(stage_, ec);
        if (ec)
            throw std::runtime_error("cannot create staging directory: " + ec.message());
    }

    StagedOutput(const StagedOutput &) = delete;
    StagedOutput &operator=(const StagedOutput &) = delete;

    ~StagedOutput()
    {
        std::error_code ec;
        std::filesystem::remove_all(stage_, ec);
    }

    void write(const std::string &name, const std::string &content)
    {
        const auto p = stage_ / name;
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.close();
        if (!out)
            throw std::runtime_error("failed writing '" + p.string() + "'");
        names_.push_back(name);
    }

    void write(const std::string &name, const CsvTable &t) { write(name, t.str()); }

    /// Publishes staged files, then the manifest. Returns the final paths.
    std::vector<std::filesystem::path> commit(const nlohmann::json &manifest, const std::string &manifest_name = "manifest.json")
    {
        write(manifest_name, manifest.dump(2) + "\n");
        std::vector<std::filesystem::path> out;
        for (const auto &n : names_)
        {
            if (n == manifest_name)
                continue;
            out.push_back(publish(n));
        }
        out.push_back(publish(manifest_name));
        return out;
    }

  private:
    std::filesystem::path dir_;
    std::filesystem::path stage_;
    std::vector<std::string> names_;

    std::filesystem::path publish(const std::string &name)
    {
        std::error_code ec;
        const auto target = dir_ / name;
        std::filesystem::rename(stage_ / name, target, ec);
        if (ec)
            throw std::runtime_error("cannot move '" + name + "' into place: " + ec.message());
        return target;
    }
};

} // namespace mimo_recon::harness

#endif
