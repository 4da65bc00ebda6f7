// Copyright 2026 The spintransport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spintransport/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "spintransport/cli/runner.hpp"

namespace spintransport::cli {

namespace {

namespace fs = std::filesystem;

using Row = std::vector<std::string>;

std::vector<Row> read_csv(const std::string &path)
{
    std::istringstream in(read_text(path));
    std::vector<Row> rows;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        Row row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            row.push_back(cell);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

struct Bundle {
    std::string dir;
    double anisotropy = 0.0;
    int n_sites = 0;
    nlohmann::json summary;
    std::vector<Row> acf;
    std::vector<Row> per_bond;
    bool has_summary = false;
    bool has_acf = false;
    bool has_per_bond = false;
};

} // namespace

ReportResult analyze_bundles(const std::vector<std::string> &bundle_dirs, const std::string &out_dir)
{
    ReportResult out;
    std::vector<Bundle> bundles;
    for (const auto &dir : bundle_dirs) {
        Bundle b;
        b.dir = dir;
        auto load = [&](const char *name, auto &&fn) {
            const auto path = (fs::path(dir) / name).string();
            if (!fs::exists(path)) {
                out.gaps.push_back(fmt::format("{}: missing {}", dir, name));
                return false;
            }
            try {
                fn(path);
                return true;
            } catch (const std::exception &e) {
                out.gaps.push_back(fmt::format("{}: unreadable {} ({})", dir, name, e.what()));
                return false;
            }
        };
        b.has_summary = load("summary.json", [&](const std::string &p) {
            b.summary = nlohmann::json::parse(read_text(p));
            b.anisotropy = b.summary.at("model").at("anisotropy").get<double>();
            b.n_sites = b.summary.at("model").at("n_sites").get<int>();
        });
        b.has_acf = load("acf.csv", [&](const std::string &p) { b.acf = read_csv(p); });
        b.has_per_bond = load("per_bond.csv", [&](const std::string &p) { b.per_bond = read_csv(p); });
        if (b.has_summary) {
            bundles.push_back(std::move(b));
        }
    }
    std::stable_sort(bundles.begin(), bundles.end(),
                     [](const Bundle &a, const Bundle &b) { return a.anisotropy < b.anisotropy; });

    std::string heat = "anisotropy,time,bond,re\n";
    std::string curve = "anisotropy,time,re,im,ci_low,ci_high\n";
    std::string loglog = "anisotropy,log_t,log_ds\n";
    std::string drude = "anisotropy,n_sites,t_end,drude,drude_stderr,alpha,alpha_stderr,alpha_degenerate\n";
    std::string text;
    for (const auto &b : bundles) {
        const auto a = format_double(b.anisotropy);
        const int source = b.summary.value("heatmap_source", 0);
        if (b.has_per_bond) {
            for (const auto &r : b.per_bond) {
                if (r.size() >= 9 && std::stoi(r[3]) == source && r[8] == "0") {
                    heat += fmt::format("{},{},{},{}\n", a, r[1], r[2], r[4]);
                }
            }
        }
        if (b.has_acf) {
            for (const auto &r : b.acf) {
                if (r.size() >= 5) {
                    curve += fmt::format("{},{},{},{},{},{}\n", a, r[0], r[1], r[2], r[3], r[4]);
                }
            }
        }
        if (!b.summary.contains("drude")) {
            out.gaps.push_back(fmt::format("{}: no transport summary", b.dir));
            continue;
        }
        for (const auto &p : b.summary.at("diffusion_curve")) {
            const double t = p.at(0).get<double>();
            const double d = p.at(1).get<double>();
            if (t > 0.0 && d > 0.0) {
                loglog += fmt::format("{},{},{}\n", a, format_double(std::log(t)), format_double(std::log(d)));
            }
        }
        const auto &al = b.summary.at("alpha");
        drude += fmt::format("{},{},{},{},{},{},{},{}\n", a, b.n_sites,
                             format_double(b.summary.at("t_end").get<double>()),
                             format_double(b.summary.at("drude").get<double>()),
                             format_double(b.summary.at("drude_stderr").get<double>()),
                             format_double(al.at("alpha").get<double>()),
                             format_double(al.at("stderr").get<double>()), al.at("degenerate").get<bool>() ? 1 : 0);
        text += fmt::format("anisotropy {}: n = {}, drude = {:.6g} +- {:.3g}, alpha = {:.4g}{}\n", a, b.n_sites,
                            b.summary.at("drude").get<double>(), b.summary.at("drude_stderr").get<double>(),
                            al.at("alpha").get<double>(),
                            al.at("degenerate").get<bool>()
                                ? fmt::format(" (degenerate: {})", al.at("reason").get<std::string>())
                                : std::string());
    }
    for (const auto &g : out.gaps) {
        text += "gap: " + g + "\n";
    }
    const std::vector<std::pair<std::string, std::string>> tables = {
        {"heatmap.csv", heat}, {"curve.csv", curve}, {"loglog.csv", loglog}, {"drude.csv", drude}};
    for (const auto &[name, content] : tables) {
        write_text((fs::path(out_dir) / name).string(), content);
        out.tables.push_back(name);
    }
    write_text((fs::path(out_dir) / "report.txt").string(), text);
    out.text = std::move(text);
    return out;
}

} // namespace spintransport::cli
