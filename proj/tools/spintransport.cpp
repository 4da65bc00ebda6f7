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

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "spintransport/cli/config.hpp"
#include "spintransport/cli/export.hpp"
#include "spintransport/cli/oracle_check.hpp"
#include "spintransport/cli/qasm.hpp"
#include "spintransport/cli/report.hpp"
#include "spintransport/cli/runner.hpp"
#include "spintransport/noise/calibration.hpp"
#include "spintransport/protocol/hadamard.hpp"

namespace {

using namespace spintransport;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitMismatch = 3;

std::string out_dir(const cli::ExperimentConfig &config, const std::string &flag)
{
    return flag.empty() ? config.output_dir : flag;
}

int cmd_run(const std::string &config_path, const std::string &out, int workers, bool allow_degenerate,
            const std::string &calibration_path)
{
    const auto config = cli::load_config(config_path);
    cli::RunOptions opts;
    opts.workers = workers;
    if (!calibration_path.empty()) {
        opts.calibration = noise::calibration_from_json(nlohmann::json::parse(cli::read_text(calibration_path)));
    }
    const auto result = cli::run_experiment(config, opts);
    const auto dir = out_dir(config, out);
    for (const auto &f : cli::write_bundle(config, result, dir)) {
        fmt::print("wrote {}\n", (std::filesystem::path(dir) / f).string());
    }
    if (result.summary) {
        fmt::print("drude {:.10g} alpha {:.6g}{}\n", result.summary->drude, result.summary->alpha.alpha,
                   result.summary->alpha.degenerate ? " (degenerate)" : "");
    }
    for (const auto &d : result.degenerate) {
        fmt::print(stderr, "degenerate: {}\n", d);
    }
    if (!result.degenerate.empty() && !allow_degenerate) {
        return kExitDegenerate;
    }
    return kExitOk;
}

int cmd_calibrate(const std::string &config_path, const std::string &out, int workers)
{
    const auto config = cli::load_config(config_path);
    const auto cal = cli::run_calibration(config, workers);
    const auto dir = out_dir(config, out);
    cli::write_calibration_bundle(config, cal, dir);
    std::size_t bad = 0;
    for (const auto &[key, f] : cal.factors) {
        bad += f.degenerate ? 1 : 0;
    }
    fmt::print("{} factors ({} degenerate) in {}\n", cal.factors.size(), bad,
               (std::filesystem::path(dir) / "calibration.json").string());
    return kExitOk;
}

int cmd_analyze(const std::vector<std::string> &bundles, const std::string &out)
{
    const auto report = cli::analyze_bundles(bundles, out);
    fmt::print("{}", report.text);
    for (const auto &t : report.tables) {
        fmt::print("wrote {}\n", (std::filesystem::path(out) / t).string());
    }
    return kExitOk;
}

int cmd_export(const std::string &config_path, const std::string &out, int step, int source,
               const std::string &scheme, int target)
{
    const auto config = cli::load_config(config_path);
    const auto dir = out.empty() ? (std::filesystem::path(config.output_dir) / "qasm").string() : out;
    std::vector<std::string> files;
    if (protocol::parse_scheme(scheme) == protocol::Scheme::kHadamard) {
        const model::TrotterSpec trotter{config.dt, step, 2};
        nlohmann::json batch = {{"version", 1}, {"hadamard", nlohmann::json::array()}};
        for (const auto &hc : protocol::hadamard_circuits(config.model, trotter, config.initial_state(), target,
                                                          source)) {
            std::string name = fmt::format("hadamard-j{}-i{}-k{}__{}", source, target, step, hc.label);
            for (char &ch : name) {
                ch = (ch == '|' || ch == ':') ? '_' : ch;
            }
            name += ".qasm";
            cli::write_text((std::filesystem::path(dir) / name).string(), cli::to_qasm(hc.circuit));
            batch["hadamard"].push_back(
                {{"file", name}, {"part", std::string(protocol::to_string(hc.part))}, {"coefficient", hc.coefficient}});
            files.push_back(name);
        }
        cli::write_text((std::filesystem::path(dir) / "batch.json").string(), batch.dump(2) + "\n");
        files.emplace_back("batch.json");
    } else {
        files = cli::export_plans(cli::experiment_plans(config, step, source), dir);
    }
    for (const auto &f : files) {
        fmt::print("wrote {}\n", (std::filesystem::path(dir) / f).string());
    }
    return kExitOk;
}

int cmd_count(int n, const std::string &scheme, const std::string &mode, bool neel, const std::string &boundary)
{
    model::SpinChainModel m;
    m.n_sites = n;
    m.boundary = model::parse_boundary(boundary);
    m.validate();
    const auto c = protocol::count_circuits(protocol::parse_scheme(scheme), m, protocol::parse_count_mode(mode), neel);
    fmt::print("{{\"n_sites\": {}, \"scheme\": \"{}\", \"mode\": \"{}\", \"neel_symmetry\": {}, \"real\": {}, "
               "\"imag\": {}, \"total\": {}}}\n",
               n, scheme, mode, neel, c.real, c.imag, c.total());
    return kExitOk;
}

int cmd_oracle_check(const std::string &config_path, double tolerance, const std::string &fixture_path,
                     const std::string &write_path, int workers)
{
    const auto config = cli::load_config(config_path);
    if (config.mode != cli::ExecutionMode::kExactBranch) {
        throw std::invalid_argument("oracle-check needs the exact_branch execution mode");
    }
    const auto reference = cli::oracle_fixture(config);
    if (!write_path.empty()) {
        cli::write_text(write_path, reference.dump(2) + "\n");
        fmt::print("wrote {}\n", write_path);
    }
    cli::RunOptions opts;
    opts.workers = workers;
    const auto result = cli::run_experiment(config, opts);
    const auto fixture =
        fixture_path.empty() ? reference : nlohmann::json::parse(cli::read_text(fixture_path));
    const auto cmp = cli::compare_fixture(config, result, fixture);
    const bool ok = cmp.max_deviation <= tolerance;
    fmt::print("{} entries, max deviation {:.3e} (tolerance {:.1e}): {}\n", cmp.entries, cmp.max_deviation,
               tolerance, ok ? "ok" : "MISMATCH");
    return ok ? kExitOk : kExitMismatch;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Spin transport experiments with mid-circuit-measurement correlator circuits"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    int workers = 1;

    auto *run = app.add_subcommand("run", "Run an experiment config and write a result bundle");
    bool allow_degenerate = false;
    std::string calibration_path;
    run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--out", out, "Output directory (overrides output_dir)");
    run->add_option("-w,--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    run->add_flag("--allow-degenerate", allow_degenerate, "Exit 0 even when the analysis is degenerate");
    run->add_option("--calibration", calibration_path, "Reuse factors from a calibration.json")
        ->check(CLI::ExistingFile);

    auto *cal = app.add_subcommand("calibrate", "Learn readout attenuation factors for a noisy config");
    cal->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    cal->add_option("-o,--out", out, "Output directory (overrides output_dir)");
    cal->add_option("-w,--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

    std::vector<std::string> bundles;
    std::string report_out = "report";
    auto *analyze = app.add_subcommand("analyze", "Build plot tables from result bundles");
    analyze->alias("report");
    analyze->add_option("bundles", bundles, "Bundle directories")->required();
    analyze->add_option("-o,--out", report_out, "Output directory");

    int step = 0;
    int source = 0;
    int target = 0;
    std::string scheme = "direct";
    auto *exp = app.add_subcommand("export-qasm", "Write the circuits of one time point as OpenQASM 3");
    exp->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    exp->add_option("-o,--out", out, "Output directory");
    exp->add_option("--step", step, "Trotter step count")->check(CLI::NonNegativeNumber);
    exp->add_option("--source", source, "Source bond")->check(CLI::NonNegativeNumber);
    exp->add_option("--scheme", scheme, "direct or hadamard")->check(CLI::IsMember({"direct", "hadamard"}));
    exp->add_option("--target", target, "Target bond for the hadamard scheme")->check(CLI::NonNegativeNumber);

    int n_sites = 8;
    std::string mode = "translation_reduced";
    std::string boundary = "periodic";
    bool neel = false;
    auto *count = app.add_subcommand("count-circuits", "Count circuits per time point");
    count->add_option("-n,--n-sites", n_sites, "Chain length")->check(CLI::PositiveNumber);
    count->add_option("--scheme", scheme, "direct or hadamard")->check(CLI::IsMember({"direct", "hadamard"}));
    count->add_option("--mode", mode, "full_matrix or translation_reduced")
        ->check(CLI::IsMember({"full_matrix", "translation_reduced"}));
    count->add_option("--boundary", boundary, "open or periodic")->check(CLI::IsMember({"open", "periodic"}));
    count->add_flag("--neel-symmetry", neel, "Use the Neel-state circuit reduction");

    double tolerance = 1e-10;
    std::string fixture_path;
    std::string write_path;
    auto *check = app.add_subcommand("oracle-check", "Compare exact-branch protocol values with the oracle");
    check->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    check->add_option("--tolerance", tolerance, "Largest accepted deviation");
    check->add_option("--fixture", fixture_path, "Compare against a stored fixture")->check(CLI::ExistingFile);
    check->add_option("--write-fixture", write_path, "Write the oracle values as a fixture");
    check->add_option("-w,--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(config_path, out, workers, allow_degenerate, calibration_path);
        }
        if (cal->parsed()) {
            return cmd_calibrate(config_path, out, workers);
        }
        if (analyze->parsed()) {
            return cmd_analyze(bundles, report_out);
        }
        if (exp->parsed()) {
            return cmd_export(config_path, out, step, source, scheme, target);
        }
        if (count->parsed()) {
            return cmd_count(n_sites, scheme, mode, neel, boundary);
        }
        if (check->parsed()) {
            return cmd_oracle_check(config_path, tolerance, fixture_path, write_path, workers);
        }
    } catch (const std::exception &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitError;
    }
    return kExitError;
}
