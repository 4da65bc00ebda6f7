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

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spintransport/cli/config.hpp"
#include "spintransport/noise/calibration.hpp"
#include "spintransport/protocol/plan.hpp"
#include "spintransport/transport/transport.hpp"

namespace spintransport::cli {

struct RunOptions {
    int workers = 1;
    /// Factors to renormalise with instead of learning them.
    std::optional<noise::CalibrationResult> calibration;
};

struct RunResult {
    std::vector<double> times;
    std::vector<int> sources;
    std::vector<int> targets;
    /// Spin-unit <J_i(t_k) J_j> for every computed (i, j, k).
    std::map<transport::BondPairTime, qcore::Complex> per_bond;
    /// Standard errors of the real and imaginary parts, sampled mode only.
    std::map<transport::BondPairTime, qcore::Complex> per_bond_stderr;
    /// Entries zeroed by light-cone pruning.
    std::set<transport::BondPairTime> pruned;
    std::optional<transport::AcfSeries> acf;
    std::optional<transport::TransportSummary> summary;
    std::optional<noise::CalibrationResult> calibration;
    std::size_t skipped_terms = 0;
    /// Human-readable reasons the analysis is degenerate; empty when clean.
    std::vector<std::string> degenerate;
};

/// Every measurement plan the config calls for, in execution order.
std::vector<protocol::MeasurementPlan> experiment_plans(const ExperimentConfig &config, int step,
                                                        int source);

RunResult run_experiment(const ExperimentConfig &config, const RunOptions &options = {});

/// Learns calibration factors for every plan of the config.
noise::CalibrationResult run_calibration(const ExperimentConfig &config, int workers = 1);

/// Writes acf.csv, per_bond.csv, summary.json, calibration.json (with noise)
/// and manifest.json into `dir`. Returns the names written, manifest last.
std::vector<std::string> write_bundle(const ExperimentConfig &config, const RunResult &result,
                                      const std::string &dir);

/// Writes calibration.json and a manifest listing it.
std::vector<std::string> write_calibration_bundle(const ExperimentConfig &config,
                                                  const noise::CalibrationResult &calibration,
                                                  const std::string &dir);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);

/// `%.17g`, with "nan" for NaN.
std::string format_double(double x);

/// Writes `content` to `path`, creating parent directories.
void write_text(const std::string &path, const std::string &content);
std::string read_text(const std::string &path);

} // namespace spintransport::cli
