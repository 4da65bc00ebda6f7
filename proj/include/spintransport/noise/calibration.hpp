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

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "spintransport/noise/noise.hpp"
#include "spintransport/protocol/estimate.hpp"
#include "spintransport/protocol/plan.hpp"

namespace spintransport::noise {

/// A calibration circuit with a classically known readout of +1 per qubit.
struct CalibrationCircuit {
    std::string plan_id;
    /// Calibration label shared by the template circuits it stands for.
    std::string label;
    protocol::PlanCircuit circuit;
};

/**
 * One calibration circuit per (plan, calibration label).
 *
 * Real variant: the template circuit without its state preparation; the
 * estimator is <sign(mcm) Z_q>. Imaginary variant: the template with its
 * exponential gate replaced by exp(-i pi ZZ / 4) and no state preparation.
 */
std::vector<CalibrationCircuit> calibration_circuits(const protocol::MeasurementPlan &plan);

struct FactorKey {
    std::string plan_id;
    std::string label;
    int qubit = 0;

    friend auto operator<=>(const FactorKey &, const FactorKey &) = default;
};

struct Factor {
    double value = 1.0;
    double stderr_ = 0.0;
    std::int64_t shots = 0;
    /// Estimated factor <= 0; renormalization is refused for this entry.
    bool degenerate = false;
};

struct CalibrationResult {
    static constexpr int kVersion = 1;
    std::map<FactorKey, Factor> factors;

    [[nodiscard]] const Factor *find(const FactorKey &key) const;
};

/// Per-qubit factors from sampled calibration shots (one shot list per
/// calibration circuit, same order). Throws on empty shot lists.
CalibrationResult learn_factors(const std::vector<CalibrationCircuit> &circuits,
                                const std::vector<std::vector<qcore::ShotRecord>> &shots);

/// Factors from exact branch data, for noiseless checks.
CalibrationResult exact_factors(const std::vector<CalibrationCircuit> &circuits);

/// Samples every calibration circuit of the plans with noise and learns factors.
CalibrationResult calibrate(const std::vector<protocol::MeasurementPlan> &plans, const NoiseSpec &spec,
                            std::int64_t shots_per_circuit, int n_twirls = 0);

struct RenormalizedEstimate {
    protocol::CorrelatorEstimate estimate;
    /// Terms left uncorrected because their factor is missing or degenerate.
    std::vector<FactorKey> skipped;
};

/// Divides every term by its factor (plan id, calibration label, qubit)
/// before the signed combination. Errors add in quadrature by the delta
/// method. Terms with Z strings of weight other than one are skipped.
RenormalizedEstimate renormalize(const protocol::MeasurementPlan &plan,
                                 const protocol::CorrelatorEstimate &raw,
                                 const CalibrationResult &calibration);

nlohmann::json to_json(const CalibrationResult &result);
CalibrationResult calibration_from_json(const nlohmann::json &doc);

} // namespace spintransport::noise
