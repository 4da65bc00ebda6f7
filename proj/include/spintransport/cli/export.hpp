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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spintransport/protocol/plan.hpp"

namespace spintransport::cli {

/// File name stem of one plan circuit, safe for any file system.
std::string file_stem(const protocol::MeasurementPlan &plan, const protocol::PlanCircuit &circuit);

/// Circuit-batch description of a plan: coefficients, classical bit layout
/// and readout terms, referencing the QASM files by name.
nlohmann::json plan_to_json(const protocol::MeasurementPlan &plan);

/// Writes one `.qasm` file per circuit and a `batch.json` listing the plans.
/// Returns the file names, batch.json last.
std::vector<std::string> export_plans(const std::vector<protocol::MeasurementPlan> &plans,
                                      const std::string &dir);

} // namespace spintransport::cli
