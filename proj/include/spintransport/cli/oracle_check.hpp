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

#include <cstddef>

#include <nlohmann/json.hpp>

#include "spintransport/cli/config.hpp"
#include "spintransport/cli/runner.hpp"

namespace spintransport::cli {

struct OracleComparison {
    double max_deviation = 0.0;
    std::size_t entries = 0;
};

/// Reference <J_i(t_k) J_j> for every (i, j, k) of the config from the
/// dense Trotter oracle, as a fixture document.
nlohmann::json oracle_fixture(const ExperimentConfig &config);

/// Largest |run - fixture| over the fixture entries, real and imaginary parts
/// compared separately for the parts the config computes. Throws when an
/// entry of the fixture is absent from the run.
OracleComparison compare_fixture(const ExperimentConfig &config, const RunResult &result,
                                 const nlohmann::json &fixture);

} // namespace spintransport::cli
