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

#include "spintransport/cli/oracle_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "spintransport/oracle/exact.hpp"

namespace spintransport::cli {

nlohmann::json oracle_fixture(const ExperimentConfig &config)
{
    const auto state = config.initial_state().to_state();
    const auto targets = config.target_bonds();
    nlohmann::json entries = nlohmann::json::array();
    for (int j : config.source_bonds()) {
        const auto series = oracle::exact_trotter_acf_series(config.model, config.dt, state, j, targets,
                                                             config.n_steps.back());
        for (int step : config.n_steps) {
            for (std::size_t m = 0; m < targets.size(); ++m) {
                const auto v = series.at(static_cast<std::size_t>(step))[m];
                entries.push_back({step, targets[m], j, v.real(), v.imag()});
            }
        }
    }
    return {{"model",
             {{"n_sites", config.model.n_sites},
              {"coupling", config.model.coupling},
              {"anisotropy", config.model.anisotropy},
              {"boundary", std::string(model::to_string(config.model.boundary))}}},
            {"dt", config.dt},
            {"initial_state", config.initial_state().bitstring()},
            {"columns", {"step", "i", "j", "re", "im"}},
            {"entries", entries}};
}

OracleComparison compare_fixture(const ExperimentConfig &config, const RunResult &result,
                                 const nlohmann::json &fixture)
{
    OracleComparison out;
    for (const auto &e : fixture.at("entries")) {
        const int step = e.at(0).get<int>();
        const auto it = std::find(config.n_steps.begin(), config.n_steps.end(), step);
        if (it == config.n_steps.end()) {
            throw std::invalid_argument(fmt::format("fixture step {} is not in the config", step));
        }
        const transport::BondPairTime key{e.at(1).get<int>(), e.at(2).get<int>(),
                                          static_cast<int>(it - config.n_steps.begin())};
        const auto v = result.per_bond.find(key);
        if (v == result.per_bond.end()) {
            throw std::invalid_argument(
                fmt::format("run has no entry for step {}, bonds ({}, {})", step, key.i, key.j));
        }
        if (config.real) {
            out.max_deviation = std::max(out.max_deviation, std::abs(v->second.real() - e.at(3).get<double>()));
        }
        if (config.imag) {
            out.max_deviation = std::max(out.max_deviation, std::abs(v->second.imag() - e.at(4).get<double>()));
        }
        ++out.entries;
    }
    return out;
}

} // namespace spintransport::cli
