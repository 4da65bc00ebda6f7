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

#include "spintransport/cli/export.hpp"

#include <filesystem>

#include "spintransport/cli/qasm.hpp"
#include "spintransport/cli/runner.hpp"

namespace spintransport::cli {

std::string file_stem(const protocol::MeasurementPlan &plan, const protocol::PlanCircuit &circuit)
{
    std::string label = circuit.label;
    if (const auto slash = label.rfind('/'); slash != std::string::npos) {
        label = label.substr(slash + 1);
    }
    std::string out = plan.id + "__";
    for (char ch : label) {
        switch (ch) {
        case '+':
            out += "plus";
            break;
        case '-':
            out += "minus";
            break;
        case '@':
            out += "_at_";
            break;
        case '#':
            out += "_";
            break;
        default:
            out += std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ? ch : '_';
        }
    }
    return out;
}

nlohmann::json plan_to_json(const protocol::MeasurementPlan &plan)
{
    nlohmann::json circuits = nlohmann::json::array();
    for (const auto &pc : plan.circuits) {
        circuits.push_back({{"label", pc.label},
                            {"file", file_stem(plan, pc) + ".qasm"},
                            {"coefficient", pc.coefficient},
                            {"calibration_label", pc.calibration_label},
                            {"mcm_cbit", pc.mcm_cbit},
                            {"cbit_of_qubit", pc.cbit_of_qubit}});
    }
    nlohmann::json readout = nlohmann::json::array();
    for (const auto &t : plan.readout) {
        readout.push_back({{"target", t.target}, {"qubits", t.qubits}, {"weight", t.weight}});
    }
    return {{"id", plan.id},
            {"part", std::string(protocol::to_string(plan.part))},
            {"source_bond", plan.source_bond},
            {"targets", plan.targets},
            {"pruned_targets", plan.pruned_targets},
            {"normalization", plan.normalization},
            {"t1", plan.t1},
            {"t2", plan.t2},
            {"dt", plan.dt},
            {"initial", plan.initial.bitstring()},
            {"circuits", circuits},
            {"readout", readout}};
}

std::vector<std::string> export_plans(const std::vector<protocol::MeasurementPlan> &plans,
                                      const std::string &dir)
{
    std::vector<std::string> files;
    nlohmann::json batch = {{"version", 1}, {"plans", nlohmann::json::array()}};
    for (const auto &plan : plans) {
        for (const auto &pc : plan.circuits) {
            const auto name = file_stem(plan, pc) + ".qasm";
            write_text((std::filesystem::path(dir) / name).string(), to_qasm(pc.circuit));
            files.push_back(name);
        }
        batch["plans"].push_back(plan_to_json(plan));
    }
    write_text((std::filesystem::path(dir) / "batch.json").string(), batch.dump(2) + "\n");
    files.emplace_back("batch.json");
    return files;
}

} // namespace spintransport::cli
