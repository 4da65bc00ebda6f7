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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spintransport/model/spin_chain.hpp"
#include "spintransport/noise/noise.hpp"
#include "spintransport/qcore/state_vector.hpp"
#include "spintransport/transport/transport.hpp"

namespace spintransport::cli {

enum class ExecutionMode { kExactBranch, kSampled };
enum class SourceSelection { kAuto, kAll, kTranslation, kList };

struct ExperimentConfig {
    model::SpinChainModel model;
    double dt = 0.25;
    /// Sorted, unique step counts; time k is dt * n_steps[k].
    std::vector<int> n_steps;
    qcore::StateKind initial_kind = qcore::StateKind::kNeel;
    std::string initial_bitstring;

    bool real = true;
    bool imag = true;
    SourceSelection sources = SourceSelection::kAuto;
    std::vector<int> source_list;
    /// Empty means every bond.
    std::vector<int> targets;
    bool neel_symmetry = false;
    bool lightcone = false;

    ExecutionMode mode = ExecutionMode::kExactBranch;
    std::int64_t shots = 10000;
    std::int64_t calibration_shots = 0;
    std::uint64_t seed = 0;
    std::optional<noise::NoiseSpec> noise;
    int twirls = 0;

    bool transport = true;
    transport::AggregateMode aggregate = transport::AggregateMode::kFull;
    int source_bond = 0;
    bool divide_by_n = false;
    std::optional<double> drude_t_end;
    std::optional<std::pair<double, double>> fit_window;
    int bootstrap_resamples = 1000;
    double confidence = 0.95;

    int max_qubits = 24;
    std::string output_dir = "out";

    /// The parsed document with defaults filled in; hashed into the manifest.
    nlohmann::json canonical;

    [[nodiscard]] qcore::ProductState initial_state() const;
    [[nodiscard]] std::vector<double> times() const;
    /// Source bonds the protocol is run for.
    [[nodiscard]] std::vector<int> source_bonds() const;
    [[nodiscard]] std::vector<int> target_bonds() const;
    /// Statevector width the run needs.
    [[nodiscard]] int qubits_needed() const noexcept { return model.n_sites; }
};

/// Parses and validates a config document. Unknown keys, bad values and a
/// model wider than max_qubits are rejected with std::invalid_argument.
ExperimentConfig parse_config(const nlohmann::json &doc);
ExperimentConfig load_config(const std::string &path);

/// Whether translating the state by two sites, possibly followed by a global
/// spin flip, leaves it unchanged. Two sites is the period of the even/odd
/// Trotter layers, so <J_i J_j> is then invariant under that shift.
bool translation_invariant(const qcore::ProductState &state);

} // namespace spintransport::cli
