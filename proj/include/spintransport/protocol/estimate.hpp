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
#include <string_view>
#include <vector>

#include "spintransport/protocol/plan.hpp"
#include "spintransport/qcore/simulator.hpp"

namespace spintransport::protocol {

/// Outcome of running one plan circuit: exact branches or sampled shots.
struct CircuitResult {
    std::string label;
    std::vector<qcore::BranchOutcome> branches;
    std::vector<qcore::ShotRecord> shots;

    [[nodiscard]] bool is_exact() const noexcept { return shots.empty(); }
};

/// Estimate of <sign * prod Z> for one readout term of one circuit.
struct TermValue {
    std::string label;
    int target = 0;
    std::vector<int> qubits;
    double weight = 1.0;
    double value = 0.0;
    double stderr_ = 0.0;
    std::int64_t n_shots = 0;
};

struct CorrelatorEstimate {
    std::string plan_id;
    Part part = Part::kReal;
    int source_bond = 0;
    std::vector<int> targets;
    /// Spin-unit correlator for each entry of `targets`; real or purely
    /// imaginary according to `part`.
    std::vector<Complex> values;
    std::vector<double> stderrs;
    std::vector<TermValue> terms;
    /// Targets removed by light-cone pruning; their value is exactly zero.
    std::vector<int> pruned_targets;

    [[nodiscard]] Complex value_of(int target) const;
};

/// SplitMix64 finaliser.
std::uint64_t splitmix64(std::uint64_t x) noexcept;
/// Per-circuit seed from a base seed, plan id and circuit label.
std::uint64_t derive_seed(std::uint64_t base, std::string_view plan_id, std::string_view label);

std::vector<CircuitResult> execute_exact(const MeasurementPlan &plan);
std::vector<CircuitResult> execute_sampled(const MeasurementPlan &plan, std::int64_t shots_per_circuit,
                                           std::uint64_t seed);

/// +1 or -1 from the mid-circuit bit, or +1 when the circuit has none.
int mcm_sign(const PlanCircuit &circuit, std::uint64_t mcm_bits) noexcept;
/// (-1)^{parity} of the final bits holding `qubits`.
int z_string_sign(const PlanCircuit &circuit, std::uint64_t final_bits, const std::vector<int> &qubits);

/// Per-shot value of `sign * sum_w w * prod Z` restricted to one target.
std::vector<double> shot_values(const MeasurementPlan &plan, const PlanCircuit &circuit,
                                const std::vector<qcore::ShotRecord> &shots, int target);

/// Term values from results, which must match the plan's circuit labels.
std::vector<TermValue> term_values(const MeasurementPlan &plan,
                                   const std::vector<CircuitResult> &results);

/// Combines term values: value_i = normalisation * sum_c coeff_c * sum_t w_t v_{c,t}.
CorrelatorEstimate combine_terms(const MeasurementPlan &plan, std::vector<TermValue> terms);

CorrelatorEstimate assemble(const MeasurementPlan &plan, const std::vector<CircuitResult> &results);
/// As assemble, but throws if the plan is not of the named part.
CorrelatorEstimate assemble_real(const MeasurementPlan &plan, const std::vector<CircuitResult> &results);
CorrelatorEstimate assemble_imag(const MeasurementPlan &plan, const std::vector<CircuitResult> &results);

/// Sums several estimates target-wise into a map target -> value.
std::map<int, Complex> merge_estimates(const std::vector<CorrelatorEstimate> &estimates);

} // namespace spintransport::protocol
