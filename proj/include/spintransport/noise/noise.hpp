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
#include <memory>
#include <random>
#include <vector>

#include "spintransport/protocol/estimate.hpp"
#include "spintransport/protocol/plan.hpp"
#include "spintransport/qcore/circuit.hpp"
#include "spintransport/qcore/simulator.hpp"

namespace spintransport::noise {

/// Depolarizing noise: after a k-qubit unitary, with probability p_k the
/// qubits receive a uniformly random k-qubit Pauli (identity included), so
/// rho -> (1 - p) rho + p I / 2^k on those qubits. Recorded measurement bits
/// flip with probability p_meas.
struct NoiseSpec {
    double p1 = 0.0;
    double p2 = 0.0;
    double p_meas = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
    [[nodiscard]] bool is_noiseless() const noexcept { return p1 == 0.0 && p2 == 0.0 && p_meas == 0.0; }
};

/// Stochastic executor for one circuit. Each shot samples an error pattern,
/// then a measurement record from the circuit with those Paulis inserted.
/// Circuits per pattern are cached for the executor's lifetime.
/// Instructions with Role::kTwirl are treated as noiseless.
class NoisyExecutor {
  public:
    NoisyExecutor(qcore::Circuit circuit, NoiseSpec spec);
    ~NoisyExecutor();
    NoisyExecutor(NoisyExecutor &&) noexcept;
    NoisyExecutor &operator=(NoisyExecutor &&) noexcept;

    qcore::ShotRecord sample(std::mt19937_64 &rng);
    std::vector<qcore::ShotRecord> sample(std::int64_t n_shots, std::uint64_t seed);

    [[nodiscard]] const qcore::Circuit &circuit() const noexcept;
    /// Number of distinct error patterns seen so far.
    [[nodiscard]] std::size_t pattern_count() const noexcept;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

NoisyExecutor inject_noise(const qcore::Circuit &circuit, const NoiseSpec &spec);

/// Runs every circuit of the plan with `shots_per_circuit` noisy shots. With
/// n_twirls > 0 the shots are spread evenly over that many twirled instances.
std::vector<protocol::CircuitResult> execute_noisy(const protocol::MeasurementPlan &plan,
                                                   const NoiseSpec &spec,
                                                   std::int64_t shots_per_circuit,
                                                   int n_twirls = 0);

} // namespace spintransport::noise
