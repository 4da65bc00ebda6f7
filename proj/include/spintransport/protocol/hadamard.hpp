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

#include "spintransport/model/spin_chain.hpp"
#include "spintransport/model/trotter.hpp"
#include "spintransport/protocol/plan.hpp"
#include "spintransport/qcore/circuit.hpp"
#include "spintransport/qcore/state_vector.hpp"

namespace spintransport::protocol {

/// One interference circuit of the ancilla-based scheme. The ancilla is
/// qubit n and is the only measured qubit (classical bit 0).
struct HadamardCircuit {
    std::string label;
    qcore::Circuit circuit;
    Part part = Part::kReal;
    /// Spin-unit weight of <Z_ancilla> in the correlator.
    double coefficient = 0.0;
};

/// Eight circuits for <J_i(t) J_j>: two Pauli terms of each current, times
/// the real and imaginary readouts.
std::vector<HadamardCircuit> hadamard_circuits(const model::SpinChainModel &model,
                                               const model::TrotterSpec &trotter,
                                               const qcore::ProductState &initial, int i, int j);

/// <J_i(t) J_j> with t = trotter.total_time(), evaluated exactly from the
/// ancilla statistics of hadamard_circuits.
Complex hadamard_baseline(const model::SpinChainModel &model, const model::TrotterSpec &trotter,
                          const qcore::ProductState &initial, int i, int j);

enum class Scheme { kDirect, kHadamard };
enum class CountMode { kFullMatrix, kTranslationReduced };

Scheme parse_scheme(std::string_view text);
CountMode parse_count_mode(std::string_view text);

struct CircuitCount {
    long real = 0;
    long imag = 0;
    [[nodiscard]] long total() const noexcept { return real + imag; }
};

/// Circuits needed for one time point, counted by enumerating the planners'
/// output. Full matrix covers every (i, j) bond pair; translation-reduced
/// fixes the source bond at 0.
CircuitCount count_circuits(Scheme scheme, const model::SpinChainModel &model, CountMode mode,
                            bool neel_symmetry = false);

} // namespace spintransport::protocol
