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
#include <string_view>

#include "spintransport/qcore/circuit.hpp"
#include "spintransport/qcore/state_vector.hpp"

namespace spintransport::cli {

/**
 * OpenQASM 3 text for a circuit. Bond blocks and T gates expand to a
 * three-CNOT pattern, Pauli quarter turns to a basis change around
 * CNOT-RZ-CNOT, controlled Paulis to cx/cy/cz and other one-qubit gates to
 * U(theta, phi, lambda). Both measurement kinds become `c[k] = measure q[i];`.
 * Throws for two-qubit gates without a known tag.
 */
std::string to_qasm(const qcore::Circuit &circuit);

/// Parses the subset emitted by to_qasm. A measurement followed by further
/// operations on its qubit becomes a MidMeasureZ, otherwise a FinalMeasureZ.
/// Throws std::invalid_argument with the line number on any grammar error.
qcore::Circuit parse_qasm(std::string_view text);

/// ZYZ angles with u = e^{i g} U(theta, phi, lambda).
struct UAngles {
    double theta;
    double phi;
    double lambda;
};
UAngles u_angles(const qcore::Matrix2 &u);
qcore::Matrix2 u_matrix(double theta, double phi, double lambda);

} // namespace spintransport::cli
