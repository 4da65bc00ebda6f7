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
#include <vector>

#include "spintransport/qcore/circuit.hpp"
#include "spintransport/qcore/gates.hpp"
#include "spintransport/qcore/state_vector.hpp"

namespace spintransport::noise {

/// A two-qubit Pauli P with U P U^dagger = sign * Q for a Pauli Q.
struct TwirlPair {
    qcore::Pauli p_q1;
    qcore::Pauli p_q2;
    qcore::Pauli q_q1;
    qcore::Pauli q_q2;
    double sign;
};

/// All Paulis that U maps onto a Pauli. For a Clifford this is all 16; for
/// an XXZ block it is {II, XX, YY, ZZ}.
std::vector<TwirlPair> twirl_set(const qcore::Matrix4 &u);

/// Random Pauli frames around every two-qubit unitary: (sign Q) U P. Each
/// instance equals the input circuit exactly; the inserted gates carry
/// Role::kTwirl. Measurements and one-qubit gates pass through unchanged.
std::vector<qcore::Circuit> pauli_twirl(const qcore::Circuit &circuit, int n_twirls, std::uint64_t seed);

} // namespace spintransport::noise
