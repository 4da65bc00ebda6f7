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

#include <complex>

#include <Eigen/Dense>

namespace spintransport::qcore {

using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;

enum class Pauli : unsigned char { kI = 0, kX = 1, kY = 2, kZ = 3 };

char to_char(Pauli p) noexcept;
Pauli pauli_from_char(char c);

namespace gates {

Matrix2 pauli(Pauli p);
Matrix2 identity2();
Matrix2 hadamard();
Matrix2 s_gate();
Matrix2 s_dagger();
Matrix2 rx(double theta);
Matrix2 ry(double theta);
Matrix2 rz(double theta);

/// Two-qubit gates act on (q1, q2) with local index b(q1) + 2 b(q2).
Matrix4 kron(const Matrix2 &on_q1, const Matrix2 &on_q2);
Matrix4 pauli2(Pauli on_q1, Pauli on_q2);

/// CNOT with q1 as control.
Matrix4 cnot();
/// CNOT with q2 as control.
Matrix4 cnot_reversed();
/// Controlled-U with q1 as control and q2 as target.
Matrix4 controlled(const Matrix2 &u);

/// exp(-i (a XX + b YY + c ZZ)), closed form on the {00,11} and {01,10} blocks.
Matrix4 xxz_exponential(double a, double b, double c);

/// T = exp(-i pi (XX + YY) / 8), the sqrt(iSWAP)-type gate mapping the spin
/// current onto Z_{j+1} - Z_j.
Matrix4 sqrt_iswap();
Matrix4 sqrt_iswap_dagger();

/// exp(-i sign pi P / 4) = (I - i sign P) / sqrt(2) for a two-qubit Pauli P.
Matrix4 pauli_quarter_turn(Pauli on_q1, Pauli on_q2, int sign);

/// max |U^dagger U - I| over entries.
double unitarity_defect(const Eigen::MatrixXcd &u);

/// True if a and b agree up to a global phase within tol (max-entry norm).
bool equal_up_to_phase(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b, double tol);

} // namespace gates
} // namespace spintransport::qcore
