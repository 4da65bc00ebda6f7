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

#include "spintransport/qcore/gates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spintransport::qcore {

namespace {
using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};
} // namespace

char to_char(Pauli p) noexcept
{
    switch (p) {
    case Pauli::kI:
        return 'I';
    case Pauli::kX:
        return 'X';
    case Pauli::kY:
        return 'Y';
    case Pauli::kZ:
        return 'Z';
    }
    return '?';
}

Pauli pauli_from_char(char c)
{
    switch (c) {
    case 'I':
        return Pauli::kI;
    case 'X':
        return Pauli::kX;
    case 'Y':
        return Pauli::kY;
    case 'Z':
        return Pauli::kZ;
    default:
        throw std::invalid_argument(std::string("not a Pauli letter: ") + c);
    }
}

namespace gates {

Matrix2 identity2() { return Matrix2::Identity(); }

Matrix2 pauli(Pauli p)
{
    Matrix2 m;
    switch (p) {
    case Pauli::kI:
        m << 1, 0, 0, 1;
        break;
    case Pauli::kX:
        m << 0, 1, 1, 0;
        break;
    case Pauli::kY:
        m << 0, -kI, kI, 0;
        break;
    case Pauli::kZ:
        m << 1, 0, 0, -1;
        break;
    }
    return m;
}

Matrix2 hadamard()
{
    const double s = std::numbers::sqrt2 / 2.0;
    Matrix2 m;
    m << s, s, s, -s;
    return m;
}

Matrix2 s_gate()
{
    Matrix2 m;
    m << 1, 0, 0, kI;
    return m;
}

Matrix2 s_dagger()
{
    Matrix2 m;
    m << 1, 0, 0, -kI;
    return m;
}

Matrix2 rx(double theta)
{
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    Matrix2 m;
    m << c, -kI * s, -kI * s, c;
    return m;
}

Matrix2 ry(double theta)
{
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    Matrix2 m;
    m << c, -s, s, c;
    return m;
}

Matrix2 rz(double theta)
{
    Matrix2 m;
    m << std::exp(-kI * theta / 2.0), 0, 0, std::exp(kI * theta / 2.0);
    return m;
}

Matrix4 kron(const Matrix2 &on_q1, const Matrix2 &on_q2)
{
    Matrix4 m;
    for (int r2 = 0; r2 < 2; ++r2) {
        for (int r1 = 0; r1 < 2; ++r1) {
            for (int c2 = 0; c2 < 2; ++c2) {
                for (int c1 = 0; c1 < 2; ++c1) {
                    m(r1 + 2 * r2, c1 + 2 * c2) = on_q1(r1, c1) * on_q2(r2, c2);
                }
            }
        }
    }
    return m;
}

Matrix4 pauli2(Pauli on_q1, Pauli on_q2) { return kron(pauli(on_q1), pauli(on_q2)); }

Matrix4 controlled(const Matrix2 &u)
{
    Matrix2 p0;
    p0 << 1, 0, 0, 0;
    Matrix2 p1;
    p1 << 0, 0, 0, 1;
    return kron(p0, identity2()) + kron(p1, u);
}

Matrix4 cnot() { return controlled(pauli(Pauli::kX)); }

Matrix4 cnot_reversed()
{
    Matrix2 p0;
    p0 << 1, 0, 0, 0;
    Matrix2 p1;
    p1 << 0, 0, 0, 1;
    return kron(identity2(), p0) + kron(pauli(Pauli::kX), p1);
}

Matrix4 xxz_exponential(double a, double b, double c)
{
    // ZZ = +1 on {00, 11}; XX + YY vanishes there and XX - YY swaps them.
    // ZZ = -1 on {01, 10}; XX + YY swaps them with weight 2 and XX - YY vanishes.
    Matrix4 m = Matrix4::Zero();
    const Complex phase_even = std::exp(-kI * c);
    const double even_arg = a - b;
    m(0, 0) = phase_even * std::cos(even_arg);
    m(3, 3) = phase_even * std::cos(even_arg);
    m(0, 3) = -kI * phase_even * std::sin(even_arg);
    m(3, 0) = -kI * phase_even * std::sin(even_arg);
    const Complex phase_odd = std::exp(kI * c);
    const double odd_arg = a + b;
    m(1, 1) = phase_odd * std::cos(odd_arg);
    m(2, 2) = phase_odd * std::cos(odd_arg);
    m(1, 2) = -kI * phase_odd * std::sin(odd_arg);
    m(2, 1) = -kI * phase_odd * std::sin(odd_arg);
    return m;
}

Matrix4 sqrt_iswap() { return xxz_exponential(std::numbers::pi / 8, std::numbers::pi / 8, 0.0); }

Matrix4 sqrt_iswap_dagger() { return sqrt_iswap().adjoint(); }

Matrix4 pauli_quarter_turn(Pauli on_q1, Pauli on_q2, int sign)
{
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("quarter-turn sign must be +1 or -1");
    }
    const double s = std::numbers::sqrt2 / 2.0;
    return s * (Matrix4::Identity() - kI * static_cast<double>(sign) * pauli2(on_q1, on_q2));
}

double unitarity_defect(const Eigen::MatrixXcd &u)
{
    const Eigen::MatrixXcd d =
        u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

bool equal_up_to_phase(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b, double tol)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return false;
    }
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    if (std::abs(b(r, c)) < tol) {
        return a.cwiseAbs().maxCoeff() < tol;
    }
    Complex phase = a(r, c) / b(r, c);
    if (std::abs(std::abs(phase) - 1.0) > tol) {
        return false;
    }
    phase /= std::abs(phase);
    return (a - phase * b).cwiseAbs().maxCoeff() < tol;
}

} // namespace gates
} // namespace spintransport::qcore
