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

#include "spintransport/qcore/circuit.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace spintransport::qcore {

namespace {
template <class... Ts> struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> Overloaded(Ts...) -> Overloaded<Ts...>;
} // namespace

bool Instruction::is_unitary() const noexcept
{
    return std::holds_alternative<Unitary1>(op) || std::holds_alternative<Unitary2>(op);
}

bool Instruction::is_two_qubit() const noexcept { return std::holds_alternative<Unitary2>(op); }

std::vector<int> Instruction::qubits() const
{
    return std::visit(Overloaded{
                          [](const Unitary1 &g) { return std::vector<int>{g.q}; },
                          [](const Unitary2 &g) { return std::vector<int>{g.q1, g.q2}; },
                          [](const MidMeasureZ &m) { return std::vector<int>{m.q}; },
                          [](const FinalMeasureZ &m) { return std::vector<int>{m.q}; },
                      },
                      op);
}

Circuit::Circuit(int n_qubits, int n_cbits, std::string label)
    : n_qubits_(n_qubits), n_cbits_(n_cbits), label_(std::move(label)),
      cbit_used_(static_cast<std::size_t>(n_cbits), false)
{
    if (n_qubits < 1 || n_qubits > 62) {
        throw std::invalid_argument(fmt::format("circuit needs 1..62 qubits, got {}", n_qubits));
    }
    if (n_cbits < 0 || n_cbits > 64) {
        throw std::invalid_argument(fmt::format("circuit supports 0..64 classical bits, got {}", n_cbits));
    }
}

void Circuit::append(Instruction instruction)
{
    const auto check_qubit = [this](int q) {
        if (q < 0 || q >= n_qubits_) {
            throw std::out_of_range(
                fmt::format("qubit index {} out of range for {} qubits", q, n_qubits_));
        }
    };
    const auto claim_cbit = [this](int c) {
        if (c < 0 || c >= n_cbits_) {
            throw std::out_of_range(
                fmt::format("classical bit {} out of range for {} bits", c, n_cbits_));
        }
        if (cbit_used_[static_cast<std::size_t>(c)]) {
            throw std::invalid_argument(fmt::format("classical bit {} written twice", c));
        }
        cbit_used_[static_cast<std::size_t>(c)] = true;
    };
    std::visit(Overloaded{
                   [&](const Unitary1 &g) {
                       check_qubit(g.q);
                       if (gates::unitarity_defect(g.u) > kUnitarityTolerance) {
                           throw std::invalid_argument("one-qubit matrix is not unitary");
                       }
                   },
                   [&](const Unitary2 &g) {
                       check_qubit(g.q1);
                       check_qubit(g.q2);
                       if (g.q1 == g.q2) {
                           throw std::invalid_argument("two-qubit gate on a repeated qubit");
                       }
                       if (gates::unitarity_defect(g.u) > kUnitarityTolerance) {
                           throw std::invalid_argument("two-qubit matrix is not unitary");
                       }
                   },
                   [&](const MidMeasureZ &m) {
                       check_qubit(m.q);
                       claim_cbit(m.cbit);
                   },
                   [&](const FinalMeasureZ &m) {
                       check_qubit(m.q);
                       claim_cbit(m.cbit);
                   },
               },
               instruction.op);
    instructions_.push_back(std::move(instruction));
}

void Circuit::append_all(const Circuit &other)
{
    if (other.n_qubits_ > n_qubits_) {
        throw std::invalid_argument("appended circuit is wider than the target");
    }
    for (const auto &ins : other.instructions_) {
        append(ins);
    }
}

void Circuit::add_unitary1(int q, const Matrix2 &u, Role role, GateTag tag, int layer)
{
    append(Instruction{Unitary1{q, u}, role, layer, std::move(tag)});
}

void Circuit::add_unitary2(int q1, int q2, const Matrix4 &u, Role role, GateTag tag, int layer)
{
    append(Instruction{Unitary2{q1, q2, u}, role, layer, std::move(tag)});
}

void Circuit::add_mid_measure(int q, int cbit)
{
    append(Instruction{MidMeasureZ{q, cbit}, Role::kProtocol, -1, {}});
}

void Circuit::add_final_measure(int q, int cbit)
{
    append(Instruction{FinalMeasureZ{q, cbit}, Role::kBasis, -1, {}});
}

void Circuit::validate() const
{
    std::vector<bool> finalized(static_cast<std::size_t>(n_qubits_), false);
    for (const auto &ins : instructions_) {
        for (int q : ins.qubits()) {
            if (finalized[static_cast<std::size_t>(q)]) {
                throw std::invalid_argument(
                    fmt::format("operation on qubit {} after its final measurement", q));
            }
        }
        if (const auto *m = std::get_if<FinalMeasureZ>(&ins.op)) {
            finalized[static_cast<std::size_t>(m->q)] = true;
        }
    }
}

int Circuit::count_mid_measurements() const
{
    int n = 0;
    for (const auto &ins : instructions_) {
        n += std::holds_alternative<MidMeasureZ>(ins.op) ? 1 : 0;
    }
    return n;
}

int Circuit::count_final_measurements() const
{
    int n = 0;
    for (const auto &ins : instructions_) {
        n += std::holds_alternative<FinalMeasureZ>(ins.op) ? 1 : 0;
    }
    return n;
}

int Circuit::count_two_qubit_unitaries() const
{
    int n = 0;
    for (const auto &ins : instructions_) {
        n += ins.is_two_qubit() ? 1 : 0;
    }
    return n;
}

int Circuit::count_role(Role role) const
{
    int n = 0;
    for (const auto &ins : instructions_) {
        n += (ins.role == role && ins.is_unitary()) ? 1 : 0;
    }
    return n;
}

std::vector<FinalMeasureZ> Circuit::final_measurements() const
{
    std::vector<FinalMeasureZ> out;
    for (const auto &ins : instructions_) {
        if (const auto *m = std::get_if<FinalMeasureZ>(&ins.op)) {
            out.push_back(*m);
        }
    }
    return out;
}

std::vector<MidMeasureZ> Circuit::mid_measurements() const
{
    std::vector<MidMeasureZ> out;
    for (const auto &ins : instructions_) {
        if (const auto *m = std::get_if<MidMeasureZ>(&ins.op)) {
            out.push_back(*m);
        }
    }
    return out;
}

} // namespace spintransport::qcore
