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
#include <variant>
#include <vector>

#include "spintransport/qcore/gates.hpp"

namespace spintransport::qcore {

struct Unitary1 {
    int q = 0;
    Matrix2 u = Matrix2::Identity();
};

/// Acts on (q1, q2) with local index b(q1) + 2 b(q2).
struct Unitary2 {
    int q1 = 0;
    int q2 = 1;
    Matrix4 u = Matrix4::Identity();
};

struct MidMeasureZ {
    int q = 0;
    int cbit = 0;
};

struct FinalMeasureZ {
    int q = 0;
    int cbit = 0;
};

using Operation = std::variant<Unitary1, Unitary2, MidMeasureZ, FinalMeasureZ>;

/// What an instruction is for. Only kTrotter instructions are removable by
/// light-cone pruning; the rest are pinned.
enum class Role { kPrep, kProtocol, kTrotter, kBasis, kTwirl, kOther };

/// Symbolic description of a unitary, used to re-expand it into native gates
/// on export. An empty name means "opaque matrix".
struct GateTag {
    std::string name;
    std::vector<double> params;
};

struct Instruction {
    Operation op;
    Role role = Role::kOther;
    /// Trotter layer index; gates sharing a layer act on disjoint sites.
    int layer = -1;
    GateTag tag;

    [[nodiscard]] bool is_unitary() const noexcept;
    [[nodiscard]] bool is_two_qubit() const noexcept;
    [[nodiscard]] std::vector<int> qubits() const;
};

/// Ordered instruction list over a quantum and a classical register.
class Circuit {
  public:
    Circuit() = default;
    Circuit(int n_qubits, int n_cbits, std::string label = {});

    [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] int n_cbits() const noexcept { return n_cbits_; }
    [[nodiscard]] const std::string &label() const noexcept { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }
    [[nodiscard]] const std::vector<Instruction> &instructions() const noexcept
    {
        return instructions_;
    }

    /// Appends after checking indices, unitarity and classical-bit uniqueness.
    void append(Instruction instruction);
    void append_all(const Circuit &other);

    void add_unitary1(int q, const Matrix2 &u, Role role = Role::kOther, GateTag tag = {},
                      int layer = -1);
    void add_unitary2(int q1, int q2, const Matrix4 &u, Role role = Role::kOther,
                      GateTag tag = {}, int layer = -1);
    void add_mid_measure(int q, int cbit);
    void add_final_measure(int q, int cbit);

    /// Throws if a final measurement is followed by any operation on its qubit.
    void validate() const;

    [[nodiscard]] int count_mid_measurements() const;
    [[nodiscard]] int count_final_measurements() const;
    [[nodiscard]] int count_two_qubit_unitaries() const;
    [[nodiscard]] int count_role(Role role) const;

    /// Final-measurement (qubit, cbit) pairs in program order.
    [[nodiscard]] std::vector<FinalMeasureZ> final_measurements() const;
    [[nodiscard]] std::vector<MidMeasureZ> mid_measurements() const;

  private:
    int n_qubits_ = 0;
    int n_cbits_ = 0;
    std::string label_;
    std::vector<Instruction> instructions_;
    std::vector<bool> cbit_used_;
};

inline constexpr double kUnitarityTolerance = 1e-10;

} // namespace spintransport::qcore
