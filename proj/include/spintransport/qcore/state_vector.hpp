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
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spintransport::qcore {

using Complex = std::complex<double>;

/// Site 0 is the leftmost chain site and the least-significant bit of a
/// basis-state index. Every bitstring in this library is written site 0 first.
inline constexpr int kHardMaxQubits = 34;
inline constexpr int kDefaultMaxQubits = 24;

/// Throws std::length_error when `n_qubits` exceeds `cap`.
void check_qubit_cap(int n_qubits, int cap = kDefaultMaxQubits);

/**
 * Dense amplitude array over 2^n computational basis states.
 *
 * The container never renormalizes on its own; callers that build
 * unnormalized intermediates (projected branches, operator images) are
 * responsible for calling normalize() when they need a physical state.
 */
class StateVector {
  public:
    /// |0...0> on `n_qubits` qubits.
    explicit StateVector(int n_qubits);

    static StateVector basis(int n_qubits, std::uint64_t index);
    static StateVector from_amplitudes(int n_qubits, std::vector<Complex> amplitudes);

    [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return amplitudes_.size(); }

    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amplitudes_; }

    Complex &operator[](std::size_t i) noexcept { return amplitudes_[i]; }
    const Complex &operator[](std::size_t i) const noexcept { return amplitudes_[i]; }

    [[nodiscard]] double norm() const noexcept;
    [[nodiscard]] double norm_squared() const noexcept;
    /// Rescales to unit norm; returns the norm before rescaling.
    double normalize();

    /// <this|other>
    [[nodiscard]] Complex inner(const StateVector &other) const;

    /// Euclidean distance || this - other ||.
    [[nodiscard]] double distance(const StateVector &other) const;

    /// Sum over basis states of P(bit q = 0) minus P(bit q = 1), i.e. <Z_q>.
    [[nodiscard]] double expect_z(int qubit) const;

  private:
    int n_qubits_;
    std::vector<Complex> amplitudes_;
};

enum class StateKind { kNeel, kDomainWall, kAllZero, kCustom };

/// A computational-basis product state, the only kind of initial state the
/// protocol circuits prepare (via X gates).
struct ProductState {
    int n_qubits = 0;
    std::uint64_t index = 0;

    static ProductState make(StateKind kind, int n_qubits, std::string_view bitstring = {});
    static ProductState from_bitstring(std::string_view bitstring);

    [[nodiscard]] bool bit(int site) const noexcept { return (index >> site) & 1U; }
    [[nodiscard]] std::string bitstring() const;
    [[nodiscard]] StateVector to_state() const { return StateVector::basis(n_qubits, index); }
};

/// Néel |0101...>, domain wall |0..01..1>, all-zero, or a custom bitstring.
StateVector prepare_state(StateKind kind, int n_qubits, std::string_view bitstring = {});

StateKind parse_state_kind(std::string_view name);
std::string_view to_string(StateKind kind);

} // namespace spintransport::qcore
