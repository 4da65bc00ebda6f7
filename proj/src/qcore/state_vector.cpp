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

#include "spintransport/qcore/state_vector.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace spintransport::qcore {

void check_qubit_cap(int n_qubits, int cap)
{
    if (n_qubits > cap) {
        throw std::length_error(fmt::format(
            "{} qubits exceeds the statevector cap of {} (raise the cap explicitly to proceed)",
            n_qubits, cap));
    }
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits)
{
    if (n_qubits < 1 || n_qubits > kHardMaxQubits) {
        throw std::invalid_argument(
            fmt::format("n_qubits must lie in [1, {}], got {}", kHardMaxQubits, n_qubits));
    }
    amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amplitudes_[0] = 1.0;
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index)
{
    StateVector s(n_qubits);
    if (index >= s.size()) {
        throw std::out_of_range(fmt::format("basis index {} out of range for {} qubits", index, n_qubits));
    }
    s.amplitudes_[0] = 0.0;
    s.amplitudes_[index] = 1.0;
    return s;
}

StateVector StateVector::from_amplitudes(int n_qubits, std::vector<Complex> amplitudes)
{
    StateVector s(n_qubits);
    if (amplitudes.size() != s.size()) {
        throw std::invalid_argument(fmt::format("expected {} amplitudes, got {}", s.size(),
                                                amplitudes.size()));
    }
    s.amplitudes_ = std::move(amplitudes);
    return s;
}

double StateVector::norm_squared() const noexcept
{
    double acc = 0.0;
    for (const auto &a : amplitudes_) {
        acc += std::norm(a);
    }
    return acc;
}

double StateVector::norm() const noexcept { return std::sqrt(norm_squared()); }

double StateVector::normalize()
{
    const double nrm = norm();
    if (nrm == 0.0) {
        throw std::domain_error("cannot normalize the zero vector");
    }
    const double inv = 1.0 / nrm;
    for (auto &a : amplitudes_) {
        a *= inv;
    }
    return nrm;
}

Complex StateVector::inner(const StateVector &other) const
{
    if (other.size() != size()) {
        throw std::invalid_argument("inner product of states with different sizes");
    }
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        acc += std::conj(amplitudes_[i]) * other.amplitudes_[i];
    }
    return acc;
}

double StateVector::distance(const StateVector &other) const
{
    if (other.size() != size()) {
        throw std::invalid_argument("distance between states with different sizes");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        acc += std::norm(amplitudes_[i] - other.amplitudes_[i]);
    }
    return std::sqrt(acc);
}

double StateVector::expect_z(int qubit) const
{
    if (qubit < 0 || qubit >= n_qubits_) {
        throw std::out_of_range(fmt::format("qubit {} out of range", qubit));
    }
    const std::size_t mask = std::size_t{1} << qubit;
    double acc = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        const double p = std::norm(amplitudes_[i]);
        acc += (i & mask) ? -p : p;
    }
    return acc;
}

ProductState ProductState::from_bitstring(std::string_view bitstring)
{
    ProductState s;
    s.n_qubits = static_cast<int>(bitstring.size());
    if (s.n_qubits < 1 || s.n_qubits > kHardMaxQubits) {
        throw std::invalid_argument(fmt::format("bitstring length {} unsupported", s.n_qubits));
    }
    for (int q = 0; q < s.n_qubits; ++q) {
        const char c = bitstring[static_cast<std::size_t>(q)];
        if (c == '1') {
            s.index |= std::uint64_t{1} << q;
        } else if (c != '0') {
            throw std::invalid_argument(fmt::format("invalid character '{}' in bitstring", c));
        }
    }
    return s;
}

ProductState ProductState::make(StateKind kind, int n_qubits, std::string_view bitstring)
{
    if (kind == StateKind::kCustom) {
        auto s = from_bitstring(bitstring);
        if (n_qubits != s.n_qubits) {
            throw std::invalid_argument(fmt::format(
                "custom bitstring has {} sites but {} qubits were requested", s.n_qubits, n_qubits));
        }
        return s;
    }
    if (n_qubits < 2) {
        throw std::invalid_argument("product-state preparation needs at least 2 qubits");
    }
    if ((kind == StateKind::kNeel || kind == StateKind::kDomainWall) && n_qubits % 2 != 0) {
        throw std::invalid_argument(fmt::format(
            "{} state needs an even number of sites, got {}", to_string(kind), n_qubits));
    }
    ProductState s;
    s.n_qubits = n_qubits;
    for (int q = 0; q < n_qubits; ++q) {
        const bool one = (kind == StateKind::kNeel && q % 2 == 1) ||
                         (kind == StateKind::kDomainWall && q >= n_qubits / 2);
        if (one) {
            s.index |= std::uint64_t{1} << q;
        }
    }
    return s;
}

std::string ProductState::bitstring() const
{
    std::string out(static_cast<std::size_t>(n_qubits), '0');
    for (int q = 0; q < n_qubits; ++q) {
        if (bit(q)) {
            out[static_cast<std::size_t>(q)] = '1';
        }
    }
    return out;
}

StateVector prepare_state(StateKind kind, int n_qubits, std::string_view bitstring)
{
    return ProductState::make(kind, n_qubits, bitstring).to_state();
}

StateKind parse_state_kind(std::string_view name)
{
    if (name == "neel") {
        return StateKind::kNeel;
    }
    if (name == "domain_wall") {
        return StateKind::kDomainWall;
    }
    if (name == "all_zero") {
        return StateKind::kAllZero;
    }
    if (name == "custom") {
        return StateKind::kCustom;
    }
    throw std::invalid_argument(fmt::format("unknown state kind '{}'", name));
}

std::string_view to_string(StateKind kind)
{
    switch (kind) {
    case StateKind::kNeel:
        return "neel";
    case StateKind::kDomainWall:
        return "domain_wall";
    case StateKind::kAllZero:
        return "all_zero";
    case StateKind::kCustom:
        return "custom";
    }
    return "unknown";
}

} // namespace spintransport::qcore
