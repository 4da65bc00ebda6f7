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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spintransport/qcore/gates.hpp"
#include "spintransport/qcore/state_vector.hpp"

namespace spintransport::model {

using qcore::Complex;
using qcore::Pauli;

/// coefficient * prod_site letter(site). An empty letter map is the identity.
struct PauliTerm {
    Complex coefficient{1.0, 0.0};
    std::map<int, Pauli> letters;

    static PauliTerm from_string(Complex coefficient, const std::map<int, char> &letters);

    /// Bit masks of the sites carrying X or Y (flip) and Y or Z (phase).
    [[nodiscard]] std::uint64_t flip_mask() const noexcept;
    [[nodiscard]] std::uint64_t phase_mask() const noexcept;
    [[nodiscard]] int count_y() const noexcept;
    [[nodiscard]] int max_site() const noexcept;
    [[nodiscard]] bool is_diagonal() const noexcept { return flip_mask() == 0; }
    [[nodiscard]] std::string to_string() const;
};

/// Weighted Pauli sum.
class Observable {
  public:
    Observable() = default;
    explicit Observable(std::vector<PauliTerm> terms, bool hermitian = false);

    [[nodiscard]] const std::vector<PauliTerm> &terms() const noexcept { return terms_; }
    [[nodiscard]] bool hermitian() const noexcept { return hermitian_; }

    /// Adds a term. The Hermitian flag is revalidated when set.
    void add(PauliTerm term);

    /// Marks the observable Hermitian; throws if the formal check fails.
    void mark_hermitian();

    /// Pauli strings are Hermitian, so O equals O^dagger exactly when every
    /// combined coefficient is real.
    [[nodiscard]] bool is_formally_hermitian(double tol = 1e-12) const;

    /// Merges equal Pauli strings and drops zero coefficients.
    [[nodiscard]] Observable simplified(double tol = 0.0) const;

    [[nodiscard]] int max_site() const noexcept;

    Observable &operator*=(Complex s);
    friend Observable operator+(const Observable &a, const Observable &b);
    friend Observable operator*(const Observable &a, const Observable &b);

  private:
    std::vector<PauliTerm> terms_;
    bool hermitian_ = false;
};

/// Product of two Pauli strings, coefficients included.
PauliTerm multiply(const PauliTerm &a, const PauliTerm &b);

/// O |psi>.
qcore::StateVector apply_observable(const Observable &observable, const qcore::StateVector &state);

/// <psi| O |psi>.
Complex expect_observable(const qcore::StateVector &state, const Observable &observable);

/// Dense 2^n x 2^n matrix in the library's bit convention. Small n only.
Eigen::MatrixXcd observable_matrix(const Observable &observable, int n_qubits);

} // namespace spintransport::model
