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

#include <string_view>
#include <utility>

#include "spintransport/model/pauli.hpp"

namespace spintransport::model {

enum class Boundary { kOpen, kPeriodic };

Boundary parse_boundary(std::string_view name);
std::string_view to_string(Boundary boundary);

/// H = J sum_bonds (Sx Sx + Sy Sy + anisotropy Sz Sz), with S = sigma / 2.
struct SpinChainModel {
    int n_sites = 2;
    double coupling = 1.0;
    double anisotropy = 1.0;
    Boundary boundary = Boundary::kOpen;

    /// Throws std::invalid_argument on n < 2, or n < 3 with periodic boundary.
    void validate() const;

    /// n - 1 for open chains, n for periodic ones.
    [[nodiscard]] int n_bonds() const noexcept;

    /// Sites (r, r + 1 mod n) of bond r; throws on an invalid bond.
    [[nodiscard]] std::pair<int, int> bond_sites(int r) const;

    [[nodiscard]] bool valid_bond(int r) const noexcept { return r >= 0 && r < n_bonds(); }
};

Observable build_hamiltonian(const SpinChainModel &model);

/// J_r = J (Sx_r Sy_{r+1} - Sy_r Sx_{r+1}).
Observable local_current(const SpinChainModel &model, int r);

/// Sz_site = Z_site / 2.
Observable spin_z(int site);

/// Total Sz, a conserved quantity of every XXZ chain.
Observable total_magnetization(const SpinChainModel &model);

} // namespace spintransport::model
