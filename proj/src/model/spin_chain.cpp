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

#include "spintransport/model/spin_chain.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace spintransport::model {

Boundary parse_boundary(std::string_view name)
{
    if (name == "open") {
        return Boundary::kOpen;
    }
    if (name == "periodic") {
        return Boundary::kPeriodic;
    }
    throw std::invalid_argument(fmt::format("unknown boundary '{}'", name));
}

std::string_view to_string(Boundary boundary)
{
    return boundary == Boundary::kOpen ? "open" : "periodic";
}

void SpinChainModel::validate() const
{
    if (n_sites < 2) {
        throw std::invalid_argument(fmt::format("chain needs at least 2 sites, got {}", n_sites));
    }
    if (boundary == Boundary::kPeriodic && n_sites < 3) {
        throw std::invalid_argument("periodic chain needs at least 3 sites");
    }
    if (n_sites > qcore::kHardMaxQubits) {
        throw std::invalid_argument(fmt::format("chain of {} sites is beyond the simulator", n_sites));
    }
}

int SpinChainModel::n_bonds() const noexcept
{
    return boundary == Boundary::kPeriodic ? n_sites : n_sites - 1;
}

std::pair<int, int> SpinChainModel::bond_sites(int r) const
{
    if (!valid_bond(r)) {
        throw std::out_of_range(
            fmt::format("bond {} out of range for {} bonds", r, n_bonds()));
    }
    return {r, (r + 1) % n_sites};
}

Observable build_hamiltonian(const SpinChainModel &model)
{
    model.validate();
    Observable h;
    const double s = model.coupling / 4.0;
    for (int r = 0; r < model.n_bonds(); ++r) {
        const auto [a, b] = model.bond_sites(r);
        h.add(PauliTerm::from_string(s, {{a, 'X'}, {b, 'X'}}));
        h.add(PauliTerm::from_string(s, {{a, 'Y'}, {b, 'Y'}}));
        h.add(PauliTerm::from_string(s * model.anisotropy, {{a, 'Z'}, {b, 'Z'}}));
    }
    h.mark_hermitian();
    return h;
}

Observable local_current(const SpinChainModel &model, int r)
{
    model.validate();
    const auto [a, b] = model.bond_sites(r);
    const double s = model.coupling / 4.0;
    Observable j;
    j.add(PauliTerm::from_string(s, {{a, 'X'}, {b, 'Y'}}));
    j.add(PauliTerm::from_string(-s, {{a, 'Y'}, {b, 'X'}}));
    j.mark_hermitian();
    return j;
}

Observable spin_z(int site)
{
    Observable o;
    o.add(PauliTerm::from_string(0.5, {{site, 'Z'}}));
    o.mark_hermitian();
    return o;
}

Observable total_magnetization(const SpinChainModel &model)
{
    model.validate();
    Observable o;
    for (int q = 0; q < model.n_sites; ++q) {
        o.add(PauliTerm::from_string(0.5, {{q, 'Z'}}));
    }
    o.mark_hermitian();
    return o;
}

} // namespace spintransport::model
