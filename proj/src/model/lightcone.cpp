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

#include "spintransport/model/lightcone.hpp"

#include <map>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace spintransport::model {

namespace {

constexpr double kZero = 1e-12;

/// Row of the single nonzero entry in column `col`, or -1.
template <class M> int basis_image(const M &u, int col)
{
    int row = -1;
    for (int r = 0; r < u.rows(); ++r) {
        if (std::abs(u(r, col)) > kZero) {
            if (row >= 0) {
                return -1;
            }
            row = r;
        }
    }
    return row;
}

} // namespace

void check_layered(const qcore::Circuit &circuit)
{
    std::map<int, std::vector<bool>> occupied;
    for (const auto &ins : circuit.instructions()) {
        if (ins.role != qcore::Role::kTrotter) {
            continue;
        }
        if (ins.layer < 0) {
            throw std::invalid_argument("Trotter instruction without a layer index");
        }
        auto &used = occupied[ins.layer];
        used.resize(static_cast<std::size_t>(circuit.n_qubits()), false);
        for (int q : ins.qubits()) {
            if (used[static_cast<std::size_t>(q)]) {
                throw std::invalid_argument(
                    fmt::format("layer {} has overlapping gates on qubit {}", ins.layer, q));
            }
            used[static_cast<std::size_t>(q)] = true;
        }
    }
}

qcore::Circuit prune_lightcone(const qcore::Circuit &circuit, const std::set<int> &source_sites,
                               const std::set<int> &measured_sites, PruneReport *report)
{
    check_layered(circuit);
    const int n = circuit.n_qubits();
    for (int q : source_sites) {
        if (q < 0 || q >= n) {
            throw std::out_of_range(fmt::format("source site {} out of range", q));
        }
    }
    for (int q : measured_sites) {
        if (q < 0 || q >= n) {
            throw std::out_of_range(fmt::format("measured site {} out of range", q));
        }
    }
    const auto &ins = circuit.instructions();
    std::vector<bool> keep(ins.size(), true);
    PruneReport rep;

    std::vector<bool> entangled(static_cast<std::size_t>(n), false);
    std::vector<int> bit(static_cast<std::size_t>(n), 0);
    for (int q : source_sites) {
        entangled[static_cast<std::size_t>(q)] = true;
    }
    for (std::size_t k = 0; k < ins.size(); ++k) {
        if (const auto *g = std::get_if<qcore::Unitary1>(&ins[k].op)) {
            const auto q = static_cast<std::size_t>(g->q);
            if (entangled[q]) {
                continue;
            }
            const int row = basis_image(g->u, bit[q]);
            if (row < 0) {
                entangled[q] = true;
            } else if (row == bit[q] && ins[k].role == qcore::Role::kTrotter) {
                keep[k] = false;
                ++rep.removed_forward;
            } else {
                bit[q] = row;
            }
        } else if (const auto *g2 = std::get_if<qcore::Unitary2>(&ins[k].op)) {
            const auto q1 = static_cast<std::size_t>(g2->q1);
            const auto q2 = static_cast<std::size_t>(g2->q2);
            if (entangled[q1] || entangled[q2]) {
                entangled[q1] = entangled[q2] = true;
                continue;
            }
            const int col = bit[q1] + 2 * bit[q2];
            const int row = basis_image(g2->u, col);
            if (row < 0) {
                entangled[q1] = entangled[q2] = true;
            } else if (row == col && ins[k].role == qcore::Role::kTrotter) {
                keep[k] = false;
                ++rep.removed_forward;
            } else {
                bit[q1] = row & 1;
                bit[q2] = (row >> 1) & 1;
            }
        }
    }
    for (int q = 0; q < n; ++q) {
        if (entangled[static_cast<std::size_t>(q)]) {
            rep.forward_cone.insert(q);
        }
    }

    std::vector<bool> relevant(static_cast<std::size_t>(n), false);
    for (int q : measured_sites) {
        relevant[static_cast<std::size_t>(q)] = true;
    }
    for (std::size_t k = ins.size(); k-- > 0;) {
        if (!keep[k]) {
            continue;
        }
        const auto &in = ins[k];
        if (!in.is_unitary()) {
            for (int q : in.qubits()) {
                relevant[static_cast<std::size_t>(q)] = true;
            }
            continue;
        }
        bool touches = false;
        for (int q : in.qubits()) {
            touches = touches || relevant[static_cast<std::size_t>(q)];
        }
        if (!touches) {
            if (in.role == qcore::Role::kTrotter) {
                keep[k] = false;
                ++rep.removed_backward;
            }
            continue;
        }
        for (int q : in.qubits()) {
            relevant[static_cast<std::size_t>(q)] = true;
        }
    }
    for (int q = 0; q < n; ++q) {
        if (relevant[static_cast<std::size_t>(q)]) {
            rep.backward_cone.insert(q);
        }
    }

    qcore::Circuit out(n, circuit.n_cbits(), circuit.label());
    for (std::size_t k = 0; k < ins.size(); ++k) {
        if (keep[k]) {
            out.append(ins[k]);
        }
    }
    if (report) {
        *report = std::move(rep);
    }
    return out;
}

} // namespace spintransport::model
