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

#include "spintransport/protocol/hadamard.hpp"

#include <array>
#include <stdexcept>

#include <fmt/format.h>

#include "spintransport/qcore/gates.hpp"
#include "spintransport/qcore/simulator.hpp"

namespace spintransport::protocol {

namespace {

using qcore::Pauli;
using qcore::Role;
namespace gates = qcore::gates;

struct CurrentTerm {
    Pauli on_a;
    Pauli on_b;
    double sign;
};

// J_r = (J/4)(X_a Y_b - Y_a X_b).
constexpr std::array<CurrentTerm, 2> kCurrentTerms{{{Pauli::kX, Pauli::kY, 1.0},
                                                    {Pauli::kY, Pauli::kX, -1.0}}};

void append_controlled(qcore::Circuit &c, int ancilla, int a, int b, const CurrentTerm &t)
{
    c.add_unitary2(ancilla, a, gates::controlled(gates::pauli(t.on_a)), Role::kProtocol,
                   qcore::GateTag{fmt::format("c{}", qcore::to_char(t.on_a)), {}});
    c.add_unitary2(ancilla, b, gates::controlled(gates::pauli(t.on_b)), Role::kProtocol,
                   qcore::GateTag{fmt::format("c{}", qcore::to_char(t.on_b)), {}});
}

} // namespace

std::vector<HadamardCircuit> hadamard_circuits(const model::SpinChainModel &model,
                                               const model::TrotterSpec &trotter,
                                               const qcore::ProductState &initial, int i, int j)
{
    model.validate();
    trotter.validate();
    if (!model.valid_bond(i) || !model.valid_bond(j)) {
        throw std::out_of_range(fmt::format("bond pair ({}, {}) out of range", i, j));
    }
    if (initial.n_qubits != model.n_sites) {
        throw std::invalid_argument("initial state size does not match the model");
    }
    const int n = model.n_sites;
    const int anc = n;
    const auto [ia, ib] = model.bond_sites(i);
    const auto [ja, jb] = model.bond_sites(j);
    const double scale = model.coupling * model.coupling / 16.0;
    std::vector<HadamardCircuit> out;
    for (std::size_t k = 0; k < kCurrentTerms.size(); ++k) {
        for (std::size_t l = 0; l < kCurrentTerms.size(); ++l) {
            for (Part part : {Part::kReal, Part::kImaginary}) {
                const auto &pk = kCurrentTerms[k];
                const auto &ql = kCurrentTerms[l];
                const std::string label =
                    fmt::format("{}{}|{}{}:{}", qcore::to_char(pk.on_a), qcore::to_char(pk.on_b),
                                qcore::to_char(ql.on_a), qcore::to_char(ql.on_b), to_string(part));
                qcore::Circuit c(n + 1, 1, label);
                for (int q = 0; q < n; ++q) {
                    if (initial.bit(q)) {
                        c.add_unitary1(q, gates::pauli(Pauli::kX), Role::kPrep, qcore::GateTag{"x", {}});
                    }
                }
                c.add_unitary1(anc, gates::hadamard(), Role::kBasis, qcore::GateTag{"h", {}});
                append_controlled(c, anc, ja, jb, ql);
                model::append_trotter(c, model, trotter.dt, trotter.n_steps);
                append_controlled(c, anc, ia, ib, pk);
                if (part == Part::kImaginary) {
                    c.add_unitary1(anc, gates::s_dagger(), Role::kBasis, qcore::GateTag{"sdg", {}});
                }
                c.add_unitary1(anc, gates::hadamard(), Role::kBasis, qcore::GateTag{"h", {}});
                c.add_final_measure(anc, 0);
                out.push_back({label, std::move(c), part, scale * pk.sign * ql.sign});
            }
        }
    }
    return out;
}

Complex hadamard_baseline(const model::SpinChainModel &model, const model::TrotterSpec &trotter,
                          const qcore::ProductState &initial, int i, int j)
{
    Complex value{0.0, 0.0};
    for (const auto &hc : hadamard_circuits(model, trotter, initial, i, j)) {
        const auto branches = qcore::run_exact_branches(hc.circuit, qcore::StateVector(hc.circuit.n_qubits()));
        const double z = branches.at(0).final_state.expect_z(model.n_sites);
        value += hc.part == Part::kReal ? Complex(hc.coefficient * z, 0.0)
                                        : Complex(0.0, hc.coefficient * z);
    }
    return value;
}

Scheme parse_scheme(std::string_view text)
{
    if (text == "direct") {
        return Scheme::kDirect;
    }
    if (text == "hadamard") {
        return Scheme::kHadamard;
    }
    throw std::invalid_argument(fmt::format("unknown scheme '{}'", text));
}

CountMode parse_count_mode(std::string_view text)
{
    if (text == "full_matrix") {
        return CountMode::kFullMatrix;
    }
    if (text == "translation_reduced") {
        return CountMode::kTranslationReduced;
    }
    throw std::invalid_argument(fmt::format("unknown count mode '{}'", text));
}

CircuitCount count_circuits(Scheme scheme, const model::SpinChainModel &model, CountMode mode,
                            bool neel_symmetry)
{
    model.validate();
    const model::TrotterSpec zero{0.25, 0, 2};
    const qcore::ProductState initial{model.n_sites, 0};
    std::vector<int> sources;
    if (mode == CountMode::kTranslationReduced) {
        sources = {0};
    } else {
        for (int r = 0; r < model.n_bonds(); ++r) {
            sources.push_back(r);
        }
    }
    std::vector<int> targets;
    for (int r = 0; r < model.n_bonds(); ++r) {
        targets.push_back(r);
    }
    CircuitCount count;
    for (int j : sources) {
        if (scheme == Scheme::kDirect) {
            const PlanOptions opt{false, neel_symmetry};
            for (const auto &p : plan_real(model, zero, initial, j, targets, opt)) {
                count.real += static_cast<long>(p.circuits.size());
            }
            for (const auto &p : plan_imag(model, zero, initial, j, targets, opt)) {
                count.imag += static_cast<long>(p.circuits.size());
            }
            continue;
        }
        for (int i : targets) {
            for (const auto &hc : hadamard_circuits(model, zero, initial, i, j)) {
                (hc.part == Part::kReal ? count.real : count.imag) += 1;
            }
        }
    }
    return count;
}

} // namespace spintransport::protocol
