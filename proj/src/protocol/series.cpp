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

#include "spintransport/protocol/series.hpp"

#include <stdexcept>

#include "spintransport/model/trotter.hpp"
#include "spintransport/qcore/simulator.hpp"

namespace spintransport::protocol {

namespace {

struct Track {
    double weight;
    qcore::StateVector state;
    bool imaginary;
};

qcore::Circuit strip_readout(const qcore::Circuit &c)
{
    qcore::Circuit out(c.n_qubits(), c.n_cbits(), c.label());
    for (const auto &ins : c.instructions()) {
        if (ins.role == qcore::Role::kBasis || std::holds_alternative<qcore::FinalMeasureZ>(ins.op)) {
            continue;
        }
        out.append(ins);
    }
    return out;
}

} // namespace

BranchSeries exact_branch_series(const model::SpinChainModel &model, double dt,
                                 const qcore::ProductState &initial, int j, int n_steps, bool real,
                                 bool imag, PlanOptions options)
{
    if (n_steps < 0) {
        throw std::invalid_argument("n_steps must be non-negative");
    }
    options.lightcone = false;
    std::vector<int> targets;
    for (int r = 0; r < model.n_bonds(); ++r) {
        targets.push_back(r);
    }
    const model::TrotterSpec zero{dt, 0, 2};
    std::vector<std::vector<MeasurementPlan>> parts;
    if (real) {
        parts.push_back(plan_real(model, zero, initial, j, targets, options));
    }
    if (imag) {
        parts.push_back(plan_imag(model, zero, initial, j, targets, options));
    }

    // Weighted branch states; the sign of the MCM outcome is folded into the weight.
    std::vector<Track> tracks;
    for (const auto &plans : parts) {
        const auto &first = plans.front();
        for (const auto &pc : first.circuits) {
            const auto body = strip_readout(pc.circuit);
            for (auto &b : qcore::run_exact_branches(body, qcore::StateVector(model.n_sites))) {
                if (b.probability <= 0.0) {
                    continue;
                }
                const double w = first.normalization * pc.coefficient *
                                 (pc.mcm_cbit >= 0 && ((b.mcm_bits >> pc.mcm_cbit) & 1U) ? -1.0 : 1.0) *
                                 b.probability;
                tracks.push_back({w, std::move(b.final_state), first.part == Part::kImaginary});
            }
        }
    }
    // Readout basis change per target group, taken from the group's first circuit.
    struct Group {
        std::vector<qcore::Instruction> basis;
        std::vector<ReadoutTerm> readout;
    };
    std::vector<Group> groups;
    for (const auto &plan : parts.front()) {
        Group g;
        for (const auto &ins : plan.circuits.front().circuit.instructions()) {
            if (ins.role == qcore::Role::kBasis && ins.is_unitary()) {
                g.basis.push_back(ins);
            }
        }
        g.readout = plan.readout;
        groups.push_back(std::move(g));
    }

    BranchSeries out;
    out.targets = targets;
    for (int k = 0; k <= n_steps; ++k) {
        std::vector<Complex> row(targets.size(), Complex(0.0, 0.0));
        for (const auto &tr : tracks) {
            for (const auto &g : groups) {
                qcore::StateVector s = tr.state;
                for (const auto &ins : g.basis) {
                    qcore::apply_instruction(s, ins);
                }
                for (const auto &term : g.readout) {
                    std::uint64_t mask = 0;
                    for (int q : term.qubits) {
                        mask ^= std::uint64_t{1} << q;
                    }
                    const double v = tr.weight * term.weight * qcore::expect_z_string(s, mask);
                    row[static_cast<std::size_t>(term.target)] += tr.imaginary ? Complex(0.0, v) : Complex(v, 0.0);
                }
            }
        }
        out.times.push_back(k * dt);
        out.values.push_back(std::move(row));
        if (k < n_steps) {
            for (auto &tr : tracks) {
                model::apply_trotter(tr.state, model, dt, 1);
            }
        }
    }
    return out;
}

} // namespace spintransport::protocol
