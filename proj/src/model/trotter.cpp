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

#include "spintransport/model/trotter.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "spintransport/qcore/simulator.hpp"

namespace spintransport::model {

namespace {

struct BondGate {
    int bond;
    int layer;
};

/// One step's gate sequence: layers forward, then the mirror image.
std::vector<BondGate> step_sequence(const SpinChainModel &model)
{
    const auto layers = bond_layers(model);
    std::vector<BondGate> seq;
    const int g = static_cast<int>(layers.size());
    for (int l = 0; l < g; ++l) {
        for (int r : layers[static_cast<std::size_t>(l)]) {
            seq.push_back({r, l});
        }
    }
    for (int l = g - 1; l >= 0; --l) {
        const auto &layer = layers[static_cast<std::size_t>(l)];
        for (auto it = layer.rbegin(); it != layer.rend(); ++it) {
            seq.push_back({*it, 2 * g - 1 - l});
        }
    }
    return seq;
}

} // namespace

void TrotterSpec::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument(fmt::format("dt must be positive, got {}", dt));
    }
    if (n_steps < 0) {
        throw std::invalid_argument(fmt::format("n_steps must be non-negative, got {}", n_steps));
    }
    if (order != 2) {
        throw std::invalid_argument("only the second-order product formula is supported");
    }
}

int steps_for_time(double t, double dt)
{
    if (!(dt > 0.0)) {
        throw std::invalid_argument("dt must be positive");
    }
    if (t < 0.0) {
        throw std::invalid_argument(fmt::format("time must be non-negative, got {}", t));
    }
    const double k = std::round(t / dt);
    if (std::abs(k * dt - t) > 1e-9 * std::max(1.0, std::abs(t))) {
        throw std::invalid_argument(
            fmt::format("time {} is not a whole number of steps of {}", t, dt));
    }
    return static_cast<int>(k);
}

std::vector<std::vector<int>> bond_layers(const SpinChainModel &model)
{
    model.validate();
    std::vector<std::vector<int>> layers(2);
    const int nb = model.n_bonds();
    const bool odd_ring = model.boundary == Boundary::kPeriodic && model.n_sites % 2 == 1;
    for (int r = 0; r < nb; ++r) {
        if (odd_ring && r == nb - 1) {
            layers.push_back({r});
        } else {
            layers[static_cast<std::size_t>(r % 2)].push_back(r);
        }
    }
    return layers;
}

qcore::Matrix4 bond_unitary(const SpinChainModel &model, double tau)
{
    const double a = model.coupling * tau / 4.0;
    return qcore::gates::xxz_exponential(a, a, a * model.anisotropy);
}

qcore::GateTag xxz_tag(double a, double b, double c) { return {"xxz", {a, b, c}}; }

int append_trotter(qcore::Circuit &circuit, const SpinChainModel &model, double dt, int n_steps,
                   int first_layer)
{
    TrotterSpec{dt, n_steps, 2}.validate();
    const double tau = dt / 2.0;
    const qcore::Matrix4 u = bond_unitary(model, tau);
    const double a = model.coupling * tau / 4.0;
    const auto seq = step_sequence(model);
    const int layers_per_step = 2 * static_cast<int>(bond_layers(model).size());
    for (int s = 0; s < n_steps; ++s) {
        for (const auto &g : seq) {
            const auto [q1, q2] = model.bond_sites(g.bond);
            circuit.add_unitary2(q1, q2, u, qcore::Role::kTrotter,
                                 xxz_tag(a, a, a * model.anisotropy),
                                 first_layer + s * layers_per_step + g.layer);
        }
    }
    return first_layer + n_steps * layers_per_step;
}

int append_trotter_adjoint(qcore::Circuit &circuit, const SpinChainModel &model, double dt,
                           int n_steps, int first_layer)
{
    TrotterSpec{dt, n_steps, 2}.validate();
    const double tau = dt / 2.0;
    const qcore::Matrix4 u = bond_unitary(model, tau).adjoint();
    const double a = -model.coupling * tau / 4.0;
    auto seq = step_sequence(model);
    const int layers_per_step = 2 * static_cast<int>(bond_layers(model).size());
    for (int s = 0; s < n_steps; ++s) {
        for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
            const auto [q1, q2] = model.bond_sites(it->bond);
            circuit.add_unitary2(q1, q2, u, qcore::Role::kTrotter,
                                 xxz_tag(a, a, a * model.anisotropy),
                                 first_layer + s * layers_per_step + (layers_per_step - 1 - it->layer));
        }
    }
    return first_layer + n_steps * layers_per_step;
}

qcore::Circuit trotter_circuit(const SpinChainModel &model, const TrotterSpec &spec)
{
    spec.validate();
    qcore::Circuit c(model.n_sites, 0, fmt::format("trotter dt={} steps={}", spec.dt, spec.n_steps));
    append_trotter(c, model, spec.dt, spec.n_steps);
    return c;
}

void apply_trotter(qcore::StateVector &state, const SpinChainModel &model, double dt, int n_steps)
{
    TrotterSpec{dt, n_steps, 2}.validate();
    const qcore::Matrix4 u = bond_unitary(model, dt / 2.0);
    const auto seq = step_sequence(model);
    for (int s = 0; s < n_steps; ++s) {
        for (const auto &g : seq) {
            const auto [q1, q2] = model.bond_sites(g.bond);
            qcore::apply_unitary2(state, q1, q2, u);
        }
    }
}

void apply_trotter_adjoint(qcore::StateVector &state, const SpinChainModel &model, double dt,
                           int n_steps)
{
    TrotterSpec{dt, n_steps, 2}.validate();
    const qcore::Matrix4 u = bond_unitary(model, dt / 2.0).adjoint();
    const auto seq = step_sequence(model);
    for (int s = 0; s < n_steps; ++s) {
        for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
            const auto [q1, q2] = model.bond_sites(it->bond);
            qcore::apply_unitary2(state, q1, q2, u);
        }
    }
}

} // namespace spintransport::model
