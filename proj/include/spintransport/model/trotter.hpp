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

#include <vector>

#include "spintransport/model/spin_chain.hpp"
#include "spintransport/qcore/circuit.hpp"

namespace spintransport::model {

/// Second-order product formula with `n_steps` steps of size `dt`.
struct TrotterSpec {
    double dt = 0.25;
    int n_steps = 0;
    int order = 2;

    void validate() const;
    [[nodiscard]] double total_time() const noexcept { return dt * n_steps; }
};

/// Whole number of steps of size dt reaching time t; throws if t is not a
/// multiple of dt to within 1e-9 relative.
int steps_for_time(double t, double dt);

/// Bonds grouped into mutually commuting layers: even bonds, odd bonds, and
/// for periodic chains of odd length the wrap-around bond on its own.
std::vector<std::vector<int>> bond_layers(const SpinChainModel &model);

/// exp(-i tau h_r) for the two-site bond Hamiltonian of bond r.
qcore::Matrix4 bond_unitary(const SpinChainModel &model, double tau);

/// Appends `n_steps` second-order steps. Each step sweeps the bond layers
/// forward then backward with half-steps dt/2; every gate carries its layer
/// index, starting at `first_layer`. Returns the next unused layer index.
int append_trotter(qcore::Circuit &circuit, const SpinChainModel &model, double dt, int n_steps,
                   int first_layer = 0);

/// Appends the inverse of append_trotter(model, dt, n_steps).
int append_trotter_adjoint(qcore::Circuit &circuit, const SpinChainModel &model, double dt,
                           int n_steps, int first_layer = 0);

qcore::Circuit trotter_circuit(const SpinChainModel &model, const TrotterSpec &spec);

/// Applies `n_steps` steps to a state without building a circuit.
void apply_trotter(qcore::StateVector &state, const SpinChainModel &model, double dt, int n_steps);
void apply_trotter_adjoint(qcore::StateVector &state, const SpinChainModel &model, double dt,
                           int n_steps);

/// Tag used for bond blocks and T gates: exp(-i(a XX + b YY + c ZZ)).
qcore::GateTag xxz_tag(double a, double b, double c);

} // namespace spintransport::model
