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
#include "spintransport/model/trotter.hpp"
#include "spintransport/qcore/state_vector.hpp"

namespace spintransport::oracle {

using qcore::Complex;
using qcore::StateVector;

inline constexpr int kDenseMaxSites = 12;
inline constexpr int kKrylovMaxSites = 20;

struct EvolutionMethod {
    enum class Kind { kDense, kKrylov };
    Kind kind = Kind::kDense;
    /// Krylov only: local error bound per accepted substep.
    double tolerance = 1e-12;

    static EvolutionMethod dense() { return {Kind::kDense, 1e-12}; }
    static EvolutionMethod krylov(double tolerance = 1e-12) { return {Kind::kKrylov, tolerance}; }
    void validate() const;
};

/// H |in>, specialised to the XXZ chain.
void apply_hamiltonian(const model::SpinChainModel &model, const StateVector &in, StateVector &out);

/// J_r |in>.
StateVector apply_current(const model::SpinChainModel &model, int r, const StateVector &in);

/// e^{-iHt} |psi>. Dense mode diagonalises each magnetisation sector once
/// per model and caches the result process-wide.
StateVector exact_evolve(const model::SpinChainModel &model, const StateVector &state, double t,
                         EvolutionMethod method = {});

/// <psi| e^{iHt1} J_i e^{-iHt1} e^{iHt2} J_j e^{-iHt2} |psi>.
Complex exact_acf(const model::SpinChainModel &model, const StateVector &state0, int i, int j,
                  double t1, double t2, EvolutionMethod method = {});

/// exact_acf with every e^{-iHt} replaced by the Trotter circuit of step dt.
Complex exact_trotter_acf(const model::SpinChainModel &model, double dt, const StateVector &state0,
                          int i, int j, double t1, double t2);

/// values[k][m] = <J_{targets[m]}(k dt) J_j(0)> under Trotter evolution for
/// k = 0..n_steps. Two vectors are stepped once each, so this is the cheap
/// route to long series on large chains.
std::vector<std::vector<Complex>> exact_trotter_acf_series(const model::SpinChainModel &model,
                                                           double dt, const StateVector &state0,
                                                           int j, const std::vector<int> &targets,
                                                           int n_steps);

/// |d<Sz_r>/dt + <J_r> - <J_{r-1}>| at time t, derivative by central
/// difference of exact evolution with step fd_step.
double continuity_residual(const model::SpinChainModel &model, const StateVector &state, int r,
                           double t, double fd_step, EvolutionMethod method = {});

/// Drops every cached sector decomposition.
void clear_propagator_cache();

} // namespace spintransport::oracle
