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
#include <string_view>
#include <vector>

#include "spintransport/model/pauli.hpp"
#include "spintransport/model/spin_chain.hpp"
#include "spintransport/model/trotter.hpp"
#include "spintransport/qcore/circuit.hpp"
#include "spintransport/qcore/state_vector.hpp"

namespace spintransport::protocol {

using qcore::Complex;

enum class Part { kReal, kImaginary };
std::string_view to_string(Part part);

/// One Z-string contribution to a measured observable: weight * prod Z_q.
struct ReadoutTerm {
    int target = 0;
    std::vector<int> qubits;
    double weight = 1.0;
};

struct PlanCircuit {
    std::string label;
    qcore::Circuit circuit;
    /// Classical bit of the mid-circuit measurement, or -1.
    int mcm_cbit = -1;
    /// Factor applied to this circuit's readout in the estimator.
    double coefficient = 1.0;
    /// Calibration family this circuit is renormalised with.
    std::string calibration_label;
    /// cbit_of_qubit[q] is the classical bit holding the final readout of q,
    /// or -1 when q is not measured.
    std::vector<int> cbit_of_qubit;
};

struct MeasurementPlan {
    std::string id;
    Part part = Part::kReal;
    int source_bond = 0;
    std::vector<int> targets;
    std::vector<PlanCircuit> circuits;
    std::vector<ReadoutTerm> readout;
    /// Converts the estimator's sigma-unit value to spin units.
    double normalization = 1.0 / 16.0;
    double t1 = 0.0;
    double t2 = 0.0;
    double dt = 0.0;
    qcore::ProductState initial;
    /// Targets dropped because they lie outside the forward light cone; their
    /// correlator is exactly zero.
    std::vector<int> pruned_targets;

    [[nodiscard]] const PlanCircuit &circuit(std::string_view label) const;
};

struct PlanOptions {
    bool lightcone = false;
    /// Real part from the MCM on j+1 only (coefficient 2); imaginary part
    /// from the XY gates only (coefficients +1 and -1). Valid for Néel states.
    bool neel_symmetry = false;
};

/// Greedy split of bonds into groups with pairwise disjoint sites, in
/// ascending bond order. On a chain this is the even/odd split.
std::vector<std::vector<int>> partition_targets(const model::SpinChainModel &model,
                                                const std::vector<int> &targets);

/// Re <J_i(t) J_j>, t = dt * n_steps. One plan per disjoint target group.
std::vector<MeasurementPlan> plan_real(const model::SpinChainModel &model,
                                       const model::TrotterSpec &trotter,
                                       const qcore::ProductState &initial, int j,
                                       const std::vector<int> &targets, PlanOptions options = {});

/// Im <J_i(t) J_j>.
std::vector<MeasurementPlan> plan_imag(const model::SpinChainModel &model,
                                       const model::TrotterSpec &trotter,
                                       const qcore::ProductState &initial, int j,
                                       const std::vector<int> &targets, PlanOptions options = {});

/// <J_i(t1) J_j(t2)> for t1 >= t2 >= 0, both whole multiples of dt.
std::vector<MeasurementPlan> plan_two_time(const model::SpinChainModel &model, double dt,
                                           const qcore::ProductState &initial, int j,
                                           const std::vector<int> &targets, double t1, double t2,
                                           Part part, PlanOptions options = {});

/// Source bond 0, all bonds as targets, split by parity: real and imaginary
/// plans for one time point.
std::vector<MeasurementPlan> batch_translation(const model::SpinChainModel &model,
                                               const model::TrotterSpec &trotter,
                                               const qcore::ProductState &initial,
                                               PlanOptions options = {});

/// An operator written as U^dagger z_form U with z_form a real combination of
/// Z strings, each squaring to the identity.
struct GeneralTarget {
    qcore::Circuit basis_change;
    model::Observable z_form;
    model::Observable original;

    /// Checks the z_form terms and, for supports of at most three sites, the
    /// identity U^dagger z_form U = original to 1e-10.
    void validate() const;
};

GeneralTarget current_target(const model::SpinChainModel &model, int bond);
/// Single-site Pauli: identity, H or S H basis change for Z, X or Y.
GeneralTarget pauli_target(int n_qubits, int site, qcore::Pauli pauli);
GeneralTarget identity_target(int n_qubits);

/// <W(t1) G(t2)> for a measured W and a weight-one source G. The real part
/// needs every G term to have weight at most one; the imaginary part allows
/// weight two.
MeasurementPlan plan_general_correlation(const model::SpinChainModel &model, double dt,
                                         const qcore::ProductState &initial,
                                         const GeneralTarget &w, const GeneralTarget &g, double t1,
                                         double t2, Part part, PlanOptions options = {});

} // namespace spintransport::protocol
