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
#include "spintransport/protocol/plan.hpp"
#include "spintransport/qcore/state_vector.hpp"

namespace spintransport::protocol {

/// <J_i(k dt) J_j> for k = 0..n_steps and every bond i, in spin units.
struct BranchSeries {
    std::vector<double> times;
    std::vector<int> targets;
    /// values[k][t] pairs times[k] with targets[t].
    std::vector<std::vector<Complex>> values;
};

/**
 * Exact-branch evaluation of the one-time plans on a whole time grid.
 *
 * The branch states of every plan circuit are identical up to the start of
 * the forward evolution, so they are built once and stepped forward; the
 * readout at each grid point applies the target basis change to a copy.
 * Gives the same numbers as assembling plan_real/plan_imag per time point.
 */
BranchSeries exact_branch_series(const model::SpinChainModel &model, double dt,
                                 const qcore::ProductState &initial, int j, int n_steps,
                                 bool real = true, bool imag = true, PlanOptions options = {});

} // namespace spintransport::protocol
