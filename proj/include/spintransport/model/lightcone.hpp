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

#include <set>

#include "spintransport/qcore/circuit.hpp"

namespace spintransport::model {

struct PruneReport {
    int removed_forward = 0;
    int removed_backward = 0;
    /// Sites whose state may differ from a computational basis state by the
    /// end of the circuit.
    std::set<int> forward_cone;
    /// Sites that can influence a measured site, collected at circuit start.
    std::set<int> backward_cone;
};

/**
 * Removes Trotter gates that cannot affect any measurement.
 *
 * The circuit is assumed to start from |0...0>, as protocol circuits do.
 *
 * Forward pass: starting from |0...0>, sites untouched by entangling action
 * stay in a known basis state. A Trotter gate acting on such sites with a
 * basis-state image equal to its input is a pure phase and is dropped.
 * `source_sites` are treated as entangled from the start.
 *
 * Backward pass: a Trotter gate whose support misses the set of sites
 * reachable backwards from the measured sites (final measurements, every
 * mid-circuit measurement, and `measured_sites`) is dropped.
 *
 * Only instructions with Role::kTrotter are removed. Every Trotter gate must
 * carry a layer index and gates sharing a layer must act on disjoint sites;
 * otherwise std::invalid_argument is thrown.
 */
qcore::Circuit prune_lightcone(const qcore::Circuit &circuit, const std::set<int> &source_sites,
                               const std::set<int> &measured_sites, PruneReport *report = nullptr);

/// Throws unless the circuit satisfies the layering precondition above.
void check_layered(const qcore::Circuit &circuit);

} // namespace spintransport::model
