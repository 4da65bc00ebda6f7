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
#include <memory>
#include <random>
#include <vector>

#include "spintransport/qcore/circuit.hpp"
#include "spintransport/qcore/state_vector.hpp"

namespace spintransport::qcore {

void apply_unitary1(StateVector &state, int q, const Matrix2 &u);
void apply_unitary2(StateVector &state, int q1, int q2, const Matrix4 &u);

/// Applies a unitary instruction in place. Measurements are rejected, as are
/// matrices whose unitarity defect exceeds kUnitarityTolerance.
void apply_instruction(StateVector &state, const Instruction &instruction);

/// Applies every unitary of the circuit and ignores measurements. Throws if
/// the circuit contains a mid-circuit measurement.
void apply_unitaries(StateVector &state, const Circuit &circuit);

/// Probability below which a measurement branch is reported as degenerate.
inline constexpr double kDegenerateProbability = 1e-24;

struct BranchOutcome {
    /// Bit c holds the outcome written to classical bit c by a MidMeasureZ.
    std::uint64_t mcm_bits = 0;
    double probability = 0.0;
    /// Normalized state after the last unitary; final measurements are not
    /// applied, so their statistics can be read from this state.
    StateVector final_state{1};
    bool degenerate = false;
};

/// All 2^{#MCM} branches, ordered by mcm_bits.
std::vector<BranchOutcome> run_exact_branches(const Circuit &circuit, const StateVector &initial);

struct ShotRecord {
    std::uint64_t mcm_bits = 0;
    /// Bit c holds the outcome written to classical bit c by a FinalMeasureZ.
    std::uint64_t final_bits = 0;

    friend bool operator==(const ShotRecord &, const ShotRecord &) = default;
};

/// Shot sampler over a circuit. Branch states are built lazily and reused
/// across calls, so repeated sampling of the same circuit is cheap.
class ShotSampler {
  public:
    ShotSampler(Circuit circuit, const StateVector &initial);
    ~ShotSampler();
    ShotSampler(ShotSampler &&) noexcept;
    ShotSampler &operator=(ShotSampler &&) noexcept;

    /// Draws one shot. Consumes exactly one engine output per mid-circuit
    /// measurement plus one for the final register.
    ShotRecord sample(std::mt19937_64 &rng);

    [[nodiscard]] const Circuit &circuit() const noexcept { return circuit_; }

  private:
    struct Node;
    std::unique_ptr<Node> make_node(const StateVector &state, std::size_t start);

    Circuit circuit_;
    std::unique_ptr<Node> root_;
    std::vector<FinalMeasureZ> finals_;
};

/// Maps 64 random bits onto [0, 1) with 53-bit resolution.
inline double uniform_from_bits(std::uint64_t x) noexcept
{
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// `n_shots` i.i.d. shots from a std::mt19937_64 seeded with `seed`.
std::vector<ShotRecord> sample_shots(const Circuit &circuit, const StateVector &initial,
                                     std::int64_t n_shots, std::uint64_t seed);

/// Sum over outcomes of probability times (-1)^{parity of bits in `mask`},
/// i.e. < prod_{q in mask} Z_q >.
double expect_z_string(const StateVector &state, std::uint64_t mask);

} // namespace spintransport::qcore
