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

#include "spintransport/qcore/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace spintransport::qcore {

namespace {

inline std::size_t insert_zero(std::size_t x, int bit) noexcept
{
    const std::size_t low = x & ((std::size_t{1} << bit) - 1);
    return ((x >> bit) << (bit + 1)) | low;
}

enum class Sparsity { kDiagonal, kParityBlocks, kGeneral };

Sparsity classify(const Matrix4 &u)
{
    bool diagonal = true;
    bool parity = true;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            if (r == c || u(r, c) == Complex{0.0, 0.0}) {
                continue;
            }
            diagonal = false;
            // Parity-preserving entries connect {0, 3} or {1, 2}.
            const bool same_parity = ((r == 0 || r == 3) && (c == 0 || c == 3)) ||
                                     ((r == 1 || r == 2) && (c == 1 || c == 2));
            if (!same_parity) {
                parity = false;
            }
        }
    }
    if (diagonal) {
        return Sparsity::kDiagonal;
    }
    return parity ? Sparsity::kParityBlocks : Sparsity::kGeneral;
}

void check_qubit(const StateVector &state, int q)
{
    if (q < 0 || q >= state.n_qubits()) {
        throw std::out_of_range(
            fmt::format("qubit {} out of range for {} qubits", q, state.n_qubits()));
    }
}

void apply_unitary1_unchecked(StateVector &state, int q, const Matrix2 &u)
{
    auto amp = state.amplitudes();
    const std::size_t mask = std::size_t{1} << q;
    const std::size_t half = amp.size() / 2;
    const Complex u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    for (std::size_t k = 0; k < half; ++k) {
        const std::size_t i0 = insert_zero(k, q);
        const std::size_t i1 = i0 | mask;
        const Complex a0 = amp[i0];
        const Complex a1 = amp[i1];
        amp[i0] = u00 * a0 + u01 * a1;
        amp[i1] = u10 * a0 + u11 * a1;
    }
}

void apply_unitary2_unchecked(StateVector &state, int q1, int q2, const Matrix4 &u)
{
    auto amp = state.amplitudes();
    const std::size_t m1 = std::size_t{1} << q1;
    const std::size_t m2 = std::size_t{1} << q2;
    const int lo = std::min(q1, q2);
    const int hi = std::max(q1, q2);
    const std::size_t quarter = amp.size() / 4;
    Complex m[4][4];
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            m[r][c] = u(r, c);
        }
    }
    switch (classify(u)) {
    case Sparsity::kDiagonal:
        for (std::size_t k = 0; k < quarter; ++k) {
            const std::size_t i0 = insert_zero(insert_zero(k, lo), hi);
            amp[i0] *= m[0][0];
            amp[i0 | m1] *= m[1][1];
            amp[i0 | m2] *= m[2][2];
            amp[i0 | m1 | m2] *= m[3][3];
        }
        break;
    case Sparsity::kParityBlocks:
        for (std::size_t k = 0; k < quarter; ++k) {
            const std::size_t i0 = insert_zero(insert_zero(k, lo), hi);
            const std::size_t i1 = i0 | m1;
            const std::size_t i2 = i0 | m2;
            const std::size_t i3 = i1 | m2;
            const Complex a0 = amp[i0], a1 = amp[i1], a2 = amp[i2], a3 = amp[i3];
            amp[i0] = m[0][0] * a0 + m[0][3] * a3;
            amp[i3] = m[3][0] * a0 + m[3][3] * a3;
            amp[i1] = m[1][1] * a1 + m[1][2] * a2;
            amp[i2] = m[2][1] * a1 + m[2][2] * a2;
        }
        break;
    case Sparsity::kGeneral:
        for (std::size_t k = 0; k < quarter; ++k) {
            const std::size_t i0 = insert_zero(insert_zero(k, lo), hi);
            const std::size_t idx[4] = {i0, i0 | m1, i0 | m2, i0 | m1 | m2};
            const Complex a[4] = {amp[idx[0]], amp[idx[1]], amp[idx[2]], amp[idx[3]]};
            for (int r = 0; r < 4; ++r) {
                amp[idx[r]] = m[r][0] * a[0] + m[r][1] * a[1] + m[r][2] * a[2] + m[r][3] * a[3];
            }
        }
        break;
    }
}

void apply_unitary_op(StateVector &state, const Operation &op)
{
    if (const auto *g1 = std::get_if<Unitary1>(&op)) {
        apply_unitary1_unchecked(state, g1->q, g1->u);
    } else if (const auto *g2 = std::get_if<Unitary2>(&op)) {
        apply_unitary2_unchecked(state, g2->q1, g2->q2, g2->u);
    }
}

/// Probability of reading 1 on qubit q.
double probability_one(const StateVector &state, int q)
{
    const auto amp = state.amplitudes();
    const std::size_t mask = std::size_t{1} << q;
    double p = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        if (i & mask) {
            p += std::norm(amp[i]);
        }
    }
    return p;
}

/// Projects qubit q onto `bit` and renormalizes. A vanishing branch is
/// replaced by a basis state carrying the projected bit.
void collapse(StateVector &state, int q, int bit, double probability)
{
    auto amp = state.amplitudes();
    const std::size_t mask = std::size_t{1} << q;
    if (probability < kDegenerateProbability) {
        std::fill(amp.begin(), amp.end(), Complex{0.0, 0.0});
        amp[bit ? mask : 0] = 1.0;
        return;
    }
    const double inv = 1.0 / std::sqrt(probability);
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const bool one = (i & mask) != 0;
        if (one == (bit == 1)) {
            amp[i] *= inv;
        } else {
            amp[i] = 0.0;
        }
    }
}

void check_initial(const Circuit &circuit, const StateVector &initial)
{
    if (initial.n_qubits() != circuit.n_qubits()) {
        throw std::invalid_argument(fmt::format("initial state has {} qubits, circuit has {}",
                                                initial.n_qubits(), circuit.n_qubits()));
    }
    circuit.validate();
}

} // namespace

void apply_unitary1(StateVector &state, int q, const Matrix2 &u)
{
    check_qubit(state, q);
    if (gates::unitarity_defect(u) > kUnitarityTolerance) {
        throw std::invalid_argument("one-qubit matrix is not unitary");
    }
    apply_unitary1_unchecked(state, q, u);
}

void apply_unitary2(StateVector &state, int q1, int q2, const Matrix4 &u)
{
    check_qubit(state, q1);
    check_qubit(state, q2);
    if (q1 == q2) {
        throw std::invalid_argument("two-qubit gate on a repeated qubit");
    }
    if (gates::unitarity_defect(u) > kUnitarityTolerance) {
        throw std::invalid_argument("two-qubit matrix is not unitary");
    }
    apply_unitary2_unchecked(state, q1, q2, u);
}

void apply_instruction(StateVector &state, const Instruction &instruction)
{
    if (const auto *g1 = std::get_if<Unitary1>(&instruction.op)) {
        apply_unitary1(state, g1->q, g1->u);
    } else if (const auto *g2 = std::get_if<Unitary2>(&instruction.op)) {
        apply_unitary2(state, g2->q1, g2->q2, g2->u);
    } else {
        throw std::invalid_argument("apply_instruction expects a unitary instruction");
    }
}

void apply_unitaries(StateVector &state, const Circuit &circuit)
{
    if (state.n_qubits() != circuit.n_qubits()) {
        throw std::invalid_argument("state and circuit widths differ");
    }
    for (const auto &ins : circuit.instructions()) {
        if (std::holds_alternative<MidMeasureZ>(ins.op)) {
            throw std::invalid_argument("apply_unitaries cannot handle mid-circuit measurements");
        }
        apply_unitary_op(state, ins.op);
    }
}

std::vector<BranchOutcome> run_exact_branches(const Circuit &circuit, const StateVector &initial)
{
    check_initial(circuit, initial);
    std::vector<BranchOutcome> branches(1);
    branches[0].probability = 1.0;
    branches[0].final_state = initial;
    for (const auto &ins : circuit.instructions()) {
        if (const auto *m = std::get_if<MidMeasureZ>(&ins.op)) {
            std::vector<BranchOutcome> next;
            next.reserve(branches.size() * 2);
            for (auto &b : branches) {
                const double p1 = std::clamp(probability_one(b.final_state, m->q), 0.0, 1.0);
                const double p0 = std::clamp(1.0 - p1, 0.0, 1.0);
                BranchOutcome one = b;
                collapse(b.final_state, m->q, 0, p0);
                b.probability *= p0;
                b.degenerate = b.degenerate || p0 < kDegenerateProbability;
                collapse(one.final_state, m->q, 1, p1);
                one.probability *= p1;
                one.degenerate = one.degenerate || p1 < kDegenerateProbability;
                one.mcm_bits |= std::uint64_t{1} << m->cbit;
                next.push_back(std::move(b));
                next.push_back(std::move(one));
            }
            branches = std::move(next);
        } else if (ins.is_unitary()) {
            for (auto &b : branches) {
                apply_unitary_op(b.final_state, ins.op);
            }
        }
    }
    for (auto &b : branches) {
        if (b.degenerate) {
            b.probability = 0.0;
        }
    }
    std::stable_sort(branches.begin(), branches.end(),
                     [](const BranchOutcome &a, const BranchOutcome &b) { return a.mcm_bits < b.mcm_bits; });
    return branches;
}

struct ShotSampler::Node {
    /// State right before instruction `position` (an MCM) or after the last
    /// instruction for a leaf.
    StateVector state{1};
    std::size_t position = 0;
    bool leaf = false;
    int mcm_qubit = -1;
    int mcm_cbit = -1;
    double p_one = 0.0;
    std::unique_ptr<Node> children[2];
    /// Leaf only: cumulative outcome probabilities over the full basis.
    std::vector<double> cumulative;
};

ShotSampler::ShotSampler(Circuit circuit, const StateVector &initial) : circuit_(std::move(circuit))
{
    check_initial(circuit_, initial);
    finals_ = circuit_.final_measurements();
    root_ = make_node(initial, 0);
}

ShotSampler::~ShotSampler() = default;
ShotSampler::ShotSampler(ShotSampler &&) noexcept = default;
ShotSampler &ShotSampler::operator=(ShotSampler &&) noexcept = default;

std::unique_ptr<ShotSampler::Node> ShotSampler::make_node(const StateVector &state,
                                                          std::size_t start)
{
    auto node = std::make_unique<Node>();
    node->state = state;
    const auto &ins = circuit_.instructions();
    std::size_t k = start;
    for (; k < ins.size(); ++k) {
        if (const auto *m = std::get_if<MidMeasureZ>(&ins[k].op)) {
            node->mcm_qubit = m->q;
            node->mcm_cbit = m->cbit;
            node->p_one = std::clamp(probability_one(node->state, m->q), 0.0, 1.0);
            break;
        }
        apply_unitary_op(node->state, ins[k].op);
    }
    node->position = k;
    node->leaf = k == ins.size();
    if (node->leaf) {
        const auto amp = node->state.amplitudes();
        node->cumulative.resize(amp.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < amp.size(); ++i) {
            acc += std::norm(amp[i]);
            node->cumulative[i] = acc;
        }
    }
    return node;
}

ShotRecord ShotSampler::sample(std::mt19937_64 &rng)
{
    ShotRecord rec;
    Node *node = root_.get();
    while (!node->leaf) {
        const double u = uniform_from_bits(rng());
        const int bit = u < node->p_one ? 1 : 0;
        if (bit) {
            rec.mcm_bits |= std::uint64_t{1} << node->mcm_cbit;
        }
        auto &next = node->children[bit];
        if (!next) {
            StateVector collapsed = node->state;
            collapse(collapsed, node->mcm_qubit, bit, bit ? node->p_one : 1.0 - node->p_one);
            next = make_node(collapsed, node->position + 1);
        }
        node = next.get();
    }
    const double u = uniform_from_bits(rng()) * node->cumulative.back();
    auto it = std::upper_bound(node->cumulative.begin(), node->cumulative.end(), u);
    if (it == node->cumulative.end()) {
        --it;
    }
    const auto outcome = static_cast<std::uint64_t>(it - node->cumulative.begin());
    for (const auto &f : finals_) {
        if ((outcome >> f.q) & 1U) {
            rec.final_bits |= std::uint64_t{1} << f.cbit;
        }
    }
    return rec;
}

std::vector<ShotRecord> sample_shots(const Circuit &circuit, const StateVector &initial,
                                     std::int64_t n_shots, std::uint64_t seed)
{
    if (n_shots < 1) {
        throw std::invalid_argument("n_shots must be at least 1");
    }
    ShotSampler sampler(circuit, initial);
    std::mt19937_64 rng(seed);
    std::vector<ShotRecord> out;
    out.reserve(static_cast<std::size_t>(n_shots));
    for (std::int64_t s = 0; s < n_shots; ++s) {
        out.push_back(sampler.sample(rng));
    }
    return out;
}

double expect_z_string(const StateVector &state, std::uint64_t mask)
{
    const auto amp = state.amplitudes();
    double acc = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const double p = std::norm(amp[i]);
        acc += (std::popcount(static_cast<std::uint64_t>(i) & mask) & 1) ? -p : p;
    }
    return acc;
}

} // namespace spintransport::qcore
