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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "spintransport/model/pauli.hpp"
#include "spintransport/qcore/circuit.hpp"
#include "spintransport/qcore/gates.hpp"
#include "spintransport/qcore/simulator.hpp"
#include "spintransport/qcore/state_vector.hpp"

namespace st = spintransport;
using st::qcore::Circuit;
using st::qcore::Complex;
using st::qcore::Matrix2;
using st::qcore::Matrix4;
using st::qcore::Pauli;
using st::qcore::StateVector;
namespace gates = st::qcore::gates;

namespace {

StateVector random_state(int n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<Complex> amp(std::size_t{1} << n);
    for (auto &a : amp) {
        a = {g(rng), g(rng)};
    }
    auto s = StateVector::from_amplitudes(n, amp);
    s.normalize();
    return s;
}

Matrix4 random_unitary4(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Eigen::Matrix4cd a;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            a(r, c) = {g(rng), g(rng)};
        }
    }
    Eigen::HouseholderQR<Eigen::Matrix4cd> qr(a);
    return qr.householderQ();
}

} // namespace

TEST(PrepareState, NeelDomainWallAllZero)
{
    const auto neel = st::qcore::ProductState::make(st::qcore::StateKind::kNeel, 4);
    EXPECT_EQ(neel.bitstring(), "0101");
    EXPECT_EQ(neel.index, 0b1010U);
    const auto dw = st::qcore::ProductState::make(st::qcore::StateKind::kDomainWall, 4);
    EXPECT_EQ(dw.bitstring(), "0011");
    const auto zero = st::qcore::prepare_state(st::qcore::StateKind::kAllZero, 3);
    EXPECT_EQ(zero[0], Complex(1.0, 0.0));
    EXPECT_DOUBLE_EQ(zero.norm(), 1.0);
    const auto s = st::qcore::prepare_state(st::qcore::StateKind::kNeel, 4);
    EXPECT_EQ(s[0b1010], Complex(1.0, 0.0));
}

TEST(PrepareState, RejectsOddNeelAndDomainWall)
{
    EXPECT_THROW(st::qcore::prepare_state(st::qcore::StateKind::kNeel, 5), std::invalid_argument);
    EXPECT_THROW(st::qcore::prepare_state(st::qcore::StateKind::kDomainWall, 3),
                 std::invalid_argument);
    EXPECT_THROW(st::qcore::prepare_state(st::qcore::StateKind::kAllZero, 1),
                 std::invalid_argument);
    EXPECT_NO_THROW(st::qcore::prepare_state(st::qcore::StateKind::kAllZero, 3));
}

TEST(PrepareState, CustomBitstring)
{
    const auto s = st::qcore::ProductState::make(st::qcore::StateKind::kCustom, 3, "101");
    EXPECT_EQ(s.index, 0b101U);
    EXPECT_THROW(st::qcore::ProductState::make(st::qcore::StateKind::kCustom, 4, "101"),
                 std::invalid_argument);
    EXPECT_THROW(st::qcore::ProductState::from_bitstring("10a"), std::invalid_argument);
}

TEST(QubitCap, ThrowsAboveCap)
{
    EXPECT_THROW(st::qcore::check_qubit_cap(25), std::length_error);
    EXPECT_NO_THROW(st::qcore::check_qubit_cap(24));
    EXPECT_NO_THROW(st::qcore::check_qubit_cap(30, 30));
}

TEST(ApplyInstruction, XFlipsZero)
{
    StateVector s(1);
    st::qcore::apply_unitary1(s, 0, gates::pauli(Pauli::kX));
    EXPECT_NEAR(std::abs(s[1] - Complex(1.0, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-15);
}

TEST(ApplyInstruction, TGateOnZeroOne)
{
    // |01> means site 0 in 0 and site 1 in 1, i.e. basis index 2.
    auto s = StateVector::basis(2, 0b10);
    st::qcore::apply_unitary2(s, 0, 1, gates::sqrt_iswap());
    const double r = 1.0 / std::numbers::sqrt2;
    EXPECT_NEAR(std::abs(s[0b10] - Complex(r, 0.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s[0b01] - Complex(0.0, -r)), 0.0, 1e-12);
}

TEST(ApplyInstruction, RejectsNonUnitary)
{
    StateVector s(2);
    Matrix2 bad;
    bad << 1, 0, 0, 1.01;
    EXPECT_THROW(st::qcore::apply_unitary1(s, 0, bad), std::invalid_argument);
    st::qcore::Instruction ins{st::qcore::Unitary2{0, 1, 1.5 * Matrix4::Identity()}};
    EXPECT_THROW(st::qcore::apply_instruction(s, ins), std::invalid_argument);
    st::qcore::Instruction meas{st::qcore::MidMeasureZ{0, 0}};
    EXPECT_THROW(st::qcore::apply_instruction(s, meas), std::invalid_argument);
}

TEST(ApplyInstruction, NormPreservedForRandomUnitaries)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto s = random_state(5, seed);
        const auto u = random_unitary4(seed + 100);
        st::qcore::apply_unitary2(s, static_cast<int>(seed % 5), static_cast<int>((seed + 2) % 5), u);
        st::qcore::apply_unitary1(s, static_cast<int>(seed % 5), gates::rx(0.3 * seed));
        EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    }
}

/// Dense reference: amplitude-by-amplitude sum for a gate on (q1, q2).
StateVector reference_apply(const StateVector &psi, int q1, int q2, const Matrix4 &u)
{
    StateVector out(psi.n_qubits());
    out[0] = 0.0;
    const std::uint64_t others = ~((std::uint64_t{1} << q1) | (std::uint64_t{1} << q2));
    for (std::uint64_t row = 0; row < psi.size(); ++row) {
        for (std::uint64_t col = 0; col < psi.size(); ++col) {
            if ((row & others) != (col & others)) {
                continue;
            }
            const int lr = static_cast<int>(((row >> q1) & 1U) + 2 * ((row >> q2) & 1U));
            const int lc = static_cast<int>(((col >> q1) & 1U) + 2 * ((col >> q2) & 1U));
            out[row] += u(lr, lc) * psi[col];
        }
    }
    return out;
}

TEST(ApplyInstruction, KernelMatchesDenseReference)
{
    const auto psi = random_state(3, 3);
    const Matrix4 cases[] = {random_unitary4(7), gates::xxz_exponential(0.3, 0.2, -0.7),
                             gates::pauli2(Pauli::kZ, Pauli::kZ), gates::cnot()};
    for (const auto &u : cases) {
        for (auto [q1, q2] : {std::pair{2, 0}, std::pair{0, 1}, std::pair{1, 2}}) {
            auto out = psi;
            st::qcore::apply_unitary2(out, q1, q2, u);
            EXPECT_LT(out.distance(reference_apply(psi, q1, q2, u)), 1e-12);
        }
    }
}

TEST(Gates, XxzExponentialMatchesMatrixExponential)
{
    const double a = 0.37, b = -0.21, c = 0.9;
    Eigen::Matrix4cd gen = a * gates::pauli2(Pauli::kX, Pauli::kX) +
                           b * gates::pauli2(Pauli::kY, Pauli::kY) +
                           c * gates::pauli2(Pauli::kZ, Pauli::kZ);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(gen);
    Eigen::Vector4cd ph;
    for (int k = 0; k < 4; ++k) {
        ph(k) = std::exp(Complex(0.0, -es.eigenvalues()(k)));
    }
    const Eigen::Matrix4cd ref = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    EXPECT_LT((ref - gates::xxz_exponential(a, b, c)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Gates, ConjugationIdentity)
{
    // T^dagger (Z on q2 - Z on q1) T = X Y - Y X.
    const auto t = gates::sqrt_iswap();
    const Matrix4 lhs = t.adjoint() *
                        (gates::pauli2(Pauli::kI, Pauli::kZ) - gates::pauli2(Pauli::kZ, Pauli::kI)) *
                        t;
    const Matrix4 rhs = gates::pauli2(Pauli::kX, Pauli::kY) - gates::pauli2(Pauli::kY, Pauli::kX);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Gates, QuarterTurnIsExponential)
{
    for (int sign : {-1, 1}) {
        const Matrix4 p = gates::pauli2(Pauli::kX, Pauli::kY);
        const double th = std::numbers::pi / 4.0;
        const Matrix4 ref = std::cos(th) * Matrix4::Identity() -
                            Complex(0.0, sign * std::sin(th)) * p;
        EXPECT_LT((ref - gates::pauli_quarter_turn(Pauli::kX, Pauli::kY, sign)).cwiseAbs().maxCoeff(),
                  1e-15);
    }
    EXPECT_THROW(gates::pauli_quarter_turn(Pauli::kX, Pauli::kY, 0), std::invalid_argument);
}

TEST(Gates, EqualUpToPhase)
{
    const Matrix4 u = gates::sqrt_iswap();
    EXPECT_TRUE(gates::equal_up_to_phase(u, Complex(0.6, 0.8) * u, 1e-12));
    EXPECT_FALSE(gates::equal_up_to_phase(u, u.adjoint(), 1e-6));
}

TEST(Circuit, ValidatesIndicesAndClassicalBits)
{
    Circuit c(2, 2);
    EXPECT_THROW(c.add_unitary1(2, gates::hadamard()), std::out_of_range);
    EXPECT_THROW(c.add_unitary2(0, 0, gates::cnot()), std::invalid_argument);
    c.add_mid_measure(0, 0);
    EXPECT_THROW(c.add_mid_measure(1, 0), std::invalid_argument);
    EXPECT_THROW(c.add_final_measure(1, 2), std::out_of_range);
    c.add_final_measure(1, 1);
    c.add_unitary1(1, gates::hadamard());
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Circuit, Counts)
{
    Circuit c(3, 3);
    c.add_unitary1(0, gates::pauli(Pauli::kX), st::qcore::Role::kPrep);
    c.add_unitary2(0, 1, gates::sqrt_iswap(), st::qcore::Role::kProtocol);
    c.add_mid_measure(1, 0);
    c.add_final_measure(0, 1);
    c.add_final_measure(2, 2);
    EXPECT_EQ(c.count_mid_measurements(), 1);
    EXPECT_EQ(c.count_final_measurements(), 2);
    EXPECT_EQ(c.count_two_qubit_unitaries(), 1);
    EXPECT_EQ(c.count_role(st::qcore::Role::kPrep), 1);
}

TEST(ExactBranches, NoMeasurementGivesOneBranch)
{
    Circuit c(2, 0);
    c.add_unitary1(0, gates::hadamard());
    const auto br = st::qcore::run_exact_branches(c, StateVector(2));
    ASSERT_EQ(br.size(), 1U);
    EXPECT_DOUBLE_EQ(br[0].probability, 1.0);
    EXPECT_FALSE(br[0].degenerate);
}

TEST(ExactBranches, PlusStateSplitsEvenly)
{
    Circuit c(1, 1);
    c.add_unitary1(0, gates::hadamard());
    c.add_mid_measure(0, 0);
    const auto br = st::qcore::run_exact_branches(c, StateVector(1));
    ASSERT_EQ(br.size(), 2U);
    EXPECT_NEAR(br[0].probability, 0.5, 1e-15);
    EXPECT_NEAR(br[1].probability, 0.5, 1e-15);
    EXPECT_EQ(br[0].mcm_bits, 0U);
    EXPECT_EQ(br[1].mcm_bits, 1U);
    EXPECT_NEAR(std::abs(br[0].final_state[0]), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(br[1].final_state[1]), 1.0, 1e-15);
}

TEST(ExactBranches, ZeroProbabilityBranchIsFlagged)
{
    Circuit c(1, 1);
    c.add_mid_measure(0, 0);
    const auto br = st::qcore::run_exact_branches(c, StateVector(1));
    ASSERT_EQ(br.size(), 2U);
    EXPECT_DOUBLE_EQ(br[0].probability, 1.0);
    EXPECT_FALSE(br[0].degenerate);
    EXPECT_DOUBLE_EQ(br[1].probability, 0.0);
    EXPECT_TRUE(br[1].degenerate);
    EXPECT_NEAR(br[1].final_state.norm(), 1.0, 1e-15);
}

TEST(ExactBranches, ProbabilitiesSumToOne)
{
    Circuit c(3, 3);
    c.add_unitary2(0, 1, random_unitary4(1));
    c.add_mid_measure(0, 0);
    c.add_unitary2(1, 2, random_unitary4(2));
    c.add_mid_measure(2, 1);
    c.add_unitary2(0, 2, random_unitary4(3));
    c.add_mid_measure(1, 2);
    const auto br = st::qcore::run_exact_branches(c, random_state(3, 5));
    ASSERT_EQ(br.size(), 8U);
    double total = 0.0;
    for (std::size_t k = 0; k < br.size(); ++k) {
        total += br[k].probability;
        EXPECT_EQ(br[k].mcm_bits, k);
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(SampleShots, OneStateReadsOne)
{
    Circuit c(1, 1);
    c.add_final_measure(0, 0);
    const auto shots = st::qcore::sample_shots(c, StateVector::basis(1, 1), 100, 3);
    for (const auto &s : shots) {
        EXPECT_EQ(s.final_bits, 1U);
    }
}

TEST(SampleShots, BinomialMean)
{
    Circuit c(1, 1);
    c.add_unitary1(0, gates::hadamard());
    c.add_final_measure(0, 0);
    const int n = 100000;
    const auto shots = st::qcore::sample_shots(c, StateVector(1), n, 2024);
    double mean = 0.0;
    for (const auto &s : shots) {
        mean += static_cast<double>(s.final_bits);
    }
    mean /= n;
    EXPECT_NEAR(mean, 0.5, 3.0 * std::sqrt(0.25 / n));
}

TEST(SampleShots, DeterministicForSeed)
{
    Circuit c(2, 3);
    c.add_unitary2(0, 1, random_unitary4(9));
    c.add_mid_measure(0, 0);
    c.add_unitary1(0, gates::hadamard());
    c.add_final_measure(0, 1);
    c.add_final_measure(1, 2);
    const auto a = st::qcore::sample_shots(c, StateVector(2), 500, 77);
    const auto b = st::qcore::sample_shots(c, StateVector(2), 500, 77);
    EXPECT_EQ(a, b);
    const auto d = st::qcore::sample_shots(c, StateVector(2), 500, 78);
    EXPECT_NE(a, d);
    EXPECT_THROW(st::qcore::sample_shots(c, StateVector(2), 0, 1), std::invalid_argument);
}

TEST(SampleShots, ConvergesToBranchWeightedValue)
{
    // Diagonal observable: (-1)^{mcm} * Z on qubit 1 at the end.
    Circuit c(2, 2);
    c.add_unitary2(0, 1, random_unitary4(21));
    c.add_mid_measure(0, 0);
    c.add_unitary2(0, 1, random_unitary4(22));
    c.add_final_measure(1, 1);
    const auto init = random_state(2, 8);
    double exact = 0.0;
    for (const auto &b : st::qcore::run_exact_branches(c, init)) {
        exact += (b.mcm_bits ? -1.0 : 1.0) * b.probability * b.final_state.expect_z(1);
    }
    const int n = 100000;
    double mean = 0.0;
    double sq = 0.0;
    for (const auto &s : st::qcore::sample_shots(c, init, n, 9)) {
        const double v = (s.mcm_bits ? -1.0 : 1.0) * ((s.final_bits >> 1) & 1U ? -1.0 : 1.0);
        mean += v;
        sq += v * v;
    }
    mean /= n;
    const double sigma = std::sqrt((sq / n - mean * mean) / n);
    EXPECT_NEAR(mean, exact, 4.0 * sigma);
}

TEST(ExpectObservable, Examples)
{
    namespace md = st::model;
    StateVector zero(1);
    md::Observable z({md::PauliTerm::from_string(1.0, {{0, 'Z'}})});
    EXPECT_NEAR(std::abs(md::expect_observable(zero, z) - Complex(1.0, 0.0)), 0.0, 1e-15);

    const double r = 1.0 / std::numbers::sqrt2;
    // (|01> - i|10>)/sqrt2: |01> is index 2, |10> is index 1.
    auto psi = StateVector::from_amplitudes(2, {0.0, Complex(0.0, -r), r, 0.0});
    md::Observable zi_iz({md::PauliTerm::from_string(1.0, {{1, 'Z'}}),
                          md::PauliTerm::from_string(-1.0, {{0, 'Z'}})});
    EXPECT_NEAR(std::abs(md::expect_observable(psi, zi_iz)), 0.0, 1e-15);

    auto phi = StateVector::from_amplitudes(2, {0.0, Complex(0.0, r), r, 0.0});
    md::Observable xy_yx({md::PauliTerm::from_string(1.0, {{0, 'X'}, {1, 'Y'}}),
                          md::PauliTerm::from_string(-1.0, {{0, 'Y'}, {1, 'X'}})},
                         true);
    const Complex v = md::expect_observable(phi, xy_yx);
    EXPECT_NEAR(v.real(), -2.0, 1e-12);
    EXPECT_LT(std::abs(v.imag()), 1e-12);
}

TEST(ExpectObservable, HermitianHasRealExpectation)
{
    namespace md = st::model;
    md::Observable o({md::PauliTerm::from_string(0.3, {{0, 'X'}, {2, 'Y'}}),
                      md::PauliTerm::from_string(-1.1, {{1, 'Y'}}),
                      md::PauliTerm::from_string(0.7, {{0, 'Z'}, {1, 'X'}, {2, 'Z'}})},
                     true);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        EXPECT_LT(std::abs(md::expect_observable(random_state(3, seed), o).imag()), 1e-12);
    }
}
