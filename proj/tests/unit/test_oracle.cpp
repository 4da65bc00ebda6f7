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

#include <gtest/gtest.h>

#include "spintransport/model/pauli.hpp"
#include "spintransport/model/spin_chain.hpp"
#include "spintransport/model/trotter.hpp"
#include "spintransport/oracle/exact.hpp"
#include "support/random_states.hpp"

namespace st = spintransport;
namespace md = st::model;
namespace oc = st::oracle;
using st::qcore::Complex;
using st::qcore::StateVector;

namespace {

/// Brute-force reference: dense matrix exponential of the full Hamiltonian.
StateVector matrix_evolve(const md::SpinChainModel &m, const StateVector &psi, double t)
{
    const auto h = md::observable_matrix(md::build_hamiltonian(m), m.n_sites);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.size()));
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        v(k) = psi[static_cast<std::size_t>(k)];
    }
    Eigen::VectorXcd c = es.eigenvectors().adjoint() * v;
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        c(k) *= std::exp(Complex(0.0, -es.eigenvalues()(k) * t));
    }
    const Eigen::VectorXcd out = es.eigenvectors() * c;
    std::vector<Complex> amp(out.data(), out.data() + out.size());
    return StateVector::from_amplitudes(m.n_sites, amp);
}

} // namespace

TEST(ExactEvolve, ZeroTimeIsIdentity)
{
    const md::SpinChainModel m{6, 1.0, 1.0, md::Boundary::kOpen};
    const auto psi = st::testing::random_state(6, 1);
    EXPECT_LT(oc::exact_evolve(m, psi, 0.0).distance(psi), 1e-15);
    EXPECT_LT(oc::exact_evolve(m, psi, 0.0, oc::EvolutionMethod::krylov()).distance(psi), 1e-15);
}

TEST(ExactEvolve, SingletPhase)
{
    const md::SpinChainModel m{2, 1.0, 1.0, md::Boundary::kOpen};
    const double r = 1.0 / std::sqrt(2.0);
    // (|01> - |10>)/sqrt2 in site-0-first notation: index 2 minus index 1.
    const auto singlet = StateVector::from_amplitudes(2, {0.0, -r, r, 0.0});
    const double t = 1.7;
    const auto out = oc::exact_evolve(m, singlet, t);
    const Complex overlap = singlet.inner(out);
    EXPECT_NEAR(std::abs(overlap), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(overlap - std::exp(Complex(0.0, 0.75 * t))), 0.0, 1e-12);
}

TEST(ExactEvolve, DenseMatchesBruteForce)
{
    for (auto boundary : {md::Boundary::kOpen, md::Boundary::kPeriodic}) {
        const md::SpinChainModel m{5, 0.8, 1.7, boundary};
        const auto psi = st::testing::random_state(5, 9);
        EXPECT_LT(oc::exact_evolve(m, psi, 1.3).distance(matrix_evolve(m, psi, 1.3)), 1e-12);
    }
}

TEST(ExactEvolve, KrylovMatchesDense)
{
    const md::SpinChainModel m{10, 1.0, 1.0, md::Boundary::kPeriodic};
    const auto psi = st::testing::random_state(10, 123);
    const auto dense = oc::exact_evolve(m, psi, 2.0, oc::EvolutionMethod::dense());
    const auto kry = oc::exact_evolve(m, psi, 2.0, oc::EvolutionMethod::krylov());
    EXPECT_LT(dense.distance(kry), 1e-10);
    EXPECT_NEAR(kry.norm(), 1.0, 1e-12);
    const auto back = oc::exact_evolve(m, psi, -2.0, oc::EvolutionMethod::krylov());
    EXPECT_LT(back.distance(oc::exact_evolve(m, psi, -2.0)), 1e-10);
}

TEST(ExactEvolve, RejectsOversizedChains)
{
    const md::SpinChainModel big{13, 1.0, 1.0, md::Boundary::kOpen};
    EXPECT_THROW(oc::exact_evolve(big, StateVector(13), 1.0), std::invalid_argument);
    EXPECT_THROW(oc::EvolutionMethod::krylov(0.0).validate(), std::invalid_argument);
}

TEST(ExactEvolve, ConservesEnergyAndMagnetization)
{
    const md::SpinChainModel m{8, 1.0, 0.6, md::Boundary::kPeriodic};
    const auto h = md::build_hamiltonian(m);
    const auto mz = md::total_magnetization(m);
    const auto psi = st::testing::random_state(8, 77);
    const double e0 = md::expect_observable(psi, h).real();
    const double m0 = md::expect_observable(psi, mz).real();
    for (double t : {0.5, 1.5, 4.0}) {
        const auto s = oc::exact_evolve(m, psi, t);
        EXPECT_NEAR(md::expect_observable(s, h).real(), e0, 1e-10);
        EXPECT_NEAR(md::expect_observable(s, mz).real(), m0, 1e-10);
        EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    }
}

TEST(ApplyCurrent, MatchesPauliForm)
{
    const md::SpinChainModel m{5, 1.4, 1.0, md::Boundary::kPeriodic};
    const auto psi = st::testing::random_state(5, 2);
    for (int r = 0; r < m.n_bonds(); ++r) {
        const auto a = oc::apply_current(m, r, psi);
        const auto b = md::apply_observable(md::local_current(m, r), psi);
        EXPECT_LT(a.distance(b), 1e-14);
    }
    StateVector out(5);
    oc::apply_hamiltonian(m, psi, out);
    EXPECT_LT(out.distance(md::apply_observable(md::build_hamiltonian(m), psi)), 1e-13);
}

TEST(ExactAcf, EqualTimeNeel)
{
    const md::SpinChainModel m{8, 1.0, 2.0, md::Boundary::kPeriodic};
    const auto neel = st::qcore::prepare_state(st::qcore::StateKind::kNeel, 8);
    for (int i = 0; i < m.n_bonds(); ++i) {
        for (int j = 0; j < m.n_bonds(); ++j) {
            const Complex v = oc::exact_acf(m, neel, i, j, 0.0, 0.0);
            const int d = std::min((i - j + 8) % 8, (j - i + 8) % 8);
            if (d == 0) {
                EXPECT_NEAR(v.real(), 0.25, 1e-12);
            } else if (d >= 2) {
                EXPECT_NEAR(std::abs(v), 0.0, 1e-12);
            }
            EXPECT_NEAR(v.imag(), 0.0, 1e-12);
        }
    }
}

TEST(ExactAcf, DecaysWithDistance)
{
    const md::SpinChainModel m{8, 1.0, 2.0, md::Boundary::kPeriodic};
    const auto neel = st::qcore::prepare_state(st::qcore::StateKind::kNeel, 8);
    const double near = std::abs(oc::exact_acf(m, neel, 0, 0, 1.0, 0.0));
    const double far = std::abs(oc::exact_acf(m, neel, 4, 0, 1.0, 0.0));
    EXPECT_GT(near, 10.0 * far);
}

TEST(ExactAcf, HermitianStructure)
{
    const md::SpinChainModel m{6, 1.0, 1.0, md::Boundary::kOpen};
    const auto psi = st::testing::random_state(6, 31);
    for (auto [i, j] : {std::pair{0, 2}, std::pair{3, 1}, std::pair{2, 2}}) {
        const Complex a = oc::exact_acf(m, psi, i, j, 1.2, 0.0);
        const Complex b = oc::exact_acf(m, psi, j, i, 0.0, 1.2);
        EXPECT_NEAR(std::abs(a - std::conj(b)), 0.0, 1e-12);
    }
}

TEST(ExactTrotterAcf, ZeroTimeMatchesExact)
{
    const md::SpinChainModel m{6, 1.0, 1.0, md::Boundary::kOpen};
    const auto psi = st::testing::random_state(6, 3);
    const Complex a = oc::exact_trotter_acf(m, 0.2, psi, 1, 3, 0.0, 0.0);
    const Complex b = oc::exact_acf(m, psi, 1, 3, 0.0, 0.0);
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-14);
    EXPECT_THROW(oc::exact_trotter_acf(m, 0.2, psi, 1, 3, 0.3, 0.0), std::invalid_argument);
}

TEST(ExactTrotterAcf, ConvergesQuadratically)
{
    const md::SpinChainModel m{6, 1.0, 1.0, md::Boundary::kOpen};
    const auto dw = st::qcore::prepare_state(st::qcore::StateKind::kDomainWall, 6);
    const Complex exact = oc::exact_acf(m, dw, 2, 2, 1.0, 0.0);
    double prev = -1.0;
    for (double dt : {0.25, 0.125, 0.0625}) {
        const double err = std::abs(oc::exact_trotter_acf(m, dt, dw, 2, 2, 1.0, 0.0) - exact);
        if (prev > 0.0) {
            EXPECT_GT(prev / err, 3.0);
        }
        prev = err;
    }
}

TEST(ExactTrotterAcf, SeriesMatchesPointwise)
{
    const md::SpinChainModel m{6, 1.0, 1.6, md::Boundary::kOpen};
    const auto dw = st::qcore::prepare_state(st::qcore::StateKind::kDomainWall, 6);
    const std::vector<int> targets{0, 1, 2, 3, 4};
    const auto series = oc::exact_trotter_acf_series(m, 0.25, dw, 2, targets, 6);
    ASSERT_EQ(series.size(), 7U);
    for (int k = 0; k <= 6; ++k) {
        for (std::size_t t = 0; t < targets.size(); ++t) {
            const Complex ref = oc::exact_trotter_acf(m, 0.25, dw, targets[t], 2, 0.25 * k, 0.0);
            EXPECT_NEAR(std::abs(series[static_cast<std::size_t>(k)][t] - ref), 0.0, 1e-12);
        }
    }
}

TEST(ContinuityResidual, RandomStates)
{
    const md::SpinChainModel m{6, 1.0, 0.9, md::Boundary::kOpen};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto psi = st::testing::random_state(6, 1000 + seed);
        const int r = 1 + static_cast<int>(seed % 4);
        EXPECT_LT(oc::continuity_residual(m, psi, r, 0.3, 1e-4), 1e-6);
    }
}

TEST(ContinuityResidual, EigenstateAndFerromagnet)
{
    const md::SpinChainModel m{6, 1.0, 1.0, md::Boundary::kPeriodic};
    const auto h = md::observable_matrix(md::build_hamiltonian(m), 6);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd g = es.eigenvectors().col(0);
    const auto ground = StateVector::from_amplitudes(6, std::vector<Complex>(g.data(), g.data() + g.size()));
    EXPECT_LT(oc::continuity_residual(m, ground, 2, 0.5, 1e-4), 1e-10);
    EXPECT_LT(oc::continuity_residual(m, StateVector(6), 2, 0.5, 1e-4), 1e-12);
    const md::SpinChainModel open{6, 1.0, 1.0, md::Boundary::kOpen};
    EXPECT_THROW(oc::continuity_residual(open, StateVector(6), 0, 0.0, 1e-4), std::invalid_argument);
}
