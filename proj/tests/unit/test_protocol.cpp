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

#include <array>
#include <cmath>

#include <gtest/gtest.h>

#include "spintransport/model/spin_chain.hpp"
#include "spintransport/model/trotter.hpp"
#include "spintransport/oracle/exact.hpp"
#include "spintransport/protocol/estimate.hpp"
#include "spintransport/protocol/hadamard.hpp"
#include "spintransport/protocol/plan.hpp"
#include "spintransport/protocol/series.hpp"

namespace st = spintransport;
namespace md = st::model;
namespace oc = st::oracle;
namespace pr = st::protocol;
using st::qcore::Complex;
using st::qcore::ProductState;

namespace {

std::map<int, Complex> run_exact(const std::vector<pr::MeasurementPlan> &plans)
{
    std::vector<pr::CorrelatorEstimate> est;
    for (const auto &p : plans) {
        est.push_back(pr::assemble(p, pr::execute_exact(p)));
    }
    return pr::merge_estimates(est);
}

std::vector<int> all_bonds(const md::SpinChainModel &m)
{
    std::vector<int> v;
    for (int r = 0; r < m.n_bonds(); ++r) {
        v.push_back(r);
    }
    return v;
}

} // namespace

TEST(Plan, PartitionIsDisjoint)
{
    const md::SpinChainModel m{8, 1.0, 1.0, md::Boundary::kPeriodic};
    const auto groups = pr::partition_targets(m, all_bonds(m));
    ASSERT_EQ(groups.size(), 2U);
    EXPECT_EQ(groups[0], (std::vector<int>{0, 2, 4, 6}));
    EXPECT_EQ(groups[1], (std::vector<int>{1, 3, 5, 7}));
    const md::SpinChainModel odd{5, 1.0, 1.0, md::Boundary::kPeriodic};
    EXPECT_EQ(pr::partition_targets(odd, all_bonds(odd)).size(), 3U);
}

TEST(Plan, CircuitShape)
{
    const md::SpinChainModel m{6, 1.0, 1.0, md::Boundary::kOpen};
    const auto neel = ProductState::from_bitstring("010101");
    const auto real = pr::plan_real(m, {0.25, 2}, neel, 2, {0, 2, 4});
    ASSERT_EQ(real.size(), 1U);
    ASSERT_EQ(real[0].circuits.size(), 2U);
    for (const auto &pc : real[0].circuits) {
        EXPECT_EQ(pc.circuit.count_mid_measurements(), 1);
        EXPECT_EQ(pc.circuit.count_final_measurements(), 6);
        EXPECT_EQ(pc.mcm_cbit, 0);
        EXPECT_EQ(pc.circuit.count_role(st::qcore::Role::kPrep), 3);
    }
    EXPECT_EQ(real[0].circuit("mcm@j").circuit.mid_measurements()[0].q, 2);
    EXPECT_EQ(real[0].circuit("mcm@j+1").circuit.mid_measurements()[0].q, 3);
    const auto imag = pr::plan_imag(m, {0.25, 2}, neel, 2, {0, 2, 4});
    ASSERT_EQ(imag[0].circuits.size(), 4U);
    for (const auto &pc : imag[0].circuits) {
        EXPECT_EQ(pc.circuit.count_mid_measurements(), 0);
    }
    EXPECT_THROW(pr::plan_real(m, {0.25, 2}, neel, 5, {0}), std::out_of_range);
    EXPECT_THROW(pr::plan_real(m, {0.25, 2}, neel, 0, {}), std::invalid_argument);
}

TEST(Protocol, EqualTimeNeel)
{
    const md::SpinChainModel m{4, 1.0, 1.0, md::Boundary::kPeriodic};
    const auto neel = ProductState::from_bitstring("0101");
    for (int j = 0; j < 4; ++j) {
        const auto re = run_exact(pr::plan_real(m, {0.25, 0}, neel, j, all_bonds(m)));
        const auto im = run_exact(pr::plan_imag(m, {0.25, 0}, neel, j, all_bonds(m)));
        for (int i = 0; i < 4; ++i) {
            const Complex ref = oc::exact_acf(m, neel.to_state(), i, j, 0.0, 0.0);
            EXPECT_NEAR(re.at(i).real(), ref.real(), 1e-12) << i << "," << j;
            EXPECT_NEAR(im.at(i).imag(), ref.imag(), 1e-12) << i << "," << j;
        }
        EXPECT_NEAR(re.at(j).real(), 0.25, 1e-12);
    }
}

TEST(Protocol, MatchesTrotterOracle)
{
    for (auto boundary : {md::Boundary::kOpen, md::Boundary::kPeriodic}) {
        const md::SpinChainModel m{8, 1.0, 1.3, boundary};
        for (const char *bits : {"01010101", "00001111", "01101001"}) {
            const auto init = ProductState::from_bitstring(bits);
            const int j = 3;
            const auto re = run_exact(pr::plan_real(m, {0.25, 5}, init, j, all_bonds(m)));
            const auto im = run_exact(pr::plan_imag(m, {0.25, 5}, init, j, all_bonds(m)));
            for (int i = 0; i < m.n_bonds(); ++i) {
                const Complex ref = oc::exact_trotter_acf(m, 0.25, init.to_state(), i, j, 1.25, 0.0);
                EXPECT_NEAR(re.at(i).real(), ref.real(), 1e-10) << bits << " " << i;
                EXPECT_NEAR(im.at(i).imag(), ref.imag(), 1e-10) << bits << " " << i;
            }
        }
    }
}

TEST(Protocol, LightconeLeavesValuesUnchanged)
{
    const md::SpinChainModel m{12, 1.0, 0.7, md::Boundary::kOpen};
    const auto init = ProductState::from_bitstring("000000111111");
    const auto targets = all_bonds(m);
    for (auto part : {pr::Part::kReal, pr::Part::kImaginary}) {
        const auto full = run_exact(pr::plan_two_time(m, 0.25, init, 5, targets, 0.25, 0.0, part));
        const auto plans = pr::plan_two_time(m, 0.25, init, 5, targets, 0.25, 0.0, part, {true, false});
        const auto cut = run_exact(plans);
        std::size_t pruned = 0;
        for (const auto &p : plans) {
            pruned += p.pruned_targets.size();
        }
        EXPECT_GT(pruned, 0U);
        for (int i : targets) {
            EXPECT_NEAR(std::abs(full.at(i) - cut.at(i)), 0.0, 1e-12) << i;
        }
    }
}

TEST(Protocol, TwoTimeMatchesOracle)
{
    const md::SpinChainModel m{6, 1.0, 1.0, md::Boundary::kPeriodic};
    const auto init = ProductState::from_bitstring("010101");
    const auto psi = init.to_state();
    const auto re = run_exact(pr::plan_two_time(m, 0.25, init, 1, all_bonds(m), 1.0, 0.5, pr::Part::kReal));
    const auto im =
        run_exact(pr::plan_two_time(m, 0.25, init, 1, all_bonds(m), 1.0, 0.5, pr::Part::kImaginary));
    for (int i = 0; i < m.n_bonds(); ++i) {
        const Complex ref = oc::exact_trotter_acf(m, 0.25, psi, i, 1, 1.0, 0.5);
        EXPECT_NEAR(re.at(i).real(), ref.real(), 1e-10);
        EXPECT_NEAR(im.at(i).imag(), ref.imag(), 1e-10);
    }
    EXPECT_THROW(pr::plan_two_time(m, 0.25, init, 1, {0}, 0.5, 1.0, pr::Part::kReal),
                 std::invalid_argument);
}

TEST(Protocol, NeelSymmetryAgrees)
{
    const md::SpinChainModel m{8, 1.0, 1.5, md::Boundary::kPeriodic};
    const auto neel = ProductState::from_bitstring("01010101");
    for (int j : {0, 3}) {
        for (auto part : {pr::Part::kReal, pr::Part::kImaginary}) {
            const auto full = run_exact(pr::plan_two_time(m, 0.25, neel, j, all_bonds(m), 1.5, 0.0, part));
            const auto sym = run_exact(
                pr::plan_two_time(m, 0.25, neel, j, all_bonds(m), 1.5, 0.0, part, {false, true}));
            for (int i = 0; i < m.n_bonds(); ++i) {
                EXPECT_NEAR(std::abs(full.at(i) - sym.at(i)), 0.0, 1e-10) << j << " " << i;
            }
        }
    }
}

TEST(Protocol, BatchTranslationMatchesSingle)
{
    const md::SpinChainModel m{8, 1.0, 1.0, md::Boundary::kPeriodic};
    const auto neel = ProductState::from_bitstring("01010101");
    const auto plans = pr::batch_translation(m, {0.25, 3}, neel);
    EXPECT_EQ(plans.size(), 4U);
    std::vector<pr::CorrelatorEstimate> est;
    for (const auto &p : plans) {
        est.push_back(pr::assemble(p, pr::execute_exact(p)));
    }
    const auto merged = pr::merge_estimates(est);
    for (int i = 0; i < 8; ++i) {
        const auto single_re = run_exact(pr::plan_real(m, {0.25, 3}, neel, 0, {i}));
        const auto single_im = run_exact(pr::plan_imag(m, {0.25, 3}, neel, 0, {i}));
        EXPECT_NEAR(std::abs(merged.at(i) - single_re.at(i) - single_im.at(i)), 0.0, 1e-12);
    }
}

TEST(Protocol, GeneralCorrelationMatchesOracle)
{
    const md::SpinChainModel m{5, 1.0, 0.8, md::Boundary::kOpen};
    const auto init = ProductState::from_bitstring("01100");
    const auto psi = init.to_state();
    // <X_1(t) Z_3> and <J_2(t) J_0> through the generic path.
    const auto w = pr::pauli_target(5, 1, st::qcore::Pauli::kX);
    const auto g = pr::pauli_target(5, 3, st::qcore::Pauli::kZ);
    EXPECT_NO_THROW(w.validate());
    EXPECT_NO_THROW(pr::current_target(m, 2).validate());
    const double t = 1.0;
    auto evolve = [&](st::qcore::StateVector s) {
        md::apply_trotter(s, m, 0.25, 4);
        return s;
    };
    const auto ref_obs = [&](const md::Observable &wo, const md::Observable &go) {
        // <psi| U^dag W U G |psi>
        auto left = evolve(psi);
        auto right = evolve(md::apply_observable(go, psi));
        return left.inner(md::apply_observable(wo, right));
    };
    for (auto part : {pr::Part::kReal, pr::Part::kImaginary}) {
        const auto plan = pr::plan_general_correlation(m, 0.25, init, w, g, t, 0.0, part);
        const Complex v = pr::assemble(plan, pr::execute_exact(plan)).values[0];
        const Complex ref = ref_obs(w.original, g.original);
        EXPECT_NEAR(part == pr::Part::kReal ? v.real() : v.imag(),
                    part == pr::Part::kReal ? ref.real() : ref.imag(), 1e-10);
    }
    const auto jw = pr::current_target(m, 2);
    const auto jg = pr::current_target(m, 0);
    const auto plan = pr::plan_general_correlation(m, 0.25, init, jw, jg, t, 0.0, pr::Part::kImaginary);
    const Complex v = pr::assemble(plan, pr::execute_exact(plan)).values[0];
    EXPECT_NEAR(v.imag(), ref_obs(jw.original, jg.original).imag(), 1e-10);
}

TEST(Assemble, WeightedBranchEstimator)
{
    // Branch probabilities (0.6, 0.4), branch means (0.5, -0.25): 0.6 * 0.5 - 0.4 * (-0.25) = 0.4.
    pr::MeasurementPlan plan;
    plan.id = "synthetic";
    plan.targets = {0};
    plan.normalization = 1.0;
    plan.readout = {{0, {0}, 1.0}};
    pr::PlanCircuit a;
    a.label = "A";
    a.mcm_cbit = 0;
    a.cbit_of_qubit = {1};
    plan.circuits = {a};
    pr::CircuitResult r{"A", {}, {}};
    r.branches.push_back({0, 0.6, st::qcore::StateVector::from_amplitudes(1, {std::sqrt(0.75), std::sqrt(0.25)}), false});
    r.branches.push_back({1, 0.4, st::qcore::StateVector::from_amplitudes(1, {std::sqrt(0.375), std::sqrt(0.625)}), false});
    EXPECT_NEAR(pr::assemble_real(plan, {r}).values[0].real(), 0.4, 1e-15);
    for (auto &b : r.branches) {
        b.final_state = st::qcore::StateVector::from_amplitudes(1, {std::sqrt(0.5), std::sqrt(0.5)});
    }
    EXPECT_NEAR(pr::assemble_real(plan, {r}).values[0].real(), 0.0, 1e-15);
    const std::vector<pr::CircuitResult> wrong{{"B", {}, {}}};
    EXPECT_THROW(pr::assemble(plan, wrong), std::invalid_argument);
    EXPECT_THROW(pr::assemble_imag(plan, {r}), std::invalid_argument);
}

TEST(Assemble, ImaginaryCombination)
{
    const md::SpinChainModel m{4, 1.0, 1.0, md::Boundary::kPeriodic};
    auto plan = pr::plan_imag(m, {0.25, 0}, ProductState::from_bitstring("0101"), 0, {2})[0];
    plan.normalization = 1.0;
    auto make_terms = [&](std::array<double, 4> means) {
        std::vector<pr::TermValue> terms;
        for (std::size_t k = 0; k < 4; ++k) {
            // Readout Z_b - Z_a with <Z_b> = mean, <Z_a> = 0.
            terms.push_back({plan.circuits[k].label, 2, {3}, 1.0, means[k], 0.0, 0});
            terms.push_back({plan.circuits[k].label, 2, {2}, -1.0, 0.0, 0.0, 0});
        }
        return terms;
    };
    ASSERT_EQ(plan.circuits[0].label, "-XY");
    ASSERT_EQ(plan.circuits[3].label, "+YX");
    const auto e = pr::combine_terms(plan, make_terms({0.2, -0.2, 0.1, -0.1}));
    EXPECT_NEAR(e.values[0].imag(), 0.1, 1e-15);
    EXPECT_EQ(e.values[0].real(), 0.0);
    EXPECT_NEAR(pr::combine_terms(plan, make_terms({0.3, 0.3, 0.3, 0.3})).values[0].imag(), 0.0, 1e-15);
}

TEST(Sampling, ConvergesAndIsReproducible)
{
    const md::SpinChainModel m{6, 1.0, 1.0, md::Boundary::kOpen};
    const auto init = ProductState::from_bitstring("010101");
    const auto plans = pr::plan_real(m, {0.25, 2}, init, 2, {2});
    const auto exact = pr::assemble(plans[0], pr::execute_exact(plans[0]));
    const auto r1 = pr::execute_sampled(plans[0], 20000, 7);
    const auto r2 = pr::execute_sampled(plans[0], 20000, 7);
    EXPECT_EQ(r1[0].shots, r2[0].shots);
    const auto s = pr::assemble(plans[0], r1);
    EXPECT_NEAR(s.values[0].real(), exact.values[0].real(), 5.0 * s.stderrs[0]);
    EXPECT_GT(s.stderrs[0], 0.0);
    EXPECT_NE(pr::derive_seed(7, "a", "b"), pr::derive_seed(7, "a", "c"));
}

TEST(Hadamard, MatchesDirectScheme)
{
    const md::SpinChainModel m{6, 1.0, 1.6, md::Boundary::kPeriodic};
    const auto init = ProductState::from_bitstring("010101");
    const auto re = run_exact(pr::plan_real(m, {0.2, 4}, init, 2, all_bonds(m)));
    const auto im = run_exact(pr::plan_imag(m, {0.2, 4}, init, 2, all_bonds(m)));
    for (int i = 0; i < m.n_bonds(); ++i) {
        const Complex h = pr::hadamard_baseline(m, {0.2, 4}, init, i, 2);
        EXPECT_NEAR(h.real(), re.at(i).real(), 1e-10) << i;
        EXPECT_NEAR(h.imag(), im.at(i).imag(), 1e-10) << i;
    }
    for (const auto &hc : pr::hadamard_circuits(m, {0.2, 1}, init, 0, 3)) {
        EXPECT_EQ(hc.circuit.n_qubits(), 7);
        EXPECT_EQ(hc.circuit.count_final_measurements(), 1);
    }
}

TEST(CountCircuits, DirectAndHadamard)
{
    for (int n : {8, 20}) {
        const md::SpinChainModel m{n, 1.0, 1.0, md::Boundary::kPeriodic};
        const auto reduced = pr::count_circuits(pr::Scheme::kDirect, m, pr::CountMode::kTranslationReduced);
        EXPECT_EQ(reduced.real, 4);
        EXPECT_EQ(reduced.imag, 8);
        const auto sym =
            pr::count_circuits(pr::Scheme::kDirect, m, pr::CountMode::kTranslationReduced, true);
        EXPECT_EQ(sym.real, 2);
        EXPECT_EQ(sym.imag, 4);
        EXPECT_EQ(pr::count_circuits(pr::Scheme::kDirect, m, pr::CountMode::kFullMatrix).total(), 12L * n);
    }
    const md::SpinChainModel m6{6, 1.0, 1.0, md::Boundary::kPeriodic};
    EXPECT_EQ(pr::count_circuits(pr::Scheme::kHadamard, m6, pr::CountMode::kFullMatrix).total(), 8L * 36);
    EXPECT_THROW(pr::parse_scheme("qsvt"), std::invalid_argument);
}

TEST(Protocol, GeneralSpinSpinAndIdentity)
{
    const md::SpinChainModel m{6, 1.0, 1.0, md::Boundary::kOpen};
    const auto init = ProductState::from_bitstring("000111");
    auto psi_t = init.to_state();
    md::apply_trotter(psi_t, m, 0.25, 4);
    const auto zi = pr::pauli_target(6, 1, st::qcore::Pauli::kZ);
    const auto zj = pr::pauli_target(6, 3, st::qcore::Pauli::kZ);
    // Z_j is diagonal on the initial product state.
    const double zj0 = init.bit(3) ? -1.0 : 1.0;
    const auto plan = pr::plan_general_correlation(m, 0.25, init, zi, zj, 1.0, 0.0, pr::Part::kReal);
    const double v = pr::assemble(plan, pr::execute_exact(plan)).values[0].real();
    EXPECT_NEAR(v, zj0 * psi_t.expect_z(1), 1e-10);
    const auto id = pr::identity_target(6);
    const auto plan_id = pr::plan_general_correlation(m, 0.25, init, zi, id, 1.0, 0.0, pr::Part::kReal);
    EXPECT_NEAR(pr::assemble(plan_id, pr::execute_exact(plan_id)).values[0].real(), psi_t.expect_z(1), 1e-10);
    pr::GeneralTarget bad = zi;
    bad.z_form = md::Observable({md::PauliTerm::from_string(1.0, {{1, 'X'}})});
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Protocol, TwoTimeDiagonalDomainWall)
{
    const md::SpinChainModel m{8, 1.0, 1.6, md::Boundary::kOpen};
    const auto init = ProductState::from_bitstring("00001111");
    const auto targets = all_bonds(m);
    for (double t : {0.75, 1.5, 2.25}) {
        for (auto part : {pr::Part::kReal, pr::Part::kImaginary}) {
            const auto v = run_exact(pr::plan_two_time(m, 0.75, init, 3, targets, t, t, part));
            for (int i : targets) {
                const Complex ref = oc::exact_trotter_acf(m, 0.75, init.to_state(), i, 3, t, t);
                const double got = part == pr::Part::kReal ? v.at(i).real() : v.at(i).imag();
                EXPECT_NEAR(got, part == pr::Part::kReal ? ref.real() : ref.imag(), 1e-10);
            }
        }
    }
    // t2 = 0 reproduces the one-time plan.
    const auto a = run_exact(pr::plan_two_time(m, 0.75, init, 3, targets, 1.5, 0.0, pr::Part::kReal));
    const auto b = run_exact(pr::plan_real(m, {0.75, 2}, init, 3, targets));
    for (int i : targets) {
        EXPECT_NEAR(std::abs(a.at(i) - b.at(i)), 0.0, 1e-12);
    }
}

TEST(BranchSeries, MatchesPerTimePlans)
{
    const md::SpinChainModel m{8, 1.0, 1.0, md::Boundary::kOpen};
    const auto init = ProductState::from_bitstring("00001111");
    const auto series = pr::exact_branch_series(m, 0.25, init, 3, 6);
    ASSERT_EQ(series.values.size(), 7U);
    for (int k : {0, 3, 6}) {
        const auto re = run_exact(pr::plan_real(m, {0.25, k}, init, 3, all_bonds(m)));
        const auto im = run_exact(pr::plan_imag(m, {0.25, k}, init, 3, all_bonds(m)));
        for (int i = 0; i < m.n_bonds(); ++i) {
            const Complex v = series.values[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            EXPECT_NEAR(std::abs(v - re.at(i) - im.at(i)), 0.0, 1e-12) << k << " " << i;
        }
    }
}
