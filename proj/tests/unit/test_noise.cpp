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

#include <gtest/gtest.h>

#include "spintransport/model/trotter.hpp"
#include "spintransport/noise/calibration.hpp"
#include "spintransport/noise/noise.hpp"
#include "spintransport/noise/twirl.hpp"
#include "spintransport/protocol/estimate.hpp"
#include "spintransport/protocol/plan.hpp"
#include "spintransport/qcore/gates.hpp"
#include "support/density_matrix.hpp"

namespace st = spintransport;
namespace md = st::model;
namespace nz = st::noise;
namespace pr = st::protocol;
namespace qc = st::qcore;
namespace gates = qc::gates;

namespace {

double mean_z(const std::vector<qc::ShotRecord> &shots, int cbit)
{
    double s = 0.0;
    for (const auto &r : shots) {
        s += ((r.final_bits >> cbit) & 1U) ? -1.0 : 1.0;
    }
    return s / static_cast<double>(shots.size());
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

TEST(NoiseSpec, Validation)
{
    EXPECT_NO_THROW((nz::NoiseSpec{0.0, 1.0, 0.5, 1}.validate()));
    EXPECT_THROW((nz::NoiseSpec{-0.1, 0.0, 0.0, 1}.validate()), std::invalid_argument);
    EXPECT_THROW((nz::NoiseSpec{0.0, 1.5, 0.0, 1}.validate()), std::invalid_argument);
    EXPECT_TRUE((nz::NoiseSpec{}.is_noiseless()));
}

TEST(InjectNoise, NoiselessMatchesSampler)
{
    const md::SpinChainModel m{5, 1.0, 1.0, md::Boundary::kOpen};
    const auto plan = pr::plan_real(m, {0.25, 2}, qc::ProductState::from_bitstring("01010"), 1, {1, 3})[0];
    const auto &c = plan.circuits[0].circuit;
    auto exec = nz::inject_noise(c, {});
    EXPECT_EQ(exec.sample(2000, 42), qc::sample_shots(c, qc::StateVector(5), 2000, 42));
    EXPECT_EQ(exec.pattern_count(), 1U);
}

TEST(InjectNoise, FullDepolarizationKillsExpectations)
{
    qc::Circuit c(1, 1);
    c.add_unitary1(0, gates::pauli(qc::Pauli::kX));
    c.add_final_measure(0, 0);
    const auto shots = nz::inject_noise(c, {1.0, 0.0, 0.0, 0}).sample(100000, 3);
    EXPECT_NEAR(mean_z(shots, 0), 0.0, 4.0 / std::sqrt(1e5));

    qc::Circuit cx(1, 1);
    cx.add_unitary1(0, gates::hadamard());
    cx.add_unitary1(0, gates::hadamard(), qc::Role::kTwirl);
    cx.add_final_measure(0, 0);
    EXPECT_NEAR(mean_z(nz::inject_noise(cx, {0.0, 0.0, 0.0, 0}).sample(1000, 3), 0), 1.0, 1e-15);
    EXPECT_NEAR(mean_z(nz::inject_noise(cx, {1.0, 0.0, 0.0, 0}).sample(100000, 4), 0), 0.0,
                4.0 / std::sqrt(1e5));
}

TEST(InjectNoise, TwoQubitAttenuationMatchesChannel)
{
    qc::Circuit c(2, 2);
    c.add_unitary1(0, gates::hadamard(), qc::Role::kTwirl);
    c.add_unitary2(0, 1, gates::cnot());
    c.add_final_measure(0, 0);
    c.add_final_measure(1, 1);
    const double p2 = 0.3;
    const nz::NoiseSpec spec{0.0, p2, 0.0, 0};
    pr::PlanCircuit pc;
    pc.circuit = c;
    pc.cbit_of_qubit = {0, 1};
    // Bell state: <ZZ> = 1 noiselessly, 1 - p2 under the channel.
    EXPECT_NEAR(st::testing::noisy_term(pc, {0, 1}, spec), 1.0 - p2, 1e-12);
    const auto shots = nz::inject_noise(c, spec).sample(100000, 11);
    double zz = 0.0;
    for (const auto &s : shots) {
        zz += (std::popcount(s.final_bits & 3U) & 1) ? -1.0 : 1.0;
    }
    zz /= 1e5;
    const double sigma = std::sqrt((1.0 - (1 - p2) * (1 - p2)) / 1e5);
    EXPECT_NEAR(zz, 1.0 - p2, 4.0 * sigma);
}

TEST(InjectNoise, ReadoutFlips)
{
    qc::Circuit c(1, 2);
    c.add_mid_measure(0, 0);
    c.add_final_measure(0, 1);
    const auto shots = nz::inject_noise(c, {0.0, 0.0, 0.1, 0}).sample(100000, 5);
    double mcm = 0.0;
    for (const auto &s : shots) {
        mcm += (s.mcm_bits & 1U) ? -1.0 : 1.0;
    }
    EXPECT_NEAR(mcm / 1e5, 0.8, 4.0 * std::sqrt(0.36 / 1e5));
    EXPECT_NEAR(mean_z(shots, 1), 0.8, 4.0 * std::sqrt(0.36 / 1e5));
}

TEST(Twirl, SetsAndExactness)
{
    EXPECT_EQ(nz::twirl_set(gates::cnot()).size(), 16U);
    EXPECT_EQ(nz::twirl_set(gates::xxz_exponential(0.1, 0.1, 0.3)).size(), 4U);
    EXPECT_EQ(nz::twirl_set(gates::sqrt_iswap()).size(), 4U);
    EXPECT_EQ(nz::twirl_set(gates::pauli_quarter_turn(qc::Pauli::kX, qc::Pauli::kY, 1)).size(), 16U);

    const md::SpinChainModel m{6, 1.0, 1.3, md::Boundary::kOpen};
    const auto plan = pr::plan_imag(m, {0.25, 3}, qc::ProductState::from_bitstring("010101"), 2, {0, 2, 4})[0];
    const auto &c = plan.circuits[0].circuit;
    qc::StateVector ref(6);
    qc::apply_unitaries(ref, c);
    const auto instances = nz::pauli_twirl(c, 100, 9);
    ASSERT_EQ(instances.size(), 100U);
    bool any_twirled = false;
    for (const auto &inst : instances) {
        qc::StateVector s(6);
        qc::apply_unitaries(s, inst);
        EXPECT_LT(s.distance(ref), 1e-10);
        any_twirled = any_twirled || inst.count_role(qc::Role::kTwirl) > 0;
    }
    EXPECT_TRUE(any_twirled);
    EXPECT_THROW(nz::pauli_twirl(c, 0, 1), std::invalid_argument);
}

TEST(Twirl, AveragingDoesNotIncreaseBias)
{
    const md::SpinChainModel m{4, 1.0, 1.0, md::Boundary::kOpen};
    const auto plans = pr::plan_real(m, {0.25, 2}, qc::ProductState::from_bitstring("0101"), 1, {1});
    const double truth = pr::assemble(plans[0], pr::execute_exact(plans[0])).values[0].real();
    const nz::NoiseSpec spec{0.0, 0.02, 0.0, 21};
    const auto plain = pr::assemble(plans[0], nz::execute_noisy(plans[0], spec, 200000));
    const auto twirled = pr::assemble(plans[0], nz::execute_noisy(plans[0], spec, 200000, 100));
    const double bias_plain = std::abs(plain.values[0].real() - truth);
    const double bias_twirled = std::abs(twirled.values[0].real() - truth);
    EXPECT_LE(bias_twirled, bias_plain + 3.0 * (plain.stderrs[0] + twirled.stderrs[0]));
}

TEST(Calibration, NoiselessFactorsAreOne)
{
    const md::SpinChainModel m{6, 1.0, 2.0, md::Boundary::kPeriodic};
    const auto init = qc::ProductState::from_bitstring("010101");
    for (auto part : {pr::Part::kReal, pr::Part::kImaginary}) {
        for (const auto &plan : pr::plan_two_time(m, 0.2, init, 0, all_bonds(m), 1.0, 0.0, part)) {
            const auto circuits = nz::calibration_circuits(plan);
            EXPECT_EQ(circuits.size(), part == pr::Part::kReal ? 2U : 1U);
            for (const auto &cc : circuits) {
                const auto &tmpl = plan.circuits.front().circuit;
                EXPECT_EQ(cc.circuit.circuit.count_role(qc::Role::kTrotter), tmpl.count_role(qc::Role::kTrotter));
                EXPECT_EQ(cc.circuit.circuit.count_two_qubit_unitaries(), tmpl.count_two_qubit_unitaries());
                EXPECT_EQ(cc.circuit.circuit.count_role(qc::Role::kPrep), 0);
            }
            for (const auto &[key, f] : nz::exact_factors(circuits).factors) {
                EXPECT_NEAR(f.value, 1.0, 1e-12);
            }
        }
    }
}

TEST(Calibration, LearnedFactorsMatchChannel)
{
    const md::SpinChainModel m{6, 1.0, 2.0, md::Boundary::kPeriodic};
    const auto init = qc::ProductState::from_bitstring("010101");
    const nz::NoiseSpec spec{0.001, 0.01, 0.01, 17};
    for (auto part : {pr::Part::kReal, pr::Part::kImaginary}) {
        const auto plan = pr::plan_two_time(m, 0.2, init, 0, {0, 2, 4}, 0.6, 0.0, part)[0];
        const auto result = nz::calibrate({plan}, spec, 100000);
        const auto circuits = nz::calibration_circuits(plan);
        for (const auto &cc : circuits) {
            for (int q = 0; q < 6; ++q) {
                const auto *f = result.find({plan.id, cc.label, q});
                ASSERT_NE(f, nullptr);
                const double analytic = st::testing::noisy_term(cc.circuit, {q}, spec);
                EXPECT_LT(analytic, 1.0);
                EXPECT_NEAR(f->value, analytic, 3.0 * f->stderr_) << cc.label << " q" << q;
            }
        }
    }
}

TEST(Calibration, SyntheticAttenuationAndValidation)
{
    pr::PlanCircuit pc;
    pc.label = "cal";
    pc.calibration_label = "cal";
    pc.circuit = qc::Circuit(1, 1);
    pc.cbit_of_qubit = {0};
    const std::vector<nz::CalibrationCircuit> circuits{{"exp", "cal", pc}};
    // Readout +1 with probability 0.9 gives <Z> = 0.8.
    std::mt19937_64 rng(5);
    std::vector<qc::ShotRecord> shots(100000);
    for (auto &s : shots) {
        s.final_bits = qc::uniform_from_bits(rng()) < 0.9 ? 0 : 1;
    }
    const auto r = nz::learn_factors(circuits, {shots});
    EXPECT_NEAR(r.find({"exp", "cal", 0})->value, 0.8, 0.016);
    EXPECT_THROW(nz::learn_factors(circuits, {{}}), std::invalid_argument);
    std::vector<qc::ShotRecord> bad(10);
    for (auto &s : bad) {
        s.final_bits = 1;
    }
    EXPECT_TRUE(nz::learn_factors(circuits, {bad}).find({"exp", "cal", 0})->degenerate);
}

TEST(Renormalize, DividesTermsByFactors)
{
    pr::MeasurementPlan plan;
    plan.id = "p";
    plan.targets = {0};
    plan.normalization = 1.0;
    plan.readout = {{0, {0}, 1.0}};
    pr::PlanCircuit a;
    a.label = "A";
    a.calibration_label = "A";
    plan.circuits = {a};
    pr::CorrelatorEstimate raw = pr::combine_terms(plan, {{"A", 0, {0}, 1.0, 0.3, 0.01, 100}});
    nz::CalibrationResult unit;
    unit.factors[{"p", "A", 0}] = {1.0, 0.0, 100, false};
    const auto same = nz::renormalize(plan, raw, unit);
    EXPECT_EQ(same.estimate.values[0], raw.values[0]);
    EXPECT_TRUE(same.skipped.empty());
    nz::CalibrationResult cal;
    cal.factors[{"p", "A", 0}] = {0.6, 0.0, 100, false};
    EXPECT_NEAR(nz::renormalize(plan, raw, cal).estimate.values[0].real(), 0.5, 1e-15);
    cal.factors[{"p", "A", 0}].degenerate = true;
    const auto skipped = nz::renormalize(plan, raw, cal);
    EXPECT_EQ(skipped.skipped.size(), 1U);
    EXPECT_NEAR(skipped.estimate.values[0].real(), 0.3, 1e-15);
    EXPECT_EQ(nz::renormalize(plan, raw, {}).skipped.size(), 1U);
}

TEST(Renormalize, UnbiasedWhenNoiseIsTheAssumedChannel)
{
    // Readout flips attenuate every term and its calibration by the same factor.
    const md::SpinChainModel m{6, 1.0, 1.0, md::Boundary::kOpen};
    const auto init = qc::ProductState::from_bitstring("010101");
    const auto plan = pr::plan_real(m, {0.25, 3}, init, 2, {2})[0];
    const double truth = pr::assemble(plan, pr::execute_exact(plan)).values[0].real();
    double sum = 0.0;
    double var = 0.0;
    const int reps = 20;
    for (int r = 0; r < reps; ++r) {
        const nz::NoiseSpec spec{0.0, 0.0, 0.05, static_cast<std::uint64_t>(100 + r)};
        const auto raw = pr::assemble(plan, nz::execute_noisy(plan, spec, 20000));
        const auto fixed = nz::renormalize(plan, raw, nz::calibrate({plan}, spec, 20000));
        EXPECT_TRUE(fixed.skipped.empty());
        sum += fixed.estimate.values[0].real();
        var += fixed.estimate.stderrs[0] * fixed.estimate.stderrs[0];
    }
    EXPECT_NEAR(sum / reps, truth, 3.0 * std::sqrt(var) / reps);
}

TEST(CalibrationJson, RoundTrip)
{
    nz::CalibrationResult r;
    r.factors[{"exp", "mcm@j", 3}] = {0.91, 0.002, 1000, false};
    r.factors[{"exp", "imag", 1}] = {-0.1, 0.02, 1000, true};
    const auto doc = nz::to_json(r);
    EXPECT_EQ(doc.at("version"), 1);
    const auto back = nz::calibration_from_json(doc);
    ASSERT_EQ(back.factors.size(), 2U);
    EXPECT_EQ(back.find({"exp", "mcm@j", 3})->value, 0.91);
    EXPECT_TRUE(back.find({"exp", "imag", 1})->degenerate);
    auto wrong = doc;
    wrong["version"] = 2;
    EXPECT_THROW(nz::calibration_from_json(wrong), std::invalid_argument);
}
