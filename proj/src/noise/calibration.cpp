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

#include "spintransport/noise/calibration.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "spintransport/model/trotter.hpp"
#include "spintransport/qcore/gates.hpp"
#include "spintransport/qcore/simulator.hpp"

namespace spintransport::noise {

namespace {

protocol::PlanCircuit make_calibration(const protocol::MeasurementPlan &plan,
                                       const protocol::PlanCircuit &tmpl)
{
    protocol::PlanCircuit pc = tmpl;
    pc.label = tmpl.calibration_label;
    pc.coefficient = 1.0;
    const auto &src = tmpl.circuit;
    qcore::Circuit c(src.n_qubits(), src.n_cbits(), fmt::format("{}/cal:{}", plan.id, pc.label));
    for (const auto &ins : src.instructions()) {
        if (ins.role == qcore::Role::kPrep) {
            continue;
        }
        if (plan.part == protocol::Part::kImaginary && ins.role == qcore::Role::kProtocol) {
            if (const auto *g = std::get_if<qcore::Unitary2>(&ins.op)) {
                const double q = std::numbers::pi / 4.0;
                c.add_unitary2(g->q1, g->q2, qcore::gates::xxz_exponential(0.0, 0.0, q),
                               qcore::Role::kProtocol, model::xxz_tag(0.0, 0.0, q));
                continue;
            }
        }
        c.append(ins);
    }
    pc.circuit = std::move(c);
    return pc;
}

std::vector<int> measured_qubits(const protocol::PlanCircuit &pc)
{
    std::vector<int> out;
    for (std::size_t q = 0; q < pc.cbit_of_qubit.size(); ++q) {
        if (pc.cbit_of_qubit[q] >= 0) {
            out.push_back(static_cast<int>(q));
        }
    }
    return out;
}

} // namespace

const Factor *CalibrationResult::find(const FactorKey &key) const
{
    const auto it = factors.find(key);
    return it == factors.end() ? nullptr : &it->second;
}

std::vector<CalibrationCircuit> calibration_circuits(const protocol::MeasurementPlan &plan)
{
    std::vector<CalibrationCircuit> out;
    std::set<std::string> seen;
    for (const auto &pc : plan.circuits) {
        if (!seen.insert(pc.calibration_label).second) {
            continue;
        }
        out.push_back({plan.id, pc.calibration_label, make_calibration(plan, pc)});
    }
    return out;
}

CalibrationResult learn_factors(const std::vector<CalibrationCircuit> &circuits,
                                const std::vector<std::vector<qcore::ShotRecord>> &shots)
{
    if (circuits.size() != shots.size()) {
        throw std::invalid_argument("calibration data does not match the circuit list");
    }
    CalibrationResult result;
    for (std::size_t k = 0; k < circuits.size(); ++k) {
        const auto &cc = circuits[k];
        const auto &data = shots[k];
        if (data.empty()) {
            throw std::invalid_argument(
                fmt::format("calibration circuit {}/{} has no shots", cc.plan_id, cc.label));
        }
        const auto n = static_cast<double>(data.size());
        for (int q : measured_qubits(cc.circuit)) {
            double sum = 0.0;
            for (const auto &s : data) {
                sum += protocol::mcm_sign(cc.circuit, s.mcm_bits) *
                       protocol::z_string_sign(cc.circuit, s.final_bits, {q});
            }
            Factor f;
            f.value = sum / n;
            f.shots = static_cast<std::int64_t>(data.size());
            const double var = n > 1 ? std::max(0.0, 1.0 - f.value * f.value) * n / (n - 1) : 1.0;
            f.stderr_ = std::sqrt(var / n);
            f.degenerate = !(f.value > 0.0);
            result.factors[{cc.plan_id, cc.label, q}] = f;
        }
    }
    return result;
}

CalibrationResult exact_factors(const std::vector<CalibrationCircuit> &circuits)
{
    CalibrationResult result;
    for (const auto &cc : circuits) {
        const auto branches =
            qcore::run_exact_branches(cc.circuit.circuit, qcore::StateVector(cc.circuit.circuit.n_qubits()));
        for (int q : measured_qubits(cc.circuit)) {
            Factor f;
            f.value = 0.0;
            for (const auto &b : branches) {
                if (b.probability > 0.0) {
                    f.value += protocol::mcm_sign(cc.circuit, b.mcm_bits) * b.probability *
                               b.final_state.expect_z(q);
                }
            }
            f.degenerate = !(f.value > 0.0);
            result.factors[{cc.plan_id, cc.label, q}] = f;
        }
    }
    return result;
}

CalibrationResult calibrate(const std::vector<protocol::MeasurementPlan> &plans, const NoiseSpec &spec,
                            std::int64_t shots_per_circuit, int n_twirls)
{
    CalibrationResult result;
    for (const auto &plan : plans) {
        const auto circuits = calibration_circuits(plan);
        // Run through the plan executor so seeds and twirling match data runs.
        protocol::MeasurementPlan cal_plan;
        cal_plan.id = plan.id + "/cal";
        cal_plan.part = plan.part;
        for (const auto &cc : circuits) {
            cal_plan.circuits.push_back(cc.circuit);
        }
        const auto results = execute_noisy(cal_plan, spec, shots_per_circuit, n_twirls);
        std::vector<std::vector<qcore::ShotRecord>> shots;
        for (const auto &r : results) {
            shots.push_back(r.shots);
        }
        const auto learned = learn_factors(circuits, shots);
        result.factors.insert(learned.factors.begin(), learned.factors.end());
    }
    return result;
}

RenormalizedEstimate renormalize(const protocol::MeasurementPlan &plan,
                                 const protocol::CorrelatorEstimate &raw,
                                 const CalibrationResult &calibration)
{
    RenormalizedEstimate out;
    std::vector<protocol::TermValue> terms = raw.terms;
    for (auto &tv : terms) {
        const auto &pc = plan.circuit(tv.label);
        if (tv.qubits.size() != 1) {
            out.skipped.push_back({plan.id, pc.calibration_label, tv.qubits.empty() ? -1 : tv.qubits[0]});
            continue;
        }
        const FactorKey key{plan.id, pc.calibration_label, tv.qubits[0]};
        const Factor *f = calibration.find(key);
        if (f == nullptr || f->degenerate) {
            out.skipped.push_back(key);
            continue;
        }
        const double v = tv.value / f->value;
        const double a = tv.stderr_ / f->value;
        const double b = tv.value * f->stderr_ / (f->value * f->value);
        tv.value = v;
        tv.stderr_ = std::sqrt(a * a + b * b);
    }
    out.estimate = protocol::combine_terms(plan, std::move(terms));
    return out;
}

nlohmann::json to_json(const CalibrationResult &result)
{
    nlohmann::json entries = nlohmann::json::array();
    for (const auto &[key, f] : result.factors) {
        entries.push_back({{"experiment", key.plan_id},
                           {"label", key.label},
                           {"qubit", key.qubit},
                           {"factor", f.value},
                           {"stderr", f.stderr_},
                           {"shots", f.shots},
                           {"degenerate", f.degenerate}});
    }
    return {{"version", CalibrationResult::kVersion}, {"factors", entries}};
}

CalibrationResult calibration_from_json(const nlohmann::json &doc)
{
    const int version = doc.at("version").get<int>();
    if (version != CalibrationResult::kVersion) {
        throw std::invalid_argument(fmt::format("unsupported calibration version {}", version));
    }
    CalibrationResult result;
    for (const auto &e : doc.at("factors")) {
        FactorKey key{e.at("experiment").get<std::string>(), e.at("label").get<std::string>(),
                      e.at("qubit").get<int>()};
        Factor f{e.at("factor").get<double>(), e.at("stderr").get<double>(),
                 e.at("shots").get<std::int64_t>(), e.at("degenerate").get<bool>()};
        result.factors[key] = f;
    }
    return result;
}

} // namespace spintransport::noise
