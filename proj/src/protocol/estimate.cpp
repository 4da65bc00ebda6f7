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

#include "spintransport/protocol/estimate.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace spintransport::protocol {

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h) noexcept
{
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t qubit_mask(const std::vector<int> &qubits)
{
    std::uint64_t m = 0;
    for (int q : qubits) {
        m ^= std::uint64_t{1} << q;
    }
    return m;
}

void check_labels(const MeasurementPlan &plan, const std::vector<CircuitResult> &results)
{
    if (results.size() != plan.circuits.size()) {
        throw std::invalid_argument(fmt::format("plan {} has {} circuits but {} results", plan.id,
                                                plan.circuits.size(), results.size()));
    }
    for (std::size_t k = 0; k < results.size(); ++k) {
        if (results[k].label != plan.circuits[k].label) {
            throw std::invalid_argument(fmt::format("result '{}' does not match circuit '{}'",
                                                    results[k].label, plan.circuits[k].label));
        }
    }
}

} // namespace

Complex CorrelatorEstimate::value_of(int target) const
{
    for (std::size_t k = 0; k < targets.size(); ++k) {
        if (targets[k] == target) {
            return values[k];
        }
    }
    for (int t : pruned_targets) {
        if (t == target) {
            return {0.0, 0.0};
        }
    }
    throw std::out_of_range(fmt::format("estimate {} has no target {}", plan_id, target));
}

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view plan_id, std::string_view label)
{
    std::uint64_t h = fnv1a(plan_id, 0xcbf29ce484222325ULL);
    h = fnv1a("/", h);
    h = fnv1a(label, h);
    return splitmix64(splitmix64(base) ^ h);
}

std::vector<CircuitResult> execute_exact(const MeasurementPlan &plan)
{
    std::vector<CircuitResult> out;
    out.reserve(plan.circuits.size());
    for (const auto &pc : plan.circuits) {
        const qcore::StateVector zero(pc.circuit.n_qubits());
        out.push_back({pc.label, qcore::run_exact_branches(pc.circuit, zero), {}});
    }
    return out;
}

std::vector<CircuitResult> execute_sampled(const MeasurementPlan &plan, std::int64_t shots_per_circuit,
                                           std::uint64_t seed)
{
    if (shots_per_circuit < 1) {
        throw std::invalid_argument("shots per circuit must be at least 1");
    }
    std::vector<CircuitResult> out;
    out.reserve(plan.circuits.size());
    for (const auto &pc : plan.circuits) {
        const qcore::StateVector zero(pc.circuit.n_qubits());
        out.push_back({pc.label,
                       {},
                       qcore::sample_shots(pc.circuit, zero, shots_per_circuit,
                                           derive_seed(seed, plan.id, pc.label))});
    }
    return out;
}

int mcm_sign(const PlanCircuit &circuit, std::uint64_t mcm_bits) noexcept
{
    if (circuit.mcm_cbit < 0) {
        return 1;
    }
    return ((mcm_bits >> circuit.mcm_cbit) & 1U) ? -1 : 1;
}

int z_string_sign(const PlanCircuit &circuit, std::uint64_t final_bits, const std::vector<int> &qubits)
{
    int parity = 0;
    for (int q : qubits) {
        const int cbit = circuit.cbit_of_qubit.at(static_cast<std::size_t>(q));
        if (cbit < 0) {
            throw std::invalid_argument(fmt::format("qubit {} is not measured in '{}'", q, circuit.label));
        }
        parity ^= static_cast<int>((final_bits >> cbit) & 1U);
    }
    return parity ? -1 : 1;
}

std::vector<double> shot_values(const MeasurementPlan &plan, const PlanCircuit &circuit,
                                const std::vector<qcore::ShotRecord> &shots, int target)
{
    std::vector<double> out(shots.size(), 0.0);
    for (std::size_t s = 0; s < shots.size(); ++s) {
        double v = 0.0;
        for (const auto &term : plan.readout) {
            if (term.target == target) {
                v += term.weight * z_string_sign(circuit, shots[s].final_bits, term.qubits);
            }
        }
        out[s] = mcm_sign(circuit, shots[s].mcm_bits) * v;
    }
    return out;
}

std::vector<TermValue> term_values(const MeasurementPlan &plan,
                                   const std::vector<CircuitResult> &results)
{
    check_labels(plan, results);
    std::vector<TermValue> out;
    for (std::size_t k = 0; k < results.size(); ++k) {
        const auto &pc = plan.circuits[k];
        const auto &res = results[k];
        for (const auto &term : plan.readout) {
            TermValue tv{pc.label, term.target, term.qubits, term.weight, 0.0, 0.0, 0};
            if (res.is_exact()) {
                const std::uint64_t mask = qubit_mask(term.qubits);
                for (const auto &b : res.branches) {
                    if (b.probability > 0.0) {
                        tv.value += mcm_sign(pc, b.mcm_bits) * b.probability *
                                    qcore::expect_z_string(b.final_state, mask);
                    }
                }
            } else {
                const auto n = static_cast<double>(res.shots.size());
                double sum = 0.0;
                for (const auto &s : res.shots) {
                    sum += mcm_sign(pc, s.mcm_bits) * z_string_sign(pc, s.final_bits, term.qubits);
                }
                tv.value = sum / n;
                tv.n_shots = static_cast<std::int64_t>(res.shots.size());
                // Each sample is +-1, so the sample variance is n/(n-1) (1 - mean^2).
                const double var = n > 1 ? std::max(0.0, 1.0 - tv.value * tv.value) * n / (n - 1) : 1.0;
                tv.stderr_ = std::sqrt(var / n);
            }
            out.push_back(std::move(tv));
        }
    }
    return out;
}

CorrelatorEstimate combine_terms(const MeasurementPlan &plan, std::vector<TermValue> terms)
{
    CorrelatorEstimate est;
    est.plan_id = plan.id;
    est.part = plan.part;
    est.source_bond = plan.source_bond;
    est.targets = plan.targets;
    est.pruned_targets = plan.pruned_targets;
    std::vector<double> sum(plan.targets.size(), 0.0);
    std::vector<double> var(plan.targets.size(), 0.0);
    for (const auto &pc : plan.circuits) {
        for (std::size_t k = 0; k < plan.targets.size(); ++k) {
            // Terms of one circuit and target share their shots, so their
            // errors add linearly; an upper bound without the covariance.
            double err = 0.0;
            for (const auto &tv : terms) {
                if (tv.label == pc.label && tv.target == plan.targets[k]) {
                    sum[k] += pc.coefficient * tv.weight * tv.value;
                    err += std::abs(pc.coefficient * tv.weight) * tv.stderr_;
                }
            }
            var[k] += err * err;
        }
    }
    for (std::size_t k = 0; k < plan.targets.size(); ++k) {
        const double v = plan.normalization * sum[k];
        est.values.push_back(plan.part == Part::kReal ? Complex(v, 0.0) : Complex(0.0, v));
        est.stderrs.push_back(plan.normalization * std::sqrt(var[k]));
    }
    est.terms = std::move(terms);
    return est;
}

CorrelatorEstimate assemble(const MeasurementPlan &plan, const std::vector<CircuitResult> &results)
{
    return combine_terms(plan, term_values(plan, results));
}

CorrelatorEstimate assemble_real(const MeasurementPlan &plan, const std::vector<CircuitResult> &results)
{
    if (plan.part != Part::kReal) {
        throw std::invalid_argument(fmt::format("plan {} is not a real-part plan", plan.id));
    }
    return assemble(plan, results);
}

CorrelatorEstimate assemble_imag(const MeasurementPlan &plan, const std::vector<CircuitResult> &results)
{
    if (plan.part != Part::kImaginary) {
        throw std::invalid_argument(fmt::format("plan {} is not an imaginary-part plan", plan.id));
    }
    return assemble(plan, results);
}

std::map<int, Complex> merge_estimates(const std::vector<CorrelatorEstimate> &estimates)
{
    std::map<int, Complex> out;
    for (const auto &e : estimates) {
        for (std::size_t k = 0; k < e.targets.size(); ++k) {
            out[e.targets[k]] += e.values[k];
        }
        for (int t : e.pruned_targets) {
            out[t] += 0.0;
        }
    }
    return out;
}

} // namespace spintransport::protocol
