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

#include "spintransport/noise/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "spintransport/noise/twirl.hpp"
#include "spintransport/qcore/gates.hpp"

namespace spintransport::noise {

namespace {

using qcore::Pauli;

double uniform(std::mt19937_64 &rng) { return qcore::uniform_from_bits(rng()); }

void check_probability(double p, const char *name)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(fmt::format("{} must lie in [0, 1], got {}", name, p));
    }
}

/// Appends the positions hit by independent Bernoulli(p) trials over `n`
/// slots, using geometric gaps so the cost scales with the number of hits.
template <typename F>
void bernoulli_hits(std::size_t n, double p, std::mt19937_64 &rng, F &&on_hit)
{
    if (p <= 0.0 || n == 0) {
        return;
    }
    if (p >= 1.0) {
        for (std::size_t k = 0; k < n; ++k) {
            on_hit(k);
        }
        return;
    }
    const double log_q = std::log1p(-p);
    std::size_t pos = 0;
    while (true) {
        const double gap = std::floor(std::log1p(-uniform(rng)) / log_q);
        if (gap >= static_cast<double>(n - pos)) {
            return;
        }
        pos += static_cast<std::size_t>(gap);
        on_hit(pos);
        ++pos;
        if (pos >= n) {
            return;
        }
    }
}

} // namespace

void NoiseSpec::validate() const
{
    check_probability(p1, "p1");
    check_probability(p2, "p2");
    check_probability(p_meas, "p_meas");
}

struct NoisyExecutor::Impl {
    qcore::Circuit circuit;
    NoiseSpec spec;
    std::vector<std::size_t> one_qubit;
    std::vector<std::size_t> two_qubit;
    std::vector<int> measured_cbits;
    /// Error pattern: (instruction index << 4) | Pauli code, sorted.
    std::map<std::vector<std::uint64_t>, qcore::ShotSampler> cache;
    std::vector<std::uint64_t> pattern;

    qcore::ShotSampler &sampler_for(const std::vector<std::uint64_t> &key)
    {
        auto it = cache.find(key);
        if (it != cache.end()) {
            return it->second;
        }
        qcore::Circuit noisy(circuit.n_qubits(), circuit.n_cbits(), circuit.label());
        const auto &ins = circuit.instructions();
        std::size_t e = 0;
        for (std::size_t k = 0; k < ins.size(); ++k) {
            noisy.append(ins[k]);
            for (; e < key.size() && (key[e] >> 4) == k; ++e) {
                const auto code = static_cast<int>(key[e] & 15U);
                const auto qs = ins[k].qubits();
                for (std::size_t m = 0; m < qs.size(); ++m) {
                    const auto p = static_cast<Pauli>((code >> (2 * m)) & 3);
                    if (p != Pauli::kI) {
                        noisy.add_unitary1(qs[m], qcore::gates::pauli(p), qcore::Role::kOther,
                                           qcore::GateTag{"error", {}});
                    }
                }
            }
        }
        return cache.emplace(key, qcore::ShotSampler(std::move(noisy), qcore::StateVector(circuit.n_qubits())))
            .first->second;
    }
};

NoisyExecutor::NoisyExecutor(qcore::Circuit circuit, NoiseSpec spec) : impl_(std::make_unique<Impl>())
{
    spec.validate();
    circuit.validate();
    impl_->circuit = std::move(circuit);
    impl_->spec = spec;
    const auto &ins = impl_->circuit.instructions();
    for (std::size_t k = 0; k < ins.size(); ++k) {
        if (std::holds_alternative<qcore::MidMeasureZ>(ins[k].op)) {
            impl_->measured_cbits.push_back(std::get<qcore::MidMeasureZ>(ins[k].op).cbit);
        } else if (std::holds_alternative<qcore::FinalMeasureZ>(ins[k].op)) {
            impl_->measured_cbits.push_back(-1 - std::get<qcore::FinalMeasureZ>(ins[k].op).cbit);
        } else if (ins[k].role != qcore::Role::kTwirl) {
            (ins[k].is_two_qubit() ? impl_->two_qubit : impl_->one_qubit).push_back(k);
        }
    }
}

NoisyExecutor::~NoisyExecutor() = default;
NoisyExecutor::NoisyExecutor(NoisyExecutor &&) noexcept = default;
NoisyExecutor &NoisyExecutor::operator=(NoisyExecutor &&) noexcept = default;

qcore::ShotRecord NoisyExecutor::sample(std::mt19937_64 &rng)
{
    auto &im = *impl_;
    im.pattern.clear();
    bernoulli_hits(im.one_qubit.size(), im.spec.p1, rng, [&](std::size_t k) {
        const auto code = static_cast<std::uint64_t>(rng() % 4U);
        if (code != 0) {
            im.pattern.push_back((static_cast<std::uint64_t>(im.one_qubit[k]) << 4) | code);
        }
    });
    bernoulli_hits(im.two_qubit.size(), im.spec.p2, rng, [&](std::size_t k) {
        const auto code = static_cast<std::uint64_t>(rng() % 16U);
        if (code != 0) {
            im.pattern.push_back((static_cast<std::uint64_t>(im.two_qubit[k]) << 4) | code);
        }
    });
    std::sort(im.pattern.begin(), im.pattern.end());
    qcore::ShotRecord rec = im.sampler_for(im.pattern).sample(rng);
    if (im.spec.p_meas > 0.0) {
        for (int c : im.measured_cbits) {
            if (uniform(rng) < im.spec.p_meas) {
                if (c >= 0) {
                    rec.mcm_bits ^= std::uint64_t{1} << c;
                } else {
                    rec.final_bits ^= std::uint64_t{1} << (-1 - c);
                }
            }
        }
    }
    return rec;
}

std::vector<qcore::ShotRecord> NoisyExecutor::sample(std::int64_t n_shots, std::uint64_t seed)
{
    if (n_shots < 1) {
        throw std::invalid_argument("n_shots must be at least 1");
    }
    std::mt19937_64 rng(seed);
    std::vector<qcore::ShotRecord> out;
    out.reserve(static_cast<std::size_t>(n_shots));
    for (std::int64_t s = 0; s < n_shots; ++s) {
        out.push_back(sample(rng));
    }
    return out;
}

const qcore::Circuit &NoisyExecutor::circuit() const noexcept { return impl_->circuit; }

std::size_t NoisyExecutor::pattern_count() const noexcept { return impl_->cache.size(); }

NoisyExecutor inject_noise(const qcore::Circuit &circuit, const NoiseSpec &spec)
{
    return NoisyExecutor(circuit, spec);
}

std::vector<protocol::CircuitResult> execute_noisy(const protocol::MeasurementPlan &plan,
                                                   const NoiseSpec &spec,
                                                   std::int64_t shots_per_circuit, int n_twirls)
{
    spec.validate();
    if (shots_per_circuit < 1) {
        throw std::invalid_argument("shots per circuit must be at least 1");
    }
    if (n_twirls < 0) {
        throw std::invalid_argument("twirl count must be non-negative");
    }
    std::vector<protocol::CircuitResult> out;
    for (const auto &pc : plan.circuits) {
        protocol::CircuitResult res{pc.label, {}, {}};
        const std::uint64_t seed = protocol::derive_seed(spec.seed, plan.id, pc.label);
        if (n_twirls == 0) {
            res.shots = NoisyExecutor(pc.circuit, spec).sample(shots_per_circuit, seed);
        } else {
            const auto instances = pauli_twirl(pc.circuit, n_twirls, seed);
            const std::int64_t base = shots_per_circuit / n_twirls;
            const std::int64_t extra = shots_per_circuit % n_twirls;
            for (int t = 0; t < n_twirls; ++t) {
                const std::int64_t n = base + (t < extra ? 1 : 0);
                if (n == 0) {
                    continue;
                }
                auto shots = NoisyExecutor(instances[static_cast<std::size_t>(t)], spec)
                                 .sample(n, protocol::splitmix64(seed + static_cast<std::uint64_t>(t) + 1));
                res.shots.insert(res.shots.end(), shots.begin(), shots.end());
            }
        }
        out.push_back(std::move(res));
    }
    return out;
}

} // namespace spintransport::noise
