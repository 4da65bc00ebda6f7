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

#include "spintransport/noise/twirl.hpp"

#include <random>
#include <stdexcept>

namespace spintransport::noise {

namespace {

using qcore::Pauli;
namespace gates = qcore::gates;

constexpr double kTolerance = 1e-9;

} // namespace

std::vector<TwirlPair> twirl_set(const qcore::Matrix4 &u)
{
    std::vector<TwirlPair> out;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const auto pa = static_cast<Pauli>(a);
            const auto pb = static_cast<Pauli>(b);
            const qcore::Matrix4 m = u * gates::pauli2(pa, pb) * u.adjoint();
            for (int c = 0; c < 4; ++c) {
                for (int d = 0; d < 4; ++d) {
                    const auto qc = static_cast<Pauli>(c);
                    const auto qd = static_cast<Pauli>(d);
                    const qcore::Matrix4 q = gates::pauli2(qc, qd);
                    const qcore::Complex s = (q.adjoint() * m).trace() / 4.0;
                    if (std::abs(std::abs(s.real()) - 1.0) < kTolerance && std::abs(s.imag()) < kTolerance &&
                        (m - s.real() * q).cwiseAbs().maxCoeff() < kTolerance) {
                        out.push_back({pa, pb, qc, qd, s.real() > 0 ? 1.0 : -1.0});
                    }
                }
            }
        }
    }
    return out;
}

std::vector<qcore::Circuit> pauli_twirl(const qcore::Circuit &circuit, int n_twirls, std::uint64_t seed)
{
    if (n_twirls < 1) {
        throw std::invalid_argument("n_twirls must be at least 1");
    }
    std::mt19937_64 rng(seed);
    std::vector<std::vector<TwirlPair>> sets;
    for (const auto &ins : circuit.instructions()) {
        const auto *g = std::get_if<qcore::Unitary2>(&ins.op);
        sets.push_back(g != nullptr ? twirl_set(g->u) : std::vector<TwirlPair>{});
    }
    std::vector<qcore::Circuit> out;
    for (int t = 0; t < n_twirls; ++t) {
        qcore::Circuit c(circuit.n_qubits(), circuit.n_cbits(), circuit.label());
        const auto &ins = circuit.instructions();
        for (std::size_t k = 0; k < ins.size(); ++k) {
            const auto &set = sets[k];
            if (set.empty()) {
                c.append(ins[k]);
                continue;
            }
            const auto &pair = set[static_cast<std::size_t>(rng() % set.size())];
            const auto &g = std::get<qcore::Unitary2>(ins[k].op);
            const bool trivial = pair.p_q1 == Pauli::kI && pair.p_q2 == Pauli::kI;
            if (!trivial) {
                c.add_unitary2(g.q1, g.q2, gates::pauli2(pair.p_q1, pair.p_q2), qcore::Role::kTwirl,
                               qcore::GateTag{"twirl", {}});
            }
            c.append(ins[k]);
            if (!trivial) {
                c.add_unitary2(g.q1, g.q2, pair.sign * gates::pauli2(pair.q_q1, pair.q_q2),
                               qcore::Role::kTwirl, qcore::GateTag{"twirl", {}});
            }
        }
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace spintransport::noise
