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

#include "spintransport/protocol/plan.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "spintransport/model/lightcone.hpp"
#include "spintransport/qcore/gates.hpp"
#include "spintransport/qcore/simulator.hpp"

namespace spintransport::protocol {

namespace {

using qcore::Circuit;
using qcore::GateTag;
using qcore::Pauli;
using qcore::Role;
namespace gates = qcore::gates;

constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kEighthPi = std::numbers::pi / 8.0;

/// Appends the protocol-side operations between state preparation and the
/// forward evolution, given the circuit and the next free layer index.
using SourceOps = std::function<void(Circuit &)>;

struct Variant {
    std::string label;
    double coefficient;
    std::string calibration_label;
    bool has_mcm;
    SourceOps ops;
};

void append_prep(Circuit &c, const qcore::ProductState &initial)
{
    for (int q = 0; q < initial.n_qubits; ++q) {
        if (initial.bit(q)) {
            c.add_unitary1(q, gates::pauli(Pauli::kX), Role::kPrep, GateTag{"x", {}});
        }
    }
}

void append_t(Circuit &c, int a, int b, bool dagger)
{
    const double s = dagger ? -kEighthPi : kEighthPi;
    c.add_unitary2(a, b, dagger ? gates::sqrt_iswap_dagger() : gates::sqrt_iswap(),
                   Role::kProtocol, model::xxz_tag(s, s, 0.0));
}

void append_fragment(Circuit &c, const Circuit &fragment, bool adjoint, Role role)
{
    const auto &ins = fragment.instructions();
    auto emit = [&](const qcore::Instruction &in) {
        qcore::Instruction out = in;
        out.role = role;
        out.layer = -1;
        if (adjoint) {
            if (auto *g1 = std::get_if<qcore::Unitary1>(&out.op)) {
                g1->u = g1->u.adjoint().eval();
            } else if (auto *g2 = std::get_if<qcore::Unitary2>(&out.op)) {
                g2->u = g2->u.adjoint().eval();
            }
            // Keep the tags the exporter expands; the rest lose theirs.
            if (out.tag.name == "xxz") {
                for (double &p : out.tag.params) {
                    p = -p;
                }
            } else if (out.tag.name == "pauli_quarter") {
                out.tag.params[2] = -out.tag.params[2];
            } else {
                out.tag = GateTag{};
            }
        }
        c.append(std::move(out));
    };
    if (adjoint) {
        for (auto it = ins.rbegin(); it != ins.rend(); ++it) {
            if (it->is_unitary()) {
                emit(*it);
            }
        }
    } else {
        for (const auto &in : ins) {
            if (in.is_unitary()) {
                emit(in);
            }
        }
    }
}

void check_bond(const model::SpinChainModel &m, int r)
{
    if (!m.valid_bond(r)) {
        throw std::out_of_range(fmt::format("bond {} out of range for {} bonds", r, m.n_bonds()));
    }
}

void check_initial(const model::SpinChainModel &m, const qcore::ProductState &initial)
{
    if (initial.n_qubits != m.n_sites) {
        throw std::invalid_argument(fmt::format("initial state has {} sites, model has {}",
                                                initial.n_qubits, m.n_sites));
    }
}

std::vector<int> sorted_qubits(const std::vector<ReadoutTerm> &readout)
{
    std::set<int> qs;
    for (const auto &t : readout) {
        qs.insert(t.qubits.begin(), t.qubits.end());
    }
    return {qs.begin(), qs.end()};
}

/// Everything up to and including the forward evolution to t1.
Circuit build_body(const model::SpinChainModel &m, double dt, const qcore::ProductState &initial,
                   int k1, int k2, const Variant &v, int n_cbits, const std::string &label)
{
    Circuit c(m.n_sites, n_cbits, label);
    append_prep(c, initial);
    int layer = model::append_trotter(c, m, dt, k2, 0);
    v.ops(c);
    layer = model::append_trotter_adjoint(c, m, dt, k2, layer);
    model::append_trotter(c, m, dt, k1, layer);
    return c;
}

std::set<int> forward_cone(const model::SpinChainModel &m, double dt,
                           const qcore::ProductState &initial, int k1, int k2,
                           const std::vector<Variant> &variants)
{
    std::set<int> cone;
    for (const auto &v : variants) {
        const Circuit body = build_body(m, dt, initial, k1, k2, v, 1, v.label);
        model::PruneReport rep;
        std::set<int> all;
        for (int q = 0; q < m.n_sites; ++q) {
            all.insert(q);
        }
        model::prune_lightcone(body, {}, all, &rep);
        cone.insert(rep.forward_cone.begin(), rep.forward_cone.end());
    }
    return cone;
}

/// Inserts basis change and final measurements, then optionally prunes.
PlanCircuit finish_circuit(const model::SpinChainModel &m, double dt,
                           const qcore::ProductState &initial, int k1, int k2, const Variant &v,
                           const Circuit &readout_basis, const std::vector<ReadoutTerm> &readout,
                           bool lightcone)
{
    const auto qubits = sorted_qubits(readout);
    const int first_cbit = v.has_mcm ? 1 : 0;
    const int n_cbits = first_cbit + static_cast<int>(qubits.size());
    Circuit c = build_body(m, dt, initial, k1, k2, v, n_cbits, v.label);
    append_fragment(c, readout_basis, false, Role::kBasis);
    PlanCircuit pc;
    pc.label = v.label;
    pc.coefficient = v.coefficient;
    pc.calibration_label = v.calibration_label;
    pc.mcm_cbit = v.has_mcm ? 0 : -1;
    pc.cbit_of_qubit.assign(static_cast<std::size_t>(m.n_sites), -1);
    for (std::size_t k = 0; k < qubits.size(); ++k) {
        const int cbit = first_cbit + static_cast<int>(k);
        c.add_final_measure(qubits[k], cbit);
        pc.cbit_of_qubit[static_cast<std::size_t>(qubits[k])] = cbit;
    }
    c.validate();
    pc.circuit = lightcone ? model::prune_lightcone(c, {}, {}) : std::move(c);
    return pc;
}

/// T gates on every target bond, and the readout Z_b - Z_a per target.
void current_readout(const model::SpinChainModel &m, const std::vector<int> &group,
                     Circuit &basis, std::vector<ReadoutTerm> &readout)
{
    for (int i : group) {
        const auto [a, b] = m.bond_sites(i);
        append_t(basis, a, b, false);
        readout.push_back({i, {b}, 1.0});
        readout.push_back({i, {a}, -1.0});
    }
}

std::vector<Variant> current_variants(const model::SpinChainModel &m, int j, Part part,
                                      bool neel_symmetry)
{
    const auto [a, b] = m.bond_sites(j);
    std::vector<Variant> out;
    if (part == Part::kReal) {
        auto mcm_on = [a, b](int q) {
            return [a, b, q](Circuit &c) {
                append_t(c, a, b, false);
                c.add_mid_measure(q, 0);
                append_t(c, a, b, true);
            };
        };
        if (neel_symmetry) {
            out.push_back({"mcm@j+1", 2.0, "mcm@j+1", true, mcm_on(b)});
        } else {
            out.push_back({"mcm@j+1", 1.0, "mcm@j+1", true, mcm_on(b)});
            out.push_back({"mcm@j", -1.0, "mcm@j", true, mcm_on(a)});
        }
        return out;
    }
    auto quarter = [a, b](Pauli pa, Pauli pb, int sign) {
        return [a, b, pa, pb, sign](Circuit &c) {
            c.add_unitary2(a, b, gates::pauli_quarter_turn(pa, pb, sign), Role::kProtocol,
                           GateTag{"pauli_quarter",
                                   {static_cast<double>(pa), static_cast<double>(pb),
                                    static_cast<double>(sign)}});
        };
    };
    // Label "-XY" is exp(-i pi XY / 4) = (I - i XY)/sqrt2.
    if (neel_symmetry) {
        out.push_back({"-XY", 1.0, "imag", false, quarter(Pauli::kX, Pauli::kY, 1)});
        out.push_back({"+XY", -1.0, "imag", false, quarter(Pauli::kX, Pauli::kY, -1)});
    } else {
        out.push_back({"-XY", 0.5, "imag", false, quarter(Pauli::kX, Pauli::kY, 1)});
        out.push_back({"+XY", -0.5, "imag", false, quarter(Pauli::kX, Pauli::kY, -1)});
        out.push_back({"-YX", -0.5, "imag", false, quarter(Pauli::kY, Pauli::kX, 1)});
        out.push_back({"+YX", 0.5, "imag", false, quarter(Pauli::kY, Pauli::kX, -1)});
    }
    return out;
}

std::string format_time(double t) { return fmt::format("{:.6g}", t); }

std::vector<MeasurementPlan> plan_current(const model::SpinChainModel &m, double dt,
                                          const qcore::ProductState &initial, int j,
                                          const std::vector<int> &targets, int k1, int k2,
                                          Part part, PlanOptions options)
{
    m.validate();
    check_initial(m, initial);
    check_bond(m, j);
    if (targets.empty()) {
        throw std::invalid_argument("plan needs at least one target bond");
    }
    std::set<int> unique;
    for (int i : targets) {
        check_bond(m, i);
        unique.insert(i);
    }
    const auto variants = current_variants(m, j, part, options.neel_symmetry);

    std::vector<int> kept;
    std::vector<int> pruned;
    if (options.lightcone) {
        const auto cone = forward_cone(m, dt, initial, k1, k2, variants);
        for (int i : unique) {
            const auto [a, b] = m.bond_sites(i);
            (cone.count(a) || cone.count(b) ? kept : pruned).push_back(i);
        }
    } else {
        kept.assign(unique.begin(), unique.end());
    }

    std::vector<MeasurementPlan> plans;
    const auto groups = partition_targets(m, kept);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        MeasurementPlan plan;
        plan.id = fmt::format("{}-j{}-t{}-s{}-g{}", to_string(part), j,
                              format_time(k1 * dt), format_time(k2 * dt), g);
        plan.part = part;
        plan.source_bond = j;
        plan.targets = groups[g];
        plan.normalization = m.coupling * m.coupling / 16.0;
        plan.t1 = k1 * dt;
        plan.t2 = k2 * dt;
        plan.dt = dt;
        plan.initial = initial;
        if (g == 0) {
            plan.pruned_targets = pruned;
        }
        Circuit basis(m.n_sites, 0);
        current_readout(m, groups[g], basis, plan.readout);
        for (const auto &v : variants) {
            PlanCircuit pc =
                finish_circuit(m, dt, initial, k1, k2, v, basis, plan.readout, options.lightcone);
            pc.circuit.set_label(plan.id + "/" + v.label);
            plan.circuits.push_back(std::move(pc));
        }
        plans.push_back(std::move(plan));
    }
    if (groups.empty()) {
        // Every target was outside the light cone: an empty plan records them.
        MeasurementPlan plan;
        plan.id = fmt::format("{}-j{}-t{}-s{}-empty", to_string(part), j, format_time(k1 * dt),
                              format_time(k2 * dt));
        plan.part = part;
        plan.source_bond = j;
        plan.normalization = m.coupling * m.coupling / 16.0;
        plan.t1 = k1 * dt;
        plan.t2 = k2 * dt;
        plan.dt = dt;
        plan.initial = initial;
        plan.pruned_targets = pruned;
        plans.push_back(std::move(plan));
    }
    return plans;
}

std::vector<std::pair<int, Pauli>> letters_of(const model::PauliTerm &t)
{
    return {t.letters.begin(), t.letters.end()};
}

} // namespace

std::string_view to_string(Part part) { return part == Part::kReal ? "real" : "imag"; }

const PlanCircuit &MeasurementPlan::circuit(std::string_view label) const
{
    for (const auto &c : circuits) {
        if (c.label == label) {
            return c;
        }
    }
    throw std::out_of_range(fmt::format("plan {} has no circuit labelled '{}'", id, label));
}

std::vector<std::vector<int>> partition_targets(const model::SpinChainModel &m,
                                                const std::vector<int> &targets)
{
    std::vector<int> sorted(targets);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::vector<int>> groups;
    std::vector<std::set<int>> sites;
    for (int r : sorted) {
        const auto [a, b] = m.bond_sites(r);
        std::size_t g = 0;
        for (; g < groups.size(); ++g) {
            if (!sites[g].count(a) && !sites[g].count(b)) {
                break;
            }
        }
        if (g == groups.size()) {
            groups.emplace_back();
            sites.emplace_back();
        }
        groups[g].push_back(r);
        sites[g].insert(a);
        sites[g].insert(b);
    }
    return groups;
}

std::vector<MeasurementPlan> plan_real(const model::SpinChainModel &model,
                                       const model::TrotterSpec &trotter,
                                       const qcore::ProductState &initial, int j,
                                       const std::vector<int> &targets, PlanOptions options)
{
    trotter.validate();
    return plan_current(model, trotter.dt, initial, j, targets, trotter.n_steps, 0, Part::kReal,
                        options);
}

std::vector<MeasurementPlan> plan_imag(const model::SpinChainModel &model,
                                       const model::TrotterSpec &trotter,
                                       const qcore::ProductState &initial, int j,
                                       const std::vector<int> &targets, PlanOptions options)
{
    trotter.validate();
    return plan_current(model, trotter.dt, initial, j, targets, trotter.n_steps, 0,
                        Part::kImaginary, options);
}

std::vector<MeasurementPlan> plan_two_time(const model::SpinChainModel &model, double dt,
                                           const qcore::ProductState &initial, int j,
                                           const std::vector<int> &targets, double t1, double t2,
                                           Part part, PlanOptions options)
{
    const int k1 = model::steps_for_time(t1, dt);
    const int k2 = model::steps_for_time(t2, dt);
    if (k1 < k2) {
        throw std::invalid_argument(fmt::format("two-time plan needs t1 >= t2, got {} < {}", t1, t2));
    }
    return plan_current(model, dt, initial, j, targets, k1, k2, part, options);
}

std::vector<MeasurementPlan> batch_translation(const model::SpinChainModel &model,
                                               const model::TrotterSpec &trotter,
                                               const qcore::ProductState &initial,
                                               PlanOptions options)
{
    std::vector<int> all(static_cast<std::size_t>(model.n_bonds()));
    for (int r = 0; r < model.n_bonds(); ++r) {
        all[static_cast<std::size_t>(r)] = r;
    }
    auto plans = plan_real(model, trotter, initial, 0, all, options);
    auto imag = plan_imag(model, trotter, initial, 0, all, options);
    plans.insert(plans.end(), std::make_move_iterator(imag.begin()),
                 std::make_move_iterator(imag.end()));
    return plans;
}

void GeneralTarget::validate() const
{
    for (const auto &t : z_form.terms()) {
        for (const auto &[site, p] : t.letters) {
            if (p != Pauli::kZ) {
                throw std::invalid_argument(
                    fmt::format("z_form term {} is not a Z string", t.to_string()));
            }
        }
        if (std::abs(t.coefficient.imag()) > 1e-14) {
            throw std::invalid_argument("z_form coefficients must be real");
        }
        // A pure Z string squares to the identity; anything else was rejected above.
        const auto sq = model::multiply(model::PauliTerm{1.0, t.letters},
                                        model::PauliTerm{1.0, t.letters});
        if (!sq.letters.empty() || std::abs(sq.coefficient - Complex(1.0, 0.0)) > 1e-14) {
            throw std::invalid_argument("z_form term does not square to the identity");
        }
    }
    std::set<int> support;
    for (const auto &t : original.terms()) {
        for (const auto &[site, p] : t.letters) {
            support.insert(site);
        }
    }
    for (const auto &t : z_form.terms()) {
        for (const auto &[site, p] : t.letters) {
            support.insert(site);
        }
    }
    for (const auto &ins : basis_change.instructions()) {
        for (int q : ins.qubits()) {
            support.insert(q);
        }
    }
    if (support.size() > 3 || support.empty()) {
        return;
    }
    // Compare on the support only: remap sites onto 0..k-1.
    std::map<int, int> local;
    for (int q : support) {
        local[q] = static_cast<int>(local.size());
    }
    const int k = static_cast<int>(support.size());
    auto remap = [&](const model::Observable &o) {
        model::Observable out;
        for (const auto &t : o.terms()) {
            model::PauliTerm r{t.coefficient, {}};
            for (const auto &[site, p] : t.letters) {
                r.letters[local.at(site)] = p;
            }
            out.add(r);
        }
        return out;
    };
    const auto dim = static_cast<Eigen::Index>(1) << k;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto &ins : basis_change.instructions()) {
        if (!ins.is_unitary()) {
            continue;
        }
        for (Eigen::Index col = 0; col < dim; ++col) {
            std::vector<Complex> amp(static_cast<std::size_t>(dim));
            for (Eigen::Index r = 0; r < dim; ++r) {
                amp[static_cast<std::size_t>(r)] = u(r, col);
            }
            auto s = qcore::StateVector::from_amplitudes(k, amp);
            qcore::Instruction mapped = ins;
            if (auto *g1 = std::get_if<qcore::Unitary1>(&mapped.op)) {
                g1->q = local.at(g1->q);
            } else if (auto *g2 = std::get_if<qcore::Unitary2>(&mapped.op)) {
                g2->q1 = local.at(g2->q1);
                g2->q2 = local.at(g2->q2);
            }
            qcore::apply_instruction(s, mapped);
            for (Eigen::Index r = 0; r < dim; ++r) {
                u(r, col) = s[static_cast<std::size_t>(r)];
            }
        }
    }
    const Eigen::MatrixXcd lhs = u.adjoint() * model::observable_matrix(remap(z_form), k) * u;
    const Eigen::MatrixXcd rhs = model::observable_matrix(remap(original), k);
    if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("basis change does not map z_form onto the original operator");
    }
}

GeneralTarget current_target(const model::SpinChainModel &m, int bond)
{
    const auto [a, b] = m.bond_sites(bond);
    GeneralTarget g;
    g.basis_change = Circuit(m.n_sites, 0);
    append_t(g.basis_change, a, b, false);
    g.z_form = model::Observable({model::PauliTerm::from_string(1.0, {{b, 'Z'}}),
                                  model::PauliTerm::from_string(-1.0, {{a, 'Z'}})});
    g.original = model::Observable({model::PauliTerm::from_string(1.0, {{a, 'X'}, {b, 'Y'}}),
                                    model::PauliTerm::from_string(-1.0, {{a, 'Y'}, {b, 'X'}})});
    return g;
}

GeneralTarget pauli_target(int n_qubits, int site, Pauli pauli)
{
    GeneralTarget g;
    g.basis_change = Circuit(n_qubits, 0);
    if (pauli == Pauli::kI) {
        return identity_target(n_qubits);
    }
    if (pauli == Pauli::kX) {
        g.basis_change.add_unitary1(site, gates::hadamard(), Role::kBasis, GateTag{"h", {}});
    } else if (pauli == Pauli::kY) {
        g.basis_change.add_unitary1(site, gates::s_dagger(), Role::kBasis, GateTag{"sdg", {}});
        g.basis_change.add_unitary1(site, gates::hadamard(), Role::kBasis, GateTag{"h", {}});
    }
    g.z_form = model::Observable({model::PauliTerm::from_string(1.0, {{site, 'Z'}})});
    g.original = model::Observable({model::PauliTerm::from_string(1.0, {{site, qcore::to_char(pauli)}})});
    return g;
}

GeneralTarget identity_target(int n_qubits)
{
    GeneralTarget g;
    g.basis_change = Circuit(n_qubits, 0);
    g.z_form = model::Observable({model::PauliTerm::from_string(1.0, {})});
    g.original = g.z_form;
    return g;
}

MeasurementPlan plan_general_correlation(const model::SpinChainModel &m, double dt,
                                         const qcore::ProductState &initial,
                                         const GeneralTarget &w, const GeneralTarget &g, double t1,
                                         double t2, Part part, PlanOptions options)
{
    m.validate();
    check_initial(m, initial);
    w.validate();
    g.validate();
    const int k1 = model::steps_for_time(t1, dt);
    const int k2 = model::steps_for_time(t2, dt);
    if (k1 < k2) {
        throw std::invalid_argument("general correlation needs t1 >= t2");
    }
    std::vector<Variant> variants;
    const auto &ub = g.basis_change;
    int term_index = 0;
    for (const auto &t : g.z_form.terms()) {
        const auto letters = letters_of(t);
        const double c = t.coefficient.real();
        const int k = term_index++;
        if (part == Part::kReal) {
            if (letters.size() > 1) {
                throw std::invalid_argument(
                    "real part of a weight-two source term needs an ancilla, which is not supported");
            }
            if (letters.empty()) {
                variants.push_back({fmt::format("id#{}", k), c, "identity", false,
                                    [](Circuit &) {}});
                continue;
            }
            const int q = letters[0].first;
            variants.push_back({fmt::format("mcm@q{}#{}", q, k), c, fmt::format("mcm@q{}", q), true,
                                [&ub, q](Circuit &cc) {
                                    append_fragment(cc, ub, false, Role::kProtocol);
                                    cc.add_mid_measure(q, 0);
                                    append_fragment(cc, ub, true, Role::kProtocol);
                                }});
            continue;
        }
        if (letters.empty()) {
            continue; // Im<W> is zero for Hermitian W.
        }
        if (letters.size() > 2) {
            throw std::invalid_argument("imaginary part supports source terms of weight at most two");
        }
        for (int sign : {1, -1}) {
            qcore::Matrix4 gate4;
            qcore::Matrix2 gate2;
            const double th = sign * kQuarterPi;
            if (letters.size() == 1) {
                gate2 = gates::rz(2.0 * th);
            } else {
                gate4 = gates::xxz_exponential(0.0, 0.0, th);
            }
            std::vector<int> qs;
            for (const auto &[site, p] : letters) {
                qs.push_back(site);
            }
            const std::string label = fmt::format("{}Z#{}", sign > 0 ? '-' : '+', k);
            variants.push_back({label, sign * c / 2.0, "imag", false,
                                [&ub, qs, gate2, gate4, th](Circuit &cc) {
                                    append_fragment(cc, ub, false, Role::kProtocol);
                                    if (qs.size() == 1) {
                                        cc.add_unitary1(qs[0], gate2, Role::kProtocol);
                                    } else {
                                        cc.add_unitary2(qs[0], qs[1], gate4, Role::kProtocol, model::xxz_tag(0.0, 0.0, th));
                                    }
                                    append_fragment(cc, ub, true, Role::kProtocol);
                                }});
        }
    }
    MeasurementPlan plan;
    plan.id = fmt::format("general-{}-t{}-s{}", to_string(part), format_time(t1), format_time(t2));
    plan.part = part;
    plan.source_bond = -1;
    plan.targets = {0};
    plan.normalization = 1.0;
    plan.t1 = k1 * dt;
    plan.t2 = k2 * dt;
    plan.dt = dt;
    plan.initial = initial;
    for (const auto &t : w.z_form.terms()) {
        ReadoutTerm r{0, {}, t.coefficient.real()};
        for (const auto &[site, p] : t.letters) {
            r.qubits.push_back(site);
        }
        plan.readout.push_back(r);
    }
    for (const auto &v : variants) {
        PlanCircuit pc = finish_circuit(m, dt, initial, k1, k2, v, w.basis_change, plan.readout,
                                        options.lightcone);
        pc.circuit.set_label(plan.id + "/" + v.label);
        plan.circuits.push_back(std::move(pc));
    }
    return plan;
}

} // namespace spintransport::protocol
