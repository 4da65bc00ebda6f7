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

#include "spintransport/cli/qasm.hpp"

#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "spintransport/qcore/gates.hpp"

namespace spintransport::cli {

namespace {

using qcore::Complex;
using qcore::Pauli;
namespace gates = qcore::gates;

constexpr double kHalfPi = std::numbers::pi / 2.0;

std::string num(double x) { return fmt::format("{:.17g}", x); }

void line(std::string &out, const std::string &text) { out += text + ";\n"; }

std::string q(int i) { return fmt::format("q[{}]", i); }

void emit_xxz(std::string &out, int q1, int q2, double a, double b, double c)
{
    line(out, fmt::format("rz({}) {}", num(kHalfPi), q(q2)));
    line(out, fmt::format("cx {}, {}", q(q2), q(q1)));
    line(out, fmt::format("rz({}) {}", num(kHalfPi + 2.0 * c), q(q1)));
    line(out, fmt::format("ry({}) {}", num(kHalfPi + 2.0 * a), q(q2)));
    line(out, fmt::format("cx {}, {}", q(q1), q(q2)));
    line(out, fmt::format("ry({}) {}", num(-kHalfPi - 2.0 * b), q(q2)));
    line(out, fmt::format("cx {}, {}", q(q2), q(q1)));
    line(out, fmt::format("rz({}) {}", num(-kHalfPi), q(q1)));
}

/// Basis change taking Z onto the given Pauli, and its inverse.
void emit_basis(std::string &out, Pauli p, int qubit, bool inverse)
{
    if (p == Pauli::kX) {
        line(out, fmt::format("h {}", q(qubit)));
    } else if (p == Pauli::kY) {
        line(out, fmt::format("rx({}) {}", num(inverse ? -kHalfPi : kHalfPi), q(qubit)));
    } else if (p != Pauli::kZ) {
        throw std::invalid_argument("quarter turn needs non-identity Paulis");
    }
}

void emit_quarter(std::string &out, int q1, int q2, Pauli p1, Pauli p2, int sign)
{
    emit_basis(out, p1, q1, false);
    emit_basis(out, p2, q2, false);
    line(out, fmt::format("cx {}, {}", q(q1), q(q2)));
    line(out, fmt::format("rz({}) {}", num(sign * kHalfPi), q(q2)));
    line(out, fmt::format("cx {}, {}", q(q1), q(q2)));
    emit_basis(out, p1, q1, true);
    emit_basis(out, p2, q2, true);
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace

qcore::Matrix2 u_matrix(double theta, double phi, double lambda)
{
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    qcore::Matrix2 u;
    u << c, -std::exp(Complex(0.0, lambda)) * s, std::exp(Complex(0.0, phi)) * s,
        std::exp(Complex(0.0, phi + lambda)) * c;
    return u;
}

UAngles u_angles(const qcore::Matrix2 &u)
{
    const double theta = 2.0 * std::atan2(std::abs(u(1, 0)), std::abs(u(0, 0)));
    constexpr double eps = 1e-12;
    if (std::abs(u(1, 0)) < eps) {
        return {theta, 0.0, std::arg(u(1, 1)) - std::arg(u(0, 0))};
    }
    if (std::abs(u(0, 0)) < eps) {
        return {theta, 0.0, std::arg(-u(0, 1)) - std::arg(u(1, 0))};
    }
    const double g = std::arg(u(0, 0));
    return {theta, std::arg(u(1, 0)) - g, std::arg(-u(0, 1)) - g};
}

std::string to_qasm(const qcore::Circuit &circuit)
{
    std::string out = "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n";
    if (!circuit.label().empty()) {
        out += "// " + circuit.label() + "\n";
    }
    line(out, fmt::format("qubit[{}] q", circuit.n_qubits()));
    if (circuit.n_cbits() > 0) {
        line(out, fmt::format("bit[{}] c", circuit.n_cbits()));
    }
    for (const auto &ins : circuit.instructions()) {
        if (const auto *m = std::get_if<qcore::MidMeasureZ>(&ins.op)) {
            line(out, fmt::format("c[{}] = measure {}", m->cbit, q(m->q)));
        } else if (const auto *f = std::get_if<qcore::FinalMeasureZ>(&ins.op)) {
            line(out, fmt::format("c[{}] = measure {}", f->cbit, q(f->q)));
        } else if (const auto *g1 = std::get_if<qcore::Unitary1>(&ins.op)) {
            const auto &name = ins.tag.name;
            if (name == "x" || name == "h" || name == "sdg") {
                line(out, fmt::format("{} {}", name, q(g1->q)));
            } else {
                const auto a = u_angles(g1->u);
                line(out, fmt::format("U({}, {}, {}) {}", num(a.theta), num(a.phi), num(a.lambda), q(g1->q)));
            }
        } else if (const auto *g2 = std::get_if<qcore::Unitary2>(&ins.op)) {
            const auto &t = ins.tag;
            if (t.name == "xxz" && t.params.size() == 3) {
                emit_xxz(out, g2->q1, g2->q2, t.params[0], t.params[1], t.params[2]);
            } else if (t.name == "pauli_quarter" && t.params.size() == 3) {
                emit_quarter(out, g2->q1, g2->q2, static_cast<Pauli>(static_cast<int>(t.params[0])),
                             static_cast<Pauli>(static_cast<int>(t.params[1])), static_cast<int>(t.params[2]));
            } else if (t.name == "cX" || t.name == "cY" || t.name == "cZ") {
                line(out, fmt::format("c{} {}, {}", static_cast<char>(std::tolower(t.name[1])), q(g2->q1), q(g2->q2)));
            } else {
                throw std::invalid_argument(
                    fmt::format("cannot export two-qubit gate with tag '{}'", t.name));
            }
        }
    }
    return out;
}

qcore::Circuit parse_qasm(std::string_view text)
{
    static const std::regex header(R"(OPENQASM\s+3(\.0)?)");
    static const std::regex include(R"(include\s+"stdgates\.inc")");
    static const std::regex qreg(R"(qubit\[(\d+)\]\s+q)");
    static const std::regex creg(R"(bit\[(\d+)\]\s+c)");
    static const std::regex measure(R"(c\[(\d+)\]\s*=\s*measure\s+q\[(\d+)\])");
    static const std::regex gate(
        R"(([A-Za-z]+)\s*(?:\(([^)]*)\))?\s+q\[(\d+)\]\s*(?:,\s*q\[(\d+)\])?)");

    struct Stmt {
        bool is_measure;
        int cbit;
        int q1;
        int q2;
        std::string name;
        std::vector<double> params;
    };
    std::vector<Stmt> stmts;
    int n_qubits = -1;
    int n_cbits = 0;
    bool seen_header = false;

    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto s = raw;
        if (const auto c = s.find("//"); c != std::string::npos) {
            s.resize(c);
        }
        s = trim(s);
        if (s.empty()) {
            continue;
        }
        if (s.back() != ';') {
            throw std::invalid_argument(fmt::format("line {}: missing ';'", lineno));
        }
        s = trim(std::string_view(s).substr(0, s.size() - 1));
        std::smatch m;
        auto fail = [&](const std::string &why) {
            return std::invalid_argument(fmt::format("line {}: {}", lineno, why));
        };
        if (!seen_header) {
            if (!std::regex_match(s, header)) {
                throw fail("expected OPENQASM 3 header");
            }
            seen_header = true;
        } else if (std::regex_match(s, include)) {
            continue;
        } else if (std::regex_match(s, m, qreg)) {
            n_qubits = std::stoi(m[1]);
        } else if (std::regex_match(s, m, creg)) {
            n_cbits = std::stoi(m[1]);
        } else if (std::regex_match(s, m, measure)) {
            stmts.push_back({true, std::stoi(m[1]), std::stoi(m[2]), -1, {}, {}});
        } else if (std::regex_match(s, m, gate)) {
            if (n_qubits < 0) {
                throw fail("gate before qubit declaration");
            }
            Stmt st{false, -1, std::stoi(m[3]), m[4].matched ? std::stoi(m[4]) : -1, m[1], {}};
            if (m[2].matched) {
                std::stringstream ps(m[2].str());
                std::string tok;
                while (std::getline(ps, tok, ',')) {
                    std::size_t used = 0;
                    const auto t = trim(tok);
                    double v = 0.0;
                    try {
                        v = std::stod(t, &used);
                    } catch (const std::exception &) {
                        throw fail(fmt::format("bad parameter '{}'", t));
                    }
                    if (used != t.size()) {
                        throw fail(fmt::format("bad parameter '{}'", t));
                    }
                    st.params.push_back(v);
                }
            }
            stmts.push_back(std::move(st));
        } else {
            throw fail(fmt::format("unrecognised statement '{}'", s));
        }
    }
    if (!seen_header || n_qubits < 1) {
        throw std::invalid_argument("missing header or qubit declaration");
    }

    // A measurement is final when nothing later touches its qubit.
    std::vector<bool> final_measure(stmts.size(), false);
    std::vector<bool> touched(static_cast<std::size_t>(n_qubits), false);
    for (std::size_t k = stmts.size(); k-- > 0;) {
        const auto &st = stmts[k];
        if (st.q1 < 0 || st.q1 >= n_qubits || st.q2 >= n_qubits) {
            throw std::invalid_argument(fmt::format("qubit index out of range in statement {}", k));
        }
        if (st.is_measure) {
            final_measure[k] = !touched[static_cast<std::size_t>(st.q1)];
        }
        touched[static_cast<std::size_t>(st.q1)] = true;
        if (st.q2 >= 0) {
            touched[static_cast<std::size_t>(st.q2)] = true;
        }
    }

    qcore::Circuit c(n_qubits, n_cbits);
    auto need = [](const Stmt &st, std::size_t np, bool two) {
        if (st.params.size() != np || (st.q2 >= 0) != two) {
            throw std::invalid_argument(fmt::format("wrong arity for gate '{}'", st.name));
        }
    };
    for (std::size_t k = 0; k < stmts.size(); ++k) {
        const auto &st = stmts[k];
        if (st.is_measure) {
            if (final_measure[k]) {
                c.add_final_measure(st.q1, st.cbit);
            } else {
                c.add_mid_measure(st.q1, st.cbit);
            }
            continue;
        }
        const qcore::GateTag tag{st.name, st.params};
        const auto &n = st.name;
        if (n == "x" || n == "y" || n == "z" || n == "h" || n == "s" || n == "sdg") {
            need(st, 0, false);
            const qcore::Matrix2 u = n == "x"   ? gates::pauli(Pauli::kX)
                                     : n == "y" ? gates::pauli(Pauli::kY)
                                     : n == "z" ? gates::pauli(Pauli::kZ)
                                     : n == "h" ? gates::hadamard()
                                     : n == "s" ? gates::s_gate()
                                                : gates::s_dagger();
            c.add_unitary1(st.q1, u, qcore::Role::kOther, tag);
        } else if (n == "rx" || n == "ry" || n == "rz") {
            need(st, 1, false);
            const double a = st.params[0];
            c.add_unitary1(st.q1, n == "rx" ? gates::rx(a) : n == "ry" ? gates::ry(a) : gates::rz(a),
                           qcore::Role::kOther, tag);
        } else if (n == "U") {
            need(st, 3, false);
            c.add_unitary1(st.q1, u_matrix(st.params[0], st.params[1], st.params[2]), qcore::Role::kOther, tag);
        } else if (n == "cx" || n == "cy" || n == "cz") {
            need(st, 0, true);
            const Pauli p = n == "cx" ? Pauli::kX : n == "cy" ? Pauli::kY : Pauli::kZ;
            c.add_unitary2(st.q1, st.q2, gates::controlled(gates::pauli(p)), qcore::Role::kOther, tag);
        } else {
            throw std::invalid_argument(fmt::format("unsupported gate '{}'", n));
        }
    }
    c.validate();
    return c;
}

} // namespace spintransport::cli
