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

#include "spintransport/model/pauli.hpp"

#include <bit>
#include <stdexcept>

#include <fmt/format.h>

namespace spintransport::model {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex i_power(int k)
{
    switch (((k % 4) + 4) % 4) {
    case 0:
        return {1.0, 0.0};
    case 1:
        return kI;
    case 2:
        return {-1.0, 0.0};
    default:
        return -kI;
    }
}

/// Single-site product a*b = phase * c.
std::pair<Complex, Pauli> multiply_letters(Pauli a, Pauli b)
{
    if (a == Pauli::kI) {
        return {1.0, b};
    }
    if (b == Pauli::kI) {
        return {1.0, a};
    }
    if (a == b) {
        return {1.0, Pauli::kI};
    }
    const int ia = static_cast<int>(a);
    const int ib = static_cast<int>(b);
    const int ic = 6 - ia - ib;
    // XY = iZ, YZ = iX, ZX = iY; reversed order flips the sign.
    const bool cyclic = (ib - ia + 3) % 3 == 1;
    return {cyclic ? kI : -kI, static_cast<Pauli>(ic)};
}

int check_site(int site)
{
    if (site < 0 || site >= qcore::kHardMaxQubits) {
        throw std::out_of_range(fmt::format("Pauli site {} out of range", site));
    }
    return site;
}

} // namespace

PauliTerm PauliTerm::from_string(Complex coefficient, const std::map<int, char> &letters)
{
    PauliTerm t;
    t.coefficient = coefficient;
    for (const auto &[site, c] : letters) {
        const Pauli p = qcore::pauli_from_char(c);
        if (p != Pauli::kI) {
            t.letters[check_site(site)] = p;
        }
    }
    return t;
}

std::uint64_t PauliTerm::flip_mask() const noexcept
{
    std::uint64_t m = 0;
    for (const auto &[site, p] : letters) {
        if (p == Pauli::kX || p == Pauli::kY) {
            m |= std::uint64_t{1} << site;
        }
    }
    return m;
}

std::uint64_t PauliTerm::phase_mask() const noexcept
{
    std::uint64_t m = 0;
    for (const auto &[site, p] : letters) {
        if (p == Pauli::kY || p == Pauli::kZ) {
            m |= std::uint64_t{1} << site;
        }
    }
    return m;
}

int PauliTerm::count_y() const noexcept
{
    int n = 0;
    for (const auto &[site, p] : letters) {
        n += p == Pauli::kY ? 1 : 0;
    }
    return n;
}

int PauliTerm::max_site() const noexcept { return letters.empty() ? -1 : letters.rbegin()->first; }

std::string PauliTerm::to_string() const
{
    std::string s = fmt::format("({:.6g}{:+.6g}i)", coefficient.real(), coefficient.imag());
    if (letters.empty()) {
        return s + " I";
    }
    for (const auto &[site, p] : letters) {
        s += fmt::format(" {}{}", qcore::to_char(p), site);
    }
    return s;
}

PauliTerm multiply(const PauliTerm &a, const PauliTerm &b)
{
    PauliTerm out;
    out.coefficient = a.coefficient * b.coefficient;
    out.letters = a.letters;
    for (const auto &[site, p] : b.letters) {
        auto it = out.letters.find(site);
        if (it == out.letters.end()) {
            out.letters[site] = p;
            continue;
        }
        const auto [phase, letter] = multiply_letters(it->second, p);
        out.coefficient *= phase;
        if (letter == Pauli::kI) {
            out.letters.erase(it);
        } else {
            it->second = letter;
        }
    }
    return out;
}

Observable::Observable(std::vector<PauliTerm> terms, bool hermitian) : terms_(std::move(terms))
{
    if (hermitian) {
        mark_hermitian();
    }
}

void Observable::add(PauliTerm term)
{
    terms_.push_back(std::move(term));
    if (hermitian_ && !is_formally_hermitian()) {
        hermitian_ = false;
        throw std::invalid_argument("adding the term breaks the Hermitian flag");
    }
}

void Observable::mark_hermitian()
{
    if (!is_formally_hermitian()) {
        throw std::invalid_argument("observable is not formally Hermitian");
    }
    hermitian_ = true;
}

Observable Observable::simplified(double tol) const
{
    std::map<std::map<int, Pauli>, Complex> merged;
    std::vector<std::map<int, Pauli>> order;
    for (const auto &t : terms_) {
        auto [it, inserted] = merged.try_emplace(t.letters, Complex{0.0, 0.0});
        if (inserted) {
            order.push_back(t.letters);
        }
        it->second += t.coefficient;
    }
    Observable out;
    for (const auto &letters : order) {
        const Complex c = merged[letters];
        if (std::abs(c) > tol) {
            out.terms_.push_back(PauliTerm{c, letters});
        }
    }
    return out;
}

bool Observable::is_formally_hermitian(double tol) const
{
    for (const auto &t : simplified().terms_) {
        if (std::abs(t.coefficient.imag()) > tol) {
            return false;
        }
    }
    return true;
}

int Observable::max_site() const noexcept
{
    int m = -1;
    for (const auto &t : terms_) {
        m = std::max(m, t.max_site());
    }
    return m;
}

Observable &Observable::operator*=(Complex s)
{
    for (auto &t : terms_) {
        t.coefficient *= s;
    }
    if (s.imag() != 0.0) {
        hermitian_ = false;
    }
    return *this;
}

Observable operator+(const Observable &a, const Observable &b)
{
    Observable out;
    out.terms_ = a.terms_;
    out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
    return out;
}

Observable operator*(const Observable &a, const Observable &b)
{
    Observable out;
    for (const auto &ta : a.terms_) {
        for (const auto &tb : b.terms_) {
            out.terms_.push_back(multiply(ta, tb));
        }
    }
    return out.simplified();
}

qcore::StateVector apply_observable(const Observable &observable, const qcore::StateVector &state)
{
    if (observable.max_site() >= state.n_qubits()) {
        throw std::out_of_range("observable acts on a site beyond the state");
    }
    qcore::StateVector out(state.n_qubits());
    auto dst = out.amplitudes();
    dst[0] = 0.0;
    const auto src = state.amplitudes();
    for (const auto &t : observable.terms()) {
        const std::uint64_t flip = t.flip_mask();
        const std::uint64_t phase = t.phase_mask();
        const Complex c = t.coefficient * i_power(t.count_y());
        // P = i^{nY} X^flip Z^phase, so P|b> = i^{nY} (-1)^{|b & phase|} |b ^ flip>.
        for (std::uint64_t b = 0; b < src.size(); ++b) {
            const Complex a = src[b];
            if (a == Complex{0.0, 0.0}) {
                continue;
            }
            const bool odd = std::popcount(b & phase) & 1;
            dst[b ^ flip] += odd ? -c * a : c * a;
        }
    }
    return out;
}

Complex expect_observable(const qcore::StateVector &state, const Observable &observable)
{
    if (observable.max_site() >= state.n_qubits()) {
        throw std::out_of_range("observable acts on a site beyond the state");
    }
    const auto amp = state.amplitudes();
    Complex acc{0.0, 0.0};
    for (const auto &t : observable.terms()) {
        const std::uint64_t flip = t.flip_mask();
        const std::uint64_t phase = t.phase_mask();
        const Complex c = t.coefficient * i_power(t.count_y());
        Complex term{0.0, 0.0};
        for (std::uint64_t b = 0; b < amp.size(); ++b) {
            const Complex v = std::conj(amp[b ^ flip]) * amp[b];
            term += (std::popcount(b & phase) & 1) ? -v : v;
        }
        acc += c * term;
    }
    return acc;
}

Eigen::MatrixXcd observable_matrix(const Observable &observable, int n_qubits)
{
    if (n_qubits < 1 || n_qubits > 14) {
        throw std::invalid_argument("observable_matrix supports 1..14 qubits");
    }
    if (observable.max_site() >= n_qubits) {
        throw std::out_of_range("observable acts on a site beyond the register");
    }
    const auto dim = static_cast<Eigen::Index>(1) << n_qubits;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto &t : observable.terms()) {
        const std::uint64_t flip = t.flip_mask();
        const std::uint64_t phase = t.phase_mask();
        const Complex c = t.coefficient * i_power(t.count_y());
        for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
            const bool odd = std::popcount(b & phase) & 1;
            m(static_cast<Eigen::Index>(b ^ flip), static_cast<Eigen::Index>(b)) += odd ? -c : c;
        }
    }
    return m;
}

} // namespace spintransport::model
