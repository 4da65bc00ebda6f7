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

#include "spintransport/oracle/exact.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "spintransport/model/trotter.hpp"

namespace spintransport::oracle {

namespace {

constexpr Complex kI{0.0, 1.0};

struct Sector {
    std::vector<std::uint64_t> basis;
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
};

struct SectorDecomposition {
    std::vector<Sector> sectors;
};

using CacheKey = std::tuple<int, double, double, int>;

std::mutex &cache_mutex()
{
    static std::mutex m;
    return m;
}

std::map<CacheKey, std::shared_ptr<const SectorDecomposition>> &cache()
{
    static std::map<CacheKey, std::shared_ptr<const SectorDecomposition>> c;
    return c;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> bond_masks(const model::SpinChainModel &m)
{
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (int r = 0; r < m.n_bonds(); ++r) {
        const auto [a, b] = m.bond_sites(r);
        out.emplace_back(std::uint64_t{1} << a, std::uint64_t{1} << b);
    }
    return out;
}

double diagonal_energy(const std::vector<std::pair<std::uint64_t, std::uint64_t>> &bonds,
                       double zz, std::uint64_t b)
{
    double e = 0.0;
    for (const auto &[ma, mb] : bonds) {
        const bool same = ((b & ma) != 0) == ((b & mb) != 0);
        e += same ? zz : -zz;
    }
    return e;
}

std::shared_ptr<const SectorDecomposition> decomposition(const model::SpinChainModel &m)
{
    const CacheKey key{m.n_sites, m.coupling, m.anisotropy, static_cast<int>(m.boundary)};
    {
        std::lock_guard lock(cache_mutex());
        auto it = cache().find(key);
        if (it != cache().end()) {
            return it->second;
        }
    }
    auto dec = std::make_shared<SectorDecomposition>();
    const auto bonds = bond_masks(m);
    const double zz = m.coupling * m.anisotropy / 4.0;
    const double hop = m.coupling / 2.0;
    const std::uint64_t dim = std::uint64_t{1} << m.n_sites;
    dec->sectors.resize(static_cast<std::size_t>(m.n_sites + 1));
    for (std::uint64_t b = 0; b < dim; ++b) {
        dec->sectors[static_cast<std::size_t>(std::popcount(b))].basis.push_back(b);
    }
    for (auto &sec : dec->sectors) {
        const auto size = static_cast<Eigen::Index>(sec.basis.size());
        std::map<std::uint64_t, Eigen::Index> position;
        for (Eigen::Index k = 0; k < size; ++k) {
            position[sec.basis[static_cast<std::size_t>(k)]] = k;
        }
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);
        for (Eigen::Index k = 0; k < size; ++k) {
            const std::uint64_t b = sec.basis[static_cast<std::size_t>(k)];
            h(k, k) = diagonal_energy(bonds, zz, b);
            for (const auto &[ma, mb] : bonds) {
                if (((b & ma) != 0) != ((b & mb) != 0)) {
                    h(position.at(b ^ (ma | mb)), k) += hop;
                }
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("sector eigendecomposition failed");
        }
        sec.energies = solver.eigenvalues();
        sec.vectors = solver.eigenvectors();
    }
    std::lock_guard lock(cache_mutex());
    return cache().try_emplace(key, std::move(dec)).first->second;
}

StateVector dense_evolve(const model::SpinChainModel &m, const StateVector &state, double t)
{
    const auto dec = decomposition(m);
    StateVector out(state.n_qubits());
    out[0] = 0.0;
    for (const auto &sec : dec->sectors) {
        const auto size = static_cast<Eigen::Index>(sec.basis.size());
        Eigen::VectorXcd local(size);
        bool empty = true;
        for (Eigen::Index k = 0; k < size; ++k) {
            local(k) = state[sec.basis[static_cast<std::size_t>(k)]];
            empty = empty && local(k) == Complex{0.0, 0.0};
        }
        if (empty) {
            continue;
        }
        Eigen::VectorXcd coeff = sec.vectors.transpose().cast<Complex>() * local;
        for (Eigen::Index k = 0; k < size; ++k) {
            coeff(k) *= std::exp(-kI * sec.energies(k) * t);
        }
        const Eigen::VectorXcd back = sec.vectors.cast<Complex>() * coeff;
        for (Eigen::Index k = 0; k < size; ++k) {
            out[sec.basis[static_cast<std::size_t>(k)]] = back(k);
        }
    }
    return out;
}

Complex dot(const StateVector &a, const StateVector &b) { return a.inner(b); }

void axpy(Complex alpha, const StateVector &x, StateVector &y)
{
    const auto xs = x.amplitudes();
    auto ys = y.amplitudes();
    for (std::size_t k = 0; k < xs.size(); ++k) {
        ys[k] += alpha * xs[k];
    }
}

void scale(StateVector &x, Complex alpha)
{
    for (auto &a : x.amplitudes()) {
        a *= alpha;
    }
}

/// Lanczos time stepping. For each accepted substep the Krylov basis is
/// built once and the largest step meeting the error bound is taken.
StateVector krylov_evolve(const model::SpinChainModel &m, const StateVector &state, double t,
                          double tol)
{
    const std::size_t dim = state.size();
    const int m_max = static_cast<int>(std::min<std::size_t>(dim, dim > (1U << 16) ? 24 : 40));
    StateVector v = state;
    double remaining = t;
    double h_prev = t;
    StateVector w(state.n_qubits());
    while (std::abs(remaining) > 0.0) {
        const double beta0 = v.norm();
        if (beta0 == 0.0) {
            return v;
        }
        std::vector<StateVector> basis;
        basis.reserve(static_cast<std::size_t>(m_max));
        basis.push_back(v);
        scale(basis.back(), 1.0 / beta0);
        std::vector<double> alpha;
        std::vector<double> beta;
        bool breakdown = false;
        for (int k = 0; k < m_max; ++k) {
            apply_hamiltonian(m, basis[static_cast<std::size_t>(k)], w);
            const double a = dot(basis[static_cast<std::size_t>(k)], w).real();
            alpha.push_back(a);
            // Full reorthogonalisation keeps the small tridiagonal faithful.
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto &q : basis) {
                    axpy(-dot(q, w), q, w);
                }
            }
            const double b = w.norm();
            beta.push_back(b);
            if (b < 1e-13) {
                breakdown = true;
                break;
            }
            if (k + 1 < m_max) {
                basis.push_back(w);
                scale(basis.back(), 1.0 / b);
            }
        }
        const int size = static_cast<int>(alpha.size());
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(size, size);
        for (int k = 0; k < size; ++k) {
            tri(k, k) = alpha[static_cast<std::size_t>(k)];
            if (k + 1 < size) {
                tri(k, k + 1) = tri(k + 1, k) = beta[static_cast<std::size_t>(k)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(tri);
        const auto &theta = solver.eigenvalues();
        const auto &s = solver.eigenvectors();
        const double beta_last = beta.back();
        // Only full subspaces (size basis vectors) carry an error estimate.
        const bool exact = breakdown || size == static_cast<int>(dim);
        double h = std::copysign(std::min(std::abs(h_prev), std::abs(remaining)), remaining);
        Eigen::VectorXcd y;
        for (int attempt = 0; attempt < 60; ++attempt) {
            Eigen::VectorXcd phases(size);
            for (int k = 0; k < size; ++k) {
                phases(k) = std::exp(-kI * theta(k) * h) * s(0, k);
            }
            y = s.cast<Complex>() * phases;
            const double err = exact ? 0.0 : beta_last * std::abs(y(size - 1)) * beta0;
            if (err <= tol) {
                break;
            }
            h /= 2.0;
        }
        StateVector next(state.n_qubits());
        next[0] = 0.0;
        for (int k = 0; k < size; ++k) {
            axpy(beta0 * y(k), basis[static_cast<std::size_t>(k)], next);
        }
        v = std::move(next);
        remaining -= h;
        if (std::abs(remaining) < 1e-15 * std::max(1.0, std::abs(t))) {
            remaining = 0.0;
        }
        h_prev = 1.5 * h;
    }
    return v;
}

void check_method_limits(const model::SpinChainModel &m, const EvolutionMethod &method)
{
    m.validate();
    method.validate();
    const int limit =
        method.kind == EvolutionMethod::Kind::kDense ? kDenseMaxSites : kKrylovMaxSites;
    if (m.n_sites > limit) {
        throw std::invalid_argument(fmt::format("{} sites exceeds the {} limit of {}", m.n_sites,
                                                method.kind == EvolutionMethod::Kind::kDense
                                                    ? "dense"
                                                    : "Krylov",
                                                limit));
    }
}

void check_state(const model::SpinChainModel &m, const StateVector &s)
{
    if (s.n_qubits() != m.n_sites) {
        throw std::invalid_argument(
            fmt::format("state has {} qubits, model has {} sites", s.n_qubits(), m.n_sites));
    }
}

} // namespace

void EvolutionMethod::validate() const
{
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("evolution tolerance must be positive");
    }
}

void apply_hamiltonian(const model::SpinChainModel &m, const StateVector &in, StateVector &out)
{
    check_state(m, in);
    if (out.n_qubits() != in.n_qubits()) {
        out = StateVector(in.n_qubits());
    }
    const auto bonds = bond_masks(m);
    const double zz = m.coupling * m.anisotropy / 4.0;
    const double hop = m.coupling / 2.0;
    const auto src = in.amplitudes();
    auto dst = out.amplitudes();
    std::fill(dst.begin(), dst.end(), Complex{0.0, 0.0});
    for (std::uint64_t b = 0; b < src.size(); ++b) {
        const Complex a = src[b];
        if (a == Complex{0.0, 0.0}) {
            continue;
        }
        double diag = 0.0;
        for (const auto &[ma, mb] : bonds) {
            const bool same = ((b & ma) != 0) == ((b & mb) != 0);
            if (same) {
                diag += zz;
            } else {
                diag -= zz;
                dst[b ^ (ma | mb)] += hop * a;
            }
        }
        dst[b] += diag * a;
    }
}

StateVector apply_current(const model::SpinChainModel &m, int r, const StateVector &in)
{
    check_state(m, in);
    const auto [sa, sb] = m.bond_sites(r);
    const std::uint64_t ma = std::uint64_t{1} << sa;
    const std::uint64_t mb = std::uint64_t{1} << sb;
    const double half = m.coupling / 2.0;
    StateVector out(in.n_qubits());
    out[0] = 0.0;
    const auto src = in.amplitudes();
    auto dst = out.amplitudes();
    for (std::uint64_t b = 0; b < src.size(); ++b) {
        const bool ba = (b & ma) != 0;
        const bool bb = (b & mb) != 0;
        if (ba == bb) {
            continue;
        }
        // J |0_a 1_b> = -i J/2 |1_a 0_b>,  J |1_a 0_b> = +i J/2 |0_a 1_b>.
        const Complex c = ba ? kI * half : -kI * half;
        dst[b ^ (ma | mb)] += c * src[b];
    }
    return out;
}

StateVector exact_evolve(const model::SpinChainModel &m, const StateVector &state, double t,
                         EvolutionMethod method)
{
    check_method_limits(m, method);
    check_state(m, state);
    if (t == 0.0) {
        return state;
    }
    if (method.kind == EvolutionMethod::Kind::kDense) {
        return dense_evolve(m, state, t);
    }
    return krylov_evolve(m, state, t, method.tolerance);
}

Complex exact_acf(const model::SpinChainModel &m, const StateVector &state0, int i, int j,
                  double t1, double t2, EvolutionMethod method)
{
    if (!m.valid_bond(i) || !m.valid_bond(j)) {
        throw std::out_of_range(fmt::format("bond pair ({}, {}) out of range", i, j));
    }
    const StateVector a = exact_evolve(m, state0, t2, method);
    const StateVector b = apply_current(m, j, a);
    const StateVector c = exact_evolve(m, exact_evolve(m, b, -t2, method), t1, method);
    const StateVector d = exact_evolve(m, state0, t1, method);
    return d.inner(apply_current(m, i, c));
}

Complex exact_trotter_acf(const model::SpinChainModel &m, double dt, const StateVector &state0,
                          int i, int j, double t1, double t2)
{
    if (!m.valid_bond(i) || !m.valid_bond(j)) {
        throw std::out_of_range(fmt::format("bond pair ({}, {}) out of range", i, j));
    }
    check_state(m, state0);
    const int k1 = model::steps_for_time(t1, dt);
    const int k2 = model::steps_for_time(t2, dt);
    StateVector a = state0;
    model::apply_trotter(a, m, dt, k2);
    StateVector c = apply_current(m, j, a);
    model::apply_trotter_adjoint(c, m, dt, k2);
    model::apply_trotter(c, m, dt, k1);
    StateVector d = state0;
    model::apply_trotter(d, m, dt, k1);
    return d.inner(apply_current(m, i, c));
}

std::vector<std::vector<Complex>> exact_trotter_acf_series(const model::SpinChainModel &m,
                                                           double dt, const StateVector &state0,
                                                           int j, const std::vector<int> &targets,
                                                           int n_steps)
{
    check_state(m, state0);
    if (!m.valid_bond(j)) {
        throw std::out_of_range(fmt::format("source bond {} out of range", j));
    }
    for (int i : targets) {
        if (!m.valid_bond(i)) {
            throw std::out_of_range(fmt::format("target bond {} out of range", i));
        }
    }
    StateVector d = state0;
    StateVector c = apply_current(m, j, state0);
    std::vector<std::vector<Complex>> out;
    out.reserve(static_cast<std::size_t>(n_steps + 1));
    for (int k = 0; k <= n_steps; ++k) {
        if (k > 0) {
            model::apply_trotter(d, m, dt, 1);
            model::apply_trotter(c, m, dt, 1);
        }
        std::vector<Complex> row;
        row.reserve(targets.size());
        for (int i : targets) {
            row.push_back(d.inner(apply_current(m, i, c)));
        }
        out.push_back(std::move(row));
    }
    return out;
}

double continuity_residual(const model::SpinChainModel &m, const StateVector &state, int r,
                           double t, double fd_step, EvolutionMethod method)
{
    m.validate();
    if (r < 0 || r >= m.n_sites) {
        throw std::out_of_range(fmt::format("site {} out of range", r));
    }
    const bool periodic = m.boundary == model::Boundary::kPeriodic;
    if (!periodic && (r == 0 || r == m.n_sites - 1)) {
        throw std::invalid_argument(
            fmt::format("site {} is a boundary site of an open chain", r));
    }
    if (!(fd_step > 0.0)) {
        throw std::invalid_argument("finite-difference step must be positive");
    }
    const int left = (r - 1 + m.n_sites) % m.n_sites;
    const StateVector plus = exact_evolve(m, state, t + fd_step, method);
    const StateVector minus = exact_evolve(m, state, t - fd_step, method);
    const StateVector now = exact_evolve(m, state, t, method);
    const double derivative = (plus.expect_z(r) - minus.expect_z(r)) / (4.0 * fd_step);
    const double jr = now.inner(apply_current(m, r, now)).real();
    const double jl = now.inner(apply_current(m, left, now)).real();
    return std::abs(derivative + jr - jl);
}

void clear_propagator_cache()
{
    std::lock_guard lock(cache_mutex());
    cache().clear();
}

} // namespace spintransport::oracle
