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

#include "spintransport/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace spintransport::cli {

namespace {

using nlohmann::json;

/// Hard ceiling of the dense simulator regardless of max_qubits.
constexpr int kAbsoluteMaxQubits = 30;

[[noreturn]] void fail(const std::string &path, const std::string &why)
{
    throw std::invalid_argument(path.empty() ? fmt::format("config: {}", why)
                                             : fmt::format("config {}: {}", path, why));
}

void check_keys(const json &obj, const std::string &path, std::initializer_list<const char *> allowed)
{
    if (!obj.is_object()) {
        fail(path, "expected an object");
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto &[key, value] : obj.items()) {
        if (!ok.contains(key)) {
            fail(path, fmt::format("unknown key '{}'", key));
        }
    }
}

template <class T>
T get(const json &obj, const std::string &path, const char *key, T fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception &e) {
        fail(path + "." + key, e.what());
    }
}

std::vector<int> int_list(const json &v, const std::string &path)
{
    if (!v.is_array()) {
        fail(path, "expected a list of integers");
    }
    std::vector<int> out;
    for (const auto &x : v) {
        if (!x.is_number_integer()) {
            fail(path, "expected a list of integers");
        }
        out.push_back(x.get<int>());
    }
    return out;
}

std::vector<int> sorted_unique(std::vector<int> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

qcore::ProductState ExperimentConfig::initial_state() const
{
    return qcore::ProductState::make(initial_kind, model.n_sites, initial_bitstring);
}

std::vector<double> ExperimentConfig::times() const
{
    std::vector<double> out;
    for (int k : n_steps) {
        out.push_back(dt * k);
    }
    return out;
}

std::vector<int> ExperimentConfig::source_bonds() const
{
    switch (sources) {
    case SourceSelection::kAuto:
        if (aggregate == transport::AggregateMode::kDomainWall) {
            return {source_bond};
        }
        [[fallthrough]];
    case SourceSelection::kAll: {
        std::vector<int> all(static_cast<std::size_t>(model.n_bonds()));
        for (int b = 0; b < model.n_bonds(); ++b) {
            all[static_cast<std::size_t>(b)] = b;
        }
        return all;
    }
    case SourceSelection::kTranslation:
        return {0, 1};
    case SourceSelection::kList:
        return source_list;
    }
    return {};
}

std::vector<int> ExperimentConfig::target_bonds() const
{
    if (!targets.empty()) {
        return targets;
    }
    std::vector<int> all(static_cast<std::size_t>(model.n_bonds()));
    for (int b = 0; b < model.n_bonds(); ++b) {
        all[static_cast<std::size_t>(b)] = b;
    }
    return all;
}

bool translation_invariant(const qcore::ProductState &state)
{
    const int n = state.n_qubits;
    const std::uint64_t full = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    if (n < 2 || n % 2 != 0) {
        return false;
    }
    const std::uint64_t shifted = ((state.index << 2) | (state.index >> (n - 2))) & full;
    return shifted == state.index || shifted == (~state.index & full);
}

ExperimentConfig parse_config(const json &doc)
{
    check_keys(doc, "", {"model", "trotter", "initial_state", "protocol", "execution", "noise", "twirls",
                         "analysis", "max_qubits", "output_dir"});
    ExperimentConfig c;

    // Resource cap first, so an oversized model fails before anything else.
    c.max_qubits = get<int>(doc, "", "max_qubits", 24);
    if (c.max_qubits < 1 || c.max_qubits > kAbsoluteMaxQubits) {
        fail("max_qubits", fmt::format("must be in [1, {}]", kAbsoluteMaxQubits));
    }
    if (!doc.contains("model")) {
        fail("", "missing 'model'");
    }
    const auto &m = doc.at("model");
    check_keys(m, "model", {"n_sites", "coupling", "anisotropy", "boundary"});
    c.model.n_sites = get<int>(m, "model", "n_sites", 0);
    if (c.model.n_sites > c.max_qubits) {
        fail("model.n_sites", fmt::format("{} qubits exceed the statevector cap of {}", c.model.n_sites,
                                          c.max_qubits));
    }
    c.model.coupling = get<double>(m, "model", "coupling", 1.0);
    c.model.anisotropy = get<double>(m, "model", "anisotropy", 1.0);
    try {
        c.model.boundary = model::parse_boundary(get<std::string>(m, "model", "boundary", "open"));
        c.model.validate();
    } catch (const std::invalid_argument &e) {
        fail("model", e.what());
    }

    if (!doc.contains("trotter")) {
        fail("", "missing 'trotter'");
    }
    const auto &t = doc.at("trotter");
    check_keys(t, "trotter", {"dt", "n_steps"});
    c.dt = get<double>(t, "trotter", "dt", 0.25);
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) {
        fail("trotter.dt", "must be positive");
    }
    if (!t.contains("n_steps")) {
        fail("trotter", "missing 'n_steps'");
    }
    if (t.at("n_steps").is_number_integer()) {
        const int kmax = t.at("n_steps").get<int>();
        if (kmax < 0) {
            fail("trotter.n_steps", "must be non-negative");
        }
        for (int k = 0; k <= kmax; ++k) {
            c.n_steps.push_back(k);
        }
    } else {
        c.n_steps = sorted_unique(int_list(t.at("n_steps"), "trotter.n_steps"));
        if (c.n_steps.empty() || c.n_steps.front() < 0) {
            fail("trotter.n_steps", "needs non-negative entries");
        }
    }

    const json st = doc.value("initial_state", json("neel"));
    try {
        if (st.is_string()) {
            c.initial_kind = qcore::parse_state_kind(st.get<std::string>());
        } else {
            check_keys(st, "initial_state", {"kind", "bitstring"});
            c.initial_kind = qcore::parse_state_kind(get<std::string>(st, "initial_state", "kind", "custom"));
            c.initial_bitstring = get<std::string>(st, "initial_state", "bitstring", "");
        }
        (void)c.initial_state();
    } catch (const std::invalid_argument &e) {
        fail("initial_state", e.what());
    }

    const json an = doc.value("analysis", json::object());
    check_keys(an, "analysis", {"transport", "aggregate", "source_bond", "divide_by_n", "drude_t_end",
                                "fit_window", "bootstrap_resamples", "confidence"});
    c.transport = get<bool>(an, "analysis", "transport", true);
    try {
        c.aggregate = transport::parse_aggregate_mode(get<std::string>(an, "analysis", "aggregate", "full"));
    } catch (const std::invalid_argument &e) {
        fail("analysis.aggregate", e.what());
    }
    c.source_bond = get<int>(an, "analysis", "source_bond", std::max(0, c.model.n_sites / 2 - 1));
    if (c.source_bond < 0 || c.source_bond >= c.model.n_bonds()) {
        fail("analysis.source_bond", "out of range");
    }
    c.divide_by_n = get<bool>(an, "analysis", "divide_by_n", false);
    if (an.contains("drude_t_end")) {
        c.drude_t_end = get<double>(an, "analysis", "drude_t_end", 0.0);
    }
    if (an.contains("fit_window")) {
        const auto w = get<std::vector<double>>(an, "analysis", "fit_window", {});
        if (w.size() != 2 || !(w[0] < w[1])) {
            fail("analysis.fit_window", "expected [lo, hi] with lo < hi");
        }
        c.fit_window = std::make_pair(w[0], w[1]);
    }
    c.bootstrap_resamples = get<int>(an, "analysis", "bootstrap_resamples", 1000);
    if (c.bootstrap_resamples < 100) {
        fail("analysis.bootstrap_resamples", "must be at least 100");
    }
    c.confidence = get<double>(an, "analysis", "confidence", 0.95);
    if (!(c.confidence > 0.0 && c.confidence < 1.0)) {
        fail("analysis.confidence", "must lie in (0, 1)");
    }

    const json pr = doc.value("protocol", json::object());
    check_keys(pr, "protocol", {"parts", "sources", "targets", "neel_symmetry", "lightcone"});
    if (pr.contains("parts")) {
        const auto parts = get<std::vector<std::string>>(pr, "protocol", "parts", {});
        c.real = c.imag = false;
        for (const auto &p : parts) {
            if (p == "real") {
                c.real = true;
            } else if (p == "imag") {
                c.imag = true;
            } else {
                fail("protocol.parts", fmt::format("unknown part '{}'", p));
            }
        }
        if (!c.real && !c.imag) {
            fail("protocol.parts", "needs at least one part");
        }
    }
    if (pr.contains("sources")) {
        const auto &s = pr.at("sources");
        if (s.is_string()) {
            const auto v = s.get<std::string>();
            if (v == "auto") {
                c.sources = SourceSelection::kAuto;
            } else if (v == "all") {
                c.sources = SourceSelection::kAll;
            } else if (v == "translation") {
                c.sources = SourceSelection::kTranslation;
            } else {
                fail("protocol.sources", fmt::format("unknown selection '{}'", v));
            }
        } else {
            c.sources = SourceSelection::kList;
            c.source_list = sorted_unique(int_list(s, "protocol.sources"));
        }
    }
    if (pr.contains("targets") && !(pr.at("targets").is_string() && pr.at("targets") == "all")) {
        c.targets = sorted_unique(int_list(pr.at("targets"), "protocol.targets"));
    }
    for (int b : c.source_list) {
        if (b < 0 || b >= c.model.n_bonds()) {
            fail("protocol.sources", fmt::format("bond {} out of range", b));
        }
    }
    for (int b : c.targets) {
        if (b < 0 || b >= c.model.n_bonds()) {
            fail("protocol.targets", fmt::format("bond {} out of range", b));
        }
    }
    if (c.sources == SourceSelection::kTranslation) {
        if (c.model.boundary != model::Boundary::kPeriodic || !translation_invariant(c.initial_state())) {
            fail("protocol.sources", "translation needs a periodic chain and a translation-invariant state");
        }
        if (c.aggregate != transport::AggregateMode::kFull) {
            fail("protocol.sources", "translation applies to the full aggregate only");
        }
    }
    c.neel_symmetry = get<bool>(pr, "protocol", "neel_symmetry", false);
    c.lightcone = get<bool>(pr, "protocol", "lightcone", false);
    if (c.neel_symmetry && c.initial_kind != qcore::StateKind::kNeel) {
        fail("protocol.neel_symmetry", "requires the neel initial state");
    }

    const json ex = doc.value("execution", json::object());
    check_keys(ex, "execution", {"mode", "shots", "calibration_shots", "seed"});
    const auto mode = get<std::string>(ex, "execution", "mode", "exact_branch");
    if (mode == "exact_branch") {
        c.mode = ExecutionMode::kExactBranch;
    } else if (mode == "sampled") {
        c.mode = ExecutionMode::kSampled;
    } else {
        fail("execution.mode", fmt::format("unknown mode '{}'", mode));
    }
    c.shots = get<std::int64_t>(ex, "execution", "shots", 10000);
    c.calibration_shots = get<std::int64_t>(ex, "execution", "calibration_shots", c.shots);
    if (c.shots < 2 || c.calibration_shots < 2) {
        fail("execution", "shot counts must be at least 2");
    }
    c.seed = get<std::uint64_t>(ex, "execution", "seed", 0);

    if (doc.contains("noise") && !doc.at("noise").is_null()) {
        const auto &nz = doc.at("noise");
        check_keys(nz, "noise", {"p1", "p2", "p_meas"});
        noise::NoiseSpec spec;
        spec.p1 = get<double>(nz, "noise", "p1", 0.0);
        spec.p2 = get<double>(nz, "noise", "p2", 0.0);
        spec.p_meas = get<double>(nz, "noise", "p_meas", 0.0);
        spec.seed = c.seed;
        try {
            spec.validate();
        } catch (const std::invalid_argument &e) {
            fail("noise", e.what());
        }
        c.noise = spec;
        if (c.mode != ExecutionMode::kSampled) {
            fail("noise", "noise needs the sampled execution mode");
        }
    }
    c.twirls = get<int>(doc, "", "twirls", 0);
    if (c.twirls < 0) {
        fail("twirls", "must be non-negative");
    }
    if (c.twirls > 0 && !c.noise) {
        fail("twirls", "twirling needs a noise model");
    }
    c.output_dir = get<std::string>(doc, "", "output_dir", "out");

    if (c.transport) {
        if (c.n_steps.front() != 0) {
            fail("trotter.n_steps", "transport analysis needs the series to start at step 0");
        }
        if (c.aggregate == transport::AggregateMode::kFull && !c.targets.empty() &&
            static_cast<int>(c.targets.size()) != c.model.n_bonds()) {
            fail("protocol.targets", "the full aggregate needs every bond as a target");
        }
        if (c.sources == SourceSelection::kList && c.aggregate == transport::AggregateMode::kFull &&
            static_cast<int>(c.source_list.size()) != c.model.n_bonds()) {
            fail("protocol.sources", "the full aggregate needs every bond as a source");
        }
        if (c.aggregate == transport::AggregateMode::kDomainWall) {
            const auto src = c.source_bonds();
            if (std::find(src.begin(), src.end(), c.source_bond) == src.end()) {
                fail("protocol.sources", "the domain-wall aggregate needs analysis.source_bond as a source");
            }
        }
        if (!c.real) {
            fail("protocol.parts", "transport analysis needs the real part");
        }
    }

    json canon = doc;
    canon["max_qubits"] = c.max_qubits;
    canon["output_dir"] = c.output_dir;
    c.canonical = std::move(canon);
    return c;
}

ExperimentConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument(fmt::format("cannot open config '{}'", path));
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument(fmt::format("config '{}' is not valid JSON: {}", path, e.what()));
    }
    return parse_config(doc);
}

} // namespace spintransport::cli
