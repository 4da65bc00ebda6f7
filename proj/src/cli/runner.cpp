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

#include "spintransport/cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <Eigen/Core>
#include <fmt/format.h>
#include <openssl/evp.h>
#include <openssl/opensslv.h>

#include "spintransport/protocol/estimate.hpp"
#include "spintransport/protocol/series.hpp"

#ifndef SPINTRANSPORT_VERSION
#define SPINTRANSPORT_VERSION "0.0.0"
#endif

namespace spintransport::cli {

namespace {

using transport::BondPairTime;
using Json = nlohmann::json;

/// Runs task(0..n-1) on up to `workers` threads; rethrows the first failure.
void parallel_for(int n, int workers, const std::function<void(int)> &task)
{
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int k = 0; k < n; ++k) {
            task(k);
        }
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int k = next++; k < n; k = next++) {
                try {
                    task(k);
                } catch (...) {
                    const std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                    next = n;
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

/// Weight of (i, j) in the aggregate C(t).
double aggregate_weight(const ExperimentConfig &c, int j)
{
    if (c.aggregate == transport::AggregateMode::kDomainWall) {
        if (j != c.source_bond) {
            return 0.0;
        }
        return c.divide_by_n ? 1.0 / c.model.n_sites : 1.0;
    }
    // Each of the two translation sources stands for N/2 sources.
    return c.sources == SourceSelection::kTranslation ? 0.5 : 1.0 / c.model.n_sites;
}

struct TaskOutput {
    std::map<BondPairTime, qcore::Complex> values;
    std::map<BondPairTime, qcore::Complex> stderrs;
    std::set<BondPairTime> pruned;
    noise::CalibrationResult calibration;
    std::size_t skipped = 0;
    /// Bootstrap inputs for Re C(t) per time index.
    std::map<int, std::vector<transport::LabelSamples>> samples;
};

/// Per-shot contributions of one circuit to Re C(t), renormalised when
/// factors are given.
std::vector<double> aggregate_shot_values(const ExperimentConfig &config,
                                          const protocol::MeasurementPlan &plan,
                                          const protocol::PlanCircuit &pc,
                                          const std::vector<qcore::ShotRecord> &shots,
                                          const noise::CalibrationResult *calibration)
{
    const double w = aggregate_weight(config, plan.source_bond);
    std::vector<double> scale(plan.readout.size(), w);
    for (std::size_t t = 0; t < plan.readout.size(); ++t) {
        const auto &term = plan.readout[t];
        scale[t] *= term.weight;
        if (calibration != nullptr && term.qubits.size() == 1) {
            const auto *f = calibration->find({plan.id, pc.calibration_label, term.qubits[0]});
            if (f != nullptr && !f->degenerate) {
                scale[t] /= f->value;
            }
        }
    }
    std::vector<double> out(shots.size(), 0.0);
    for (std::size_t s = 0; s < shots.size(); ++s) {
        double v = 0.0;
        for (std::size_t t = 0; t < plan.readout.size(); ++t) {
            v += scale[t] * protocol::z_string_sign(pc, shots[s].final_bits, plan.readout[t].qubits);
        }
        out[s] = protocol::mcm_sign(pc, shots[s].mcm_bits) * v;
    }
    return out;
}

TaskOutput run_series_task(const ExperimentConfig &config, int source)
{
    TaskOutput out;
    const int kmax = config.n_steps.back();
    protocol::PlanOptions opts;
    opts.neel_symmetry = config.neel_symmetry;
    const auto series = protocol::exact_branch_series(config.model, config.dt, config.initial_state(), source,
                                                      kmax, config.real, config.imag, opts);
    const auto targets = config.target_bonds();
    for (std::size_t k = 0; k < config.n_steps.size(); ++k) {
        const auto &row = series.values.at(static_cast<std::size_t>(config.n_steps[k]));
        for (std::size_t m = 0; m < series.targets.size(); ++m) {
            const int i = series.targets[m];
            if (std::binary_search(targets.begin(), targets.end(), i)) {
                out.values[{i, source, static_cast<int>(k)}] = row[m];
            }
        }
    }
    return out;
}

TaskOutput run_plan_task(const ExperimentConfig &config, int step_index, int source,
                         const std::optional<noise::CalibrationResult> &given)
{
    TaskOutput out;
    const auto plans = experiment_plans(config, config.n_steps[static_cast<std::size_t>(step_index)], source);
    const bool noisy = config.noise.has_value();
    if (noisy) {
        out.calibration = given ? *given : noise::calibrate(plans, *config.noise, config.calibration_shots,
                                                            config.twirls);
    }
    for (const auto &plan : plans) {
        std::vector<protocol::CircuitResult> results;
        if (config.mode == ExecutionMode::kExactBranch) {
            results = protocol::execute_exact(plan);
        } else if (noisy) {
            results = noise::execute_noisy(plan, *config.noise, config.shots, config.twirls);
        } else {
            results = protocol::execute_sampled(plan, config.shots, config.seed);
        }
        auto est = protocol::assemble(plan, results);
        if (noisy) {
            auto ren = noise::renormalize(plan, est, out.calibration);
            out.skipped += ren.skipped.size();
            est = std::move(ren.estimate);
        }
        const bool re = plan.part == protocol::Part::kReal;
        for (std::size_t m = 0; m < est.targets.size(); ++m) {
            const BondPairTime key{est.targets[m], source, step_index};
            out.values[key] += est.values[m];
            out.stderrs[key] += re ? qcore::Complex(est.stderrs[m], 0.0) : qcore::Complex(0.0, est.stderrs[m]);
        }
        for (int t : est.pruned_targets) {
            const BondPairTime key{t, source, step_index};
            out.values[key] += 0.0;
            out.stderrs[key] += 0.0;
            out.pruned.insert(key);
        }
        if (re && config.mode == ExecutionMode::kSampled && config.transport) {
            auto &bucket = out.samples[step_index];
            for (std::size_t c = 0; c < plan.circuits.size(); ++c) {
                const auto &pc = plan.circuits[c];
                bucket.push_back({pc.label, plan.normalization * pc.coefficient,
                                  aggregate_shot_values(config, plan, pc, results[c].shots,
                                                        noisy ? &out.calibration : nullptr)});
            }
        }
    }
    return out;
}

/// Fills the (i, j) entries a translation run stands for.
void expand_translation(const ExperimentConfig &config, RunResult &r)
{
    const int nb = config.model.n_bonds();
    std::map<BondPairTime, qcore::Complex> values;
    std::map<BondPairTime, qcore::Complex> errs;
    std::set<BondPairTime> pruned;
    for (const auto &[key, v] : r.per_bond) {
        for (int s = 0; s < nb; s += 2) {
            const BondPairTime k2{(key.i + s) % nb, (key.j + s) % nb, key.time_index};
            values[k2] = v;
            if (const auto it = r.per_bond_stderr.find(key); it != r.per_bond_stderr.end()) {
                errs[k2] = it->second;
            }
            if (r.pruned.contains(key)) {
                pruned.insert(k2);
            }
        }
    }
    r.per_bond = std::move(values);
    r.per_bond_stderr = std::move(errs);
    r.pruned = std::move(pruned);
}

Json alpha_json(const transport::AlphaFit &a)
{
    return {{"alpha", a.alpha},
            {"stderr", a.stderr_},
            {"raw_slope", a.raw_slope},
            {"n_points", a.n_points},
            {"degenerate", a.degenerate},
            {"reason", a.reason}};
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

std::string manifest_text(const ExperimentConfig &config, const std::string &dir,
                          const std::vector<std::string> &files)
{
    Json listed = Json::array();
    for (const auto &name : files) {
        const auto content = read_text((std::filesystem::path(dir) / name).string());
        listed.push_back({{"name", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
    }
    const Json manifest = {
        {"version", 1},
        {"config", config.canonical},
        {"config_sha256", sha256_hex(config.canonical.dump())},
        {"seeds",
         {{"base", config.seed},
          {"bootstrap", protocol::derive_seed(config.seed, "bootstrap", "acf")}}},
        {"versions",
         {{"spintransport", SPINTRANSPORT_VERSION},
          {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
          {"fmt", FMT_VERSION},
          {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                        NLOHMANN_JSON_VERSION_PATCH)},
          {"openssl", OPENSSL_VERSION_TEXT}}},
        {"files", listed}};
    return dump(manifest);
}

} // namespace

std::string format_double(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    return fmt::format("{:.17g}", x);
}

std::string sha256_hex(std::string_view data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
        out += fmt::format("{:02x}", digest[k]);
    }
    return out;
}

void write_text(const std::string &path, const std::string &content)
{
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary);
    out << content;
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write '{}'", path));
    }
}

std::string read_text(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot read '{}'", path));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<protocol::MeasurementPlan> experiment_plans(const ExperimentConfig &config, int step, int source)
{
    const model::TrotterSpec trotter{config.dt, step, 2};
    protocol::PlanOptions opts;
    opts.lightcone = config.lightcone;
    opts.neel_symmetry = config.neel_symmetry;
    const auto init = config.initial_state();
    const auto targets = config.target_bonds();
    std::vector<protocol::MeasurementPlan> out;
    if (config.real) {
        auto p = protocol::plan_real(config.model, trotter, init, source, targets, opts);
        out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    }
    if (config.imag) {
        auto p = protocol::plan_imag(config.model, trotter, init, source, targets, opts);
        out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    }
    return out;
}

RunResult run_experiment(const ExperimentConfig &config, const RunOptions &options)
{
    if (config.qubits_needed() > config.max_qubits) {
        throw std::invalid_argument(fmt::format("{} qubits exceed the statevector cap of {}",
                                                config.qubits_needed(), config.max_qubits));
    }
    RunResult r;
    r.times = config.times();
    r.sources = config.source_bonds();
    r.targets = config.target_bonds();

    const bool series = config.mode == ExecutionMode::kExactBranch && !config.lightcone;
    const int n_sources = static_cast<int>(r.sources.size());
    const int n_tasks = series ? n_sources : n_sources * static_cast<int>(config.n_steps.size());
    std::vector<TaskOutput> outputs(static_cast<std::size_t>(n_tasks));
    parallel_for(n_tasks, options.workers, [&](int t) {
        const int source = r.sources[static_cast<std::size_t>(t % n_sources)];
        outputs[static_cast<std::size_t>(t)] =
            series ? run_series_task(config, source)
                   : run_plan_task(config, t / n_sources, source, options.calibration);
    });

    // Single collector, in task order, so results do not depend on workers.
    std::map<int, std::vector<transport::LabelSamples>> samples;
    for (auto &o : outputs) {
        r.per_bond.insert(o.values.begin(), o.values.end());
        r.per_bond_stderr.insert(o.stderrs.begin(), o.stderrs.end());
        r.pruned.insert(o.pruned.begin(), o.pruned.end());
        r.skipped_terms += o.skipped;
        if (config.noise) {
            if (!r.calibration) {
                r.calibration.emplace();
            }
            r.calibration->factors.insert(o.calibration.factors.begin(), o.calibration.factors.end());
        }
        for (auto &[k, v] : o.samples) {
            auto &dst = samples[k];
            dst.insert(dst.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
        }
    }
    if (config.sources == SourceSelection::kTranslation) {
        expand_translation(config, r);
    }
    if (r.calibration) {
        std::size_t bad = 0;
        for (const auto &[key, f] : r.calibration->factors) {
            bad += f.degenerate ? 1 : 0;
        }
        if (bad > 0) {
            r.degenerate.push_back(fmt::format("calibration: {} degenerate factors", bad));
        }
    }
    if (r.skipped_terms > 0) {
        r.degenerate.push_back(fmt::format("renormalization: {} terms left uncorrected", r.skipped_terms));
    }

    if (!config.transport) {
        return r;
    }
    transport::AggregateOptions agg;
    agg.mode = config.aggregate;
    agg.source_bond = config.source_bond;
    agg.divide_by_n = config.divide_by_n;
    const auto provenance =
        config.mode == ExecutionMode::kSampled ? transport::Provenance::kSampled : transport::Provenance::kExactBranch;
    auto acf = transport::aggregate_acf(r.times, r.per_bond, config.model.n_sites, config.model.n_bonds(), agg,
                                        provenance);
    if (config.mode == ExecutionMode::kSampled) {
        const std::uint64_t seed = protocol::derive_seed(config.seed, "bootstrap", "acf");
        for (std::size_t k = 0; k < r.times.size(); ++k) {
            const auto ci = transport::bootstrap_ci(samples.at(static_cast<int>(k)), config.bootstrap_resamples,
                                                    protocol::splitmix64(seed + k), config.confidence);
            const double re = acf.values[k].real();
            acf.ci_low.push_back(std::min(ci.low, re));
            acf.ci_high.push_back(std::max(ci.high, re));
        }
    }
    acf.validate();
    const double t_end = config.drude_t_end.value_or(r.times.back());
    const auto window = config.fit_window.value_or(transport::default_fit_window(r.times));
    r.summary = transport::summarize(acf, t_end, window.first, window.second);
    if (r.summary->alpha.degenerate) {
        r.degenerate.push_back("alpha fit: " + r.summary->alpha.reason);
    }
    r.acf = std::move(acf);
    return r;
}

noise::CalibrationResult run_calibration(const ExperimentConfig &config, int workers)
{
    if (!config.noise) {
        throw std::invalid_argument("calibration needs a noise model in the config");
    }
    const auto sources = config.source_bonds();
    const int n_sources = static_cast<int>(sources.size());
    const int n_tasks = n_sources * static_cast<int>(config.n_steps.size());
    std::vector<noise::CalibrationResult> parts(static_cast<std::size_t>(n_tasks));
    parallel_for(n_tasks, workers, [&](int t) {
        const auto plans = experiment_plans(config, config.n_steps[static_cast<std::size_t>(t / n_sources)],
                                            sources[static_cast<std::size_t>(t % n_sources)]);
        parts[static_cast<std::size_t>(t)] =
            noise::calibrate(plans, *config.noise, config.calibration_shots, config.twirls);
    });
    noise::CalibrationResult out;
    for (const auto &p : parts) {
        out.factors.insert(p.factors.begin(), p.factors.end());
    }
    return out;
}

std::vector<std::string> write_bundle(const ExperimentConfig &config, const RunResult &result,
                                      const std::string &dir)
{
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    auto put = [&](const std::string &name, const std::string &content) {
        write_text((fs::path(dir) / name).string(), content);
        files.push_back(name);
    };
    const double nan = std::nan("");
    auto im_of = [&](qcore::Complex v) { return config.imag ? v.imag() : nan; };
    auto re_of = [&](qcore::Complex v) { return config.real ? v.real() : nan; };

    if (result.acf) {
        std::string csv = "time,re,im,ci_low,ci_high\n";
        const auto &a = *result.acf;
        for (std::size_t k = 0; k < a.times.size(); ++k) {
            csv += fmt::format("{},{},{},{},{}\n", format_double(a.times[k]), format_double(re_of(a.values[k])),
                               format_double(im_of(a.values[k])),
                               format_double(a.has_ci() ? a.ci_low[k] : nan),
                               format_double(a.has_ci() ? a.ci_high[k] : nan));
        }
        put("acf.csv", csv);
    }

    std::string csv = "step,time,i,j,re,im,re_stderr,im_stderr,pruned\n";
    for (const auto &[key, v] : result.per_bond) {
        const auto it = result.per_bond_stderr.find(key);
        const qcore::Complex e = it == result.per_bond_stderr.end() ? qcore::Complex(nan, nan) : it->second;
        csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", config.n_steps[static_cast<std::size_t>(key.time_index)],
                           format_double(result.times[static_cast<std::size_t>(key.time_index)]), key.i, key.j,
                           format_double(re_of(v)), format_double(im_of(v)), format_double(re_of(e)),
                           format_double(im_of(e)), result.pruned.contains(key) ? 1 : 0);
    }
    put("per_bond.csv", csv);

    const int heatmap_source = config.aggregate == transport::AggregateMode::kDomainWall
                                   ? config.source_bond
                                   : result.sources.front();
    Json summary = {{"model",
                     {{"n_sites", config.model.n_sites},
                      {"coupling", config.model.coupling},
                      {"anisotropy", config.model.anisotropy},
                      {"boundary", std::string(model::to_string(config.model.boundary))}}},
                    {"dt", config.dt},
                    {"initial_state", config.initial_state().bitstring()},
                    {"parts", {{"real", config.real}, {"imag", config.imag}}},
                    {"aggregate", config.aggregate == transport::AggregateMode::kFull ? "full" : "domain_wall"},
                    {"source_bond", config.source_bond},
                    {"heatmap_source", heatmap_source},
                    {"lightcone", config.lightcone},
                    {"degenerate", result.degenerate}};
    if (result.summary) {
        const auto &s = *result.summary;
        Json curve = Json::array();
        for (std::size_t k = 0; k < s.diffusion_curve.times.size(); ++k) {
            curve.push_back({s.diffusion_curve.times[k], s.diffusion_curve.values[k].real()});
        }
        summary["provenance"] = std::string(transport::to_string(result.acf->provenance));
        summary["drude"] = s.drude;
        summary["drude_stderr"] = s.drude_stderr;
        summary["t_end"] = s.t_end;
        summary["fit_window"] = {s.fit_lo, s.fit_hi};
        summary["alpha"] = alpha_json(s.alpha);
        summary["diffusion_curve"] = curve;
    }
    put("summary.json", dump(summary));

    if (result.calibration) {
        put("calibration.json", dump(noise::to_json(*result.calibration)));
    }
    const auto manifest = manifest_text(config, dir, files);
    write_text((fs::path(dir) / "manifest.json").string(), manifest);
    files.emplace_back("manifest.json");
    return files;
}

std::vector<std::string> write_calibration_bundle(const ExperimentConfig &config,
                                                  const noise::CalibrationResult &calibration,
                                                  const std::string &dir)
{
    namespace fs = std::filesystem;
    write_text((fs::path(dir) / "calibration.json").string(), dump(noise::to_json(calibration)));
    const std::vector<std::string> files{"calibration.json"};
    write_text((fs::path(dir) / "manifest.json").string(), manifest_text(config, dir, files));
    return {"calibration.json", "manifest.json"};
}

} // namespace spintransport::cli
