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

#include "spintransport/transport/transport.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "spintransport/protocol/estimate.hpp"

namespace spintransport::transport {

namespace {

constexpr double kTimeTolerance = 1e-9;

double trapezoid(const std::vector<double> &t, const std::vector<Complex> &v, std::size_t upto)
{
    double s = 0.0;
    for (std::size_t k = 1; k <= upto; ++k) {
        s += 0.5 * (t[k] - t[k - 1]) * (v[k].real() + v[k - 1].real());
    }
    return s;
}

double quantile(const std::vector<double> &sorted, double q)
{
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

/// Values and counts when a sample takes few distinct values.
struct Histogram {
    std::vector<double> values;
    std::vector<std::int64_t> counts;
};

std::optional<Histogram> histogram(const std::vector<double> &v)
{
    constexpr std::size_t kMaxCategories = 32;
    std::map<double, std::int64_t> m;
    for (double x : v) {
        ++m[x];
        if (m.size() > kMaxCategories) {
            return std::nullopt;
        }
    }
    Histogram h;
    for (const auto &[x, c] : m) {
        h.values.push_back(x);
        h.counts.push_back(c);
    }
    return h;
}

double resampled_mean(const std::vector<double> &v, const std::optional<Histogram> &h, std::mt19937_64 &rng)
{
    const auto n = static_cast<std::int64_t>(v.size());
    if (h) {
        // Multinomial draw of category counts by sequential binomials.
        double sum = 0.0;
        std::int64_t remaining = n;
        std::int64_t mass = n;
        for (std::size_t k = 0; k < h->values.size() && remaining > 0; ++k) {
            std::int64_t c = remaining;
            if (k + 1 < h->values.size()) {
                const double p = static_cast<double>(h->counts[k]) / static_cast<double>(mass);
                c = std::binomial_distribution<std::int64_t>(remaining, std::min(1.0, p))(rng);
            }
            sum += static_cast<double>(c) * h->values[k];
            remaining -= c;
            mass -= h->counts[k];
        }
        return sum / static_cast<double>(n);
    }
    std::uniform_int_distribution<std::int64_t> pick(0, n - 1);
    double sum = 0.0;
    for (std::int64_t s = 0; s < n; ++s) {
        sum += v[static_cast<std::size_t>(pick(rng))];
    }
    return sum / static_cast<double>(n);
}

} // namespace

std::string_view to_string(Provenance p)
{
    switch (p) {
    case Provenance::kExactBranch:
        return "exact_branch";
    case Provenance::kSampled:
        return "sampled";
    case Provenance::kOracle:
        return "oracle";
    }
    return "unknown";
}

Provenance parse_provenance(std::string_view text)
{
    for (auto p : {Provenance::kExactBranch, Provenance::kSampled, Provenance::kOracle}) {
        if (text == to_string(p)) {
            return p;
        }
    }
    throw std::invalid_argument(fmt::format("unknown provenance '{}'", text));
}

AggregateMode parse_aggregate_mode(std::string_view text)
{
    if (text == "full") {
        return AggregateMode::kFull;
    }
    if (text == "domain_wall") {
        return AggregateMode::kDomainWall;
    }
    throw std::invalid_argument(fmt::format("unknown aggregate mode '{}'", text));
}

void AcfSeries::validate() const
{
    if (values.size() != times.size()) {
        throw std::invalid_argument("series times and values differ in length");
    }
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) {
            throw std::invalid_argument("series times must be strictly increasing");
        }
    }
    if (has_ci()) {
        if (ci_low.size() != times.size() || ci_high.size() != times.size()) {
            throw std::invalid_argument("confidence bounds differ in length from the series");
        }
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double v = values[k].real();
            if (ci_low[k] > v + 1e-12 || ci_high[k] < v - 1e-12) {
                throw std::invalid_argument(fmt::format("confidence bounds at t={} do not bracket the value", times[k]));
            }
        }
    }
}

AcfSeries aggregate_acf(const std::vector<double> &times, const std::map<BondPairTime, Complex> &per_bond,
                        int n_sites, int n_bonds, AggregateOptions options, Provenance provenance)
{
    if (n_sites < 1 || n_bonds < 1) {
        throw std::invalid_argument("aggregate needs at least one site and one bond");
    }
    if (options.mode == AggregateMode::kDomainWall &&
        (options.source_bond < 0 || options.source_bond >= n_bonds)) {
        throw std::out_of_range(fmt::format("source bond {} out of range", options.source_bond));
    }
    AcfSeries out;
    out.times = times;
    out.provenance = provenance;
    std::vector<BondPairTime> missing;
    for (std::size_t k = 0; k < times.size(); ++k) {
        Complex sum{0.0, 0.0};
        for (int j = 0; j < n_bonds; ++j) {
            if (options.mode == AggregateMode::kDomainWall && j != options.source_bond) {
                continue;
            }
            for (int i = 0; i < n_bonds; ++i) {
                const BondPairTime key{i, j, static_cast<int>(k)};
                const auto it = per_bond.find(key);
                if (it == per_bond.end()) {
                    missing.push_back(key);
                } else {
                    sum += it->second;
                }
            }
        }
        const bool divide = options.mode == AggregateMode::kFull || options.divide_by_n;
        out.values.push_back(divide ? sum / static_cast<double>(n_sites) : sum);
    }
    if (!missing.empty()) {
        std::string list;
        for (std::size_t m = 0; m < missing.size() && m < 20; ++m) {
            list += fmt::format("{}({},{},t{})", m ? " " : "", missing[m].i, missing[m].j, missing[m].time_index);
        }
        throw std::invalid_argument(fmt::format("{} missing bond entries: {}{}", missing.size(), list,
                                                missing.size() > 20 ? " ..." : ""));
    }
    out.validate();
    return out;
}

double drude_weight(const AcfSeries &series, double t_end)
{
    if (!(t_end > 0.0)) {
        throw std::invalid_argument("t_end must be positive");
    }
    series.validate();
    if (series.times.empty() || std::abs(series.times.front()) > kTimeTolerance) {
        throw std::invalid_argument("series must start at t = 0");
    }
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        if (std::abs(series.times[k] - t_end) <= kTimeTolerance * std::max(1.0, t_end)) {
            return trapezoid(series.times, series.values, k) / (2.0 * t_end);
        }
    }
    throw std::invalid_argument(fmt::format("t_end {} is not a grid point of the series", t_end));
}

AcfSeries diffusion_coefficient(const AcfSeries &series)
{
    series.validate();
    if (series.times.size() < 2) {
        throw std::invalid_argument("diffusion coefficient needs at least two time points");
    }
    AcfSeries out;
    out.times = series.times;
    out.provenance = series.provenance;
    double acc = 0.0;
    out.values.push_back(0.0);
    for (std::size_t k = 1; k < series.times.size(); ++k) {
        acc += 0.5 * (series.times[k] - series.times[k - 1]) *
               (series.values[k].real() + series.values[k - 1].real());
        out.values.emplace_back(acc, 0.0);
    }
    return out;
}

AlphaFit fit_alpha(const AcfSeries &curve, double lo, double hi)
{
    if (!(hi > lo)) {
        throw std::invalid_argument("fit window must have hi > lo");
    }
    AlphaFit fit;
    std::vector<double> x;
    std::vector<double> y;
    bool non_positive = false;
    for (std::size_t k = 0; k < curve.times.size(); ++k) {
        const double t = curve.times[k];
        if (t < lo - kTimeTolerance || t > hi + kTimeTolerance) {
            continue;
        }
        const double d = curve.values[k].real();
        if (!(t > 0.0) || !(d > 0.0)) {
            non_positive = true;
            continue;
        }
        x.push_back(std::log(t));
        y.push_back(std::log(d));
    }
    fit.n_points = static_cast<int>(x.size());
    if (x.size() >= 2) {
        const double n = static_cast<double>(x.size());
        double mx = 0.0;
        double my = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            mx += x[k];
            my += y[k];
        }
        mx /= n;
        my /= n;
        double sxx = 0.0;
        double sxy = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            sxx += (x[k] - mx) * (x[k] - mx);
            sxy += (x[k] - mx) * (y[k] - my);
        }
        fit.raw_slope = sxy / sxx;
        if (x.size() > 2) {
            double ssr = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) {
                const double r = y[k] - (my + fit.raw_slope * (x[k] - mx));
                ssr += r * r;
            }
            fit.stderr_ = std::sqrt(ssr / (n - 2.0) / sxx);
        }
    }
    if (non_positive) {
        fit.degenerate = true;
        fit.reason = "non-positive D^S in fit window";
    } else if (x.size() < 3) {
        fit.degenerate = true;
        fit.reason = "fewer than three points in fit window";
    } else if (fit.raw_slope < 0.0) {
        fit.degenerate = true;
        fit.reason = "negative slope: D^S decreases over the window";
    }
    fit.alpha = fit.degenerate ? 0.0 : fit.raw_slope;
    if (fit.degenerate) {
        fit.stderr_ = 0.0;
    }
    return fit;
}

std::pair<double, double> default_fit_window(const std::vector<double> &times)
{
    if (times.size() < 2) {
        throw std::invalid_argument("fit window needs at least two times");
    }
    const double dt = times[1] - times[0];
    const double t0 = times.front();
    const double t1 = times.back();
    return {std::max(t0 + 2.0 * dt, t0 + (t1 - t0) / 3.0), t1};
}

TransportSummary summarize(const AcfSeries &series, double t_end, double fit_lo, double fit_hi)
{
    TransportSummary s;
    s.t_end = t_end;
    s.drude = drude_weight(series, t_end);
    if (series.has_ci()) {
        // Independent per-time errors from the 95% half-widths.
        double var = 0.0;
        for (std::size_t k = 0; k < series.times.size() && series.times[k] <= t_end + kTimeTolerance; ++k) {
            const double left = k > 0 ? series.times[k] - series.times[k - 1] : 0.0;
            const double right = (k + 1 < series.times.size() && series.times[k + 1] <= t_end + kTimeTolerance)
                                     ? series.times[k + 1] - series.times[k]
                                     : 0.0;
            const double w = 0.5 * (left + right) / (2.0 * t_end);
            const double sigma = (series.ci_high[k] - series.ci_low[k]) / (2.0 * 1.959963984540054);
            var += w * w * sigma * sigma;
        }
        s.drude_stderr = std::sqrt(var);
    }
    s.diffusion_curve = diffusion_coefficient(series);
    s.fit_lo = fit_lo;
    s.fit_hi = fit_hi;
    s.alpha = fit_alpha(s.diffusion_curve, fit_lo, fit_hi);
    return s;
}

ConfidenceInterval bootstrap_ci(const std::vector<LabelSamples> &samples, int n_resamples,
                                std::uint64_t seed, double level)
{
    if (n_resamples < 100) {
        throw std::invalid_argument("bootstrap needs at least 100 resamples");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence level must lie in (0, 1)");
    }
    if (samples.empty()) {
        throw std::invalid_argument("bootstrap needs at least one label");
    }
    ConfidenceInterval ci;
    std::vector<std::optional<Histogram>> hists;
    for (const auto &s : samples) {
        if (s.values.empty()) {
            throw std::invalid_argument(fmt::format("label '{}' has no samples", s.label));
        }
        hists.push_back(histogram(s.values));
        double m = 0.0;
        if (hists.back()) {
            // Same arithmetic as the resampling fast path.
            for (std::size_t k = 0; k < hists.back()->values.size(); ++k) {
                m += static_cast<double>(hists.back()->counts[k]) * hists.back()->values[k];
            }
        } else {
            for (double v : s.values) {
                m += v;
            }
        }
        ci.estimate += s.coefficient * m / static_cast<double>(s.values.size());
    }
    std::vector<double> stats(static_cast<std::size_t>(n_resamples));
    for (int b = 0; b < n_resamples; ++b) {
        double stat = 0.0;
        for (std::size_t l = 0; l < samples.size(); ++l) {
            std::mt19937_64 rng(protocol::splitmix64(seed ^ protocol::splitmix64(
                (static_cast<std::uint64_t>(b) << 20) + static_cast<std::uint64_t>(l))));
            stat += samples[l].coefficient * resampled_mean(samples[l].values, hists[l], rng);
        }
        stats[static_cast<std::size_t>(b)] = stat;
    }
    std::sort(stats.begin(), stats.end());
    const double alpha = 1.0 - level;
    ci.low = std::min(ci.estimate, quantile(stats, alpha / 2.0));
    ci.high = std::max(ci.estimate, quantile(stats, 1.0 - alpha / 2.0));
    return ci;
}

} // namespace spintransport::transport
