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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spintransport/qcore/state_vector.hpp"

namespace spintransport::transport {

using qcore::Complex;

enum class Provenance { kExactBranch, kSampled, kOracle };
std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view text);

struct AcfSeries {
    std::vector<double> times;
    std::vector<Complex> values;
    /// Optional confidence bounds on the real part, one per time.
    std::vector<double> ci_low;
    std::vector<double> ci_high;
    Provenance provenance = Provenance::kExactBranch;

    /// Times strictly increasing, sizes consistent, bounds bracketing Re value.
    void validate() const;
    [[nodiscard]] bool has_ci() const noexcept { return !ci_low.empty(); }
};

struct BondPairTime {
    int i = 0;
    int j = 0;
    int time_index = 0;

    friend auto operator<=>(const BondPairTime &, const BondPairTime &) = default;
};

enum class AggregateMode { kFull, kDomainWall };
AggregateMode parse_aggregate_mode(std::string_view text);

struct AggregateOptions {
    AggregateMode mode = AggregateMode::kFull;
    /// Source bond for the domain-wall mode.
    int source_bond = 0;
    /// Divide the domain-wall sum by N as the full mode does.
    bool divide_by_n = false;
};

/// Full: C(t) = sum_{i,j} <J_i(t) J_j> / N. Domain wall: C(t) = sum_i
/// <J_i(t) J_d>, optionally / N. Throws listing any missing entries.
AcfSeries aggregate_acf(const std::vector<double> &times, const std::map<BondPairTime, Complex> &per_bond,
                        int n_sites, int n_bonds, AggregateOptions options,
                        Provenance provenance = Provenance::kExactBranch);

/// (1 / (2 t_end)) * trapezoid integral of Re C over [0, t_end]. The series
/// must start at t = 0 and contain t_end as a grid point.
double drude_weight(const AcfSeries &series, double t_end);

/// Cumulative trapezoid integral of Re C starting at the first time.
AcfSeries diffusion_coefficient(const AcfSeries &series);

struct AlphaFit {
    double alpha = 0.0;
    double stderr_ = 0.0;
    /// Least-squares slope even when the fit is declared degenerate.
    double raw_slope = 0.0;
    int n_points = 0;
    bool degenerate = false;
    std::string reason;
};

/// Log-log least-squares slope of D^S(t) over [lo, hi]. Degenerate (alpha
/// reported as 0) when a window value is not positive, fewer than three
/// points fall in the window, or the slope is negative.
AlphaFit fit_alpha(const AcfSeries &diffusion_curve, double lo, double hi);

/// Excludes t < 2 dt and keeps the latter two thirds of the interval.
std::pair<double, double> default_fit_window(const std::vector<double> &times);

struct TransportSummary {
    double drude = 0.0;
    double drude_stderr = 0.0;
    double t_end = 0.0;
    AlphaFit alpha;
    double fit_lo = 0.0;
    double fit_hi = 0.0;
    AcfSeries diffusion_curve;
};

TransportSummary summarize(const AcfSeries &series, double t_end, double fit_lo, double fit_hi);

/// Per-shot values of one circuit label and its weight in the statistic
/// sum_label coefficient * mean(values).
struct LabelSamples {
    std::string label;
    double coefficient = 1.0;
    std::vector<double> values;
};

struct ConfidenceInterval {
    double estimate = 0.0;
    double low = 0.0;
    double high = 0.0;
};

/// Percentile bootstrap, resampling each label independently.
ConfidenceInterval bootstrap_ci(const std::vector<LabelSamples> &samples, int n_resamples,
                                std::uint64_t seed, double level = 0.95);

} // namespace spintransport::transport
