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

#include <functional>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "spintransport/qcore/simulator.hpp"
#include "spintransport/transport/transport.hpp"

namespace tr = spintransport::transport;
using spintransport::qcore::Complex;

namespace {

tr::AcfSeries make_series(double dt, int n, const std::function<double(double)> &f)
{
    tr::AcfSeries s;
    for (int k = 0; k <= n; ++k) {
        s.times.push_back(k * dt);
        s.values.emplace_back(f(k * dt), 0.0);
    }
    return s;
}

} // namespace

TEST(Aggregate, FullAndDomainWall)
{
    std::map<tr::BondPairTime, Complex> data;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            data[{i, j, 0}] = 0.0;
        }
    }
    data[{1, 2, 0}] = Complex(0.8, 0.1);
    const auto full = tr::aggregate_acf({0.0}, data, 4, 4, {});
    EXPECT_NEAR(std::abs(full.values[0] - Complex(0.2, 0.025)), 0.0, 1e-15);
    for (int i = 0; i < 4; ++i) {
        data[{i, i, 0}] = 0.25;
    }
    data[{1, 2, 0}] = 0.0;
    EXPECT_NEAR(tr::aggregate_acf({0.0}, data, 4, 4, {}).values[0].real(), 0.25, 1e-15);
    const tr::AggregateOptions dw{tr::AggregateMode::kDomainWall, 2, false};
    EXPECT_NEAR(tr::aggregate_acf({0.0}, data, 4, 4, dw).values[0].real(), 0.25, 1e-15);
    const tr::AggregateOptions dw_n{tr::AggregateMode::kDomainWall, 2, true};
    EXPECT_NEAR(tr::aggregate_acf({0.0}, data, 4, 4, dw_n).values[0].real(), 0.0625, 1e-15);
    data.erase({3, 1, 0});
    try {
        (void)tr::aggregate_acf({0.0}, data, 4, 4, {});
        FAIL() << "expected a missing-entry error";
    } catch (const std::invalid_argument &e) {
        EXPECT_NE(std::string(e.what()).find("(3,1,t0)"), std::string::npos);
    }
}

TEST(Drude, ConstantsAndZero)
{
    const auto c = make_series(0.25, 24, [](double) { return 0.3; });
    EXPECT_NEAR(tr::drude_weight(c, 6.0), 0.15, 1e-15);
    EXPECT_NEAR(tr::drude_weight(c, 3.0), 0.15, 1e-15);
    const auto z = make_series(0.25, 24, [](double) { return 0.0; });
    EXPECT_EQ(tr::drude_weight(z, 6.0), 0.0);
    EXPECT_THROW(tr::drude_weight(c, 0.0), std::invalid_argument);
    EXPECT_THROW(tr::drude_weight(c, 6.1), std::invalid_argument);
}

TEST(Diffusion, ExactOnLinear)
{
    const auto c = make_series(0.2, 10, [](double) { return 0.5; });
    const auto d = tr::diffusion_coefficient(c);
    for (std::size_t k = 0; k < d.times.size(); ++k) {
        EXPECT_NEAR(d.values[k].real(), 0.5 * d.times[k], 1e-14);
    }
    const auto lin = make_series(0.2, 10, [](double t) { return 1.0 - 0.3 * t; });
    const auto dl = tr::diffusion_coefficient(lin);
    for (std::size_t k = 0; k < dl.times.size(); ++k) {
        const double t = dl.times[k];
        EXPECT_NEAR(dl.values[k].real(), t - 0.15 * t * t, 1e-14);
    }
    // Integration consistency with the Drude weight.
    EXPECT_NEAR(dl.values.back().real() / (2.0 * 2.0), tr::drude_weight(lin, 2.0), 1e-15);
}

TEST(FitAlpha, PowerLawsAndDegenerate)
{
    tr::AcfSeries d;
    for (int k = 1; k <= 30; ++k) {
        d.times.push_back(0.2 * k);
        d.values.emplace_back(std::cbrt(0.2 * k), 0.0);
    }
    const auto f = tr::fit_alpha(d, 2.0, 6.0);
    EXPECT_FALSE(f.degenerate);
    EXPECT_NEAR(f.alpha, 1.0 / 3.0, 1e-6);
    EXPECT_NEAR(tr::fit_alpha(d, 1.0, 5.0).alpha, f.alpha, 1e-9);
    for (auto &v : d.values) {
        v = 0.7;
    }
    EXPECT_NEAR(tr::fit_alpha(d, 2.0, 6.0).alpha, 0.0, 1e-12);
    d.values[15] = -0.1;
    const auto bad = tr::fit_alpha(d, 2.0, 6.0);
    EXPECT_TRUE(bad.degenerate);
    EXPECT_EQ(bad.alpha, 0.0);
    for (std::size_t k = 0; k < d.values.size(); ++k) {
        d.values[k] = 1.0 / d.times[k];
    }
    const auto falling = tr::fit_alpha(d, 2.0, 6.0);
    EXPECT_TRUE(falling.degenerate);
    EXPECT_NEAR(falling.raw_slope, -1.0, 1e-9);
    EXPECT_EQ(tr::default_fit_window(make_series(0.25, 24, [](double) { return 1.0; }).times),
              (std::pair<double, double>{2.0, 6.0}));
}

TEST(Transport, ScalingCovariance)
{
    const auto c = make_series(0.25, 24, [](double t) { return 0.25 * std::exp(-0.3 * t) + 0.02; });
    auto scaled = c;
    for (auto &v : scaled.values) {
        v *= 3.7;
    }
    const auto a = tr::summarize(c, 6.0, 2.0, 6.0);
    const auto b = tr::summarize(scaled, 6.0, 2.0, 6.0);
    EXPECT_NEAR(b.drude, 3.7 * a.drude, 1e-12);
    EXPECT_NEAR(b.alpha.alpha, a.alpha.alpha, 1e-12);
    for (std::size_t k = 0; k < a.diffusion_curve.values.size(); ++k) {
        EXPECT_NEAR(b.diffusion_curve.values[k].real(), 3.7 * a.diffusion_curve.values[k].real(), 1e-12);
    }
}

TEST(Bootstrap, DeterministicAndDegenerate)
{
    std::vector<tr::LabelSamples> zero{{"A", 1.0, std::vector<double>(500, 0.4)}};
    const auto z = tr::bootstrap_ci(zero, 1000, 1);
    EXPECT_EQ(z.low, z.high);
    EXPECT_NEAR(z.estimate, 0.4, 1e-15);
    std::mt19937_64 rng(3);
    std::bernoulli_distribution b(0.3);
    std::vector<double> v(400);
    for (auto &x : v) {
        x = b(rng) ? -1.0 : 1.0;
    }
    std::vector<double> cont(300);
    std::normal_distribution<double> g;
    for (auto &x : cont) {
        x = g(rng);
    }
    const std::vector<tr::LabelSamples> s{{"A", 1.0, v}, {"B", -0.5, cont}};
    const auto c1 = tr::bootstrap_ci(s, 1000, 99);
    const auto c2 = tr::bootstrap_ci(s, 1000, 99);
    EXPECT_EQ(c1.low, c2.low);
    EXPECT_EQ(c1.high, c2.high);
    EXPECT_LT(c1.low, c1.estimate);
    EXPECT_GT(c1.high, c1.estimate);
    EXPECT_THROW(tr::bootstrap_ci(s, 50, 1), std::invalid_argument);
}

TEST(Bootstrap, CoverageNearNominal)
{
    // Difference of two +-1 means with known expectations.
    const double pa = 0.7;
    const double pb = 0.4;
    const double truth = (2 * pa - 1) - (2 * pb - 1);
    int covered = 0;
    const int reps = 500;
    for (int r = 0; r < reps; ++r) {
        std::mt19937_64 rng(1000 + r);
        std::vector<double> a(400);
        std::vector<double> b(400);
        for (auto &x : a) {
            x = spintransport::qcore::uniform_from_bits(rng()) < pa ? 1.0 : -1.0;
        }
        for (auto &x : b) {
            x = spintransport::qcore::uniform_from_bits(rng()) < pb ? 1.0 : -1.0;
        }
        const auto ci = tr::bootstrap_ci({{"A", 1.0, a}, {"B", -1.0, b}}, 1000, 7000 + r);
        covered += (ci.low <= truth && truth <= ci.high) ? 1 : 0;
    }
    const double coverage = static_cast<double>(covered) / reps;
    EXPECT_GE(coverage, 0.92);
    EXPECT_LE(coverage, 0.98);
}

TEST(AcfSeries, Validation)
{
    tr::AcfSeries s;
    s.times = {0.0, 0.1, 0.1};
    s.values = {1.0, 1.0, 1.0};
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s.times = {0.0, 0.1, 0.2};
    s.ci_low = {0.9, 0.9, 1.1};
    s.ci_high = {1.1, 1.1, 1.2};
    EXPECT_THROW(s.validate(), std::invalid_argument);
    EXPECT_EQ(tr::parse_provenance("sampled"), tr::Provenance::kSampled);
}
