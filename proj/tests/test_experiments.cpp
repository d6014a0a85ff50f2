// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#include "chanest/errors.hpp"
#include "chanest/experiments.hpp"
#include "chanest/model.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace chanest;

namespace {

SystemConfig tiny()
{
    SystemConfig c;
    c.n_rx = 4;
    c.n_tx = 2;
    c.n_blocks = 5;
    c.n_inner_iters = 4;
    c.n_ensemble = 16;
    c.n_particles = 32;
    c.n_mc_runs = 6;
    c.track_rx = c.track_tx = 1;
    c.conv_rx = 3;
    c.conv_tx = 2;
    return c;
}

// Two real components, unit large-scale gain, fixed correlation.
SystemConfig linear_gaussian(int n_ensemble)
{
    SystemConfig c;
    c.n_rx = 2;
    c.n_tx = 1;
    c.track_rx = c.track_tx = c.conv_rx = c.conv_tx = 1;
    c.shadow_std_db = 0.0;
    c.min_distance_m = c.max_distance_m = c.ref_distance_m;
    c.alpha = 0.95;
    c.noise_var = 1.0;
    c.n_blocks = 50;
    c.n_mc_runs = 20;
    c.n_ensemble = n_ensemble;
    c.n_particles = 200;
    return c;
}

void expect_same(const std::vector<MetricsSeries>& a, const std::vector<MetricsSeries>& b)
{
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].algorithm, b[i].algorithm);
        EXPECT_EQ(a[i].index, b[i].index);
        EXPECT_EQ(a[i].rmse, b[i].rmse);
        EXPECT_EQ(a[i].sample_variance, b[i].sample_variance);
    }
}

} // namespace

TEST(Tracking, ShapeAndLabels)
{
    const SystemConfig c = tiny();
    const TrackingResult r = run_tracking_experiment(c, {1});
    ASSERT_EQ(r.block_series.size(), 5u);
    for (Algorithm a : kAllAlgorithms) {
        const MetricsSeries& s = find_series(r.block_series, algorithm_label(a));
        ASSERT_EQ(s.index.size(), static_cast<std::size_t>(c.n_blocks));
        EXPECT_EQ(s.index.front(), 1);
        EXPECT_EQ(s.axis, Axis::block);
        EXPECT_EQ(s.coeff_rx, 1);
        const MetricsSeries& it = find_series(r.iteration_series, algorithm_label(a));
        ASSERT_EQ(it.index.size(), static_cast<std::size_t>(c.n_inner_iters + 1));
        EXPECT_EQ(it.index.front(), 0);
        for (double v : s.rmse)
            EXPECT_TRUE(std::isfinite(v) && v >= 0.0);
    }
    EXPECT_EQ(r.trace.size(), static_cast<std::size_t>(c.n_blocks));
    EXPECT_EQ(r.trace.front().block, 1);
    EXPECT_NEAR(r.alpha, channel_alpha(c), 0.0);
    EXPECT_THROW(find_series(r.block_series, "kalman"), InvalidParameter);
}

TEST(Tracking, Deterministic)
{
    const SystemConfig c = tiny();
    const TrackingResult a = run_tracking_experiment(c, {1});
    const TrackingResult b = run_tracking_experiment(c, {1});
    expect_same(a.block_series, b.block_series);
    expect_same(a.iteration_series, b.iteration_series);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        EXPECT_EQ(a.trace[i].truth_real, b.trace[i].truth_real);
        EXPECT_EQ(a.trace[i].est_ensrf, b.trace[i].est_ensrf);
    }
}

TEST(Tracking, ThreadCountDoesNotChangeResults)
{
    const SystemConfig c = tiny();
    const TrackingResult one = run_tracking_experiment(c, {1});
    const TrackingResult many = run_tracking_experiment(c, {4});
    expect_same(one.block_series, many.block_series);
    expect_same(one.iteration_series, many.iteration_series);
}

TEST(Tracking, SeedChangesResults)
{
    SystemConfig c = tiny();
    const TrackingResult a = run_tracking_experiment(c, {1});
    c.master_seed = 1000;
    const TrackingResult b = run_tracking_experiment(c, {1});
    EXPECT_NE(find_series(a.block_series, "ensrf").rmse, find_series(b.block_series, "ensrf").rmse);
}

TEST(Tracking, IterationZeroIsThePrior)
{
    const TrackingResult r = run_tracking_experiment(tiny(), {1});
    // the oracle's prior mean is exactly zero in every run
    const MetricsSeries& oracle = find_series(r.iteration_series, "oracle");
    EXPECT_EQ(oracle.sample_variance.front(), 0.0);
    // ensemble priors are centred draws, so their means sit near zero as well
    for (const char* name : {"sir", "ensrf", "puensrf"}) {
        const MetricsSeries& s = find_series(r.iteration_series, name);
        EXPECT_NEAR(s.rmse.front(), oracle.rmse.front(), 0.5 * oracle.rmse.front()) << name;
    }
    // the LS estimate does not iterate
    const MetricsSeries& ls = find_series(r.iteration_series, "ls");
    for (double v : ls.rmse)
        EXPECT_EQ(v, ls.rmse.front());
}

TEST(Tracking, SingleBlockIsConvergenceEndpoint)
{
    SystemConfig c = tiny();
    c.n_blocks = 1;
    c.conv_rx = c.track_rx;
    c.conv_tx = c.track_tx;
    const TrackingResult t = run_tracking_experiment(c, {1});
    const ConvergenceResult v = run_convergence_experiment(c, {1});
    for (const char* name : {"sir", "ensrf", "puensrf", "oracle", "ls"}) {
        const MetricsSeries& block = find_series(t.block_series, name);
        const MetricsSeries& iter = find_series(v.series, name);
        ASSERT_EQ(block.rmse.size(), 1u);
        EXPECT_EQ(block.rmse.front(), iter.rmse.back()) << name;
        EXPECT_EQ(block.sample_variance.front(), iter.sample_variance.back()) << name;
    }
}

TEST(Tracking, OracleBeatsLeastSquares)
{
    SystemConfig c = tiny();
    c.n_mc_runs = 20;
    c.n_blocks = 20;
    c.n_inner_iters = 2;
    const TrackingResult r = run_tracking_experiment(c, {1});
    EXPECT_LE(series_mean(find_series(r.block_series, "oracle").rmse),
              series_mean(find_series(r.block_series, "ls").rmse));
}

TEST(Tracking, SharedTrajectoryKeepsRunZeroTruth)
{
    SystemConfig c = tiny();
    const TrackingResult a = run_tracking_experiment(c, {1});
    c.shared_trajectory = true;
    const TrackingResult b = run_tracking_experiment(c, {1});
    for (std::size_t i = 0; i < a.trace.size(); ++i)
        EXPECT_EQ(a.trace[i].truth_real, b.trace[i].truth_real);
    EXPECT_NE(find_series(a.block_series, "ls").rmse, find_series(b.block_series, "ls").rmse);
}

TEST(Tracking, NeedsTwoRuns)
{
    SystemConfig c = tiny();
    c.n_mc_runs = 1;
    EXPECT_THROW(run_tracking_experiment(c, {1}), InvalidParameter);
    EXPECT_THROW(run_convergence_experiment(c, {1}), InvalidParameter);
}

TEST(Convergence, ShapeAndTruth)
{
    const SystemConfig c = tiny();
    const ConvergenceResult r = run_convergence_experiment(c, {1});
    EXPECT_EQ(r.coeff_rx, 3);
    EXPECT_EQ(r.coeff_tx, 2);
    EXPECT_TRUE(std::isfinite(r.sample_truth));
    for (const auto& s : r.series) {
        EXPECT_EQ(s.axis, Axis::iteration);
        ASSERT_EQ(s.index.size(), static_cast<std::size_t>(c.n_inner_iters + 1));
        EXPECT_EQ(s.index.back(), c.n_inner_iters);
    }
}

TEST(FirstDrop, HandCases)
{
    EXPECT_EQ(first_drop_index({1.0, 1.0, 1.0}, 1.5), 0);
    // smoothed with window 1 the series is itself: first value below 1.5 * 1
    EXPECT_EQ(first_drop_index({8.0, 4.0, 2.0, 1.4, 1.0, 1.0}, 1.5, 1), 3);
    // window 3: smoothed values 6, 4.67, 2.47, 1.47, 1.13, 1
    EXPECT_EQ(first_drop_index({8.0, 4.0, 2.0, 1.4, 1.0, 1.0}, 1.5, 3), 3);
    EXPECT_THROW(first_drop_index({}, 1.5), InvalidParameter);
}

TEST(OracleComparison, SharedForecastMeansAgree)
{
    SystemConfig c = linear_gaussian(50);
    c.n_blocks = 10;
    c.n_mc_runs = 4;
    const OracleReport r = run_oracle_comparison(c, {1});
    EXPECT_LT(r.shared_forecast_max_gap, 1e-12);
    ASSERT_EQ(r.series.size(), 4u);
    EXPECT_EQ(r.series[1].algorithm, "ensrf");
    EXPECT_EQ(r.series[1].rms_deviation.size(), 10u);
}

TEST(OracleComparison, EnsembleDeviationShrinksWithSize)
{
    const OracleReport small = run_oracle_comparison(linear_gaussian(200), {1});
    const OracleReport large = run_oracle_comparison(linear_gaussian(2000), {1});
    EXPECT_LT(large.series[1].overall_normalized_rms, small.series[1].overall_normalized_rms);
    EXPECT_LT(large.series[1].overall_normalized_rms, 0.05);
}

TEST(OracleComparison, LeastSquaresDeviation)
{
    const SystemConfig c = linear_gaussian(20);
    const OracleReport r = run_oracle_comparison(c, {1});
    const double ls_var = 0.5 * c.noise_var / db_to_linear(c.uplink_power_db);
    // LS - oracle mean is orthogonal to the oracle error, so its variance is
    // the LS error variance less the (data-independent) posterior variance.
    const OracleSeries& ls = r.series[3];
    double dev_sq = 0.0;
    for (double d : ls.rms_deviation)
        dev_sq += d * d;
    dev_sq /= static_cast<double>(ls.rms_deviation.size());
    const double post_var = r.mean_oracle_std * r.mean_oracle_std;
    EXPECT_NEAR(dev_sq / (ls_var - post_var), 1.0, 0.1);
    EXPECT_GT(ls.overall_normalized_rms, 1.0);
}
