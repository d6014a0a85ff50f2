// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#include "chanest/csv.hpp"
#include "chanest/errors.hpp"
#include "chanest/rng.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace chanest;
namespace fs = std::filesystem;

namespace {

MetricsSeries series(const std::string& name, Axis axis, std::vector<int> index, std::vector<double> rmse,
                     std::vector<double> var)
{
    MetricsSeries s;
    s.algorithm = name;
    s.axis = axis;
    s.index = std::move(index);
    s.rmse = std::move(rmse);
    s.sample_variance = std::move(var);
    return s;
}

fs::path scratch_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("chanest_csv_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST(FormatFixed, NineDecimals)
{
    EXPECT_EQ(format_fixed9(0.0), "0.000000000");
    EXPECT_EQ(format_fixed9(-0.0), "0.000000000");
    EXPECT_EQ(format_fixed9(-1e-12), "0.000000000");
    EXPECT_EQ(format_fixed9(1.5), "1.500000000");
    EXPECT_EQ(format_fixed9(-0.1234567894), "-0.123456789");
    EXPECT_EQ(format_fixed9(12345.0), "12345.000000000");
}

TEST(MetricsCsv, SingleRowFixture)
{
    const std::string text = metrics_csv({series("ensrf", Axis::block, {1}, {0.0}, {0.0})});
    EXPECT_EQ(text, "algorithm,block,rmse,sample_variance\nensrf,1,0.000000000,0.000000000\n");
}

TEST(MetricsCsv, RowsSortedByAlgorithmThenIndex)
{
    const std::string text = metrics_csv({series("sir", Axis::iteration, {2, 0, 1}, {0.2, 0.0, 0.1}, {0, 0, 0}),
                                          series("ensrf", Axis::iteration, {1, 0}, {1.1, 1.0}, {0, 0})});
    EXPECT_EQ(text, "algorithm,iteration,rmse,sample_variance\n"
                    "ensrf,0,1.000000000,0.000000000\n"
                    "ensrf,1,1.100000000,0.000000000\n"
                    "sir,0,0.000000000,0.000000000\n"
                    "sir,1,0.100000000,0.000000000\n"
                    "sir,2,0.200000000,0.000000000\n");
}

TEST(MetricsCsv, RoundTrip)
{
    Rng rng(5);
    std::vector<MetricsSeries> in;
    for (const char* name : {"ensrf", "ls", "oracle", "puensrf", "sir"}) {
        MetricsSeries s = series(name, Axis::block, {}, {}, {});
        for (int b = 1; b <= 50; ++b) {
            s.index.push_back(b);
            s.rmse.push_back(rng.uniform(0.0, 3.0));
            s.sample_variance.push_back(rng.uniform(0.0, 1e-3));
        }
        in.push_back(std::move(s));
    }
    const auto out = parse_metrics_csv(metrics_csv(in));
    ASSERT_EQ(out.size(), in.size());
    for (std::size_t a = 0; a < in.size(); ++a) {
        EXPECT_EQ(out[a].algorithm, in[a].algorithm);
        EXPECT_EQ(out[a].axis, Axis::block);
        EXPECT_EQ(out[a].index, in[a].index);
        for (std::size_t i = 0; i < in[a].rmse.size(); ++i) {
            EXPECT_NEAR(out[a].rmse[i], in[a].rmse[i], 1e-9);
            EXPECT_NEAR(out[a].sample_variance[i], in[a].sample_variance[i], 1e-9);
        }
    }
}

TEST(MetricsCsv, ParseRejections)
{
    EXPECT_THROW(parse_metrics_csv(""), StructuralError);
    EXPECT_THROW(parse_metrics_csv("a,b,c\n"), StructuralError);
    EXPECT_THROW(parse_metrics_csv("algorithm,block,rmse,sample_variance\nsir,1,0.5\n"), StructuralError);
    EXPECT_THROW(parse_metrics_csv("algorithm,block,rmse,sample_variance\nsir,x,0.5,0.1\n"), StructuralError);
}

TEST(TraceCsv, Format)
{
    const std::string text = trace_csv({{1, 0.25, -0.5, 0.0, 1.0}, {2, 0.0, 0.0, 0.0, 0.0}});
    EXPECT_EQ(text, "block,truth_real,est_sir,est_ensrf,est_puensrf\n"
                    "1,0.250000000,-0.500000000,0.000000000,1.000000000\n"
                    "2,0.000000000,0.000000000,0.000000000,0.000000000\n");
}

TEST(OracleCsv, HeaderAndRows)
{
    OracleReport r;
    OracleSeries s;
    s.algorithm = "ensrf";
    s.rms_deviation = {0.5};
    s.normalized_rms = {0.25};
    s.spread_ratio = {1.0};
    r.series.push_back(s);
    EXPECT_EQ(oracle_csv(r), "algorithm,block,rms_deviation,normalized_rms,spread_ratio\n"
                             "ensrf,1,0.500000000,0.250000000,1.000000000\n");
}

TEST(EmitCsv, TrackingWritesThreeFiles)
{
    TrackingResult r;
    r.block_series = {series("ensrf", Axis::block, {1}, {0.0}, {0.0})};
    r.iteration_series = {series("ensrf", Axis::iteration, {0, 1}, {0.5, 0.25}, {0.0, 0.0})};
    r.trace = {{1, 0.0, 0.0, 0.0, 0.0}};
    const fs::path dir = scratch_dir("tracking") / "nested";
    const auto paths = emit_csv(r, dir);
    ASSERT_EQ(paths.size(), 3u);
    EXPECT_EQ(slurp(dir / "tracking.csv"), "algorithm,block,rmse,sample_variance\nensrf,1,0.000000000,0.000000000\n");
    EXPECT_TRUE(fs::exists(dir / "convergence.csv"));
    EXPECT_TRUE(fs::exists(dir / "trace.csv"));
    const std::string again = slurp(dir / "convergence.csv");
    emit_csv(r, dir);
    EXPECT_EQ(slurp(dir / "convergence.csv"), again);
}

TEST(EmitCsv, UnwritableDirectory)
{
    const fs::path dir = scratch_dir("blocked");
    fs::create_directories(dir);
    std::ofstream(dir / "file") << "x";
    ConvergenceResult r;
    r.series = {series("sir", Axis::iteration, {0}, {0.0}, {0.0})};
    EXPECT_THROW(emit_csv(r, dir / "file" / "sub"), std::runtime_error);
}
