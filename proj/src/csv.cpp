// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#include "chanest/csv.hpp"

#include "chanest/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace chanest {

std::string format_fixed9(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[400];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 9);
    if (ec != std::errc())
        throw std::runtime_error("format_fixed9: value does not fit");
    std::string s(buf, ptr);
    if (s == "-0.000000000")
        s.erase(0, 1);
    return s;
}

std::string metrics_csv(const std::vector<MetricsSeries>& series)
{
    if (series.empty())
        throw InvalidParameter("metrics_csv: no series to write");
    const Axis axis = series.front().axis;
    std::vector<const MetricsSeries*> order;
    for (const auto& s : series) {
        if (s.axis != axis)
            throw StructuralError("metrics_csv: mixed block and iteration series");
        if (s.index.size() != s.rmse.size() || s.index.size() != s.sample_variance.size())
            throw StructuralError("metrics_csv: series arrays differ in length");
        order.push_back(&s);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const MetricsSeries* a, const MetricsSeries* b) { return a->algorithm < b->algorithm; });

    std::string out = std::string("algorithm,") + (axis == Axis::block ? "block" : "iteration") + ",rmse,sample_variance\n";
    for (const MetricsSeries* s : order) {
        std::vector<std::size_t> rows(s->index.size());
        std::iota(rows.begin(), rows.end(), 0);
        std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) { return s->index[a] < s->index[b]; });
        for (const std::size_t i : rows) {
            out += s->algorithm;
            out += ',';
            out += std::to_string(s->index[i]);
            out += ',';
            out += format_fixed9(s->rmse[i]);
            out += ',';
            out += format_fixed9(s->sample_variance[i]);
            out += '\n';
        }
    }
    return out;
}

std::string trace_csv(const std::vector<TraceRow>& rows)
{
    std::string out = "block,truth_real,est_sir,est_ensrf,est_puensrf\n";
    for (const auto& r : rows) {
        out += std::to_string(r.block) + ',' + format_fixed9(r.truth_real) + ',' + format_fixed9(r.est_sir) + ','
            + format_fixed9(r.est_ensrf) + ',' + format_fixed9(r.est_puensrf) + '\n';
    }
    return out;
}

std::string oracle_csv(const OracleReport& report)
{
    std::vector<const OracleSeries*> order;
    for (const auto& s : report.series)
        order.push_back(&s);
    std::stable_sort(order.begin(), order.end(),
                     [](const OracleSeries* a, const OracleSeries* b) { return a->algorithm < b->algorithm; });
    std::string out = "algorithm,block,rms_deviation,normalized_rms,spread_ratio\n";
    for (const OracleSeries* s : order) {
        for (std::size_t b = 0; b < s->rms_deviation.size(); ++b) {
            out += s->algorithm + ',' + std::to_string(b + 1) + ',' + format_fixed9(s->rms_deviation[b]) + ','
                + format_fixed9(s->normalized_rms[b]) + ',' + format_fixed9(s->spread_ratio[b]) + '\n';
        }
    }
    return out;
}

std::vector<MetricsSeries> parse_metrics_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw StructuralError("parse_metrics_csv: empty input");
    Axis axis;
    if (line == "algorithm,block,rmse,sample_variance")
        axis = Axis::block;
    else if (line == "algorithm,iteration,rmse,sample_variance")
        axis = Axis::iteration;
    else
        throw StructuralError("parse_metrics_csv: unexpected header '" + line + "'");

    std::vector<MetricsSeries> out;
    std::map<std::string, std::size_t> slot;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');)
            cells.push_back(cell);
        if (cells.size() != 4)
            throw StructuralError("parse_metrics_csv: line " + std::to_string(line_no) + " has "
                                  + std::to_string(cells.size()) + " fields");
        auto [it, fresh] = slot.try_emplace(cells[0], out.size());
        if (fresh) {
            out.emplace_back();
            out.back().algorithm = cells[0];
            out.back().axis = axis;
        }
        MetricsSeries& s = out[it->second];
        try {
            s.index.push_back(std::stoi(cells[1]));
            s.rmse.push_back(std::stod(cells[2]));
            s.sample_variance.push_back(std::stod(cells[3]));
        } catch (const std::exception&) {
            throw StructuralError("parse_metrics_csv: bad number on line " + std::to_string(line_no));
        }
    }
    return out;
}

std::filesystem::path write_text_file(const std::filesystem::path& dir, const std::string& name, const std::string& text)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    out.close();
    if (!out)
        throw std::runtime_error("write to '" + path.string() + "' failed");
    return path;
}

std::vector<std::filesystem::path> emit_csv(const TrackingResult& result, const std::filesystem::path& output_dir)
{
    return {write_text_file(output_dir, "tracking.csv", metrics_csv(result.block_series)),
            write_text_file(output_dir, "convergence.csv", metrics_csv(result.iteration_series)),
            write_text_file(output_dir, "trace.csv", trace_csv(result.trace))};
}

std::vector<std::filesystem::path> emit_csv(const ConvergenceResult& result, const std::filesystem::path& output_dir)
{
    return {write_text_file(output_dir, "convergence.csv", metrics_csv(result.series))};
}

} // namespace chanest
