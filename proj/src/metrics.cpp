// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#include "chanest/metrics.hpp"

#include "chanest/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace chanest {

using Eigen::Index;

namespace {

double sorted_sum(std::vector<double>& terms)
{
    std::sort(terms.begin(), terms.end());
    return std::accumulate(terms.begin(), terms.end(), 0.0);
}

} // namespace

std::vector<double> rmse_series(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimates)
{
    if (truth.rows() != estimates.rows() || truth.cols() != estimates.cols())
        throw StructuralError("rmse_series: truth and estimates differ in shape");
    if (estimates.rows() < 1)
        throw InvalidParameter("rmse_series: need at least one run");
    const Index runs = estimates.rows();
    std::vector<double> out(static_cast<std::size_t>(estimates.cols()));
    std::vector<double> terms(static_cast<std::size_t>(runs));
    for (Index k = 0; k < estimates.cols(); ++k) {
        for (Index m = 0; m < runs; ++m) {
            const double e = truth(m, k) - estimates(m, k);
            terms[static_cast<std::size_t>(m)] = e * e;
        }
        out[static_cast<std::size_t>(k)] = std::sqrt(sorted_sum(terms) / static_cast<double>(runs));
    }
    return out;
}

std::vector<double> sample_variance_series(const Eigen::MatrixXd& estimates)
{
    const Index runs = estimates.rows();
    if (runs < 2)
        throw InvalidParameter("sample_variance_series: need at least two runs");
    std::vector<double> out(static_cast<std::size_t>(estimates.cols()));
    std::vector<double> terms(static_cast<std::size_t>(runs));
    for (Index k = 0; k < estimates.cols(); ++k) {
        for (Index m = 0; m < runs; ++m)
            terms[static_cast<std::size_t>(m)] = estimates(m, k);
        const double mean = sorted_sum(terms) / static_cast<double>(runs);
        for (Index m = 0; m < runs; ++m) {
            const double d = estimates(m, k) - mean;
            terms[static_cast<std::size_t>(m)] = d * d;
        }
        out[static_cast<std::size_t>(k)] = sorted_sum(terms) / static_cast<double>(runs - 1);
    }
    return out;
}

double series_mean(const std::vector<double>& values)
{
    if (values.empty())
        return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

} // namespace chanest
