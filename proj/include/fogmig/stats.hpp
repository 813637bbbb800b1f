// Copyright 2026 The fogmig Authors
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

/// \file fogmig/stats.hpp
/// \brief Replication statistics: moments, paired t-test, slope.

#ifndef FOGMIG_STATS_HPP
#define FOGMIG_STATS_HPP

#include <fogmig/core.hpp>

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <numeric>
#include <vector>

namespace fogmig::stats {

inline double mean(const std::vector<double>& xs)
{
    if (xs.empty()) {
        return 0.0;
    }
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

/// Sample standard deviation (n - 1 denominator); 0 below two samples.
inline double stddev(const std::vector<double>& xs)
{
    if (xs.size() < 2) {
        return 0.0;
    }
    const double m = mean(xs);
    double ss = 0;
    for (double x : xs) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

struct PairedTest
{
    double mean_difference{0};  ///< mean of b - a
    double t{0};
    double critical{0};         ///< one-sided quantile at the requested level
    bool significant{false};    ///< b - a > 0 at that level
};

/// One-sided paired t-test of H1: mean(b - a) > 0.
inline PairedTest paired_greater(const std::vector<double>& a, const std::vector<double>& b, double confidence = 0.95)
{
    if (a.size() != b.size() || a.size() < 2) {
        throw DomainError("paired test needs two equally sized samples of at least 2");
    }
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        d[i] = b[i] - a[i];
    }
    PairedTest out;
    out.mean_difference = mean(d);
    const double sd = stddev(d);
    const auto n = static_cast<double>(d.size());
    boost::math::students_t dist(n - 1);
    out.critical = boost::math::quantile(dist, confidence);
    if (sd == 0) {
        out.t = out.mean_difference > 0 ? INFINITY : 0.0;
    } else {
        out.t = out.mean_difference / (sd / std::sqrt(n));
    }
    out.significant = out.mean_difference > 0 && out.t > out.critical;
    return out;
}

/// Ordinary least-squares slope of y on x.
inline double slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw DomainError("slope needs two equally sized samples of at least 2");
    }
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0;
    double sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0) {
        throw DomainError("slope: x has no spread");
    }
    return sxy / sxx;
}

} // namespace fogmig::stats

#endif // FOGMIG_STATS_HPP
