#pragma once

#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "lsa/error.hpp"

namespace lsa {

enum class Verdict { ABetter, Tie, BBetter };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::ABetter: return "A-better";
        case Verdict::Tie: return "tie";
        case Verdict::BBetter: return "B-better";
    }
    return "?";
}

struct TTestResult {
    Verdict verdict = Verdict::Tie;
    double t = 0.0;
    double threshold = 0.0;  // two-sided critical value, df = n - 1
    double mean_diff = 0.0;
};

inline double mean(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
inline double stddev(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

/// Two-sided paired t-test on a[i] - b[i] at confidence `level` (e.g. 0.9).
/// Zero-variance differences give a tie when their mean is zero and a
/// winner by sign otherwise (t = +-inf).
inline TTestResult paired_ttest(std::span<const double> a, std::span<const double> b, double level) {
    if (a.size() != b.size()) throw Error("paired_ttest: samples differ in length");
    if (a.size() < 2) throw Error("paired_ttest: need at least two pairs");
    if (!(level > 0.0 && level < 1.0)) throw Error("paired_ttest: level must lie in (0, 1)");

    const std::size_t n = a.size();
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];

    TTestResult res;
    res.mean_diff = mean(diff);
    const double sd = stddev(diff);
    const boost::math::students_t dist(static_cast<double>(n - 1));
    res.threshold = boost::math::quantile(dist, 1.0 - (1.0 - level) / 2.0);

    if (sd == 0.0) {
        if (res.mean_diff == 0.0) return res;
        res.t = std::copysign(std::numeric_limits<double>::infinity(), res.mean_diff);
        res.verdict = res.mean_diff > 0.0 ? Verdict::ABetter : Verdict::BBetter;
        return res;
    }
    res.t = res.mean_diff / (sd / std::sqrt(static_cast<double>(n)));
    if (std::abs(res.t) > res.threshold) res.verdict = res.t > 0.0 ? Verdict::ABetter : Verdict::BBetter;
    return res;
}

}  // namespace lsa
