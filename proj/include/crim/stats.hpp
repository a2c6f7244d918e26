#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "crim/errors.hpp"

namespace crim {

// Quartiles of one sample plus the 1.5*IQR outlier fences.
struct QuartileSummary {
    double q1 = 0.0;
    double q2 = 0.0;
    double q3 = 0.0;
    double iqr = 0.0;
    double lower_fence = 0.0;
    double upper_fence = 0.0;
};

// The count/mean/std/min/25%/50%/75%/max summary shape.
struct DescriptiveStats {
    std::size_t count = 0;
    double mean = 0.0;
    double std_dev = 0.0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

namespace detail {

inline void require_nonempty_finite(std::span<const double> values) {
    if (values.empty()) {
        throw EmptyInput("expected at least one value");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw NonFiniteValue("non-finite value in sample");
        }
    }
}

}  // namespace detail

// Quantile of a sorted sample by linear interpolation between order
// statistics at rank h = (n-1)*q (the "type 7" definition).
inline double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        throw EmptyInput("quantile of empty sample");
    }
    q = std::clamp(q, 0.0, 1.0);
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const std::size_t lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0 || lo + 1 >= sorted.size()) {
        return sorted[lo];
    }
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double quantile(std::span<const double> values, double q) {
    detail::require_nonempty_finite(values);
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, q);
}

inline QuartileSummary iqr_fences(std::span<const double> values) {
    detail::require_nonempty_finite(values);
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    QuartileSummary s;
    s.q1 = quantile_sorted(sorted, 0.25);
    s.q2 = quantile_sorted(sorted, 0.50);
    s.q3 = quantile_sorted(sorted, 0.75);
    s.iqr = s.q3 - s.q1;
    s.lower_fence = s.q1 - 1.5 * s.iqr;
    s.upper_fence = s.q3 + 1.5 * s.iqr;
    return s;
}

inline DescriptiveStats describe(std::span<const double> values) {
    detail::require_nonempty_finite(values);
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    DescriptiveStats d;
    d.count = sorted.size();
    double sum = 0.0;
    for (double v : sorted) sum += v;
    d.mean = sum / static_cast<double>(d.count);

    if (d.count > 1) {
        double ss = 0.0;
        for (double v : sorted) {
            const double dev = v - d.mean;
            ss += dev * dev;
        }
        d.std_dev = std::sqrt(ss / static_cast<double>(d.count - 1));
    }

    d.min = sorted.front();
    d.q1 = quantile_sorted(sorted, 0.25);
    d.median = quantile_sorted(sorted, 0.50);
    d.q3 = quantile_sorted(sorted, 0.75);
    d.max = sorted.back();
    return d;
}

}  // namespace crim
