#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace stoplab {

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

inline MeanStderr mean_stderr(const std::vector<double>& v) {
    MeanStderr r;
    r.n = v.size();
    if (v.empty()) return r;
    double s = 0.0;
    for (double x : v) s += x;
    r.mean = s / static_cast<double>(v.size());
    double q = 0.0;
    for (double x : v) q += (x - r.mean) * (x - r.mean);
    if (v.size() > 1)
        r.stderr_ = std::sqrt(q / static_cast<double>(v.size() - 1) /
                              static_cast<double>(v.size()));
    return r;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Kolmogorov-Smirnov against N(mu, sigma^2); returns the asymptotic p-value
// with the Stephens small-sample correction.
inline double ks_normal_pvalue(std::vector<double> samples, double mu, double sigma) {
    std::sort(samples.begin(), samples.end());
    const auto n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double c = normal_cdf((samples[i] - mu) / sigma);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, std::abs(c - lo), std::abs(c - hi)});
    }
    const double t = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k)
        p += 2.0 * (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * t * t);
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace stoplab
