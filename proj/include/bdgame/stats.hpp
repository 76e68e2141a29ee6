#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "bdgame/common.hpp"

namespace bdgame {

struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};

// 95% Wilson score interval; behaves sensibly at win rates near 0 and 1.
inline WilsonInterval wilson95(std::uint64_t successes, std::uint64_t trials) {
    require(trials >= 1 && successes <= trials, "wilson95: bad counts");
    const double z = 1.959963984540054;
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {center - half, center + half};
}

inline double binomial_sigma(double p, std::uint64_t trials) {
    double n = static_cast<double>(trials);
    return std::sqrt(std::max(p * (1.0 - p), 1.0 / n) / n);
}

// One-parameter shape fit y ~= c * shape, performed on log(y) so only the
// curve's shape matters, not its scale. R^2 is reported in log space.
struct ShapeFit {
    double scale = 0.0;
    double r_squared = 0.0;
};

inline ShapeFit fit_log_shape(const std::vector<double>& y, const std::vector<double>& shape) {
    require(y.size() == shape.size() && y.size() >= 2, "fit_log_shape: need >= 2 points");
    std::vector<double> ly, ls;
    for (size_t i = 0; i < y.size(); ++i) {
        require(y[i] > 0.0 && shape[i] > 0.0, "fit_log_shape: values must be positive");
        ly.push_back(std::log(y[i]));
        ls.push_back(std::log(shape[i]));
    }
    double offset = 0.0;
    for (size_t i = 0; i < ly.size(); ++i) offset += ly[i] - ls[i];
    offset /= static_cast<double>(ly.size());

    double mean = 0.0;
    for (double v : ly) mean += v;
    mean /= static_cast<double>(ly.size());

    double ss_res = 0.0, ss_tot = 0.0;
    for (size_t i = 0; i < ly.size(); ++i) {
        double r = ly[i] - (ls[i] + offset);
        ss_res += r * r;
        double d = ly[i] - mean;
        ss_tot += d * d;
    }
    ShapeFit f;
    f.scale = std::exp(offset);
    f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

}  // namespace bdgame
