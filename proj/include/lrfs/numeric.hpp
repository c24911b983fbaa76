#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lrfs {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Rounds the mantissa to 40 bits (about 12 decimal digits). Used when
/// ranking hypothesis weights: weights that agree to this precision are
/// treated as tied, so selection cannot depend on summation-order noise.
inline double quantize_weight(double w) {
    if (!(w > 0.0)) return w;
    int e = 0;
    double m = std::frexp(w, &e);
    return std::ldexp(std::round(m * 0x1p40) * 0x1p-40, e);
}

/// log(sum_i exp(args[i])), stable against under/overflow.
/// Empty input and all -inf both yield -inf.
inline double log_sum_exp(const std::vector<double>& args) {
    if (args.empty()) return kNegInf;
    double max_arg = *std::max_element(args.begin(), args.end());
    if (max_arg == kNegInf) return kNegInf;
    double sum = 0.0;
    for (double a : args) sum += std::exp(a - max_arg);
    return max_arg + std::log(sum);
}

}  // namespace lrfs
