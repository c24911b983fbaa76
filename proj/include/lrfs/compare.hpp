#pragma once

#include <cmath>
#include <map>

#include "lrfs/slc.hpp"

namespace lrfs {

inline constexpr double kStructureMismatch = 1e100;

inline double component_diff(const GaussianComponent& a, const GaussianComponent& b) {
    double d = std::abs(a.weight - b.weight);
    d = std::max(d, (a.mean - b.mean).cwiseAbs().maxCoeff());
    d = std::max(d, (a.cov - b.cov).cwiseAbs().maxCoeff());
    return d;
}

/// Componentwise parameter distance; structural mismatch is off the scale.
inline double mixture_diff(const GaussianMixture& a, const GaussianMixture& b) {
    if (a.size() != b.size()) return kStructureMismatch;
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, component_diff(a.components()[i], b.components()[i]));
    return d;
}

inline double max_spatial_diff(const std::map<SpatialKey, GaussianMixture>& a,
                               const std::map<SpatialKey, GaussianMixture>& b) {
    double d = 0.0;
    for (const auto& [key, mix] : a) {
        auto it = b.find(key);
        if (it == b.end()) return kStructureMismatch;
        d = std::max(d, mixture_diff(mix, it->second));
    }
    for (const auto& [key, mix] : b)
        if (a.find(key) == a.end()) return kStructureMismatch;
    return d;
}

/// Largest hypothesis-weight discrepancy; entries missing on one side
/// count at their full weight.
inline double max_weight_diff(const GlmbDensity& a, const GlmbDensity& b) {
    double d = 0.0;
    for (const auto& [key, w] : a.weights) {
        auto it = b.weights.find(key);
        d = std::max(d, std::abs(w - (it == b.weights.end() ? 0.0 : it->second)));
    }
    for (const auto& [key, w] : b.weights)
        if (a.weights.find(key) == a.weights.end()) d = std::max(d, std::abs(w));
    return d;
}

/// Joint-weight comparison of a quadruple-form density against a classical
/// one: omega(L) * alpha_o(L) versus the hypothesis weights.
inline double max_joint_diff(const SlcDensity& s, const GlmbDensity& g) {
    return max_weight_diff(to_glmb(s), g);
}

inline double max_slc_diff(const SlcDensity& a, const SlcDensity& b) {
    double d = 0.0;
    for (const auto& [ls, w] : a.label_weight) {
        auto it = b.label_weight.find(ls);
        d = std::max(d, std::abs(w - (it == b.label_weight.end() ? 0.0 : it->second)));
    }
    for (const auto& [ls, w] : b.label_weight)
        if (a.label_weight.find(ls) == a.label_weight.end()) d = std::max(d, std::abs(w));
    for (const auto& [key, v] : a.correlation_weight) {
        auto it = b.correlation_weight.find(key);
        d = std::max(d, std::abs(v - (it == b.correlation_weight.end() ? 0.0 : it->second)));
    }
    for (const auto& [key, v] : b.correlation_weight)
        if (a.correlation_weight.find(key) == a.correlation_weight.end())
            d = std::max(d, std::abs(v));
    return d;
}

}  // namespace lrfs
