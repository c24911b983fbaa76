#pragma once

#include <cmath>
#include <vector>

#include "lrfs/slc.hpp"

namespace lrfs {

/// First-order factorial-moment density at a labeled point: the
/// correlation-weighted spatial density folded over every label set that
/// contains the query label. Integrating it over x and summing over labels
/// gives the expected target count.
inline double first_moment_density(const SlcDensity& d, const LabeledState& x) {
    double v = 0.0;
    for (const auto& [key, a] : d.correlation_weight) {
        if (!(a > 0.0) || !key.labels.contains(x.label)) continue;
        auto lw = d.label_weight.find(key.labels);
        if (lw == d.label_weight.end()) continue;
        v += lw->second * a * d.spatial_of(key.index, x.label).density(x.kinematic);
    }
    return v;
}

namespace detail {

/// The unique two-label support of a pair-concentrated density.
inline const LabelSet& pair_support(const SlcDensity& d) {
    if (d.label_weight.size() != 1)
        throw UnsupportedDensityError("density weight is spread over " +
                                      std::to_string(d.label_weight.size()) + " label sets");
    const LabelSet& support = d.label_weight.begin()->first;
    if (support.size() != 2)
        throw UnsupportedDensityError("supported label set " + to_string(support) +
                                      " is not a pair");
    return support;
}

}  // namespace detail

/// Factorial covariance density of a pair-concentrated density at two
/// labeled points: the joint two-target density minus the product of its
/// marginals, gated by a Kronecker delta on the label pair (mismatched or
/// duplicated query labels give exactly zero).
inline double factorial_covariance_pair(const SlcDensity& d, const LabeledState& x1,
                                        const LabeledState& x2) {
    const LabelSet& support = detail::pair_support(d);
    if (LabelSet{ x1.label, x2.label } != support) return 0.0;
    double joint = 0.0, marg1 = 0.0, marg2 = 0.0;
    for (const auto& [key, a] : d.correlation_weight) {
        if (key.labels != support || !(a > 0.0)) continue;
        double s1 = d.spatial_of(key.index, x1.label).density(x1.kinematic);
        double s2 = d.spatial_of(key.index, x2.label).density(x2.kinematic);
        joint += a * s1 * s2;
        marg1 += a * s1;
        marg2 += a * s2;
    }
    return joint - marg1 * marg2;
}

/// True when the density is a multi-Bernoulli: a single hypothesis index,
/// one spatial p.d.f. per label, and label-set weights in product form.
/// Such densities model independent targets.
inline bool is_multi_bernoulli(const SlcDensity& d, double tol = 1e-9) {
    const HypothesisIndex* only = nullptr;
    for (const auto& [key, a] : d.correlation_weight) {
        if (!(a > 0.0)) continue;
        if (only && key.index != *only) return false;
        only = &key.index;
    }
    std::map<Label, double> existence;
    for (const Label& l : d.universe) {
        double q = 0.0;
        for (const auto& [ls, w] : d.label_weight)
            if (ls.contains(l)) q += w;
        existence[l] = q;
    }
    for (const LabelSet& sub : d.universe.subsets()) {
        double expect = lmb_weight(d.universe, existence, sub);
        auto it = d.label_weight.find(sub);
        double got = it == d.label_weight.end() ? 0.0 : it->second;
        if (std::abs(expect - got) > tol) return false;
    }
    return true;
}

/// Maximum absolute factorial covariance over a probe grid for the given
/// label pair; zero signals independence at probe resolution. Handled in
/// closed form for pair-concentrated densities and for multi-Bernoulli
/// densities (whose factorial covariance vanishes identically); richer
/// supports are outside the closed form and are rejected.
inline double independence_gap(const SlcDensity& d, const std::pair<Label, Label>& pair,
                               const std::vector<Vector>& probe_grid) {
    if (is_multi_bernoulli(d)) return 0.0;
    const LabelSet& support = detail::pair_support(d);
    if (LabelSet{ pair.first, pair.second } != support) return 0.0;
    double gap = 0.0;
    for (const Vector& x1 : probe_grid)
        for (const Vector& x2 : probe_grid) {
            double c = factorial_covariance_pair(d, { x1, pair.first }, { x2, pair.second });
            gap = std::max(gap, std::abs(c));
        }
    return gap;
}

/// Probe points covering +-4 sigma around every component mean of the
/// densities' spatial mixtures along each axis, 21 points per axis
/// (one-dimensional kinematic spaces).
inline std::vector<Vector> default_probe_grid(const SlcDensity& d, int points_per_axis = 21) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& [key, mix] : d.spatial) {
        for (const GaussianComponent& c : mix.components()) {
            double sigma = std::sqrt(c.cov(0, 0));
            double a = c.mean(0) - 4.0 * sigma, b = c.mean(0) + 4.0 * sigma;
            if (first || a < lo) lo = a;
            if (first || b > hi) hi = b;
            first = false;
        }
    }
    std::vector<Vector> grid;
    for (int i = 0; i < points_per_axis; ++i) {
        Vector x(1);
        x(0) = lo + (hi - lo) * double(i) / double(points_per_axis - 1);
        grid.push_back(x);
    }
    return grid;
}

/// Pairwise correlation diagnostic at one probe pair plus the grid-level
/// independence gap.
struct CorrelationReport {
    LabeledState x1, x2;
    double fcd_value = 0.0;
    double independence_gap = 0.0;
};

inline CorrelationReport correlation_report(const SlcDensity& d, const LabeledState& x1,
                                            const LabeledState& x2,
                                            const std::vector<Vector>& probe_grid) {
    CorrelationReport r;
    r.x1 = x1;
    r.x2 = x2;
    r.fcd_value = factorial_covariance_pair(d, x1, x2);
    r.independence_gap = independence_gap(d, { x1.label, x2.label }, probe_grid);
    return r;
}

}  // namespace lrfs
