#pragma once

#include <cmath>
#include <vector>

#include "lrfs/assignment.hpp"
#include "lrfs/core.hpp"
#include "lrfs/estimate.hpp"

namespace lrfs {

/// Optimal-subpattern-assignment distance between two point sets: the
/// best-matching localization error, capped at c per pair, plus a
/// cardinality penalty of c per unmatched point, all under the order-p
/// mean. Zero iff the multisets coincide; c when exactly one set is empty.
inline double ospa(const std::vector<Vector>& a, const std::vector<Vector>& b, double cutoff,
                   double order) {
    if (!(cutoff > 0.0) || !(order >= 1.0))
        throw std::invalid_argument("ospa requires cutoff > 0 and order >= 1");
    const std::vector<Vector>& small = a.size() <= b.size() ? a : b;
    const std::vector<Vector>& large = a.size() <= b.size() ? b : a;
    const std::size_t m = small.size(), n = large.size();
    if (n == 0) return 0.0;

    double matched_cost = 0.0;
    if (m > 0) {
        std::vector<std::vector<double>> cost(m, std::vector<double>(n));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                cost[i][j] = std::pow(std::min(cutoff, (small[i] - large[j]).norm()), order);
        auto sol = solve_assignment(cost);
        matched_cost = sol.cost;
    }
    double total = matched_cost + std::pow(cutoff, order) * double(n - m);
    return std::pow(total / double(n), 1.0 / order);
}

/// OSPA between a truth set and an estimate, on the kinematic points only.
inline double ospa(const LabeledFiniteSet& truth, const Estimate& estimate, double cutoff,
                   double order) {
    std::vector<Vector> a, b;
    for (const LabeledState& e : truth.elements()) a.push_back(e.kinematic);
    for (const auto& [l, x] : estimate.states) b.push_back(x);
    return ospa(a, b, cutoff, order);
}

}  // namespace lrfs
