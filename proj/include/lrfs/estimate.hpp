#pragma once

#include <map>

#include "lrfs/slc.hpp"

namespace lrfs {

struct Estimate {
    LabelSet labels;
    std::map<Label, Vector> states;
};

namespace detail {

/// Most probable label set; ties resolved toward the lexicographically
/// smallest set (map iteration order is ascending, so the first maximum
/// encountered wins).
inline const LabelSet* map_label_set(const SlcDensity& d) {
    const LabelSet* best = nullptr;
    double best_w = -1.0;
    for (const auto& [ls, w] : d.label_weight) {
        if (w > best_w) {
            best_w = w;
            best = &ls;
        }
    }
    return best;
}

}  // namespace detail

/// Multitarget state estimate: the most probable label set, then for each
/// of its labels the mode of the correlation-weighted marginal mixture.
inline Estimate estimate_states(const SlcDensity& d) {
    Estimate est;
    const LabelSet* map_set = detail::map_label_set(d);
    if (!map_set || map_set->empty()) return est;
    est.labels = *map_set;
    for (const Label& l : *map_set) {
        std::vector<GaussianComponent> pooled;
        for (const auto& [key, a] : d.correlation_weight) {
            if (key.labels != *map_set || !(a > 0.0)) continue;
            for (const GaussianComponent& c : d.spatial_of(key.index, l).components()) {
                GaussianComponent pc = c;
                pc.weight *= a;
                pooled.push_back(std::move(pc));
            }
        }
        est.states[l] = GaussianMixture::normalized(std::move(pooled)).mode();
    }
    return est;
}

/// MHT-style approximation: pick the single most probable hypothesis for
/// the most probable label set, then take per-label modes under it alone.
/// Agrees with estimate_states when one hypothesis dominates.
inline Estimate estimate_states_mht(const SlcDensity& d) {
    Estimate est;
    const LabelSet* map_set = detail::map_label_set(d);
    if (!map_set || map_set->empty()) return est;
    est.labels = *map_set;
    const HypothesisIndex* best_o = nullptr;
    double best_a = -1.0;
    for (const auto& [key, a] : d.correlation_weight) {
        if (key.labels != *map_set) continue;
        if (a > best_a) {
            best_a = a;
            best_o = &key.index;
        }
    }
    for (const Label& l : *map_set) est.states[l] = d.spatial_of(*best_o, l).mode();
    return est;
}

}  // namespace lrfs
