#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "lrfs/assignment.hpp"
#include "lrfs/birth.hpp"
#include "lrfs/core.hpp"
#include "lrfs/gaussian.hpp"
#include "lrfs/models.hpp"
#include "lrfs/mta.hpp"
#include "lrfs/numeric.hpp"

namespace lrfs {

/// Hypothesis identity: one entry per elapsed event (a birth atom when the
/// birth model carries several correlation atoms, and one interned MTA
/// ordinal per measurement scan). Ordered lexicographically.
using HypothesisIndex = std::vector<std::int32_t>;

struct HypothesisKey {
    HypothesisIndex index;
    LabelSet labels;
    auto operator<=>(const HypothesisKey&) const = default;
};

struct SpatialKey {
    HypothesisIndex index;
    Label label;
    auto operator<=>(const SpatialKey&) const = default;
};

/// Weighted-hypothesis multitarget density in the classical triple form:
/// hypothesis weights per (index, label-set) pair, plus one spatial p.d.f.
/// per (index, label). Immutable by convention; updates return new values.
struct GlmbDensity {
    LabelSet universe;                            // current label space
    std::map<HypothesisKey, double> weights;      // strictly positive entries only
    std::map<SpatialKey, GaussianMixture> spatial;

    [[nodiscard]] double weight_sum() const {
        double s = 0.0;
        for (const auto& [k, w] : weights) s += w;
        return s;
    }

    [[nodiscard]] const GaussianMixture& spatial_of(const HypothesisIndex& o, const Label& l) const {
        auto it = spatial.find({ o, l });
        if (it == spatial.end()) throw UnknownLabelError(l);
        return it->second;
    }

    /// The target-free density: unit weight on the empty label set.
    static GlmbDensity target_free() {
        GlmbDensity d;
        d.weights[{ {}, {} }] = 1.0;
        return d;
    }

    void validate(double tol = 1e-9) const {
        double resid = std::abs(weight_sum() - 1.0);
        if (resid > tol)
            throw Error("glmb weights sum off by " + std::to_string(resid));
        for (const auto& [key, w] : weights) {
            if (!(w > 0.0)) throw Error("nonpositive hypothesis weight stored");
            if (!key.labels.subset_of(universe)) throw Error("hypothesis labels outside universe");
            for (const Label& l : key.labels)
                if (spatial.find({ key.index, l }) == spatial.end())
                    throw Error("missing spatial p.d.f. for " + to_string(l));
        }
    }
};

/// Density value at a labeled finite set (zero off the support). The
/// distinct-label condition is structural: duplicate-label sets cannot be
/// constructed in the first place.
inline double density_value(const GlmbDensity& d, const LabeledFiniteSet& x) {
    LabelSet xl = labels_of(x);
    double v = 0.0;
    for (const auto& [key, w] : d.weights) {
        if (key.labels != xl) continue;
        double prod = w;
        for (const LabeledState& e : x.elements())
            prod *= d.spatial_of(key.index, e.label).density(e.kinematic);
        v += prod;
    }
    return v;
}

/// Hypothesis-truncation policy for measurement updates.
struct UpdateOptions {
    enum class Truncation { exhaustive, ranked };
    Truncation mode = Truncation::exhaustive;
    int ranked_k = 64;        // associations kept per hypothesis in ranked mode
    double mta_cap = 2.0e5;   // exhaustive-enumeration guard
};

struct TimeUpdateDiagnostics {
    /// Sum of the survivor label-set weights over all hypotheses; equals
    /// one for a normalized prior.
    double survivor_weight_sum = 0.0;
};

namespace detail {

/// Survivor label-set weights: for each prior hypothesis index o and each
/// subset J of a prior label set L, the probability that exactly the
/// targets in J survive, folded over the prior weights. Returned as logs.
/// Also verifies that the per-(o,L) survival factors sum to one.
inline std::map<HypothesisKey, double>
survivor_weights(const std::map<HypothesisKey, double>& prior_weights, double ps) {
    const double log_ps = std::log(ps);
    const double log_qs = std::log1p(-ps);
    std::map<HypothesisKey, std::vector<double>> terms;
    for (const auto& [key, w] : prior_weights) {
        double factor_sum = 0.0;
        for (const LabelSet& j : key.labels.subsets()) {
            const std::size_t n_surv = j.size();
            const std::size_t n_dead = key.labels.size() - n_surv;
            factor_sum += std::pow(1.0 - ps, double(n_dead)) * std::pow(ps, double(n_surv));
            if (n_dead > 0 && ps >= 1.0) continue;
            if (n_surv > 0 && ps <= 0.0) continue;
            double lt = std::log(w);
            if (n_dead > 0) lt += double(n_dead) * log_qs;
            if (n_surv > 0) lt += double(n_surv) * log_ps;
            terms[{ key.index, j }].push_back(lt);
        }
        if (std::abs(factor_sum - 1.0) > 1e-9)
            throw Error("survival factors for " + to_string(key.labels) + " sum to " +
                        std::to_string(factor_sum));
    }
    std::map<HypothesisKey, double> log_tilde;
    for (const auto& [key, ts] : terms) {
        double lt = log_sum_exp(ts);
        if (lt > kNegInf) log_tilde.emplace(key, lt);
    }
    return log_tilde;
}

/// Birth label subsets with positive multi-Bernoulli weight.
inline std::vector<std::pair<LabelSet, double>>
birth_subset_weights(const SlcBirthModel& birth) {
    std::vector<std::pair<LabelSet, double>> out;
    if (birth.empty()) {
        out.emplace_back(LabelSet{}, 1.0);
        return out;
    }
    for (const LabelSet& sub : birth.labels.subsets()) {
        double w = lmb_weight(birth.labels, birth.existence, sub);
        if (w > 0.0) out.emplace_back(sub, w);
    }
    return out;
}

}  // namespace detail

/// Time update of the classical recursion. The new label space is the
/// disjoint union of the birth labels and the persisting labels; weights
/// factor into the birth label-set weight times the survivor label-set
/// weight, and surviving spatial p.d.f.'s are predicted through the motion
/// model. With several birth atoms the hypothesis indices are extended by
/// the atom; a single-atom (multi-Bernoulli) birth leaves them untouched.
inline GlmbDensity glmb_time_update(const GlmbDensity& prior, const MotionModel& motion,
                                    const SlcBirthModel& birth,
                                    TimeUpdateDiagnostics* diag = nullptr) {
    if (!birth.empty()) {
        birth.validate();
        for (const Label& l : birth.labels)
            if (prior.universe.contains(l)) throw LabelCollisionError(l);
    }
    const double ps = motion.survival_prob;

    auto log_tilde = detail::survivor_weights(prior.weights, ps);
    if (diag) {
        diag->survivor_weight_sum = 0.0;
        for (const auto& [key, lt] : log_tilde) diag->survivor_weight_sum += std::exp(lt);
    }

    auto birth_subsets = detail::birth_subset_weights(birth);
    const bool extend = birth.extends_index();

    GlmbDensity out;
    out.universe = prior.universe.set_union(birth.labels);

    std::vector<double> logs;
    std::vector<HypothesisKey> keys;
    std::set<SpatialKey> survivors_needed;
    for (const auto& [key, lt] : log_tilde) {
        for (const Label& l : key.labels) survivors_needed.insert({ key.index, l });
        for (const auto& [bset, bw] : birth_subsets) {
            if (!extend) {
                keys.push_back({ key.index, key.labels.set_union(bset) });
                logs.push_back(lt + std::log(bw));
            } else {
                for (std::int32_t atom : birth.correlation_atoms) {
                    double a = birth.alpha_of(atom, bset);
                    if (!(a > 0.0)) continue;
                    HypothesisIndex oi = key.index;
                    oi.push_back(atom);
                    keys.push_back({ std::move(oi), key.labels.set_union(bset) });
                    logs.push_back(lt + std::log(bw) + std::log(a));
                }
            }
        }
    }
    if (logs.empty()) throw DegenerateNormalizerError("time update produced no hypotheses");
    double log_z = log_sum_exp(logs);
    if (log_z == kNegInf) throw DegenerateNormalizerError("time update mass vanished");
    for (std::size_t i = 0; i < logs.size(); ++i) {
        double w = std::exp(logs[i] - log_z);
        if (w > 0.0) out.weights[keys[i]] = w;
    }

    // Surviving targets keep their labels; their p.d.f.'s are predicted once
    // per (index, label) pair.
    for (const SpatialKey& sk : survivors_needed)
        out.spatial.emplace(sk, predict_pdf(prior.spatial.at(sk), motion));

    // Birth spatial p.d.f.'s, per output hypothesis index.
    for (const auto& [key, w] : out.weights) {
        for (const Label& l : key.labels) {
            if (!birth.labels.contains(l)) continue;
            std::int32_t atom = extend ? key.index.back() : birth.correlation_atoms.front();
            out.spatial.emplace(SpatialKey{ key.index, l }, birth.spatial_of(atom, l));
        }
    }
    return out;
}

inline GlmbDensity glmb_time_update(const GlmbDensity& prior, const MotionModel& motion,
                                    const LmbBirth& birth, TimeUpdateDiagnostics* diag = nullptr) {
    return glmb_time_update(prior, motion, SlcBirthModel::from_lmb(birth), diag);
}

namespace detail {

/// Log detection functionals per (index, label): entry j of the vector is
/// the missed-detection value for j = 0, else the value for measurement j.
inline std::map<SpatialKey, std::vector<double>>
log_functional_table(const std::map<SpatialKey, GaussianMixture>& spatial,
                     const SensorModel& sensor, const std::vector<Vector>& z) {
    std::map<SpatialKey, std::vector<double>> table;
    for (const auto& [key, mix] : spatial) {
        std::vector<double> row(z.size() + 1);
        row[0] = log_detection_functional(mix, sensor);
        for (std::size_t j = 0; j < z.size(); ++j)
            row[j + 1] = log_detection_functional(mix, sensor, z[j]);
        table.emplace(key, std::move(row));
    }
    return table;
}

/// Associations to evaluate for one hypothesis label set, either the full
/// enumeration or the ranked (k-best assignment) truncation.
inline std::vector<Mta> hypothesis_mtas(const LabelSet& labels, std::size_t m,
                                        const std::map<SpatialKey, std::vector<double>>& table,
                                        const HypothesisIndex& o, const UpdateOptions& opts) {
    if (opts.mode == UpdateOptions::Truncation::exhaustive || labels.empty())
        return enumerate_mtas(labels, int(m), opts.mta_cap);

    const auto& ls = labels.elements();
    const std::size_t n = ls.size();
    std::vector<std::vector<double>> cost(n, std::vector<double>(m + n, kInfeasibleCost));
    auto as_cost = [](double log_f) {
        return log_f <= kLogAssociationFloor ? kInfeasibleCost : -log_f;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = table.at({ o, ls[i] });
        for (std::size_t j = 0; j < m; ++j) cost[i][j] = as_cost(row[j + 1]);
        cost[i][m + i] = as_cost(row[0]);
    }
    std::vector<Mta> out;
    for (const AssignmentSolution& sol : murty_kbest(cost, opts.ranked_k)) {
        std::map<Label, int> assignment;
        for (std::size_t i = 0; i < n; ++i) {
            int col = sol.column_of_row[i];
            assignment[ls[i]] = col < int(m) ? col + 1 : 0;
        }
        out.emplace_back(std::move(assignment));
    }
    return out;
}

}  // namespace detail

/// Measurement update of the classical recursion. Every prior hypothesis
/// splits over the measurement-to-track associations of its label set
/// (associations touching labels outside the set contribute nothing);
/// weights pick up the product of per-label detection functionals and the
/// spatial p.d.f.'s are conditioned on their assigned measurement. The
/// hypothesis index is extended by the ordinal of the association in a
/// canonical per-scan interning table.
inline GlmbDensity glmb_measurement_update(const GlmbDensity& predicted, const SensorModel& sensor,
                                           const std::vector<Vector>& z,
                                           const UpdateOptions& opts = {}) {
    auto table = detail::log_functional_table(predicted.spatial, sensor, z);

    struct Entry {
        const HypothesisKey* prior_key;
        Mta theta;
        double logw;
    };
    std::vector<Entry> entries;
    std::set<std::vector<std::pair<Label, int>>> encodings;
    for (const auto& [key, w] : predicted.weights) {
        for (Mta& theta : detail::hypothesis_mtas(key.labels, z.size(), table, key.index, opts)) {
            double logw = std::log(w);
            bool impossible = false;
            for (const Label& l : key.labels) {
                double f = table.at({ key.index, l })[theta.of(l)];
                if (f <= kLogAssociationFloor) impossible = true;
                logw += f;
            }
            if (impossible || logw == kNegInf) continue;
            encodings.insert(theta.encoding());
            entries.push_back({ &key, std::move(theta), logw });
        }
    }
    if (entries.empty())
        throw DegenerateNormalizerError("no feasible association explains the measurements");

    // Canonical per-scan interning of the associations actually used.
    std::map<std::vector<std::pair<Label, int>>, std::int32_t> ordinal;
    for (const auto& enc : encodings) ordinal.emplace(enc, std::int32_t(ordinal.size()));

    std::vector<double> logs;
    logs.reserve(entries.size());
    for (const Entry& e : entries) logs.push_back(e.logw);
    double log_z = log_sum_exp(logs);
    if (log_z == kNegInf) throw DegenerateNormalizerError("measurement-update mass vanished");

    GlmbDensity out;
    out.universe = predicted.universe;
    std::map<std::pair<SpatialKey, int>, GaussianMixture> updated_cache;
    for (const Entry& e : entries) {
        double w = std::exp(e.logw - log_z);
        if (!(w > 0.0)) continue;
        HypothesisIndex oi = e.prior_key->index;
        oi.push_back(ordinal.at(e.theta.encoding()));
        out.weights[{ oi, e.prior_key->labels }] += w;
        for (const Label& l : e.prior_key->labels) {
            SpatialKey prior_sk{ e.prior_key->index, l };
            int j = e.theta.of(l);
            auto [it, inserted] = updated_cache.try_emplace({ prior_sk, j });
            if (inserted) {
                const GaussianMixture& s = predicted.spatial.at(prior_sk);
                it->second = j == 0 ? detection_update_pdf(s, sensor)
                                    : detection_update_pdf(s, sensor, z[std::size_t(j - 1)]);
            }
            out.spatial.emplace(SpatialKey{ oi, l }, it->second);
        }
    }
    return out;
}

/// Drops hypotheses below min_weight, keeps the heaviest max_hypotheses
/// (ties broken by hypothesis index, then label set), renormalizes, and
/// discards spatial p.d.f.'s that are no longer referenced.
inline GlmbDensity prune_truncate(const GlmbDensity& d, double min_weight,
                                  std::size_t max_hypotheses) {
    std::vector<const std::pair<const HypothesisKey, double>*> kept;
    for (const auto& entry : d.weights)
        if (entry.second >= min_weight) kept.push_back(&entry);
    std::sort(kept.begin(), kept.end(), [](const auto* a, const auto* b) {
        double wa = quantize_weight(a->second), wb = quantize_weight(b->second);
        if (wa != wb) return wa > wb;
        return a->first < b->first;
    });
    if (kept.size() > max_hypotheses) kept.resize(max_hypotheses);
    if (kept.empty()) throw EmptyDensityError("all hypotheses pruned");

    double mass = 0.0;
    for (const auto* e : kept) mass += e->second;
    GlmbDensity out;
    out.universe = d.universe;
    for (const auto* e : kept) {
        out.weights[e->first] = e->second / mass;
        for (const Label& l : e->first.labels) {
            SpatialKey sk{ e->first.index, l };
            out.spatial.emplace(sk, d.spatial.at(sk));
        }
    }
    return out;
}

}  // namespace lrfs
