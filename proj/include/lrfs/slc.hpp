#pragma once

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "lrfs/glmb.hpp"

namespace lrfs {

/// Multitarget density in the quadruple form: the label-set probability
/// omega(L) is factored out of the per-hypothesis correlation weights
/// alpha_o(L), which in turn weight independent products of per-label
/// spatial p.d.f.'s. For each supported L the alphas form a probability
/// vector; the joint weight omega(L) * alpha_o(L) recovers the classical
/// hypothesis weight exactly.
struct SlcDensity {
    LabelSet universe;
    std::map<LabelSet, double> label_weight;               // omega, positive entries only
    std::map<HypothesisKey, double> correlation_weight;    // alpha per (index, label set)
    std::map<SpatialKey, GaussianMixture> spatial;

    [[nodiscard]] double weight_sum() const {
        double s = 0.0;
        for (const auto& [l, w] : label_weight) s += w;
        return s;
    }

    [[nodiscard]] const GaussianMixture& spatial_of(const HypothesisIndex& o, const Label& l) const {
        auto it = spatial.find({ o, l });
        if (it == spatial.end()) throw UnknownLabelError(l);
        return it->second;
    }

    static SlcDensity target_free() {
        SlcDensity d;
        d.label_weight[{}] = 1.0;
        d.correlation_weight[{ {}, {} }] = 1.0;
        return d;
    }

    void validate(double tol = 1e-9) const {
        double resid = std::abs(weight_sum() - 1.0);
        if (resid > tol) throw Error("label weights sum off by " + std::to_string(resid));
        std::map<LabelSet, double> alpha_sum;
        for (const auto& [key, a] : correlation_weight) {
            if (!(a >= 0.0)) throw Error("negative correlation weight");
            alpha_sum[key.labels] += a;
            for (const Label& l : key.labels)
                if (a > 0.0 && spatial.find({ key.index, l }) == spatial.end())
                    throw Error("missing spatial p.d.f. for " + to_string(l));
        }
        for (const auto& [ls, w] : label_weight) {
            if (!(w > 0.0)) throw Error("nonpositive label weight stored");
            if (!ls.subset_of(universe)) throw Error("label set outside universe");
            auto it = alpha_sum.find(ls);
            if (it == alpha_sum.end() || std::abs(it->second - 1.0) > tol)
                throw Error("correlation weights for " + to_string(ls) + " do not sum to one");
        }
    }
};

/// Lossless conversion from the classical triple form: omega(L) is the
/// hypothesis-weight marginal over indices and alpha the normalized share.
inline SlcDensity from_glmb(const GlmbDensity& d) {
    SlcDensity out;
    out.universe = d.universe;
    for (const auto& [key, w] : d.weights) out.label_weight[key.labels] += w;
    for (const auto& [key, w] : d.weights)
        out.correlation_weight[key] = w / out.label_weight.at(key.labels);
    out.spatial = d.spatial;
    return out;
}

/// Inverse conversion: joint weights omega(L) * alpha_o(L).
inline GlmbDensity to_glmb(const SlcDensity& d) {
    GlmbDensity out;
    out.universe = d.universe;
    for (const auto& [key, a] : d.correlation_weight) {
        auto it = d.label_weight.find(key.labels);
        if (it == d.label_weight.end()) continue;
        double w = it->second * a;
        if (w > 0.0) out.weights[key] = w;
    }
    out.spatial = d.spatial;
    return out;
}

/// Density value at a labeled finite set.
inline double density_value(const SlcDensity& d, const LabeledFiniteSet& x) {
    LabelSet xl = labels_of(x);
    auto it = d.label_weight.find(xl);
    if (it == d.label_weight.end()) return 0.0;
    double mix = 0.0;
    for (const auto& [key, a] : d.correlation_weight) {
        if (key.labels != xl || !(a > 0.0)) continue;
        double prod = a;
        for (const LabeledState& e : x.elements())
            prod *= d.spatial_of(key.index, e.label).density(e.kinematic);
        mix += prod;
    }
    return it->second * mix;
}

/// Initial cluster density from a birth model: the multi-Bernoulli
/// label-set weight with the model's atom weights and hypothesized spatial
/// p.d.f.'s. A single atom reproduces the plain multi-Bernoulli birth.
inline SlcDensity slc_birth_density(const SlcBirthModel& model) {
    model.validate();
    SlcDensity out;
    out.universe = model.labels;
    if (model.empty()) return SlcDensity::target_free();
    const bool extend = model.extends_index();
    for (const auto& [sub, w] : detail::birth_subset_weights(model)) {
        out.label_weight[sub] = w;
        for (std::int32_t atom : model.correlation_atoms) {
            double a = model.alpha_of(atom, sub);
            if (!(a > 0.0)) continue;
            HypothesisIndex oi = extend ? HypothesisIndex{ atom } : HypothesisIndex{};
            out.correlation_weight[{ oi, sub }] = a;
            for (const Label& l : sub)
                out.spatial.emplace(SpatialKey{ oi, l }, model.spatial_of(atom, l));
        }
    }
    return out;
}

/// Time update in quadruple form. The survivor label-set weights are
/// folded over omega(L) * alpha_o(L); the new omega is the birth label-set
/// weight times the survivor marginal, while the new alpha is the
/// normalized per-survivor-set share (and therefore depends only on the
/// persisting part of the label set).
inline SlcDensity slc_time_update(const SlcDensity& prior, const MotionModel& motion,
                                  const SlcBirthModel& birth,
                                  TimeUpdateDiagnostics* diag = nullptr) {
    if (!birth.empty()) {
        birth.validate();
        for (const Label& l : birth.labels)
            if (prior.universe.contains(l)) throw LabelCollisionError(l);
    }
    const double ps = motion.survival_prob;

    std::map<HypothesisKey, double> joint;
    for (const auto& [key, a] : prior.correlation_weight) {
        double w = prior.label_weight.at(key.labels) * a;
        if (w > 0.0) joint.emplace(key, w);
    }
    auto log_tilde = detail::survivor_weights(joint, ps);

    // Survivor marginal and normalized correlation shares per survivor set.
    std::map<LabelSet, std::vector<double>> per_set;
    for (const auto& [key, lt] : log_tilde) per_set[key.labels].push_back(lt);
    std::map<LabelSet, double> log_surv;
    for (const auto& [j, logs] : per_set) log_surv[j] = log_sum_exp(logs);

    std::map<HypothesisKey, double> alpha_surv;
    std::map<LabelSet, double> alpha_check;
    for (const auto& [key, lt] : log_tilde) {
        double a = std::exp(lt - log_surv.at(key.labels));
        if (a > 0.0) alpha_surv.emplace(key, a);
        alpha_check[key.labels] += a;
    }
    for (const auto& [j, s] : alpha_check)
        if (std::abs(s - 1.0) > 1e-9)
            throw Error("survivor correlation weights for " + to_string(j) +
                        " sum to " + std::to_string(s));

    if (diag) {
        diag->survivor_weight_sum = 0.0;
        for (const auto& [j, ls] : log_surv) diag->survivor_weight_sum += std::exp(ls);
    }

    auto birth_subsets = detail::birth_subset_weights(birth);
    const bool extend = birth.extends_index();

    SlcDensity out;
    out.universe = prior.universe.set_union(birth.labels);
    double mass = 0.0;
    for (const auto& [j, ls] : log_surv)
        for (const auto& [bset, bw] : birth_subsets) {
            double w = bw * std::exp(ls);
            if (!(w > 0.0)) continue;
            out.label_weight[j.set_union(bset)] = w;
            mass += w;
        }
    if (!(mass > kNormalizerFloor))
        throw DegenerateNormalizerError("time update mass vanished");
    for (auto& [l, w] : out.label_weight) w /= mass;

    std::set<SpatialKey> survivors_needed;
    for (const auto& [key, a] : alpha_surv) {
        for (const Label& l : key.labels) survivors_needed.insert({ key.index, l });
        for (const auto& [bset, bw] : birth_subsets) {
            LabelSet full = key.labels.set_union(bset);
            if (!extend) {
                out.correlation_weight[{ key.index, full }] = a;
            } else {
                for (std::int32_t atom : birth.correlation_atoms) {
                    double ba = birth.alpha_of(atom, bset);
                    if (!(ba > 0.0)) continue;
                    HypothesisIndex oi = key.index;
                    oi.push_back(atom);
                    out.correlation_weight[{ std::move(oi), full }] = a * ba;
                }
            }
        }
    }

    for (const SpatialKey& sk : survivors_needed)
        out.spatial.emplace(sk, predict_pdf(prior.spatial.at(sk), motion));
    for (const auto& [key, a] : out.correlation_weight) {
        for (const Label& l : key.labels) {
            if (!birth.labels.contains(l)) continue;
            std::int32_t atom = extend ? key.index.back() : birth.correlation_atoms.front();
            out.spatial.emplace(SpatialKey{ key.index, l }, birth.spatial_of(atom, l));
        }
    }
    return out;
}

inline SlcDensity slc_time_update(const SlcDensity& prior, const MotionModel& motion,
                                  const LmbBirth& birth, TimeUpdateDiagnostics* diag = nullptr) {
    return slc_time_update(prior, motion, SlcBirthModel::from_lmb(birth), diag);
}

/// Measurement update in quadruple form. Per label set, the correlation
/// weights split over the associations; omega picks up the normalized
/// association evidence while alpha renormalizes within the label set.
inline SlcDensity slc_measurement_update(const SlcDensity& predicted, const SensorModel& sensor,
                                         const std::vector<Vector>& z,
                                         const UpdateOptions& opts = {}) {
    auto table = detail::log_functional_table(predicted.spatial, sensor, z);

    struct Entry {
        const HypothesisKey* prior_key;
        Mta theta;
        double logm;  // log( omega(L) alpha_o(L) * association evidence )
    };
    std::vector<Entry> entries;
    std::set<std::vector<std::pair<Label, int>>> encodings;
    for (const auto& [key, a] : predicted.correlation_weight) {
        auto lw = predicted.label_weight.find(key.labels);
        if (lw == predicted.label_weight.end()) continue;
        double joint = lw->second * a;
        if (!(joint > 0.0)) continue;
        for (Mta& theta : detail::hypothesis_mtas(key.labels, z.size(), table, key.index, opts)) {
            double logm = std::log(joint);
            bool impossible = false;
            for (const Label& l : key.labels) {
                double f = table.at({ key.index, l })[theta.of(l)];
                if (f <= kLogAssociationFloor) impossible = true;
                logm += f;
            }
            if (impossible || logm == kNegInf) continue;
            encodings.insert(theta.encoding());
            entries.push_back({ &key, std::move(theta), logm });
        }
    }
    if (entries.empty())
        throw DegenerateNormalizerError("no feasible association explains the measurements");

    std::map<std::vector<std::pair<Label, int>>, std::int32_t> ordinal;
    for (const auto& enc : encodings) ordinal.emplace(enc, std::int32_t(ordinal.size()));

    std::map<LabelSet, std::vector<double>> per_set;
    std::vector<double> all_logs;
    for (const Entry& e : entries) {
        per_set[e.prior_key->labels].push_back(e.logm);
        all_logs.push_back(e.logm);
    }
    double log_total = log_sum_exp(all_logs);
    if (log_total == kNegInf) throw DegenerateNormalizerError("measurement-update mass vanished");
    std::map<LabelSet, double> log_set_mass;
    for (const auto& [ls, logs] : per_set) log_set_mass[ls] = log_sum_exp(logs);

    SlcDensity out;
    out.universe = predicted.universe;
    for (const auto& [ls, lm] : log_set_mass) {
        double w = std::exp(lm - log_total);
        if (w > 0.0) out.label_weight[ls] = w;
    }
    std::map<std::pair<SpatialKey, int>, GaussianMixture> updated_cache;
    for (const Entry& e : entries) {
        const LabelSet& ls = e.prior_key->labels;
        double a = std::exp(e.logm - log_set_mass.at(ls));
        if (!(a > 0.0) || out.label_weight.find(ls) == out.label_weight.end()) continue;
        HypothesisIndex oi = e.prior_key->index;
        oi.push_back(ordinal.at(e.theta.encoding()));
        out.correlation_weight[{ oi, ls }] += a;
        for (const Label& l : ls) {
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

/// Truncation on the joint weights omega(L) * alpha_o(L), mirroring the
/// classical pruning rule, then renormalization of both factor tables.
inline SlcDensity slc_prune_truncate(const SlcDensity& d, double min_weight,
                                     std::size_t max_hypotheses) {
    struct Item {
        const HypothesisKey* key;
        double joint;
    };
    std::vector<Item> kept;
    for (const auto& [key, a] : d.correlation_weight) {
        auto it = d.label_weight.find(key.labels);
        if (it == d.label_weight.end()) continue;
        double joint = it->second * a;
        if (joint >= min_weight) kept.push_back({ &key, joint });
    }
    std::sort(kept.begin(), kept.end(), [](const Item& a, const Item& b) {
        double wa = quantize_weight(a.joint), wb = quantize_weight(b.joint);
        if (wa != wb) return wa > wb;
        return *a.key < *b.key;
    });
    if (kept.size() > max_hypotheses) kept.resize(max_hypotheses);
    if (kept.empty()) throw EmptyDensityError("all hypotheses pruned");

    double mass = 0.0;
    std::map<LabelSet, double> set_mass;
    for (const Item& it : kept) {
        mass += it.joint;
        set_mass[it.key->labels] += it.joint;
    }
    SlcDensity out;
    out.universe = d.universe;
    for (const auto& [ls, m] : set_mass) out.label_weight[ls] = m / mass;
    for (const Item& it : kept) {
        out.correlation_weight[*it.key] = it.joint / set_mass.at(it.key->labels);
        for (const Label& l : it.key->labels) {
            SpatialKey sk{ it.key->index, l };
            out.spatial.emplace(sk, d.spatial.at(sk));
        }
    }
    return out;
}

}  // namespace lrfs
