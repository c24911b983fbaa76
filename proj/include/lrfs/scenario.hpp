#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lrfs/birth.hpp"
#include "lrfs/core.hpp"
#include "lrfs/glmb.hpp"
#include "lrfs/models.hpp"
#include "lrfs/rng.hpp"

namespace lrfs::sim {

struct TruncationConfig {
    double min_weight = 1e-6;
    std::size_t max_hypotheses = 300;
    UpdateOptions::Truncation mode = UpdateOptions::Truncation::exhaustive;
    int ranked_k = 64;
    double mta_cap = 2.0e5;

    [[nodiscard]] UpdateOptions update_options() const {
        UpdateOptions o;
        o.mode = mode;
        o.ranked_k = ranked_k;
        o.mta_cap = mta_cap;
        return o;
    }
};

/// Birth candidates described by per-step serial indices; labels are
/// stamped with the current time step when the model is materialized.
/// One atom means independent candidates; several atoms describe a
/// correlated cluster whose weights are shared by every label subset.
struct BirthSpec {
    std::vector<int> indices;
    std::map<int, double> existence;
    std::vector<std::int32_t> atoms = { 0 };
    std::vector<double> atom_weights = { 1.0 };
    std::map<std::pair<std::int32_t, int>, GaussianMixture> spatial;  // (atom, index)
    bool recurring = true;

    [[nodiscard]] bool empty() const { return indices.empty(); }

    [[nodiscard]] SlcBirthModel at_step(int k) const {
        if (empty()) return SlcBirthModel::none();
        std::vector<Label> labels;
        std::map<Label, double> q;
        std::vector<std::map<Label, GaussianMixture>> per_atom(atoms.size());
        for (int idx : indices) {
            Label l{ k, idx };
            labels.push_back(l);
            q[l] = existence.at(idx);
            for (std::size_t a = 0; a < atoms.size(); ++a)
                per_atom[a].emplace(l, spatial.at({ atoms[a], idx }));
        }
        return SlcBirthModel::shared_alpha(LabelSet(labels), std::move(q), atoms, atom_weights,
                                           std::move(per_atom));
    }
};

struct ScenarioConfig {
    int state_dim = 2;
    MotionModel motion;
    SensorModel sensor;
    BirthSpec birth;
    int steps = 5;
    std::optional<std::uint64_t> rng_seed;  // mandatory: runs must reproduce
    TruncationConfig truncation;
    bool cluster_mode = false;  // births only at the first step
    double ospa_cutoff = 10.0;
    double ospa_order = 1.0;

    [[nodiscard]] bool birth_active_at(int k) const {
        if (birth.empty()) return false;
        if (k == 1) return true;
        return birth.recurring && !cluster_mode;
    }

    void validate() const {
        auto fail = [](const std::string& field, const std::string& why) {
            throw ConfigError(field, why);
        };
        if (state_dim < 1) fail("state_dim", "must be a positive integer");
        if (steps < 0) fail("steps", "must be nonnegative");
        if (!rng_seed) fail("rng_seed", "is mandatory; runs must be reproducible");
        if (motion.transition.rows() != state_dim || motion.transition.cols() != state_dim)
            fail("motion.transition", "must be state_dim x state_dim");
        if (motion.process_noise.rows() != state_dim || motion.process_noise.cols() != state_dim)
            fail("motion.process_noise", "must be state_dim x state_dim");
        if (motion.survival_prob < 0.0 || motion.survival_prob > 1.0)
            fail("motion.survival_prob", "must lie in [0,1]");
        if (sensor.observation.cols() != state_dim)
            fail("sensor.observation", "column count must equal state_dim");
        const int dz = int(sensor.observation.rows());
        if (sensor.measurement_noise.rows() != dz || sensor.measurement_noise.cols() != dz)
            fail("sensor.measurement_noise", "must match the measurement dimension");
        if (sensor.detection_prob < 0.0 || sensor.detection_prob > 1.0)
            fail("sensor.detection_prob", "must lie in [0,1]");
        if (sensor.clutter_rate < 0.0) fail("sensor.clutter_rate", "must be nonnegative");
        if (sensor.clutter_region.rows() != dz || sensor.clutter_region.cols() != 2)
            fail("sensor.clutter_region", "must be one [lo, hi] row per measurement axis");
        for (int i = 0; i < dz; ++i)
            if (!(sensor.clutter_region(i, 1) > sensor.clutter_region(i, 0)))
                fail("sensor.clutter_region", "each axis needs hi > lo");
        if (truncation.min_weight < 0.0) fail("truncation.min_weight", "must be nonnegative");
        if (truncation.max_hypotheses == 0) fail("truncation.max_hypotheses", "must be positive");
        if (truncation.ranked_k < 1) fail("truncation.ranked_k", "must be positive");
        if (!(ospa_cutoff > 0.0)) fail("metrics.ospa_cutoff", "must be positive");
        if (!(ospa_order >= 1.0)) fail("metrics.ospa_order", "must be at least one");

        if (!birth.empty()) {
            if (birth.atoms.empty()) fail("birth.atoms", "need at least one atom");
            if (birth.atoms.size() != birth.atom_weights.size())
                fail("birth.atom_weights", "must align with birth.atoms");
            double asum = 0.0;
            for (double w : birth.atom_weights) {
                if (w < 0.0) fail("birth.atom_weights", "must be nonnegative");
                asum += w;
            }
            if (std::abs(asum - 1.0) > 1e-9) fail("birth.atom_weights", "must sum to one");
            std::vector<int> sorted = birth.indices;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                fail("birth.targets", "duplicate target index");
            for (int idx : birth.indices) {
                std::string at = "birth.targets[index=" + std::to_string(idx) + "]";
                auto it = birth.existence.find(idx);
                if (it == birth.existence.end()) fail(at + ".existence", "missing");
                if (it->second < 0.0 || it->second > 1.0)
                    fail(at + ".existence", "must lie in [0,1]");
                for (std::int32_t a : birth.atoms) {
                    auto sp = birth.spatial.find({ a, idx });
                    if (sp == birth.spatial.end())
                        fail(at + ".spatial", "missing mixture for atom " + std::to_string(a));
                    if (sp->second.dim() != state_dim)
                        fail(at + ".spatial", "mixture dimension must equal state_dim");
                }
            }
        }
    }
};

/// One simulated scan: the ground-truth labeled set after survival, motion,
/// and birth, and the measurement list (detections first, clutter after).
struct ScanRecord {
    int k = 0;
    LabeledFiniteSet truth;
    std::vector<Vector> measurements;
};

/// Draws ground truth and measurements for the configured scenario.
/// Deterministic given the seed: all randomness flows through one
/// counter-based stream, consumed in a fixed order. Detections falling
/// outside the surveillance region are discarded.
inline std::vector<ScanRecord> generate_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    CounterRng rng(*cfg.rng_seed);
    std::map<Label, Vector> alive;
    std::vector<ScanRecord> scans;
    for (int k = 1; k <= cfg.steps; ++k) {
        // Survival thinning and motion for targets carried over.
        std::map<Label, Vector> next;
        for (const auto& [l, x] : alive) {
            if (!rng.bernoulli(cfg.motion.survival_prob)) continue;
            next.emplace(l, rng.normal_vec(cfg.motion.transition * x, cfg.motion.process_noise));
        }
        alive = std::move(next);

        if (cfg.birth_active_at(k)) {
            auto model = cfg.birth.at_step(k);
            // The whole cluster shares one atom draw, so newborn targets are
            // correlated exactly as the birth density prescribes.
            std::size_t a = rng.categorical(model.extends_index()
                                                ? cfg.birth.atom_weights
                                                : std::vector<double>{ 1.0 });
            std::int32_t atom = cfg.birth.atoms[model.extends_index() ? a : 0];
            for (const Label& l : model.labels) {
                if (!rng.bernoulli(model.existence.at(l))) continue;
                const auto& mix = model.spatial_of(atom, l);
                std::size_t comp = mix.size() == 1 ? 0 : [&] {
                    std::vector<double> ws;
                    for (const auto& c : mix.components()) ws.push_back(c.weight);
                    return rng.categorical(ws);
                }();
                const auto& c = mix.components()[comp];
                alive.emplace(l, rng.normal_vec(c.mean, c.cov));
            }
        }

        ScanRecord scan;
        scan.k = k;
        std::vector<LabeledState> elems;
        for (const auto& [l, x] : alive) elems.push_back({ x, l });
        scan.truth = validate_lfs(std::move(elems));

        for (const auto& [l, x] : alive) {
            if (!rng.bernoulli(cfg.sensor.detection_prob)) continue;
            Vector z = rng.normal_vec(cfg.sensor.observation * x, cfg.sensor.measurement_noise);
            if (cfg.sensor.in_region(z)) scan.measurements.push_back(std::move(z));
        }
        int clutter = rng.poisson(cfg.sensor.clutter_rate);
        for (int c = 0; c < clutter; ++c) {
            Vector z(cfg.sensor.measurement_dim());
            for (int i = 0; i < z.size(); ++i)
                z(i) = rng.uniform(cfg.sensor.clutter_region(i, 0), cfg.sensor.clutter_region(i, 1));
            scan.measurements.push_back(std::move(z));
        }
        scans.push_back(std::move(scan));
    }
    return scans;
}

}  // namespace lrfs::sim
