#pragma once

#include <string>

#include <json.hpp>

#include "lrfs/scenario.hpp"
#include "lrfs/toml.hpp"

namespace lrfs::sim {

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& j, const std::string& key,
                                     const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(path + key, "missing required field");
    return *it;
}

inline double number_at(const nlohmann::json& j, const std::string& key, const std::string& path) {
    const auto& v = require(j, key, path);
    if (!v.is_number()) throw ConfigError(path + key, "must be a number");
    return v.get<double>();
}

inline Matrix matrix_at(const nlohmann::json& j, const std::string& key, const std::string& path) {
    const auto& v = require(j, key, path);
    if (!v.is_array() || v.empty() || !v.front().is_array())
        throw ConfigError(path + key, "must be an array of rows");
    Matrix m(v.size(), v.front().size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_array() || v[i].size() != v.front().size())
            throw ConfigError(path + key, "rows must have equal length");
        for (std::size_t c = 0; c < v[i].size(); ++c) {
            if (!v[i][c].is_number()) throw ConfigError(path + key, "entries must be numbers");
            m(int(i), int(c)) = v[i][c].get<double>();
        }
    }
    return m;
}

inline Vector vector_at(const nlohmann::json& j, const std::string& key, const std::string& path) {
    const auto& v = require(j, key, path);
    if (!v.is_array()) throw ConfigError(path + key, "must be an array");
    Vector x(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ConfigError(path + key, "entries must be numbers");
        x(int(i)) = v[i].get<double>();
    }
    return x;
}

inline GaussianMixture mixture_at(const nlohmann::json& j, const std::string& key,
                                  const std::string& path) {
    const auto& v = require(j, key, path);
    if (!v.is_array() || v.empty()) throw ConfigError(path + key, "must list mixture components");
    std::vector<GaussianComponent> comps;
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::string at = path + key + "[" + std::to_string(i) + "].";
        GaussianComponent c;
        c.weight = number_at(v[i], "weight", at);
        c.mean = vector_at(v[i], "mean", at);
        c.cov = matrix_at(v[i], "cov", at);
        comps.push_back(std::move(c));
    }
    try {
        return GaussianMixture::normalized(std::move(comps));
    } catch (const std::exception& e) {
        throw ConfigError(path + key, e.what());
    }
}

}  // namespace detail

/// Builds a scenario from the parsed configuration tree; every complaint
/// names the offending field.
inline ScenarioConfig load_config(const nlohmann::json& j) {
    using detail::matrix_at;
    using detail::mixture_at;
    using detail::number_at;
    using detail::require;

    ScenarioConfig cfg;
    cfg.state_dim = int(number_at(j, "state_dim", ""));
    cfg.steps = int(number_at(j, "steps", ""));
    cfg.rng_seed = std::uint64_t(number_at(j, "rng_seed", ""));
    if (j.contains("cluster_mode")) cfg.cluster_mode = j["cluster_mode"].get<bool>();

    const auto& motion = require(j, "motion", "");
    cfg.motion.transition = matrix_at(motion, "transition", "motion.");
    cfg.motion.process_noise = matrix_at(motion, "process_noise", "motion.");
    cfg.motion.survival_prob = number_at(motion, "survival_prob", "motion.");

    const auto& sensor = require(j, "sensor", "");
    cfg.sensor.observation = matrix_at(sensor, "observation", "sensor.");
    cfg.sensor.measurement_noise = matrix_at(sensor, "measurement_noise", "sensor.");
    cfg.sensor.detection_prob = number_at(sensor, "detection_prob", "sensor.");
    cfg.sensor.clutter_rate = number_at(sensor, "clutter_rate", "sensor.");
    cfg.sensor.clutter_region = matrix_at(sensor, "clutter_region", "sensor.");

    if (j.contains("truncation")) {
        const auto& t = j["truncation"];
        if (t.contains("min_weight")) cfg.truncation.min_weight = number_at(t, "min_weight", "truncation.");
        if (t.contains("max_hypotheses"))
            cfg.truncation.max_hypotheses = std::size_t(number_at(t, "max_hypotheses", "truncation."));
        if (t.contains("ranked_k")) cfg.truncation.ranked_k = int(number_at(t, "ranked_k", "truncation."));
        if (t.contains("mta_cap")) cfg.truncation.mta_cap = number_at(t, "mta_cap", "truncation.");
        if (t.contains("mode")) {
            std::string mode = t["mode"].get<std::string>();
            if (mode == "exhaustive") {
                cfg.truncation.mode = UpdateOptions::Truncation::exhaustive;
            } else if (mode == "ranked") {
                cfg.truncation.mode = UpdateOptions::Truncation::ranked;
            } else {
                throw ConfigError("truncation.mode", "must be 'exhaustive' or 'ranked'");
            }
        }
    }

    if (j.contains("metrics")) {
        const auto& m = j["metrics"];
        if (m.contains("ospa_cutoff")) cfg.ospa_cutoff = number_at(m, "ospa_cutoff", "metrics.");
        if (m.contains("ospa_order")) cfg.ospa_order = number_at(m, "ospa_order", "metrics.");
    }

    if (j.contains("birth")) {
        const auto& b = j["birth"];
        if (b.contains("recurring")) cfg.birth.recurring = b["recurring"].get<bool>();
        if (b.contains("atoms")) {
            cfg.birth.atoms.clear();
            for (const auto& a : b["atoms"]) cfg.birth.atoms.push_back(a.get<std::int32_t>());
            cfg.birth.atom_weights.clear();
            for (const auto& w : require(b, "atom_weights", "birth."))
                cfg.birth.atom_weights.push_back(w.get<double>());
        }
        const auto& targets = require(b, "targets", "birth.");
        if (!targets.is_array()) throw ConfigError("birth.targets", "must be a table array");
        for (std::size_t t = 0; t < targets.size(); ++t) {
            std::string at = "birth.targets[" + std::to_string(t) + "].";
            int idx = int(number_at(targets[t], "index", at));
            cfg.birth.indices.push_back(idx);
            cfg.birth.existence[idx] = number_at(targets[t], "existence", at);
            const auto& spatials = require(targets[t], "spatial", at);
            if (!spatials.is_array()) throw ConfigError(at + "spatial", "must be a table array");
            for (std::size_t s = 0; s < spatials.size(); ++s) {
                std::string sat = at + "spatial[" + std::to_string(s) + "].";
                std::int32_t atom = std::int32_t(number_at(spatials[s], "atom", sat));
                cfg.birth.spatial.emplace(std::make_pair(atom, idx),
                                          mixture_at(spatials[s], "components", sat));
            }
        }
    }

    cfg.validate();
    return cfg;
}

inline ScenarioConfig load_config_file(const std::string& path) {
    return load_config(toml::parse_file(path));
}

}  // namespace lrfs::sim
