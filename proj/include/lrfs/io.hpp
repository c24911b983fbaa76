#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "lrfs/correlation.hpp"
#include "lrfs/run.hpp"

namespace lrfs::io {

/// Fixed 17-significant-digit formatting: round-trips doubles exactly and
/// keeps repeated runs byte-identical.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- JSON snapshots ----

inline nlohmann::json to_json(const Label& l) { return { l.birth_step, l.index }; }

inline nlohmann::json to_json(const LabelSet& s) {
    auto arr = nlohmann::json::array();
    for (const Label& l : s) arr.push_back(to_json(l));
    return arr;
}

inline nlohmann::json to_json(const GaussianMixture& mix) {
    auto arr = nlohmann::json::array();
    for (const GaussianComponent& c : mix.components()) {
        nlohmann::json comp;
        comp["weight"] = c.weight;
        comp["mean"] = std::vector<double>(c.mean.data(), c.mean.data() + c.mean.size());
        auto cov = nlohmann::json::array();
        for (int i = 0; i < c.cov.rows(); ++i) {
            auto row = nlohmann::json::array();
            for (int j = 0; j < c.cov.cols(); ++j) row.push_back(c.cov(i, j));
            cov.push_back(row);
        }
        comp["cov"] = cov;
        arr.push_back(std::move(comp));
    }
    return arr;
}

inline nlohmann::json spatial_to_json(const std::map<SpatialKey, GaussianMixture>& spatial) {
    auto arr = nlohmann::json::array();
    for (const auto& [key, mix] : spatial) {
        nlohmann::json entry;
        entry["index"] = key.index;
        entry["label"] = to_json(key.label);
        entry["components"] = to_json(mix);
        arr.push_back(std::move(entry));
    }
    return arr;
}

/// Snapshot shape: hypotheses as {index, labels, log_weight} records plus
/// the spatial mixtures per (index, label).
inline nlohmann::json to_json(const GlmbDensity& d) {
    nlohmann::json out;
    out["kind"] = "glmb";
    out["label_universe"] = to_json(d.universe);
    auto hyps = nlohmann::json::array();
    for (const auto& [key, w] : d.weights) {
        nlohmann::json h;
        h["index"] = key.index;
        h["labels"] = to_json(key.labels);
        h["log_weight"] = std::log(w);
        hyps.push_back(std::move(h));
    }
    out["hypotheses"] = hyps;
    out["spatial"] = spatial_to_json(d.spatial);
    return out;
}

/// Extends the snapshot shape with the factored weight tables.
inline nlohmann::json to_json(const SlcDensity& d) {
    nlohmann::json out;
    out["kind"] = "slc";
    out["label_universe"] = to_json(d.universe);
    auto lw = nlohmann::json::array();
    for (const auto& [ls, w] : d.label_weight) {
        nlohmann::json e;
        e["labels"] = to_json(ls);
        e["weight"] = w;
        lw.push_back(std::move(e));
    }
    out["label_weight"] = lw;
    auto cw = nlohmann::json::array();
    for (const auto& [key, a] : d.correlation_weight) {
        nlohmann::json e;
        e["index"] = key.index;
        e["labels"] = to_json(key.labels);
        e["alpha"] = a;
        cw.push_back(std::move(e));
    }
    out["correlation_weight"] = cw;
    out["spatial"] = spatial_to_json(d.spatial);
    return out;
}

inline nlohmann::json to_json(const CorrelationReport& r) {
    nlohmann::json out;
    out["x1"] = { { "label", to_json(r.x1.label) },
                  { "kinematic",
                    std::vector<double>(r.x1.kinematic.data(),
                                        r.x1.kinematic.data() + r.x1.kinematic.size()) } };
    out["x2"] = { { "label", to_json(r.x2.label) },
                  { "kinematic",
                    std::vector<double>(r.x2.kinematic.data(),
                                        r.x2.kinematic.data() + r.x2.kinematic.size()) } };
    out["fcd_value"] = r.fcd_value;
    out["independence_gap"] = r.independence_gap;
    return out;
}

// ---- CSV emission (columns fixed, format versioned in the header) ----

inline constexpr const char* kCsvVersion = "lrfs-csv/1";

inline std::string csv_label(const Label& l) {
    return std::to_string(l.birth_step) + ":" + std::to_string(l.index);
}

/// One row per estimated track and step: k,label,x0..x{d-1},ospa.
/// Steps whose estimate is empty emit a single row with an empty label.
inline std::string estimates_csv(const std::vector<sim::StepOutput>& steps, int state_dim,
                                 std::uint64_t seed) {
    std::string out = "# " + std::string(kCsvVersion) + " estimates seed=" +
                      std::to_string(seed) + "\n";
    out += "k,label";
    for (int i = 0; i < state_dim; ++i) out += ",x" + std::to_string(i);
    out += ",ospa\n";
    for (const auto& s : steps) {
        if (s.estimate.labels.empty()) {
            out += std::to_string(s.k) + ",";
            for (int i = 0; i < state_dim; ++i) out += ",";
            out += "," + format_double(s.ospa_vs_truth) + "\n";
            continue;
        }
        for (const auto& [l, x] : s.estimate.states) {
            out += std::to_string(s.k) + "," + csv_label(l);
            for (int i = 0; i < state_dim; ++i) out += "," + format_double(x(i));
            out += "," + format_double(s.ospa_vs_truth) + "\n";
        }
    }
    return out;
}

inline std::string diagnostics_csv(const std::vector<sim::StepOutput>& steps,
                                   std::uint64_t seed) {
    std::string out = "# " + std::string(kCsvVersion) + " diagnostics seed=" +
                      std::to_string(seed) + "\n";
    out += "k,survivor_weight_sum,weight_residual,hypothesis_count,label_count\n";
    for (const auto& s : steps) {
        out += std::to_string(s.k) + "," + format_double(s.diag.survivor_weight_sum) + "," +
               format_double(s.diag.weight_residual) + "," +
               std::to_string(s.diag.hypothesis_count) + "," +
               std::to_string(s.diag.label_count) + "\n";
    }
    return out;
}

inline std::string truth_csv(const std::vector<sim::ScanRecord>& scans, int state_dim,
                             std::uint64_t seed) {
    std::string out = "# " + std::string(kCsvVersion) + " truth seed=" + std::to_string(seed) +
                      "\n";
    out += "k,label";
    for (int i = 0; i < state_dim; ++i) out += ",x" + std::to_string(i);
    out += "\n";
    for (const auto& scan : scans)
        for (const LabeledState& e : scan.truth.elements()) {
            out += std::to_string(scan.k) + "," + csv_label(e.label);
            for (int i = 0; i < state_dim; ++i) out += "," + format_double(e.kinematic(i));
            out += "\n";
        }
    return out;
}

inline std::string measurements_csv(const std::vector<sim::ScanRecord>& scans, int meas_dim,
                                    std::uint64_t seed) {
    std::string out = "# " + std::string(kCsvVersion) + " measurements seed=" +
                      std::to_string(seed) + "\n";
    out += "k";
    for (int i = 0; i < meas_dim; ++i) out += ",z" + std::to_string(i);
    out += "\n";
    for (const auto& scan : scans)
        for (const Vector& z : scan.measurements) {
            out += std::to_string(scan.k);
            for (int i = 0; i < meas_dim; ++i) out += "," + format_double(z(i));
            out += "\n";
        }
    return out;
}

/// Heat-map table of the pair factorial covariance over a probe grid.
inline std::string fcd_csv(const SlcDensity& d, const std::pair<Label, Label>& pair,
                           const std::vector<Vector>& grid) {
    std::string out = "# " + std::string(kCsvVersion) + " fcd pair=" + csv_label(pair.first) +
                      "/" + csv_label(pair.second) + "\n";
    out += "x1,x2,fcd\n";
    for (const Vector& x1 : grid)
        for (const Vector& x2 : grid) {
            double c = factorial_covariance_pair(d, { x1, pair.first }, { x2, pair.second });
            out += format_double(x1(0)) + "," + format_double(x2(0)) + "," + format_double(c) +
                   "\n";
        }
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << content;
}

}  // namespace lrfs::io
