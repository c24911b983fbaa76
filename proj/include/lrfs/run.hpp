#pragma once

#include <string>
#include <vector>

#include "lrfs/estimate.hpp"
#include "lrfs/metrics.hpp"
#include "lrfs/scenario.hpp"
#include "lrfs/slc.hpp"

namespace lrfs::sim {

enum class FilterKind { glmb, slc };

inline const char* to_string(FilterKind k) { return k == FilterKind::glmb ? "glmb" : "slc"; }

/// A filter error annotated with the scan it occurred in.
class StepError : public Error {
public:
    StepError(int step, const std::string& what)
        : Error("step " + std::to_string(step) + ": " + what), step(step) {}
    int step;
};

struct StepDiagnostics {
    double survivor_weight_sum = 0.0;  // inner time-update normalization
    double weight_residual = 0.0;      // |sum of weights - 1| after the update
    std::size_t hypothesis_count = 0;  // joint hypotheses kept after pruning
    std::size_t label_count = 0;       // size of the label universe
};

struct StepOutput {
    int k = 0;
    GlmbDensity glmb;  // populated for classical runs
    SlcDensity slc;    // populated for quadruple runs
    Estimate estimate;
    double ospa_vs_truth = 0.0;
    StepDiagnostics diag;
};

/// Runs the selected recursion over the scans, starting from the
/// target-free density: time update, measurement update, truncation, state
/// estimation, and the per-step diagnostics and OSPA score.
inline std::vector<StepOutput> run_filter(const ScenarioConfig& cfg,
                                          const std::vector<ScanRecord>& scans, FilterKind kind) {
    cfg.validate();
    const UpdateOptions opts = cfg.truncation.update_options();
    std::vector<StepOutput> out;
    GlmbDensity cur_glmb = GlmbDensity::target_free();
    SlcDensity cur_slc = SlcDensity::target_free();
    for (const ScanRecord& scan : scans) {
        StepOutput step;
        step.k = scan.k;
        auto birth = cfg.birth_active_at(scan.k) ? cfg.birth.at_step(scan.k) : SlcBirthModel::none();
        try {
            TimeUpdateDiagnostics tdiag;
            if (kind == FilterKind::glmb) {
                cur_glmb = glmb_time_update(cur_glmb, cfg.motion, birth, &tdiag);
                cur_glmb = glmb_measurement_update(cur_glmb, cfg.sensor, scan.measurements, opts);
                step.diag.weight_residual = std::abs(cur_glmb.weight_sum() - 1.0);
                cur_glmb = prune_truncate(cur_glmb, cfg.truncation.min_weight,
                                          cfg.truncation.max_hypotheses);
                step.diag.hypothesis_count = cur_glmb.weights.size();
                step.diag.label_count = cur_glmb.universe.size();
                step.glmb = cur_glmb;
                step.estimate = estimate_states(from_glmb(cur_glmb));
            } else {
                cur_slc = slc_time_update(cur_slc, cfg.motion, birth, &tdiag);
                cur_slc = slc_measurement_update(cur_slc, cfg.sensor, scan.measurements, opts);
                step.diag.weight_residual = std::abs(cur_slc.weight_sum() - 1.0);
                cur_slc = slc_prune_truncate(cur_slc, cfg.truncation.min_weight,
                                             cfg.truncation.max_hypotheses);
                step.diag.hypothesis_count = cur_slc.correlation_weight.size();
                step.diag.label_count = cur_slc.universe.size();
                step.slc = cur_slc;
                step.estimate = estimate_states(cur_slc);
            }
            step.diag.survivor_weight_sum = tdiag.survivor_weight_sum;
            if (step.diag.weight_residual > 1e-9)
                throw Error("normalization residual " +
                            std::to_string(step.diag.weight_residual));
        } catch (const Error& e) {
            throw StepError(scan.k, e.what());
        }
        step.ospa_vs_truth = ospa(scan.truth, step.estimate, cfg.ospa_cutoff, cfg.ospa_order);
        out.push_back(std::move(step));
    }
    return out;
}

}  // namespace lrfs::sim
