#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "lrfs/glmb.hpp"
#include "lrfs/slc.hpp"

namespace lrfs::oracle {

/// Discretized kinematic space for brute-force computations: an ordered
/// list of cell centers with a common cell measure, a small label set, and
/// a cardinality bound for the enumeration of labeled finite sets.
struct DiscreteScene {
    std::vector<Vector> grid;
    double cell_measure = 0.0;
    LabelSet labels;
    int max_cardinality = 2;
    double max_entries = 2.0e7;

    /// Evenly spaced cell centers partitioning [lo, hi] into n cells.
    static DiscreteScene uniform_1d(double lo, double hi, int n, LabelSet ls,
                                    int max_cardinality = 2) {
        DiscreteScene s;
        s.cell_measure = (hi - lo) / double(n);
        for (int i = 0; i < n; ++i) {
            Vector x(1);
            x(0) = lo + (double(i) + 0.5) * s.cell_measure;
            s.grid.push_back(x);
        }
        s.labels = std::move(ls);
        s.max_cardinality = max_cardinality;
        return s;
    }

    [[nodiscard]] std::size_t size() const { return grid.size(); }

    void validate() const {
        if (grid.empty() || !(cell_measure > 0.0))
            throw std::invalid_argument("scene needs grid points and a positive cell measure");
        if (labels.size() > 3 || max_cardinality > 3)
            throw std::invalid_argument("brute-force scenes are limited to three labels");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (grid[i] == grid[i - 1])
                throw std::invalid_argument("grid points must be distinct");
    }

    [[nodiscard]] int index_of(const Vector& x) const {
        int best = 0;
        double best_d = (grid.front() - x).squaredNorm();
        for (std::size_t i = 1; i < grid.size(); ++i) {
            double d = (grid[i] - x).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = int(i);
            }
        }
        return best;
    }

    /// Label subsets enumerated by the scene, cheapest first.
    [[nodiscard]] std::vector<LabelSet> enumerated_subsets() const {
        std::vector<LabelSet> out;
        double entries = 0.0;
        for (const LabelSet& sub : labels.subsets()) {
            if (int(sub.size()) > max_cardinality) continue;
            entries += std::pow(double(grid.size()), double(sub.size()));
            out.push_back(sub);
        }
        if (entries > max_entries)
            throw CardinalityOverflowError("enumeration needs " + std::to_string(entries) +
                                           " entries, cap is " + std::to_string(max_entries));
        std::sort(out.begin(), out.end(), [](const LabelSet& a, const LabelSet& b) {
            if (a.size() != b.size()) return a.size() < b.size();
            return a < b;
        });
        return out;
    }
};

/// Brute-force multitarget density: one value per labeled finite set over
/// the scene grid, stored per label subset as a dense tensor in row-major
/// order over the sorted labels.
class DiscreteDensity {
public:
    DiscreteDensity() = default;

    static DiscreteDensity from_function(const DiscreteScene& scene,
                                         const std::function<double(const LabeledFiniteSet&)>& f) {
        scene.validate();
        DiscreteDensity d;
        d.scene_ = scene;
        for (const LabelSet& sub : scene.enumerated_subsets()) {
            std::vector<double>& tensor = d.tensors_[sub];
            tensor.resize(tuple_count(scene, sub.size()));
            std::vector<int> idx(sub.size(), 0);
            for (std::size_t flat = 0; flat < tensor.size(); ++flat) {
                tensor[flat] = f(make_lfs(scene, sub, unflatten(scene, sub.size(), flat)));
            }
        }
        return d;
    }

    static DiscreteDensity from_glmb(const GlmbDensity& g, const DiscreteScene& scene) {
        return from_function(scene, [&](const LabeledFiniteSet& x) { return density_value(g, x); });
    }

    static DiscreteDensity from_slc(const SlcDensity& s, const DiscreteScene& scene) {
        return from_function(scene, [&](const LabeledFiniteSet& x) { return density_value(s, x); });
    }

    [[nodiscard]] const DiscreteScene& scene() const { return scene_; }
    [[nodiscard]] const std::map<LabelSet, std::vector<double>>& tensors() const { return tensors_; }
    [[nodiscard]] std::map<LabelSet, std::vector<double>>& tensors() { return tensors_; }

    [[nodiscard]] double value(const LabelSet& sub, const std::vector<int>& grid_idx) const {
        auto it = tensors_.find(sub);
        if (it == tensors_.end()) return 0.0;
        return it->second[flatten(scene_, grid_idx)];
    }

    void scale(double c) {
        for (auto& [sub, tensor] : tensors_)
            for (double& v : tensor) v *= c;
    }

    /// Mass carried by one label subset: the integral of the density over
    /// kinematic tuples with exactly those labels.
    [[nodiscard]] double label_marginal(const LabelSet& sub) const {
        auto it = tensors_.find(sub);
        if (it == tensors_.end()) return 0.0;
        double s = 0.0;
        for (double v : it->second) s += v;
        return s * std::pow(scene_.cell_measure, double(sub.size()));
    }

    static std::size_t tuple_count(const DiscreteScene& scene, std::size_t n) {
        std::size_t c = 1;
        for (std::size_t i = 0; i < n; ++i) c *= scene.size();
        return c;
    }

    static std::vector<int> unflatten(const DiscreteScene& scene, std::size_t n, std::size_t flat) {
        std::vector<int> idx(n);
        for (std::size_t t = n; t-- > 0;) {
            idx[t] = int(flat % scene.size());
            flat /= scene.size();
        }
        return idx;
    }

    static std::size_t flatten(const DiscreteScene& scene, const std::vector<int>& idx) {
        std::size_t flat = 0;
        for (int i : idx) flat = flat * scene.size() + std::size_t(i);
        return flat;
    }

    static LabeledFiniteSet make_lfs(const DiscreteScene& scene, const LabelSet& sub,
                                     const std::vector<int>& idx) {
        std::vector<LabeledState> elems;
        const auto& ls = sub.elements();
        for (std::size_t t = 0; t < ls.size(); ++t)
            elems.push_back({ scene.grid[std::size_t(idx[t])], ls[t] });
        return validate_lfs(std::move(elems));
    }

private:
    DiscreteScene scene_;
    std::map<LabelSet, std::vector<double>> tensors_;
};

/// Set integral of a stored brute-force density: the cardinality-stratified
/// sum of every tensor, weighted by the cell measure per element. Tuples
/// with duplicated labels contribute nothing by construction.
inline double set_integral(const DiscreteDensity& d) {
    double total = 0.0;
    for (const auto& [sub, tensor] : d.tensors()) total += d.label_marginal(sub);
    return total;
}

/// Set integral of an arbitrary function of labeled finite sets.
inline double set_integral(const std::function<double(const LabeledFiniteSet&)>& f,
                           const DiscreteScene& scene) {
    double total = 0.0;
    for (const LabelSet& sub : scene.enumerated_subsets()) {
        double s = 0.0;
        std::size_t count = DiscreteDensity::tuple_count(scene, sub.size());
        for (std::size_t flat = 0; flat < count; ++flat)
            s += f(DiscreteDensity::make_lfs(scene, sub,
                                             DiscreteDensity::unflatten(scene, sub.size(), flat)));
        total += s * std::pow(scene.cell_measure, double(sub.size()));
    }
    return total;
}

/// Exhaustive multitarget Bayes update: pointwise product of the prior and
/// the multitarget likelihood, renormalized by its set integral. Invariant
/// under positive rescaling of the prior.
inline DiscreteDensity
bayes_update_bruteforce(const DiscreteDensity& prior,
                        const std::function<double(const LabeledFiniteSet&)>& likelihood,
                        const DiscreteScene& scene) {
    DiscreteDensity post = prior;
    for (auto& [sub, tensor] : post.tensors()) {
        std::size_t count = tensor.size();
        for (std::size_t flat = 0; flat < count; ++flat)
            tensor[flat] *= likelihood(DiscreteDensity::make_lfs(
                scene, sub, DiscreteDensity::unflatten(scene, sub.size(), flat)));
    }
    double z = set_integral(post);
    if (!(z > kNormalizerFloor))
        throw DegenerateNormalizerError("brute-force posterior mass below floor");
    post.scale(1.0 / z);
    return post;
}

/// Standard multitarget measurement likelihood for the scene sensor:
/// Poisson clutter over the region plus per-target detection, summed over
/// every association of targets to measurements. The empty set yields the
/// clutter-process density of Z.
inline std::function<double(const LabeledFiniteSet&)>
make_standard_likelihood(const SensorModel& sensor, std::vector<Vector> z) {
    double log_clutter = -sensor.clutter_rate;
    for (const Vector& m : z) {
        double kappa = sensor.clutter_intensity(m);
        if (!(kappa > 0.0)) throw ZeroClutterDensityError("measurement outside clutter region");
        log_clutter += std::log(kappa);
    }
    double clutter_density = std::exp(log_clutter);
    return [sensor, z = std::move(z), clutter_density](const LabeledFiniteSet& x) {
        const auto& elems = x.elements();
        const std::size_t n = elems.size(), m = z.size();
        // Per-target association factors: j = 0 missed, else measurement j.
        std::vector<std::vector<double>> factor(n, std::vector<double>(m + 1));
        for (std::size_t t = 0; t < n; ++t) {
            factor[t][0] = 1.0 - sensor.detection_prob;
            for (std::size_t j = 0; j < m; ++j) {
                Vector zm = sensor.observation * elems[t].kinematic;
                Matrix innov = sensor.measurement_noise;
                factor[t][j + 1] = sensor.detection_prob * gaussian(z[j], zm, innov) /
                                   sensor.clutter_intensity(z[j]);
            }
        }
        // Sum over associations, injective on assigned measurements.
        double total = 0.0;
        std::vector<bool> used(m + 1, false);
        auto rec = [&](auto&& self, std::size_t t, double prod) -> void {
            if (t == n) {
                total += prod;
                return;
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (j > 0 && used[j]) continue;
                if (j > 0) used[j] = true;
                self(self, t + 1, prod * factor[t][j]);
                if (j > 0) used[j] = false;
            }
        };
        rec(rec, 0, 1.0);
        return clutter_density * total;
    };
}

/// Total-variation distance between two brute-force densities on the same
/// scene: half the set integral of the absolute difference.
inline double tv_distance(const DiscreteDensity& a, const DiscreteDensity& b) {
    double total = 0.0;
    std::map<LabelSet, bool> seen;
    for (const auto& [sub, ta] : a.tensors()) {
        seen[sub] = true;
        auto it = b.tensors().find(sub);
        double s = 0.0;
        for (std::size_t i = 0; i < ta.size(); ++i)
            s += std::abs(ta[i] - (it == b.tensors().end() ? 0.0 : it->second[i]));
        total += s * std::pow(a.scene().cell_measure, double(sub.size()));
    }
    for (const auto& [sub, tb] : b.tensors()) {
        if (seen.count(sub)) continue;
        double s = 0.0;
        for (double v : tb) s += std::abs(v);
        total += s * std::pow(b.scene().cell_measure, double(sub.size()));
    }
    return 0.5 * total;
}

// ---- Probability generating functionals ----

/// Repeated-evaluation engine for the p.g.fl. of a density over a scene.
/// Test functions are supplied by grid index. Two independent routes exist:
/// the raw set-integral route for brute-force densities, and the
/// weighted-product-of-functionals route for hypothesis-form densities.
class PgflEvaluator {
public:
    using GridFn = std::function<double(int, const Label&)>;

    explicit PgflEvaluator(const DiscreteDensity& d) : discrete_(&d), scene_(d.scene()) {}

    PgflEvaluator(const GlmbDensity& d, const DiscreteScene& scene) : scene_(scene) {
        for (const auto& [key, w] : d.weights) {
            Term t;
            t.weight = w;
            for (const Label& l : key.labels)
                t.factors.emplace_back(l, spatial_values(d.spatial.at({ key.index, l })));
            terms_.push_back(std::move(t));
        }
    }

    PgflEvaluator(const SlcDensity& d, const DiscreteScene& scene) : scene_(scene) {
        for (const auto& [key, a] : d.correlation_weight) {
            auto lw = d.label_weight.find(key.labels);
            if (lw == d.label_weight.end()) continue;
            Term t;
            t.weight = lw->second * a;
            if (!(t.weight > 0.0)) continue;
            for (const Label& l : key.labels)
                t.factors.emplace_back(l, spatial_values(d.spatial.at({ key.index, l })));
            terms_.push_back(std::move(t));
        }
    }

    [[nodiscard]] const DiscreteScene& scene() const { return scene_; }

    [[nodiscard]] double eval(const GridFn& h) const {
        if (discrete_) return eval_discrete(h);
        double total = 0.0;
        for (const Term& t : terms_) {
            double prod = t.weight;
            for (const auto& [l, values] : t.factors) {
                double s = 0.0;
                for (std::size_t i = 0; i < values.size(); ++i)
                    s += h(int(i), l) * values[i];
                prod *= s * scene_.cell_measure;
            }
            total += prod;
        }
        return total;
    }

private:
    struct Term {
        double weight = 0.0;
        std::vector<std::pair<Label, std::vector<double>>> factors;
    };

    [[nodiscard]] std::vector<double> spatial_values(const GaussianMixture& mix) const {
        std::vector<double> v(scene_.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = mix.density(scene_.grid[i]);
        return v;
    }

    [[nodiscard]] double eval_discrete(const GridFn& h) const {
        double total = 0.0;
        for (const auto& [sub, tensor] : discrete_->tensors()) {
            const auto& ls = sub.elements();
            double s = 0.0;
            for (std::size_t flat = 0; flat < tensor.size(); ++flat) {
                double prod = tensor[flat];
                if (prod == 0.0) continue;
                std::size_t rem = flat;
                for (std::size_t t = ls.size(); t-- > 0;) {
                    prod *= h(int(rem % scene_.size()), ls[t]);
                    rem /= scene_.size();
                }
                s += prod;
            }
            total += s * std::pow(scene_.cell_measure, double(sub.size()));
        }
        return total;
    }

    const DiscreteDensity* discrete_ = nullptr;
    DiscreteScene scene_;
    std::vector<Term> terms_;
};

namespace detail {

inline PgflEvaluator::GridFn checked_grid_fn(
    const DiscreteScene& scene, const std::function<double(const Vector&, const Label&)>& h) {
    for (std::size_t i = 0; i < scene.size(); ++i)
        for (const Label& l : scene.labels) {
            double v = h(scene.grid[i], l);
            if (v < 0.0 || v > 1.0)
                throw std::invalid_argument("test function outside [0,1]");
        }
    return [&scene, h](int i, const Label& l) { return h(scene.grid[std::size_t(i)], l); };
}

}  // namespace detail

/// p.g.fl. value for a test function 0 <= h <= 1: h == 1 gives one, h == 0
/// gives the probability of the empty set.
inline double pgfl_eval(const DiscreteDensity& d,
                        const std::function<double(const Vector&, const Label&)>& h) {
    return PgflEvaluator(d).eval(detail::checked_grid_fn(d.scene(), h));
}

inline double pgfl_eval(const GlmbDensity& d, const DiscreteScene& scene,
                        const std::function<double(const Vector&, const Label&)>& h) {
    return PgflEvaluator(d, scene).eval(detail::checked_grid_fn(scene, h));
}

inline double pgfl_eval(const SlcDensity& d, const DiscreteScene& scene,
                        const std::function<double(const Vector&, const Label&)>& h) {
    return PgflEvaluator(d, scene).eval(detail::checked_grid_fn(scene, h));
}

// ---- Finite-difference functional derivatives ----

struct FdOptions {
    double eps = 1e-4;
    bool richardson = true;       // one extrapolation level (halved step)
    bool log_domain = false;      // differentiate log G instead of G
};

namespace detail {

/// Functional derivative of G at up to two labeled points, realized with
/// Dirac masses of weight 1/cell_measure on the snapped grid cells and
/// central finite differences in the perturbation amplitude.
inline double fd_derivative(const PgflEvaluator& g,
                            const std::vector<LabeledState>& points,
                            const PgflEvaluator::GridFn& h0, const FdOptions& opts) {
    if (points.size() > 2)
        throw std::invalid_argument("finite differences support at most two points");
    if (!(opts.eps >= 1e-12))
        throw StepUnderflowError("finite-difference step below resolution");
    const DiscreteScene& scene = g.scene();

    struct Bump {
        int cell;
        Label label;
    };
    std::vector<Bump> bumps;
    for (const LabeledState& p : points) bumps.push_back({ scene.index_of(p.kinematic), p.label });

    auto value = [&](const std::vector<double>& amounts) {
        double inv_cell = 1.0 / scene.cell_measure;
        auto h = [&](int i, const Label& l) {
            double v = h0(i, l);
            for (std::size_t b = 0; b < bumps.size(); ++b)
                if (bumps[b].cell == i && bumps[b].label == l) v += amounts[b] * inv_cell;
            return v;
        };
        double gv = g.eval(h);
        return opts.log_domain ? std::log(gv) : gv;
    };

    auto central = [&](double e) {
        if (bumps.empty()) return value({});
        if (bumps.size() == 1) return (value({ e }) - value({ -e })) / (2.0 * e);
        return (value({ e, e }) - value({ e, -e }) - value({ -e, e }) + value({ -e, -e })) /
               (4.0 * e * e);
    };

    if (bumps.empty()) return value({});
    double coarse = central(opts.eps);
    if (!opts.richardson) return coarse;
    double fine = central(opts.eps / 2.0);
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace detail

inline double functional_derivative_fd(const DiscreteDensity& d,
                                       const std::vector<LabeledState>& points,
                                       const PgflEvaluator::GridFn& h0, FdOptions opts = {}) {
    return detail::fd_derivative(PgflEvaluator(d), points, h0, opts);
}

inline double functional_derivative_fd(const GlmbDensity& d, const DiscreteScene& scene,
                                       const std::vector<LabeledState>& points,
                                       const PgflEvaluator::GridFn& h0, FdOptions opts = {}) {
    return detail::fd_derivative(PgflEvaluator(d, scene), points, h0, opts);
}

inline double functional_derivative_fd(const SlcDensity& d, const DiscreteScene& scene,
                                       const std::vector<LabeledState>& points,
                                       const PgflEvaluator::GridFn& h0, FdOptions opts = {}) {
    return detail::fd_derivative(PgflEvaluator(d, scene), points, h0, opts);
}

/// Test function identically one.
inline PgflEvaluator::GridFn unit_test_function() {
    return [](int, const Label&) { return 1.0; };
}

/// Finite-difference factorial covariance: the mixed second derivative of
/// log G at h = 1, computed on a brute-force discretization.
inline double fcd_fd(const DiscreteDensity& d, const LabeledState& x1, const LabeledState& x2,
                     double eps = 1e-4) {
    FdOptions opts;
    opts.eps = eps;
    opts.log_domain = true;
    return functional_derivative_fd(d, { x1, x2 }, unit_test_function(), opts);
}

}  // namespace lrfs::oracle
