#pragma once

#include <cmath>
#include <vector>

#include "lrfs/core.hpp"
#include "lrfs/gaussian.hpp"

namespace lrfs {

/// Linear-Gaussian motion model with a constant survival probability.
/// survival_prob is deliberately a scalar; a state-dependent survival law
/// would generalize survival_mass() and predict_pdf() below.
struct MotionModel {
    Matrix transition;     // F
    Matrix process_noise;  // Q, SPD
    double survival_prob = 1.0;
};

/// Linear-Gaussian sensor with constant detection probability and a
/// Poisson clutter process, uniform over a rectangular region.
struct SensorModel {
    Matrix observation;        // H
    Matrix measurement_noise;  // R, SPD
    double detection_prob = 1.0;
    double clutter_rate = 0.0;   // expected clutter count per scan
    Matrix clutter_region;       // dz x 2 matrix of [lo, hi] per axis

    [[nodiscard]] int measurement_dim() const { return int(observation.rows()); }

    [[nodiscard]] double clutter_volume() const {
        double v = 1.0;
        for (int i = 0; i < clutter_region.rows(); ++i)
            v *= clutter_region(i, 1) - clutter_region(i, 0);
        return v;
    }

    [[nodiscard]] bool in_region(const Vector& z) const {
        for (int i = 0; i < clutter_region.rows(); ++i)
            if (z(i) < clutter_region(i, 0) || z(i) > clutter_region(i, 1)) return false;
        return true;
    }

    /// Clutter intensity: rate * uniform density inside the region, zero outside.
    [[nodiscard]] double clutter_intensity(const Vector& z) const {
        return in_region(z) ? clutter_rate / clutter_volume() : 0.0;
    }
};

/// Association factors with log values at or below this are treated as
/// impossible and dropped: far enough above log(1e-300) that the spatial
/// conditioning of a kept hypothesis can never hit the normalizer floor.
inline constexpr double kLogAssociationFloor = -650.0;

/// Probability mass the survival functional assigns to a spatial p.d.f.
/// With a constant survival probability this is that constant, independent
/// of the mixture.
inline double survival_mass(const GaussianMixture&, const MotionModel& model) {
    return model.survival_prob;
}

/// Time-updated spatial p.d.f. of a surviving target: each component mean
/// maps through the transition and each covariance picks up the process
/// noise. Normalization is preserved. Throws when the survival mass is
/// below the floor (the conditional p.d.f. is undefined).
inline GaussianMixture predict_pdf(const GaussianMixture& s, const MotionModel& model) {
    if (!(survival_mass(s, model) > kNormalizerFloor))
        throw DegenerateNormalizerError("survival mass below floor");
    std::vector<GaussianComponent> out;
    out.reserve(s.size());
    for (const auto& c : s.components()) {
        GaussianComponent p;
        p.weight = c.weight;
        p.mean = model.transition * c.mean;
        p.cov = symmetrized(model.transition * c.cov * model.transition.transpose() +
                            model.process_noise);
        out.push_back(std::move(p));
    }
    return GaussianMixture(std::move(out));
}

/// log of the missed-detection functional value, log(1 - p_D).
inline double log_detection_functional(const GaussianMixture&, const SensorModel& model) {
    return std::log1p(-model.detection_prob);
}

/// log of the detection functional for a measurement z:
/// log( p_D / kappa(z) * sum_j w_j N(z; H m_j, H P_j H' + R) ).
inline double log_detection_functional(const GaussianMixture& s, const SensorModel& model,
                                       const Vector& z) {
    double kappa = model.clutter_intensity(z);
    if (!(kappa > 0.0))
        throw ZeroClutterDensityError("measurement outside the clutter region");
    double lik = 0.0;
    for (const auto& c : s.components()) {
        Vector zm = model.observation * c.mean;
        Matrix innov_cov = symmetrized(model.observation * c.cov * model.observation.transpose() +
                                       model.measurement_noise);
        lik += c.weight * gaussian(z, zm, innov_cov);
    }
    return std::log(model.detection_prob) + std::log(lik) - std::log(kappa);
}

/// Missed-detection functional value, 1 - p_D.
inline double detection_functional(const GaussianMixture&, const SensorModel& model) {
    return 1.0 - model.detection_prob;
}

inline double detection_functional(const GaussianMixture& s, const SensorModel& model,
                                   const Vector& z) {
    return std::exp(log_detection_functional(s, model, z));
}

/// Missed-detection update. With constant p_D the multiplier cancels and
/// the mixture is returned unchanged; a zero normalizer is rejected.
inline GaussianMixture detection_update_pdf(const GaussianMixture& s, const SensorModel& model) {
    if (!(1.0 - model.detection_prob > kNormalizerFloor))
        throw DegenerateNormalizerError("missed-detection mass below floor");
    return s;
}

/// Measurement update: per-component Kalman correction (Joseph form) with
/// reweighting by each component's marginal measurement likelihood.
inline GaussianMixture detection_update_pdf(const GaussianMixture& s, const SensorModel& model,
                                            const Vector& z) {
    const Matrix& h = model.observation;
    const int dx = s.dim();
    std::vector<GaussianComponent> out;
    out.reserve(s.size());
    double mass = 0.0;
    for (const auto& c : s.components()) {
        Vector zm = h * c.mean;
        Matrix innov_cov = symmetrized(h * c.cov * h.transpose() + model.measurement_noise);
        Matrix gain = c.cov * h.transpose() * innov_cov.llt().solve(
                          Matrix::Identity(innov_cov.rows(), innov_cov.cols()));
        GaussianComponent u;
        u.weight = c.weight * gaussian(z, zm, innov_cov);
        u.mean = c.mean + gain * (z - zm);
        Matrix ikh = Matrix::Identity(dx, dx) - gain * h;
        u.cov = symmetrized(ikh * c.cov * ikh.transpose() +
                            gain * model.measurement_noise * gain.transpose());
        mass += u.weight;
        out.push_back(std::move(u));
    }
    if (!(mass > kNormalizerFloor))
        throw DegenerateNormalizerError("measurement-update mass below floor");
    return GaussianMixture::normalized(std::move(out));
}

}  // namespace lrfs
