#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "lrfs/core.hpp"

namespace lrfs {

/// Mass handled as exactly zero; below it a normalizer is treated as
/// degenerate rather than propagated as NaN/Inf.
inline constexpr double kNormalizerFloor = 1e-300;

inline constexpr double kWeightSumTol = 1e-12;

/// Log-density of N(x; mean, cov) via Cholesky factorization.
/// Throws if cov is not symmetric positive-definite.
inline double log_gaussian(const Vector& x, const Vector& mean, const Matrix& cov) {
    Eigen::LLT<Matrix> llt(cov);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("covariance is not positive-definite");
    Vector d = llt.matrixL().solve(x - mean);
    double log_det = 0.0;
    for (int i = 0; i < cov.rows(); ++i) log_det += std::log(llt.matrixL()(i, i));
    return -0.5 * d.squaredNorm() - log_det -
           0.5 * double(cov.rows()) * std::log(2.0 * std::numbers::pi);
}

inline double gaussian(const Vector& x, const Vector& mean, const Matrix& cov) {
    return std::exp(log_gaussian(x, mean, cov));
}

/// One weighted Gaussian of a mixture.
struct GaussianComponent {
    double weight = 1.0;
    Vector mean;
    Matrix cov;
};

/// Gaussian-mixture probability density over the kinematic space.
/// Invariants: weights are nonnegative and sum to one within 1e-12; every
/// covariance is symmetric positive-definite (Cholesky succeeds).
class GaussianMixture {
public:
    GaussianMixture() = default;

    explicit GaussianMixture(std::vector<GaussianComponent> comps) : comps_(std::move(comps)) {
        if (comps_.empty()) throw std::invalid_argument("mixture must have at least one component");
        double sum = 0.0;
        for (const auto& c : comps_) {
            if (!(c.weight >= 0.0)) throw std::invalid_argument("negative mixture weight");
            if (c.mean.size() != comps_.front().mean.size())
                throw std::invalid_argument("inconsistent component dimensions");
            Eigen::LLT<Matrix> llt(c.cov);
            if (llt.info() != Eigen::Success)
                throw std::invalid_argument("mixture covariance is not positive-definite");
            sum += c.weight;
        }
        if (std::abs(sum - 1.0) > kWeightSumTol)
            throw std::invalid_argument("mixture weights sum to " + std::to_string(sum));
    }

    /// Builds a mixture from unnormalized nonnegative weights.
    static GaussianMixture normalized(std::vector<GaussianComponent> comps) {
        double sum = 0.0;
        for (const auto& c : comps) sum += c.weight;
        if (!(sum > kNormalizerFloor))
            throw DegenerateNormalizerError("mixture mass below floor");
        for (auto& c : comps) c.weight /= sum;
        return GaussianMixture(std::move(comps));
    }

    static GaussianMixture single(Vector mean, Matrix cov) {
        return GaussianMixture({ GaussianComponent{ 1.0, std::move(mean), std::move(cov) } });
    }

    [[nodiscard]] const std::vector<GaussianComponent>& components() const { return comps_; }
    [[nodiscard]] std::size_t size() const { return comps_.size(); }
    [[nodiscard]] int dim() const { return comps_.empty() ? 0 : int(comps_.front().mean.size()); }

    [[nodiscard]] double density(const Vector& x) const {
        double v = 0.0;
        for (const auto& c : comps_) v += c.weight * gaussian(x, c.mean, c.cov);
        return v;
    }

    [[nodiscard]] Vector mean() const {
        Vector m = Vector::Zero(dim());
        for (const auto& c : comps_) m += c.weight * c.mean;
        return m;
    }

    /// Mode of the mixture density. Every component mean is evaluated as a
    /// candidate, then the best candidate is refined with a fixed-point
    /// mean-shift iteration.
    [[nodiscard]] Vector mode(int max_iters = 50, double step_tol = 1e-9) const {
        Vector best = comps_.front().mean;
        double best_val = density(best);
        for (const auto& c : comps_) {
            double v = density(c.mean);
            if (v > best_val) {
                best_val = v;
                best = c.mean;
            }
        }
        Vector x = best;
        for (int it = 0; it < max_iters; ++it) {
            Matrix a = Matrix::Zero(dim(), dim());
            Vector b = Vector::Zero(dim());
            for (const auto& c : comps_) {
                double g = c.weight * gaussian(x, c.mean, c.cov);
                Matrix pinv = c.cov.llt().solve(Matrix::Identity(dim(), dim()));
                a += g * pinv;
                b += g * (pinv * c.mean);
            }
            Vector next = a.ldlt().solve(b);
            double step = (next - x).norm();
            x = next;
            double v = density(x);
            if (v > best_val) {
                best_val = v;
                best = x;
            }
            if (step < step_tol) break;
        }
        return best;
    }

private:
    std::vector<GaussianComponent> comps_;
};

inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace lrfs
