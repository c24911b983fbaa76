#pragma once

#include <cmath>
#include <map>
#include <random>

#include "lrfs/compare.hpp"
#include "lrfs/glmb.hpp"
#include "lrfs/slc.hpp"

namespace lrfs::test {

using lrfs::component_diff;
using lrfs::max_joint_diff;
using lrfs::max_slc_diff;
using lrfs::max_spatial_diff;
using lrfs::max_weight_diff;
using lrfs::mixture_diff;

inline Vector vec1(double x) {
    Vector v(1);
    v(0) = x;
    return v;
}

inline Matrix mat1(double x) {
    Matrix m(1, 1);
    m(0, 0) = x;
    return m;
}

inline MotionModel scalar_motion(double f, double q, double ps) {
    return { mat1(f), mat1(q), ps };
}

inline SensorModel scalar_sensor(double pd, double rate = 10.0, double lo = -50.0,
                                 double hi = 50.0) {
    SensorModel s;
    s.observation = mat1(1.0);
    s.measurement_noise = mat1(0.25);
    s.detection_prob = pd;
    s.clutter_rate = rate;
    s.clutter_region = Matrix(1, 2);
    s.clutter_region << lo, hi;
    return s;
}

inline LmbBirth two_target_birth(double q1 = 0.6, double q2 = 0.5, double x1 = -2.0,
                                 double x2 = 2.0, int step = 1) {
    Label l1{ step, 1 }, l2{ step, 2 };
    LmbBirth b;
    b.labels = LabelSet{ l1, l2 };
    b.existence = { { l1, q1 }, { l2, q2 } };
    b.spatial = { { l1, GaussianMixture::single(vec1(x1), mat1(1.0)) },
                  { l2, GaussianMixture::single(vec1(x2), mat1(1.0)) } };
    return b;
}

/// Two-label cluster whose atoms swap the two hypothesized positions; the
/// canonical correlated birth.
inline SlcBirthModel swapped_cluster_birth(double a0 = 0.5, double q1 = 0.9, double q2 = 0.8,
                                           double x_left = -1.0, double x_right = 1.0,
                                           int step = 1) {
    Label l1{ step, 1 }, l2{ step, 2 };
    auto left = GaussianMixture::single(vec1(x_left), mat1(0.5));
    auto right = GaussianMixture::single(vec1(x_right), mat1(0.5));
    return SlcBirthModel::shared_alpha(
        LabelSet{ l1, l2 }, { { l1, q1 }, { l2, q2 } }, { 0, 1 }, { a0, 1.0 - a0 },
        { { { l1, left }, { l2, right } }, { { l1, right }, { l2, left } } });
}

}  // namespace lrfs::test
