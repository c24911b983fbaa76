#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "lrfs/models.hpp"

using namespace lrfs;

namespace {

Vector vec1(double x) {
    Vector v(1);
    v(0) = x;
    return v;
}

Matrix mat1(double x) {
    Matrix m(1, 1);
    m(0, 0) = x;
    return m;
}

double ref_normal(double x, double mean, double var) {
    return std::exp(-0.5 * (x - mean) * (x - mean) / var) /
           std::sqrt(2.0 * std::numbers::pi * var);
}

MotionModel scalar_motion(double f, double q, double ps) {
    return { mat1(f), mat1(q), ps };
}

SensorModel scalar_sensor(double pd, double rate = 10.0, double lo = -50.0, double hi = 50.0) {
    SensorModel s;
    s.observation = mat1(1.0);
    s.measurement_noise = mat1(0.25);
    s.detection_prob = pd;
    s.clutter_rate = rate;
    s.clutter_region = Matrix(1, 2);
    s.clutter_region << lo, hi;
    return s;
}

// Independent 1-D quadrature over +-8 sigma style ranges.
double quadrature(double lo, double hi, int n, const std::function<double(double)>& f) {
    double dx = (hi - lo) / n, total = 0.0;
    for (int i = 0; i < n; ++i) total += f(lo + (i + 0.5) * dx) * dx;
    return total;
}

}  // namespace

TEST_CASE("mixture validation enforces the p.d.f. invariants") {
    CHECK_THROWS(GaussianMixture({ { 0.5, vec1(0.0), mat1(1.0) } }));          // weights != 1
    CHECK_THROWS(GaussianMixture({ { 1.0, vec1(0.0), mat1(-1.0) } }));         // not SPD
    CHECK_THROWS(GaussianMixture(std::vector<GaussianComponent>{}));           // empty
    auto mix = GaussianMixture::normalized({ { 2.0, vec1(0.0), mat1(1.0) },
                                             { 6.0, vec1(1.0), mat1(2.0) } });
    double sum = 0.0;
    for (const auto& c : mix.components()) sum += c.weight;
    CHECK(sum == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("survival mass is the constant survival probability") {
    auto s = GaussianMixture::single(vec1(0.0), mat1(1.0));
    CHECK(survival_mass(s, scalar_motion(1.0, 0.0, 1.0)) == 1.0);
    auto two = GaussianMixture::normalized({ { 1.0, vec1(0.0), mat1(1.0) },
                                             { 3.0, vec1(5.0), mat1(0.5) } });
    CHECK(survival_mass(two, scalar_motion(1.0, 0.1, 0.9)) == Catch::Approx(0.9));
}

TEST_CASE("identity dynamics leave the mixture unchanged") {
    auto s = GaussianMixture::normalized({ { 1.0, vec1(-1.0), mat1(0.5) },
                                           { 1.0, vec1(2.0), mat1(1.5) } });
    // Zero process noise is not SPD; use a negligible one and identity F.
    auto m = scalar_motion(1.0, 1e-12, 1.0);
    auto p = predict_pdf(s, m);
    REQUIRE(p.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(p.components()[i].mean(0) == Catch::Approx(s.components()[i].mean(0)));
        CHECK(p.components()[i].cov(0, 0) ==
              Catch::Approx(s.components()[i].cov(0, 0)).margin(1e-10));
    }
}

TEST_CASE("single-component prediction is the textbook forward map") {
    auto s = GaussianMixture::single(vec1(2.0), mat1(1.5));
    auto m = scalar_motion(0.8, 0.3, 0.95);
    auto p = predict_pdf(s, m);
    CHECK(p.components()[0].mean(0) == Catch::Approx(0.8 * 2.0));
    CHECK(p.components()[0].cov(0, 0) == Catch::Approx(0.8 * 1.5 * 0.8 + 0.3));
}

TEST_CASE("prediction matches the grid-convolution reference") {
    auto s = GaussianMixture::single(vec1(1.0), mat1(0.8));
    auto m = scalar_motion(0.9, 0.4, 1.0);
    auto p = predict_pdf(s, m);
    // Reference: p(x') = integral N(x'; 0.9 x, 0.4) N(x; 1.0, 0.8) dx.
    for (double xp : { -1.0, 0.3, 0.9, 2.0 }) {
        double ref = quadrature(-10.0, 12.0, 4001, [&](double x) {
            return ref_normal(xp, 0.9 * x, 0.4) * ref_normal(x, 1.0, 0.8);
        });
        CHECK(p.density(vec1(xp)) == Catch::Approx(ref).epsilon(1e-6));
    }
}

TEST_CASE("zero survival makes the predicted p.d.f. degenerate") {
    auto s = GaussianMixture::single(vec1(0.0), mat1(1.0));
    CHECK_THROWS_AS(predict_pdf(s, scalar_motion(1.0, 0.1, 0.0)), DegenerateNormalizerError);
}

TEST_CASE("missed-detection functional is one minus detection probability") {
    auto s = GaussianMixture::single(vec1(0.0), mat1(1.0));
    CHECK(detection_functional(s, scalar_sensor(0.0)) == 1.0);
    CHECK(detection_functional(s, scalar_sensor(1.0)) == 0.0);
}

TEST_CASE("detection functional peaks at the predicted measurement") {
    auto s = GaussianMixture::single(vec1(3.0), mat1(2.0));
    auto sensor = scalar_sensor(0.9);
    double kappa = sensor.clutter_rate / 100.0;
    double expected = 0.9 / kappa * ref_normal(0.0, 0.0, 2.0 + 0.25);
    CHECK(detection_functional(s, sensor, vec1(3.0)) == Catch::Approx(expected));
}

TEST_CASE("detection functional agrees with direct quadrature") {
    auto s = GaussianMixture::normalized({ { 1.0, vec1(-2.0), mat1(1.0) },
                                           { 2.0, vec1(1.0), mat1(0.5) } });
    auto sensor = scalar_sensor(0.7);
    Vector z = vec1(0.4);
    double kappa = sensor.clutter_intensity(z);
    double ref = quadrature(-14.0, 12.0, 4001, [&](double x) {
        return 0.7 * ref_normal(z(0), x, 0.25) * s.density(vec1(x));
    }) / kappa;
    CHECK(detection_functional(s, sensor, z) == Catch::Approx(ref).epsilon(1e-6));
}

TEST_CASE("measurements outside the clutter region are rejected") {
    auto s = GaussianMixture::single(vec1(0.0), mat1(1.0));
    CHECK_THROWS_AS(detection_functional(s, scalar_sensor(0.9), vec1(99.0)),
                    ZeroClutterDensityError);
}

TEST_CASE("missed-detection update leaves the mixture unchanged") {
    auto s = GaussianMixture::normalized({ { 1.0, vec1(0.0), mat1(1.0) },
                                           { 1.0, vec1(4.0), mat1(2.0) } });
    auto u = detection_update_pdf(s, scalar_sensor(0.5));
    REQUIRE(u.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(u.components()[i].mean(0) == s.components()[i].mean(0));
    CHECK_THROWS_AS(detection_update_pdf(s, scalar_sensor(1.0)), DegenerateNormalizerError);
}

TEST_CASE("single-Gaussian measurement update is the Kalman correction") {
    double m0 = 1.0, p0 = 2.0, r = 0.25, z = 2.5;
    auto s = GaussianMixture::single(vec1(m0), mat1(p0));
    auto u = detection_update_pdf(s, scalar_sensor(0.9), vec1(z));
    double k = p0 / (p0 + r);
    REQUIRE(u.size() == 1);
    CHECK(u.components()[0].weight == Catch::Approx(1.0));
    CHECK(u.components()[0].mean(0) == Catch::Approx(m0 + k * (z - m0)));
    CHECK(u.components()[0].cov(0, 0) == Catch::Approx((1.0 - k) * p0));
}

TEST_CASE("mixture measurement update reweights by marginal likelihoods") {
    double r = 0.25, z = 0.0;
    auto s = GaussianMixture::normalized({ { 0.5, vec1(-1.0), mat1(1.0) },
                                           { 0.5, vec1(3.0), mat1(0.5) } });
    auto u = detection_update_pdf(s, scalar_sensor(0.9), vec1(z));
    double lik0 = 0.5 * ref_normal(z, -1.0, 1.0 + r);
    double lik1 = 0.5 * ref_normal(z, 3.0, 0.5 + r);
    CHECK(u.components()[0].weight == Catch::Approx(lik0 / (lik0 + lik1)));
    CHECK(u.components()[1].weight == Catch::Approx(lik1 / (lik0 + lik1)));
}

TEST_CASE("measurement update matches the grid Bayes reference pointwise") {
    auto s = GaussianMixture::normalized({ { 1.0, vec1(-1.5), mat1(1.2) },
                                           { 3.0, vec1(2.0), mat1(0.7) } });
    auto sensor = scalar_sensor(0.8);
    Vector z = vec1(0.5);
    auto u = detection_update_pdf(s, sensor, z);
    double norm = quadrature(-14.0, 14.0, 8001, [&](double x) {
        return ref_normal(z(0), x, 0.25) * s.density(vec1(x));
    });
    for (double x : { -2.0, -0.5, 0.5, 1.5, 2.5 }) {
        double ref = ref_normal(z(0), x, 0.25) * s.density(vec1(x)) / norm;
        CHECK(u.density(vec1(x)) == Catch::Approx(ref).epsilon(1e-6));
    }
}

TEST_CASE("updates keep weights normalized and covariances positive-definite") {
    auto s = GaussianMixture::normalized({ { 1.0, vec1(-1.0), mat1(2.0) },
                                           { 2.0, vec1(1.0), mat1(0.3) },
                                           { 0.5, vec1(4.0), mat1(1.1) } });
    auto m = scalar_motion(1.1, 0.2, 0.9);
    auto sensor = scalar_sensor(0.85);
    GaussianMixture cur = s;
    for (int step = 0; step < 5; ++step) {
        cur = predict_pdf(cur, m);
        cur = detection_update_pdf(cur, sensor, vec1(0.3 * step));
        double sum = 0.0;
        for (const auto& c : cur.components()) {
            sum += c.weight;
            CHECK(Eigen::LLT<Matrix>(c.cov).info() == Eigen::Success);
        }
        CHECK(sum == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("mixture mode finding agrees with a dense grid argmax") {
    auto mix = GaussianMixture::normalized({ { 0.4, vec1(-1.0), mat1(0.4) },
                                             { 0.6, vec1(1.2), mat1(0.6) } });
    double best_x = 0.0, best_v = -1.0;
    for (int i = 0; i <= 40000; ++i) {
        double x = -5.0 + 10.0 * i / 40000.0;
        double v = mix.density(vec1(x));
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    CHECK(mix.mode()(0) == Catch::Approx(best_x).margin(1e-3));
    CHECK(mix.density(mix.mode()) >= best_v - 1e-9);
}
