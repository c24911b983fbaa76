// Prints the pair factorial-covariance field of a correlated cluster and
// cross-checks one point against finite differences on the grid oracle.

#include <cstdio>

#include "lrfs/correlation.hpp"
#include "lrfs/oracle.hpp"

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

}  // namespace

int main() {
    Label l1{ 1, 1 }, l2{ 1, 2 };
    auto left = GaussianMixture::single(vec1(-1.0), mat1(0.09));
    auto right = GaussianMixture::single(vec1(1.0), mat1(0.09));
    auto model = SlcBirthModel::shared_alpha(
        LabelSet{ l1, l2 }, { { l1, 1.0 }, { l2, 1.0 } }, { 0, 1 }, { 0.5, 0.5 },
        { { { l1, left }, { l2, right } }, { { l1, right }, { l2, left } } });
    auto density = slc_birth_density(model);

    std::printf("pair covariance (rows: first target position, cols: second):\n        ");
    std::vector<double> axis = { -1.0, -0.5, 0.0, 0.5, 1.0 };
    for (double x2 : axis) std::printf("%8.2f", x2);
    std::printf("\n");
    for (double x1 : axis) {
        std::printf("%8.2f", x1);
        for (double x2 : axis)
            std::printf("%8.3f",
                        factorial_covariance_pair(density, { vec1(x1), l1 }, { vec1(x2), l2 }));
        std::printf("\n");
    }

    auto grid = default_probe_grid(density);
    std::printf("independence gap over %zu probe points: %.4f\n", grid.size(),
                independence_gap(density, { l1, l2 }, grid));

    auto scene = oracle::DiscreteScene::uniform_1d(-4.0, 4.0, 401, density.universe, 2);
    auto dd = oracle::DiscreteDensity::from_slc(density, scene);
    Vector p1 = vec1(-1.0), p2 = vec1(1.0);
    double cf = factorial_covariance_pair(density, { p1, l1 }, { p2, l2 });
    double fd = oracle::fcd_fd(dd, { p1, l1 }, { p2, l2 });
    std::printf("closed form %.6f vs finite differences %.6f at (-1, +1)\n", cf, fd);
    return 0;
}
