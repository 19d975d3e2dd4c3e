#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "funcoord/errors.hpp"
#include "funcoord/kernels.hpp"
#include "funcoord/rng.hpp"

using namespace funcoord;

TEST_CASE("pointwise evaluation of the gaussian families") {
    const Kernel gm = Kernel::gauss_metric();
    CHECK(gm.eval(Point{1.3}, Point{1.3}, 1).real() == doctest::Approx(1.0));
    CHECK(gm.eval(Point{0.0}, Point{2.0}, 1).real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

    const Kernel mink = Kernel::minkowski_gauss({1, -1});
    CHECK(mink.eval(Point{1.0, 1.0}, Point{0.0, 0.0}, 2).real() == doctest::Approx(1.0));

    const Kernel rho = Kernel::gauss_rho();
    CHECK(rho.eval(Point{0.0}, Point{1.0}, 1).real() == doctest::Approx(std::exp(-1.0)));

    // symmetric families match transposed arguments
    Rng rng(7);
    for (int t = 0; t < 10; ++t) {
        const Point x{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const Point y{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        CHECK(std::abs(gm.eval(x, y, 2) - gm.eval(y, x, 2)) < 1e-14);
        CHECK(std::abs(mink.eval(x, y, 2) - mink.eval(y, x, 2)) < 1e-14);
    }
}

TEST_CASE("distributional kernels reject pointwise requests") {
    const Kernel d = Kernel::dirac();
    CHECK_THROWS_AS(d.eval(Point{0.0}, Point{0.0}, 1), std::invalid_argument);
    const Kernel pw = Kernel::plane_wave_weight();
    CHECK_THROWS_AS(pw.eval(Point{0.0}, Point{1.0}, 1), std::invalid_argument);
    CHECK(pw.eval(Point{0.0}, Point{0.0}, 1).real() ==
          doctest::Approx(1.0 / std::sqrt(2.0 * kPi)));
    CHECK_THROWS_AS(d.mixed_hessian(Point{0.0}, 1), std::invalid_argument);
}

TEST_CASE("assemble: dirac gives the identity") {
    const GridPtr g = make_grid_1d(-6.0, 6.0, 33);
    const Mat id = assemble(Kernel::dirac(), g).mat;
    CHECK((id - Mat::Identity(g->size(), g->size())).norm() == 0.0);
}

TEST_CASE("assemble: gauss_rho smooths constants to sqrt(pi) in the interior") {
    const GridPtr g = make_grid_1d(-6.0, 6.0, 129);
    const Mat rho = assemble(Kernel::gauss_rho(), g).mat;
    const Vec ones = Vec::Ones(g->size());
    const Vec smoothed = rho * ones;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < g->size(); ++i)
        if (std::abs(g->node(i)[0]) <= 1.5)  // 4.5σ-equivalent from the box edge
            worst = std::max(worst, std::abs(smoothed[i] - std::sqrt(kPi)));
    CHECK(worst < 1e-8);
}

TEST_CASE("fourier then inverse fourier round-trips a gaussian") {
    const GridPtr xg = make_grid_1d(-6.0, 6.0, 257);
    const GridPtr kg = make_grid_1d(-6.0, 6.0, 257);
    const Mat fwd = assemble(Kernel::fourier(), xg, kg).mat;
    const Mat inv = assemble(Kernel::inv_fourier(), kg, xg).mat;
    Vec gauss(xg->size());
    for (Eigen::Index i = 0; i < xg->size(); ++i)
        gauss[i] = std::exp(-0.5 * xg->node(i)[0] * xg->node(i)[0]);
    const Vec round = inv * (fwd * gauss);
    CHECK((round - gauss).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("mixed hessians of the analytic families") {
    const Kernel gm = Kernel::gauss_metric();
    CHECK((gm.mixed_hessian(Point{0.4, -0.7, 1.1}, 3) - RMat::Identity(3, 3)).norm() < 1e-14);

    const Kernel rho = Kernel::gauss_rho();
    CHECK((rho.mixed_hessian(Point{0.2}, 1) - 2.0 * RMat::Identity(1, 1)).norm() < 1e-14);

    const Kernel mink = Kernel::minkowski_gauss({1, -1, -1});
    RMat eta = RMat::Zero(3, 3);
    eta(0, 0) = 1.0;
    eta(1, 1) = -1.0;
    eta(2, 2) = -1.0;
    CHECK((mink.mixed_hessian(Point{0.0, 0.0, 0.0}, 3) - eta).norm() < 1e-14);

    const Kernel scaled = Kernel::gauss_metric(2.0);
    CHECK((scaled.mixed_hessian(Point{0.1, 0.2}, 2) - 2.0 * RMat::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("finite-difference hessian path matches the analytic identity") {
    const Kernel fd = Kernel::custom(
        "gm_fd",
        [](const Point& x, const Point& y, int dim) {
            double s = 0.0;
            for (int d = 0; d < dim; ++d) s += (x[d] - y[d]) * (x[d] - y[d]);
            return Complex(std::exp(-0.5 * s), 0.0);
        },
        true);
    const RMat g = fd.mixed_hessian(Point{0.3, -1.0}, 2);
    CHECK((g - RMat::Identity(2, 2)).norm() < 1e-7);
}

TEST_CASE("mixed hessian of translation-invariant kernels is constant") {
    Rng rng(11);
    const Kernel gm = Kernel::gauss_metric();
    const RMat base = gm.mixed_hessian(Point{0.0, 0.0}, 2);
    for (int t = 0; t < 5; ++t) {
        const Point a{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        CHECK((gm.mixed_hessian(a, 2) - base).norm() < 1e-10);
    }
    // the finite-difference path keeps constancy at its own accuracy
    const Kernel fd = Kernel::custom(
        "rho_fd",
        [](const Point& x, const Point& y, int dim) {
            double s = 0.0;
            for (int d = 0; d < dim; ++d) s += (x[d] - y[d]) * (x[d] - y[d]);
            return Complex(std::exp(-s), 0.0);
        },
        true);
    const RMat fd_base = fd.mixed_hessian(Point{0.0}, 1);
    for (int t = 0; t < 5; ++t) {
        const Point a{rng.uniform(-2, 2)};
        CHECK((fd.mixed_hessian(a, 1) - fd_base).norm() < 1e-7);
    }
}

TEST_CASE("closed-form gram values") {
    const Kernel gm = Kernel::gauss_metric();
    CHECK(gram_closed_form(gm, {1.0}, {Point{0.7}}, 1) == doctest::Approx(1.0));
    CHECK(gram_closed_form(gm, {1.0, -1.0}, {Point{0.0}, Point{0.0}}, 1) ==
          doctest::Approx(0.0).epsilon(1e-15));

    const double eps = 1e-3;
    const double expect = 2.0 * (1.0 - std::exp(-eps * eps / 2.0));
    CHECK(gram_closed_form(gm, {1.0, -1.0}, {Point{0.0}, Point{eps}}, 1) ==
          doctest::Approx(expect).epsilon(1e-10));
    CHECK(expect == doctest::Approx(eps * eps).epsilon(1e-3));

    CHECK_THROWS_AS(gram_closed_form(Kernel::damped_gauss(), {1.0}, {Point{0.0}}, 1),
                    std::invalid_argument);
}

TEST_CASE("gram is invariant under simultaneous permutation") {
    const Kernel gm = Kernel::gauss_metric();
    const std::vector<double> l = {0.5, -1.5, 2.0};
    const std::vector<Point> p = {Point{0.1}, Point{-0.4}, Point{1.2}};
    const double a = gram_closed_form(gm, l, p, 1);
    const double b = gram_closed_form(gm, {2.0, 0.5, -1.5}, {Point{1.2}, Point{0.1}, Point{-0.4}}, 1);
    CHECK(a == doctest::Approx(b).epsilon(1e-14));
}

TEST_CASE("gauss_metric gram matrices of distinct points are positive") {
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 3 + static_cast<int>(rng.next_u64() % 6);  // 3..8
        std::vector<Point> pts;
        while (static_cast<int>(pts.size()) < m) {
            Point p{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
            bool distinct = true;
            for (const Point& q : pts) {
                double d2 = 0.0;
                for (int d = 0; d < 3; ++d) d2 += (p[d] - q[d]) * (p[d] - q[d]);
                if (d2 < 1e-2) distinct = false;
            }
            if (distinct) pts.push_back(p);
        }
        RMat gram(m, m);
        const Kernel gm = Kernel::gauss_metric();
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) gram(i, j) = gm.eval(pts[i], pts[j], 3).real();
        Eigen::SelfAdjointEigenSolver<RMat> es(gram, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("closed-form gram agrees with the mollified grid pathway") {
    const GridPtr g = make_grid_1d(-6.0, 6.0, 1025);
    const Kernel gm = Kernel::gauss_metric();
    const std::vector<double> lambdas = {1.0, -0.5};
    const std::vector<Point> pts = {Point{-0.4}, Point{0.9}};
    const double closed = gram_closed_form(gm, lambdas, pts, 1);

    auto grid_value = [&](double L) {
        Vec combo = Vec::Zero(g->size());
        for (size_t i = 0; i < pts.size(); ++i)
            combo += lambdas[i] * mollified_delta(g, pts[i], L).values;
        const Mat k = assemble(gm, g).mat;  // column-weighted kernel
        const Vec kf = k * combo;
        Complex s = 0.0;
        for (Eigen::Index i = 0; i < g->size(); ++i)
            s += g->weight(i) * combo[i] * kf[i];
        return s.real();
    };
    const double v8 = grid_value(8.0), v16 = grid_value(16.0);
    const double extrap = (4.0 * v16 - v8) / 3.0;
    CHECK(std::abs(extrap - closed) < 1e-4);
}
