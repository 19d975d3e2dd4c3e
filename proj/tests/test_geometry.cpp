#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "funcoord/errors.hpp"
#include "funcoord/geometry.hpp"
#include "funcoord/rng.hpp"

using namespace funcoord;

TEST_CASE("induced metrics of the named kernels") {
    CHECK((induced_metric(Kernel::gauss_metric(), Point{0.1, -2.0, 1.4}, 3) -
           RMat::Identity(3, 3))
              .norm() < 1e-14);

    RMat eta = RMat::Zero(2, 2);
    eta(0, 0) = 1.0;
    eta(1, 1) = -1.0;
    CHECK((induced_metric(Kernel::minkowski_gauss({1, -1}), Point{0.3, 0.7}, 2) - eta).norm() <
          1e-14);

    // chain rule: e^{-s(x-y)^2/2} gives s δ_μν
    CHECK((induced_metric(Kernel::gauss_metric(2.0), Point{0.0}, 1) -
           2.0 * RMat::Identity(1, 1))
              .norm() < 1e-10);

    CHECK_THROWS_AS(induced_metric(Kernel::dirac(), Point{0.0}, 1), std::invalid_argument);
}

TEST_CASE("translation-invariant kernels give constant induced metrics") {
    Rng rng(3);
    const Kernel gm = Kernel::gauss_metric();
    const RMat base = induced_metric(gm, Point{0.0, 0.0}, 2);
    for (int t = 0; t < 5; ++t)
        CHECK((induced_metric(gm, Point{rng.uniform(-3, 3), rng.uniform(-3, 3)}, 2) - base)
                  .norm() < 1e-10);
}

TEST_CASE("path quadratic forms: null, unit-speed, timelike") {
    const Kernel mink = Kernel::minkowski_gauss({1, -1});
    const GridPtr tg = make_grid_1d(0.0, 1.0, 64);

    const DeltaPath null_line =
        make_path(tg, {[](double t) { return t; }, [](double t) { return t; }});
    CHECK(path_quadratic_form(mink, null_line).cwiseAbs().maxCoeff() < 1e-10);

    const DeltaPath timelike =
        make_path(tg, {[](double t) { return t; }, [](double) { return 0.25; }});
    CHECK((path_quadratic_form(mink, timelike).array() - 1.0).abs().maxCoeff() < 1e-10);

    const GridPtr tgc = make_grid_1d(0.0, 2.0 * kPi, 64, true);
    const DeltaPath circle = make_path(
        tgc, {[](double t) { return std::cos(t); }, [](double t) { return std::sin(t); }});
    CHECK((path_quadratic_form(Kernel::gauss_metric(), circle).array() - 1.0).abs().maxCoeff() <
          1e-10);

    // indefinite kernels produce both signs over a pencil of directions
    bool pos = false, neg = false;
    for (int k = 0; k < 8; ++k) {
        const double angle = kPi * k / 8.0;
        const DeltaPath ray = make_path(
            tg, {[angle](double t) { return std::cos(angle) * t; },
                 [angle](double t) { return std::sin(angle) * t; }});
        const double q = path_quadratic_form(mink, ray)[32];
        if (q > 1e-10) pos = true;
        if (q < -1e-10) neg = true;
    }
    CHECK(pos);
    CHECK(neg);
}

TEST_CASE("quadratic form is reparametrization-covariant") {
    const GridPtr tg = make_grid_1d(0.0, 1.0, 64);
    const Kernel gm = Kernel::gauss_metric();
    const DeltaPath slow = make_path(tg, {[](double t) { return t; }});
    const DeltaPath fast = make_path(tg, {[](double t) { return 2.0 * t; }});
    const RVec qs = path_quadratic_form(gm, slow);
    const RVec qf = path_quadratic_form(gm, fast);
    CHECK((qf - 4.0 * qs).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("mollified tangent norms converge to the closed-form quadratic form") {
    const GridPtr grid = make_grid_1d(-6.0, 6.0, 1025);
    const GridPtr tg = make_grid_1d(0.0, 1.0, 33);
    const Kernel gm = Kernel::gauss_metric();

    const DeltaPath line = make_path(tg, {[](double t) { return t - 0.5; }});
    const CrosscheckReport rep =
        path_norm_crosscheck(gm, line, grid, {4.0, 8.0, 16.0, 32.0}, tg->size() / 2);
    CHECK(rep.parameter_value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.rel_error < 1e-3);
    CHECK(rep.observed_order >= 1.8);

    // zero velocity: both sides vanish
    const DeltaPath still = make_path(tg, {[](double) { return 0.2; }});
    const CrosscheckReport zero =
        path_norm_crosscheck(gm, still, grid, {4.0, 8.0}, tg->size() / 2);
    CHECK(std::abs(zero.parameter_value) < 1e-12);
    CHECK(std::abs(zero.mollified_value) < 1e-12);

    // doubled speed scales both sides by four
    const DeltaPath fast = make_path(tg, {[](double t) { return 2.0 * (t - 0.5); }});
    const CrosscheckReport quad =
        path_norm_crosscheck(gm, fast, grid, {4.0, 8.0, 16.0, 32.0}, tg->size() / 2);
    CHECK(quad.parameter_value == doctest::Approx(4.0 * rep.parameter_value).epsilon(1e-10));
    CHECK(std::abs(quad.mollified_value - 4.0 * rep.mollified_value) <
          1e-3 * std::abs(quad.mollified_value));

    // an under-resolved schedule is rejected
    const GridPtr coarse = make_grid_1d(-6.0, 6.0, 65);
    CHECK_THROWS_AS(path_norm_crosscheck(gm, line, coarse, {64.0, 128.0}, tg->size() / 2),
                    resolution_error);
}

TEST_CASE("gram matrices of delta families") {
    const Kernel gm = Kernel::gauss_metric();

    const GramReport single = gram_deltas(gm, {Point{0.7}}, 1);
    CHECK(single.gram(0, 0) == doctest::Approx(1.0));

    const GramReport pair = gram_deltas(gm, {Point{0.0}, Point{2.0}}, 1);
    CHECK(pair.gram(0, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(pair.min_eigenvalue == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));

    Rng rng(7);
    std::vector<Point> pts;
    while (pts.size() < 5) {
        Point p{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
        bool ok = true;
        for (const Point& q : pts) {
            double d2 = 0.0;
            for (int d = 0; d < 3; ++d) d2 += (p[d] - q[d]) * (p[d] - q[d]);
            if (d2 < 0.09) ok = false;
        }
        if (ok) pts.push_back(p);
    }
    const GramReport five = gram_deltas(gm, pts, 3);
    CHECK(five.min_eigenvalue > 0.0);

    CHECK_THROWS_AS(gram_deltas(gm, {Point{0.0}, Point{0.0}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(gram_deltas(gm, std::vector<Point>(9, Point{0.0}), 1),
                    std::invalid_argument);
}

TEST_CASE("gram positivity is monotone under point removal") {
    Rng rng(11);
    const Kernel gm = Kernel::gauss_metric();
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Point> pts;
        while (pts.size() < 6) {
            Point p{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
            bool ok = true;
            for (const Point& q : pts) {
                double d2 = 0.0;
                for (int d = 0; d < 3; ++d) d2 += (p[d] - q[d]) * (p[d] - q[d]);
                if (d2 < 0.09) ok = false;
            }
            if (ok) pts.push_back(p);
        }
        const double full = gram_deltas(gm, pts, 3).min_eigenvalue;
        std::vector<Point> fewer(pts.begin(), pts.end() - 1);
        const double reduced = gram_deltas(gm, fewer, 3).min_eigenvalue;
        CHECK(reduced >= full - 1e-12);  // eigenvalue interlacing
    }
}

TEST_CASE("linear-structure continuity in the kernel norm") {
    const Kernel gm = Kernel::gauss_metric();

    // identical point and weight: exactly zero
    const ContinuityReport same =
        linear_structure_continuity(gm, Point{0.5}, 1.0, {Point{0.5}}, {1.0}, 1);
    CHECK(same.values[0] == doctest::Approx(0.0));

    // shrinking positions: second order in the distance
    std::vector<Point> seq;
    std::vector<double> lams;
    for (double eps : {0.4, 0.2, 0.1, 0.05, 0.025}) {
        seq.push_back(Point{0.5 + eps});
        lams.push_back(1.0);
    }
    const ContinuityReport shrink = linear_structure_continuity(gm, Point{0.5}, 1.0, seq, lams, 1);
    for (size_t i = 0; i + 1 < shrink.values.size(); ++i)
        CHECK(shrink.values[i] > shrink.values[i + 1]);
    CHECK(shrink.observed_order == doctest::Approx(2.0).epsilon(0.05));
    CHECK(shrink.values[2] == doctest::Approx(2.0 * (1.0 - std::exp(-0.1 * 0.1 / 2.0))).epsilon(1e-10));

    // weight perturbation alone: ε² exactly
    const ContinuityReport wexp =
        linear_structure_continuity(gm, Point{0.5}, 1.0, {Point{0.5}}, {1.0 + 1e-3}, 1);
    CHECK(wexp.values[0] == doctest::Approx(1e-6).epsilon(1e-9));
}

TEST_CASE("circle embedding: gluing, pairing, constant metric") {
    const GridPtr circle = make_grid_1d(0.0, 2.0 * kPi, 64, true);
    const CircleReport rep = circle_embedding_check(circle);
    CHECK(rep.glued);
    CHECK(rep.pairing_gap == doctest::Approx(0.0));
    CHECK(rep.metric_variation < 1e-10);
    CHECK(rep.metric_value == doctest::Approx(1.0).epsilon(1e-12));

    // the analytic hessian of the circle kernel agrees with finite differences
    const Kernel analytic = circle_kernel();
    const Kernel fd = Kernel::custom(
        "circle_fd",
        [](const Point& x, const Point& y, int) {
            return Complex(std::exp(std::cos(x[0] - y[0]) - 1.0), 0.0);
        },
        true);
    CHECK(std::abs(induced_metric(analytic, Point{1.3}, 1)(0, 0) -
                   induced_metric(fd, Point{1.3}, 1)(0, 0)) < 1e-7);

    CHECK_THROWS_AS(circle_embedding_check(make_grid_1d(0.0, 2.0 * kPi, 64, false)),
                    std::invalid_argument);
}

TEST_CASE("directional derivatives along delta paths") {
    const GridPtr grid = make_grid_1d(-6.0, 6.0, 1025);
    const GridPtr tg = make_grid_1d(0.0, 1.0, 65);

    // linear functional on a straight path: exact agreement
    const DeltaPath line = make_path(tg, {[](double t) { return t - 0.5; }});
    const DirectionalDerivativeReport lin = directional_derivative_check(
        [](double x) { return 2.0 * x + 1.0; }, nullptr, line, grid, 32, {8.0, 16.0});
    CHECK(lin.abs_error < 1e-6);

    // f1 = sin on a(t) = t: derivative is cos at the probe
    const GridPtr tg2 = make_grid_1d(0.0, 1.0, 65);
    const DeltaPath path2 = make_path(tg2, {[](double t) { return t; }});
    const DirectionalDerivativeReport trig = directional_derivative_check(
        [](double x) { return std::sin(x); }, nullptr, path2, grid, 32, {8.0, 16.0});
    CHECK(trig.chain_rule == doctest::Approx(std::cos(0.5)).epsilon(1e-6));
    CHECK(trig.abs_error < 1e-4);

    // quadratic functional from the gauss_metric kernel on the circle
    const GridPtr grid2 =
        make_grid({Axis{-4.0, 4.0, 55, false}, Axis{-4.0, 4.0, 55, false}});
    const GridPtr tgc = make_grid_1d(0.0, 2.0 * kPi, 64, true);
    const DeltaPath circle = make_path(
        tgc, {[](double t) { return std::cos(t); }, [](double t) { return std::sin(t); }});
    const Kernel gm = Kernel::gauss_metric();
    const DirectionalDerivativeReport quad =
        directional_derivative_check(nullptr, &gm, circle, grid2, 16, {2.0, 4.0});
    CHECK(quad.abs_error < 1e-4);
}
