// Exercises the shared-library surface exactly as an external C consumer
// would: opaque handles, status codes, flat arrays.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "funcoord.h"

namespace {

constexpr double kTau = 6.28318530717958647692;

struct GridHandle {
    fc_grid* g = nullptr;
    ~GridHandle() { fc_grid_destroy(g); }
};

}  // namespace

TEST_CASE("grid lifecycle and error reporting") {
    fc_axis ax{0.0, 1.0, 5, 0};
    GridHandle h;
    REQUIRE(fc_grid_create(&ax, nullptr, 1, &h.g) == FC_OK);
    CHECK(fc_grid_size(h.g) == 5);
    CHECK(fc_grid_dim(h.g) == 1);

    std::vector<double> w(5);
    REQUIRE(fc_grid_weights(h.g, w.data()) == FC_OK);
    CHECK(w[0] == doctest::Approx(0.125));
    CHECK(w[2] == doctest::Approx(0.25));

    fc_axis bad{1.0, 1.0, 5, 0};
    fc_grid* out = nullptr;
    CHECK(fc_grid_create(&bad, nullptr, 1, &out) == FC_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(fc_last_error()) > 0);
}

TEST_CASE("kernels evaluate and assemble through the C surface") {
    fc_kernel* gm = nullptr;
    REQUIRE(fc_kernel_create("gauss_metric", 1.0, nullptr, 0, &gm) == FC_OK);
    double re = 0.0, im = 0.0;
    const double x = 0.0, y = 2.0;
    REQUIRE(fc_kernel_eval(gm, &x, &y, 1, &re, &im) == FC_OK);
    CHECK(re == doctest::Approx(std::exp(-2.0)));
    CHECK(im == 0.0);

    double hess[4] = {};
    const double at[2] = {0.3, -0.4};
    REQUIRE(fc_kernel_mixed_hessian(gm, at, 2, hess) == FC_OK);
    CHECK(hess[0] == doctest::Approx(1.0));
    CHECK(hess[1] == doctest::Approx(0.0));
    CHECK(hess[3] == doctest::Approx(1.0));

    const double lambdas[2] = {1.0, -1.0};
    const double pts[2] = {0.0, 1e-3};
    double gram = 0.0;
    REQUIRE(fc_gram_closed_form(gm, lambdas, pts, 2, 1, &gram) == FC_OK);
    CHECK(gram == doctest::Approx(1e-6).epsilon(1e-3));

    fc_kernel* unknown = nullptr;
    CHECK(fc_kernel_create("no_such_family", 1.0, nullptr, 0, &unknown) ==
          FC_ERR_INVALID_ARGUMENT);

    fc_axis ax{-6.0, 6.0, 33, 0};
    GridHandle g;
    REQUIRE(fc_grid_create(&ax, nullptr, 1, &g.g) == FC_OK);
    fc_linop* op = nullptr;
    REQUIRE(fc_assemble(gm, g.g, g.g, &op) == FC_OK);
    CHECK(fc_linop_rows(op) == 33);
    std::vector<double> in(33, 1.0), out_re(33), out_im(33);
    REQUIRE(fc_linop_apply(op, in.data(), nullptr, out_re.data(), out_im.data()) == FC_OK);
    CHECK(out_re[16] == doctest::Approx(std::sqrt(2.0 * 3.14159265358979)).epsilon(1e-6));
    fc_linop_destroy(op);
    fc_kernel_destroy(gm);
}

TEST_CASE("spaces and eigenproblems through the C surface") {
    fc_axis ax{0.0, kTau, 64, 1};
    GridHandle g;
    REQUIRE(fc_grid_create(&ax, nullptr, 1, &g.g) == FC_OK);

    fc_space* l2 = nullptr;
    REQUIRE(fc_space_l2(g.g, &l2) == FC_OK);

    fc_linop* d = nullptr;
    REQUIRE(fc_derivative_op(g.g, 0, 1, &d) == FC_OK);
    REQUIRE(fc_linop_scale(d, 0.0, -1.0) == FC_OK);  // -i d/dx

    std::vector<double> lr(64), li(64), resid(64);
    REQUIRE(fc_generalized_eigs(d, l2, lr.data(), li.data(), resid.data()) == FC_OK);
    for (int p = -10; p <= 10; ++p) {
        double best = 1e300;
        for (int i = 0; i < 64; ++i)
            best = std::min(best, std::hypot(lr[i] - p, li[i]));
        CHECK(best < 1e-8);
    }
    for (int i = 0; i < 64; ++i) CHECK(resid[i] < 1e-8);

    double lambda[64], diag_resid = 0.0, offdiag = 0.0, completeness = 0.0;
    REQUIRE(fc_proper_basis(d, l2, lambda, &diag_resid, &offdiag, &completeness) == FC_OK);
    CHECK(diag_resid < 1e-9);
    CHECK(offdiag < 1e-8);
    CHECK(completeness > 0.1);

    fc_linop_destroy(d);
    fc_space_destroy(l2);
}

TEST_CASE("space_from_transform rejects singular maps with FC_ERR_SINGULAR") {
    fc_axis ax{-6.0, 6.0, 129, 0};
    GridHandle g;
    REQUIRE(fc_grid_create(&ax, nullptr, 1, &g.g) == FC_OK);
    fc_kernel* rho = nullptr;
    REQUIRE(fc_kernel_create("gauss_rho", 1.0, nullptr, 0, &rho) == FC_OK);
    fc_linop* op = nullptr;
    REQUIRE(fc_assemble(rho, g.g, g.g, &op) == FC_OK);
    fc_space* h = nullptr;
    CHECK(fc_space_from_transform(op, &h) == FC_ERR_SINGULAR);
    fc_linop_destroy(op);
    fc_kernel_destroy(rho);
}

TEST_CASE("transform-check runner") {
    fc_axis ax{1.0, 3.0, 257, 0};
    GridHandle g;
    REQUIRE(fc_grid_create(&ax, nullptr, 1, &g.g) == FC_OK);

    fc_transform_check_result res{};
    REQUIRE(fc_transform_check("x", "1", "1", "derivative", g.g, &res) == FC_OK);
    CHECK(res.solve_residual < 1e-3);
    CHECK(res.forward_residual < 1e-3);

    // parse errors surface with FC_ERR_PARSE
    CHECK(fc_transform_check("exp(x", "1", "1", "derivative", g.g, &res) == FC_ERR_PARSE);
    CHECK(std::string(fc_last_error()).find("parenthesis") != std::string::npos);
}

TEST_CASE("embed runner produces the unit-speed circle") {
    fc_kernel* gm = nullptr;
    REQUIRE(fc_kernel_create("gauss_metric", 1.0, nullptr, 0, &gm) == FC_OK);
    const char* path[2] = {"cos(t)", "sin(t)"};
    std::vector<double> t(64), a(128), q(64);
    REQUIRE(fc_embed_run(gm, path, 2, 0.0, kTau, 64, 1, t.data(), a.data(), q.data()) == FC_OK);
    for (int i = 0; i < 64; ++i) {
        CHECK(std::abs(q[i] - 1.0) < 1e-10);
        CHECK(a[2 * i] == doctest::Approx(std::cos(t[i])));
    }
    fc_kernel_destroy(gm);
}

TEST_CASE("geodesic runner stays on the sphere and matches the flow") {
    const int steps = 128;
    std::vector<double> tau(steps + 1), drift(steps + 1), tang(steps + 1), resid(steps + 1),
        gap(steps + 1);
    REQUIRE(fc_geodesic_run(8, 7, 1.0, steps, tau.data(), drift.data(), tang.data(),
                            resid.data(), gap.data()) == FC_OK);
    for (int i = 0; i <= steps; ++i) {
        CHECK(std::abs(drift[i]) < 1e-6);
        CHECK(std::abs(tang[i]) < 1e-6);
        CHECK(resid[i] < 1e-8);
    }
    CHECK(gap[steps] < 1e-5);
}

TEST_CASE("acceptance suite runs green through the C surface") {
    int count = 0;
    REQUIRE(fc_acceptance_run(1, nullptr, &count) == FC_OK);
    REQUIRE(count == 12);
    std::vector<fc_criterion_result> results(static_cast<size_t>(count));
    REQUIRE(fc_acceptance_run(1, results.data(), &count) == FC_OK);
    for (const auto& r : results) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.passed == 1);
    }
}
