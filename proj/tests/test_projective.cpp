#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "funcoord/errors.hpp"
#include "funcoord/projective.hpp"
#include "funcoord/rng.hpp"

using namespace funcoord;

namespace {

// Termwise assembly of the connection from the three coefficient families and
// the metric-derivative formulas, materializing the full rank-3 object; the
// independent route the bilinear implementation is checked against.
Vec christoffel_termwise(const Mat& k, const Vec& phi, const Vec& x, const Vec& y) {
    const Eigen::Index n = k.rows();
    const double n2 = phi.squaredNorm();
    const Mat kinv = k.inverse();
    Vec out = Vec::Zero(n);
    for (Eigen::Index b = 0; b < n; ++b) {
        Complex acc = 0.0;
        for (Eigen::Index c = 0; c < n; ++c) {
            for (Eigen::Index d = 0; d < n; ++d) {
                // Γ^b_{cd} = −(δ^b_d φ̄_c + δ^b_c φ̄_d) / (2‖φ‖²)
                Complex g_cd = 0.0;
                if (b == d) g_cd -= std::conj(phi[c]);
                if (b == c) g_cd -= std::conj(phi[d]);
                g_cd /= 2.0 * n2;
                acc += g_cd * x[c] * y[d];

                // Γ^b_{c d̄} = −(δ^b_c φ_d − k^{āb} k_{c d̄} φ_a) / (2‖φ‖²)
                Complex g_cdbar = 0.0;
                if (b == c) g_cdbar -= phi[d];
                Complex corr = 0.0;
                for (Eigen::Index a = 0; a < n; ++a) corr += kinv(b, a) * phi[a];
                g_cdbar += std::conj(k(c, d)) * corr;
                g_cdbar /= 2.0 * n2;
                acc += g_cdbar * x[c] * std::conj(y[d]);

                // Γ^b_{c̄ d} = −(δ^b_d φ_c − k^{āb} k_{d c̄} φ_a) / (2‖φ‖²)
                Complex g_cbard = 0.0;
                if (b == d) g_cbard -= phi[c];
                g_cbard += std::conj(k(d, c)) * corr;
                g_cbard /= 2.0 * n2;
                acc += g_cbard * std::conj(x[c]) * y[d];
            }
        }
        out[b] = acc;
    }
    return out;
}

}  // namespace

TEST_CASE("christoffel contraction: collected phase-direction form") {
    // K = I, φ = e1, X = Y = i e1: contraction equals (KX,X) φ / ‖φ‖² = φ
    const Mat k = Mat::Identity(2, 2);
    const ProjectiveMetric m = ProjectiveMetric::from_k(k);
    Vec phi = Vec::Zero(2);
    phi[0] = 1.0;
    const Vec x = Complex(0.0, 1.0) * phi;
    const Vec gamma = christoffel_contract(m, phi, x, x);
    CHECK((gamma - phi).norm() < 1e-14);

    // bilinearity: zero in, zero out
    CHECK(christoffel_contract(m, phi, Vec::Zero(2), x).norm() == 0.0);
}

TEST_CASE("christoffel contraction matches the termwise assembly") {
    Rng rng(5);
    const Eigen::Index n = 6;
    const Mat k = rng.hermitian_positive(n);
    const ProjectiveMetric m = ProjectiveMetric::from_k(k);
    for (int t = 0; t < 5; ++t) {
        const Vec phi = rng.unit_vector(n);
        const Vec x = rng.vector(n);
        const Vec y = rng.vector(n);
        const Vec fast = christoffel_contract(m, phi, x, y);
        const Vec slow = christoffel_termwise(k, phi, x, y);
        CHECK((fast - slow).norm() < 1e-12 * (1.0 + slow.norm()));
    }
}

TEST_CASE("metric derivative formulas match finite differences") {
    Rng rng(7);
    const Eigen::Index n = 5;
    const Mat k = rng.hermitian_positive(n);
    const Vec phi = rng.vector(n);
    const double n2 = phi.squaredNorm();

    // g_{a b̄} = k_{a b̄}/‖φ‖²; analytic Wirtinger derivative vs central FD in
    // the real and imaginary parts of φ^c
    const double h = 1e-6;
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            for (Eigen::Index c = 0; c < n; ++c) {
                const Complex analytic = -k(a, b) * std::conj(phi[c]) / (n2 * n2);
                auto g_of = [&](const Vec& p) { return k(a, b) / p.squaredNorm(); };
                Vec pr = phi, pi = phi;
                pr[c] += h;
                pi[c] += Complex(0.0, h);
                Vec mr = phi, mi = phi;
                mr[c] -= h;
                mi[c] -= Complex(0.0, h);
                const Complex d_re = (g_of(pr) - g_of(mr)) / (2.0 * h);
                const Complex d_im = (g_of(pi) - g_of(mi)) / (2.0 * h);
                const Complex fd = 0.5 * (d_re - Complex(0.0, 1.0) * d_im);  // ∂/∂φ^c
                CHECK(std::abs(analytic - fd) < 1e-7 * (1.0 + std::abs(analytic)));
            }
        }
    }
}

TEST_CASE("levi-civita compatibility identity") {
    // zero vectors give zero
    const ProjectiveMetric id2 = ProjectiveMetric::from_k(Mat::Identity(4, 4));
    Vec phi = Vec::Zero(4);
    phi[0] = 1.0;
    CHECK(std::abs(levi_civita_residual(id2, phi, Vec::Zero(4), Vec::Zero(4), Vec::Zero(4))) ==
          0.0);

    Rng rng(11);
    // K = identity with real vectors
    for (int t = 0; t < 5; ++t) {
        const Vec p = rng.real_vector(4).cast<Complex>();
        const Vec x = rng.real_vector(4).cast<Complex>().normalized();
        const Vec y = rng.real_vector(4).cast<Complex>().normalized();
        const Vec z = rng.real_vector(4).cast<Complex>().normalized();
        CHECK(std::abs(levi_civita_residual(id2, p.normalized(), x, y, z)) < 1e-6);
    }
    // random Hermitian K with complex vectors
    const ProjectiveMetric m8 = ProjectiveMetric::from_k(Rng(13).hermitian_positive(8));
    Rng vgen(17);
    for (int t = 0; t < 5; ++t) {
        const Vec p = vgen.unit_vector(8);
        const Vec x = vgen.unit_vector(8);
        const Vec y = vgen.unit_vector(8);
        const Vec z = vgen.unit_vector(8);
        CHECK(std::abs(levi_civita_residual(m8, p, x, y, z)) < 1e-6);
    }
}

TEST_CASE("realified block metric agrees with 2 Re G") {
    Rng rng(19);
    const ProjectiveMetric m = ProjectiveMetric::from_k(rng.hermitian_positive(6));
    for (int t = 0; t < 10; ++t) {
        const Vec phi = rng.unit_vector(6);
        const Vec xi = rng.vector(6);
        const Vec eta = rng.vector(6);
        CHECK(std::abs(realified_block_metric(m, phi, xi, eta) -
                       m.metric_real(phi, xi, eta)) < 1e-12);
    }
}

TEST_CASE("schrodinger flow: phases, eigenvector starts, unitarity") {
    // A = I: pure phase
    const Mat id = Mat::Identity(3, 3);
    Vec phi0 = Vec::Zero(3);
    phi0[1] = 1.0;
    const SchrodingerFlow flow_id(id, phi0);
    const FlowState s = flow_id.at(0.7);
    CHECK((s.phi - std::exp(Complex(0.0, -0.7)) * phi0).norm() < 1e-14);

    // diagonal generator, eigenvector start
    Mat diag = Mat::Zero(2, 2);
    diag(0, 0) = 1.0;
    diag(1, 1) = 2.0;
    Vec e1 = Vec::Zero(2);
    e1[0] = 1.0;
    const SchrodingerFlow flow_d(diag, e1);
    const FlowState sd = flow_d.at(1.3);
    CHECK(std::abs(sd.phi[0] - std::exp(Complex(0.0, -1.3))) < 1e-14);
    CHECK(std::abs(sd.phi[1]) == 0.0);

    // unitarity for a random Hermitian generator
    Rng rng(23);
    const Mat a = rng.hermitian(8);
    const SchrodingerFlow flow(a, rng.unit_vector(8));
    for (double tau : {0.0, 1.0, 3.7, 10.0}) {
        const FlowState st = flow.at(tau);
        CHECK(std::abs(st.phi.norm() - 1.0) < 1e-12);
        // derivative consistency
        CHECK((st.dphi - Complex(0.0, -1.0) * (a * st.phi)).norm() < 1e-12);
        CHECK((st.d2phi + a * (a * st.phi)).norm() < 1e-12);
    }

    Mat nonherm = Mat::Zero(2, 2);
    nonherm(0, 1) = 1.0;
    CHECK_THROWS_AS(SchrodingerFlow(nonherm, e1), std::invalid_argument);
}

TEST_CASE("schrodinger curves are geodesics of the induced metric") {
    std::vector<double> taus;
    for (int i = 0; i < 50; ++i) taus.push_back(5.0 * i / 49.0);

    // n = 2, diagonal generator, eigenvector start
    Mat diag = Mat::Zero(2, 2);
    diag(0, 0) = 1.0;
    diag(1, 1) = 2.0;
    Vec e1 = Vec::Zero(2);
    e1[0] = 1.0;
    CHECK(geodesic_residual(diag, e1, taus) < 1e-10);

    // n = 2 rotation generator with A² = I: great circle with K = identity
    Mat pauli = Mat::Zero(2, 2);
    pauli(0, 1) = Complex(0.0, -1.0);
    pauli(1, 0) = Complex(0.0, 1.0);
    CHECK(geodesic_residual(pauli, e1, taus) < 1e-10);

    // seeded random Hermitian invertible generators across sizes
    Rng rng(29);
    for (int n : {2, 4, 8, 16}) {
        const Mat a = rng.hermitian_invertible(n);
        const Vec phi0 = rng.unit_vector(n);
        CHECK(geodesic_residual(a, phi0, taus) < 1e-8);
    }

    // phase equivariance of the residual
    const Mat a = rng.hermitian_invertible(6);
    const Vec phi0 = rng.unit_vector(6);
    const double base = geodesic_residual(a, phi0, taus);
    const double rotated =
        geodesic_residual(a, std::exp(Complex(0.0, 1.1)) * phi0, taus);
    CHECK(std::abs(base - rotated) < 1e-12);

    // velocity-even: flipping the sign of A leaves the residual unchanged
    const double flipped = geodesic_residual(-a, phi0, taus);
    CHECK(std::abs(base - flipped) < 1e-12);
}

TEST_CASE("eq (geo1) identity for the collected contraction") {
    Rng rng(31);
    for (int t = 0; t < 5; ++t) {
        const Mat a = rng.hermitian_invertible(8);
        const ProjectiveMetric m = ProjectiveMetric::from_operator(a);
        const Vec phi = rng.unit_vector(8);
        const Vec v = Complex(0.0, -1.0) * (a * phi);
        const Complex kvv = (m.apply_k(v).adjoint() * v)(0, 0);
        const Vec expected = kvv.real() * (a * (a * phi)) / phi.squaredNorm();
        const Vec gamma = christoffel_contract(m, phi, v, v);
        CHECK((gamma - expected).norm() < 1e-10 * (1.0 + expected.norm()));
    }
}

TEST_CASE("rk4 integration tracks the flow without renormalization") {
    Rng rng(37);
    const Mat a = rng.hermitian_invertible(8);
    const Vec phi0 = rng.unit_vector(8);
    const ProjectiveMetric metric = ProjectiveMetric::from_operator(a);
    const SchrodingerFlow flow(a, phi0);

    GeodesicState s0{phi0, Complex(0.0, -1.0) * (a * phi0), 0.0};
    const auto path = geodesic_integrate(s0, metric, 1.0, 256);
    REQUIRE(path.size() == 257);
    CHECK((path.back().phi - flow.at(1.0).phi).norm() < 1e-6);
    for (const auto& st : path) {
        CHECK(std::abs(st.phi.norm() - 1.0) < 1e-7);
        CHECK(std::abs((st.phi.adjoint() * st.phi_dot)(0, 0).real()) < 1e-7);
    }

    // zero velocity: constant path
    GeodesicState rest{phi0, Vec::Zero(8), 0.0};
    const auto still = geodesic_integrate(rest, metric, 1.0, 32);
    CHECK((still.back().phi - phi0).norm() == 0.0);

    // fourth-order convergence: halving the step cuts the error ~16x
    const auto coarse = geodesic_integrate(s0, metric, 1.0, 64);
    const auto fine = geodesic_integrate(s0, metric, 1.0, 128);
    const double e_coarse = (coarse.back().phi - flow.at(1.0).phi).norm();
    const double e_fine = (fine.back().phi - flow.at(1.0).phi).norm();
    const double order = std::log2(e_coarse / e_fine);
    CHECK(order > 3.5);
    CHECK(order < 4.5);

    CHECK_THROWS_AS(geodesic_integrate(s0, metric, 1.0, 8), std::invalid_argument);
}

TEST_CASE("metric construction guards") {
    CHECK_THROWS_AS(ProjectiveMetric::from_k(Mat::Random(3, 4)), std::invalid_argument);
    Mat nonherm = Mat::Zero(2, 2);
    nonherm(0, 1) = 1.0;
    CHECK_THROWS_AS(ProjectiveMetric::from_k(nonherm), std::invalid_argument);
    Mat indef = Mat::Identity(2, 2);
    indef(1, 1) = -1.0;
    CHECK_THROWS_AS(ProjectiveMetric::from_k(indef), indefinite_error);
    CHECK_THROWS_AS(ProjectiveMetric::from_operator(Mat::Zero(3, 3)), singular_error);

    const ProjectiveMetric m = ProjectiveMetric::from_k(Mat::Identity(2, 2));
    CHECK_THROWS_AS(christoffel_contract(m, Vec::Zero(2), Vec::Zero(2), Vec::Zero(2)),
                    std::invalid_argument);
}
