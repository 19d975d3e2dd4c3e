#include "funcoord/projective.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "funcoord/errors.hpp"

namespace funcoord {

ProjectiveMetric ProjectiveMetric::from_k(Mat k) {
    if (k.rows() != k.cols()) throw std::invalid_argument("ProjectiveMetric: K must be square");
    if (k.rows() > 64) throw std::invalid_argument("ProjectiveMetric: n must be at most 64");
    if ((k - k.adjoint()).norm() > 1e-12 * std::max(1.0, k.norm()))
        throw std::invalid_argument("ProjectiveMetric: K must be Hermitian");
    ProjectiveMetric m;
    m.k_ = 0.5 * (k + k.adjoint().eval());
    m.ldlt_.compute(m.k_);
    if (m.ldlt_.info() != Eigen::Success || !m.ldlt_.isPositive())
        throw indefinite_error("ProjectiveMetric: K must be positive definite", 0.0);
    return m;
}

ProjectiveMetric ProjectiveMetric::from_operator(const Mat& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("ProjectiveMetric: A must be square");
    const Mat aastar = a * a.adjoint();
    Eigen::PartialPivLU<Mat> lu(aastar);
    const Mat k = lu.inverse();
    const double gap = (aastar * k - Mat::Identity(a.rows(), a.rows())).norm();
    if (!(gap < 1e-6))
        throw singular_error("ProjectiveMetric: A is numerically singular, K undefined");
    ProjectiveMetric m = from_k(k);
    m.k_inv_ = aastar;
    m.has_exact_inv_ = true;
    return m;
}

Vec ProjectiveMetric::solve_k(const Vec& x) const {
    if (has_exact_inv_) return k_inv_ * x;
    return ldlt_.solve(x);
}

Complex ProjectiveMetric::metric(const Vec& phi, const Vec& xi, const Vec& eta) const {
    const double n2 = phi.squaredNorm();
    if (!(n2 > 0)) throw std::invalid_argument("ProjectiveMetric: base point must be nonzero");
    return ((k_ * xi).adjoint() * eta)(0, 0) / n2;
}

double ProjectiveMetric::metric_real(const Vec& phi, const Vec& xi, const Vec& eta) const {
    return 2.0 * metric(phi, xi, eta).real();
}

Vec christoffel_contract(const ProjectiveMetric& m, const Vec& phi, const Vec& x, const Vec& y) {
    const double n2 = phi.squaredNorm();
    if (!(n2 > 0)) throw std::invalid_argument("christoffel_contract: base point must be nonzero");
    const double re_phix = (phi.adjoint() * x)(0, 0).real();
    const double re_phiy = (phi.adjoint() * y)(0, 0).real();
    const double re_xky = (x.adjoint() * (m.k() * y))(0, 0).real();
    return -(x * re_phiy + y * re_phix - m.solve_k(phi) * re_xky) / n2;
}

Complex levi_civita_residual(const ProjectiveMetric& m, const Vec& phi, const Vec& x, const Vec& y,
                             const Vec& z, double fd_step) {
    const Vec gamma = christoffel_contract(m, phi, x, y);
    const double lhs = 2.0 * m.metric_real(phi, gamma, z);

    // dG_R V(Y,Z): derivative of G_R(Y,Z) along the base-point direction V.
    auto dg = [&](const Vec& v, const Vec& p, const Vec& q) {
        const double fp = m.metric_real(phi + fd_step * v, p, q);
        const double fm = m.metric_real(phi - fd_step * v, p, q);
        return (fp - fm) / (2.0 * fd_step);
    };
    const double rhs = dg(x, y, z) + dg(y, z, x) - dg(z, x, y);
    return Complex(lhs - rhs, 0.0);
}

SchrodingerFlow::SchrodingerFlow(Mat a, Vec phi0) : a_(std::move(a)) {
    if (a_.rows() != a_.cols() || a_.rows() != phi0.size())
        throw std::invalid_argument("SchrodingerFlow: dimension mismatch");
    if ((a_ - a_.adjoint()).norm() > 1e-10 * std::max(1.0, a_.norm()))
        throw std::invalid_argument("SchrodingerFlow: A must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(a_);
    if (es.info() != Eigen::Success) throw solver_error("SchrodingerFlow: eigensolver failed");
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
    coeffs_ = evecs_.adjoint() * phi0;
}

FlowState SchrodingerFlow::at(double tau) const {
    Vec c(coeffs_.size()), c1(coeffs_.size()), c2(coeffs_.size());
    for (Eigen::Index j = 0; j < c.size(); ++j) {
        c[j] = coeffs_[j] * std::exp(Complex(0.0, -evals_[j] * tau));
        c1[j] = Complex(0.0, -evals_[j]) * c[j];
        c2[j] = -evals_[j] * evals_[j] * c[j];
    }
    FlowState s;
    s.phi = evecs_ * c;
    s.dphi = evecs_ * c1;
    s.d2phi = evecs_ * c2;
    return s;
}

double geodesic_residual(const Mat& a, const Vec& phi0, const std::vector<double>& taus) {
    const ProjectiveMetric metric = ProjectiveMetric::from_operator(a);
    const SchrodingerFlow flow(a, phi0);
    double worst = 0.0;
    for (double tau : taus) {
        const FlowState s = flow.at(tau);
        const Vec gamma = christoffel_contract(metric, s.phi, s.dphi, s.dphi);
        worst = std::max(worst, (s.d2phi + gamma).norm());
    }
    return worst;
}

std::vector<GeodesicState> geodesic_integrate(const GeodesicState& state0,
                                              const ProjectiveMetric& metric, double tau_end,
                                              int steps) {
    if (steps < 16) throw std::invalid_argument("geodesic_integrate: at least 16 steps");
    const double h = tau_end / steps;

    auto force = [&](const Vec& phi, const Vec& v) { return (-christoffel_contract(metric, phi, v, v)).eval(); };

    std::vector<GeodesicState> out;
    out.reserve(static_cast<size_t>(steps) + 1);
    Vec phi = state0.phi;
    Vec v = state0.phi_dot;
    out.push_back(GeodesicState{phi, v, state0.tau});

    for (int s = 0; s < steps; ++s) {
        const Vec k1p = v;
        const Vec k1v = force(phi, v);
        const Vec k2p = v + 0.5 * h * k1v;
        const Vec k2v = force(phi + 0.5 * h * k1p, v + 0.5 * h * k1v);
        const Vec k3p = v + 0.5 * h * k2v;
        const Vec k3v = force(phi + 0.5 * h * k2p, v + 0.5 * h * k2v);
        const Vec k4p = v + h * k3v;
        const Vec k4v = force(phi + h * k3p, v + h * k3v);
        phi = phi + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        v = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        const double tau = state0.tau + h * (s + 1);
        if (!phi.allFinite() || !v.allFinite())
            throw error("geodesic_integrate: NaN at tau = " + std::to_string(tau));
        out.push_back(GeodesicState{phi, v, tau});
    }
    return out;
}

double realified_block_metric(const ProjectiveMetric& m, const Vec& phi, const Vec& xi,
                              const Vec& eta) {
    const Eigen::Index n = m.dim();
    Mat block = Mat::Zero(2 * n, 2 * n);
    block.topRightCorner(n, n) = m.k().conjugate();
    block.bottomLeftCorner(n, n) = m.k();
    Vec x(2 * n), y(2 * n);
    x << xi, xi.conjugate();
    y << eta, eta.conjugate();
    const Complex v = (x.transpose() * block * y)(0, 0);
    return v.real() / phi.squaredNorm();
}

}  // namespace funcoord
