#include "funcoord/rng.hpp"

#include <cmath>

namespace funcoord {

double Rng::normal() {
    // Box-Muller; u1 kept away from 0 so the log is finite.
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Vec Rng::vector(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = complex_normal();
    return v;
}

RVec Rng::real_vector(Eigen::Index n) {
    RVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
}

Vec Rng::unit_vector(Eigen::Index n) {
    Vec v = vector(n);
    return v / v.norm();
}

Mat Rng::hermitian(Eigen::Index n) {
    Mat b(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) b(i, j) = complex_normal();
    return (b + b.adjoint()) / (2.0 * std::sqrt(static_cast<double>(n)));
}

Mat Rng::hermitian_invertible(Eigen::Index n, double min_sv) {
    for (;;) {
        Mat a = hermitian(n);
        Eigen::SelfAdjointEigenSolver<Mat> es(a);
        if (es.eigenvalues().cwiseAbs().minCoeff() >= min_sv) return a;
    }
}

Mat Rng::hermitian_positive(Eigen::Index n, double lo, double hi) {
    Mat u = unitary(n);
    Vec d(n);
    for (Eigen::Index i = 0; i < n; ++i) d[i] = uniform(lo, hi);
    return u * d.asDiagonal() * u.adjoint();
}

Mat Rng::invertible(Eigen::Index n) {
    Mat u = unitary(n);
    Mat v = unitary(n);
    Vec s(n);
    for (Eigen::Index i = 0; i < n; ++i)
        s[i] = std::exp(uniform(std::log(0.5), std::log(2.0)));
    return u * s.asDiagonal() * v.adjoint();
}

Mat Rng::unitary(Eigen::Index n) {
    Mat b(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) b(i, j) = complex_normal();
    Eigen::HouseholderQR<Mat> qr(b);
    Mat q = qr.householderQ();
    // Fix the phase of each column so the factorization is unique.
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        Complex d = r(j, j);
        if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

}  // namespace funcoord
