#include "funcoord/linop.hpp"

#include <cmath>
#include <stdexcept>

namespace funcoord {

SampledFunction LinOp::apply(const SampledFunction& f) const {
    if (f.grid.get() != domain.get())
        throw std::invalid_argument("LinOp::apply: argument grid is not the operator domain");
    const Side need = (contract == SideContract::primal_to_primal ||
                       contract == SideContract::primal_to_dual)
                          ? Side::primal
                          : Side::dual;
    if (f.side != need) throw std::invalid_argument("LinOp::apply: pairing side mismatch");
    const Side out_side = (contract == SideContract::primal_to_primal ||
                           contract == SideContract::dual_to_primal)
                              ? Side::primal
                              : Side::dual;
    return SampledFunction{codomain, mat * f.values, out_side};
}

LinOp compose(const LinOp& a, const LinOp& b) {
    if (a.domain.get() != b.codomain.get())
        throw std::invalid_argument("compose: inner grids do not match");
    return LinOp{b.domain, a.codomain, a.mat * b.mat, b.contract};
}

LinOp adjoint(const LinOp& a) {
    Mat m = a.codomain->weights().asDiagonal() * a.mat;
    m = a.domain->weights().cwiseInverse().asDiagonal() * m.adjoint().eval();
    // m = W_dom^{-1} A^H W_cod, mapping codomain functionals back to domain
    // ones; both sides flip.
    SideContract c = a.contract;
    switch (a.contract) {
        case SideContract::primal_to_primal: c = SideContract::dual_to_dual; break;
        case SideContract::dual_to_dual: c = SideContract::primal_to_primal; break;
        case SideContract::primal_to_dual:
        case SideContract::dual_to_primal: break;  // unchanged
    }
    return LinOp{a.codomain, a.domain, std::move(m), c};
}

LinOp identity_op(const GridPtr& grid) {
    return LinOp{grid, grid, Mat::Identity(grid->size(), grid->size()),
                 SideContract::primal_to_primal};
}

double operator_norm(const Mat& a, const RVec& w_dom, const RVec& w_cod, int iters) {
    // Largest singular value in the weighted l2 norms, via power iteration on
    // A* A. Deterministic start vector.
    Vec v = Vec::Ones(a.cols());
    v /= std::sqrt(w_dom.sum());
    double norm2 = 0.0;
    for (int it = 0; it < iters; ++it) {
        Vec u = a * v;
        Vec w = w_dom.cwiseInverse().asDiagonal() * (a.adjoint() * (w_cod.asDiagonal() * u));
        const double wnorm = std::sqrt(std::abs((w.adjoint() * (w_dom.asDiagonal() * w))(0, 0)));
        if (wnorm == 0.0) return 0.0;
        norm2 = std::sqrt(std::abs((v.adjoint() * (w_dom.asDiagonal() * w))(0, 0)));
        v = w / wnorm;
    }
    return norm2;
}

double operator_norm(const LinOp& a, int iters) {
    return operator_norm(a.mat, a.domain->weights(), a.codomain->weights(), iters);
}

namespace {

// 4th-order one-sided and central first-derivative stencils.
constexpr double kEdge0[5] = {-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -1.0 / 4.0};
constexpr double kEdge1[5] = {-1.0 / 4.0, -5.0 / 6.0, 3.0 / 2.0, -1.0 / 2.0, 1.0 / 12.0};
constexpr double kCentral[5] = {1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0};

RMat first_derivative_1d(const Axis& ax, double h) {
    const int n = ax.points;
    RMat d = RMat::Zero(n, n);
    if (ax.periodic) {
        // Exact differentiation of trigonometric interpolants. Even n uses the
        // cotangent form, odd n the cosecant form; both are antisymmetric.
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const double t = kPi * (i - j) / n;
                double c;
                if (n % 2 == 0)
                    c = 0.5 * ((i - j) % 2 == 0 ? 1.0 : -1.0) / std::tan(t);
                else
                    c = 0.5 * ((i - j) % 2 == 0 ? 1.0 : -1.0) / std::sin(t);
                d(i, j) = c * (2.0 * kPi / (n * h));
            }
        }
        return d;
    }
    for (int i = 0; i < n; ++i) {
        if (i >= 2 && i <= n - 3) {
            for (int k = 0; k < 5; ++k) d(i, i - 2 + k) = kCentral[k] / h;
        } else if (i == 0) {
            for (int k = 0; k < 5; ++k) d(i, k) = kEdge0[k] / h;
        } else if (i == 1) {
            for (int k = 0; k < 5; ++k) d(i, k) = kEdge1[k] / h;
        } else if (i == n - 2) {
            for (int k = 0; k < 5; ++k) d(i, n - 1 - k) = -kEdge1[k] / h;
        } else {
            for (int k = 0; k < 5; ++k) d(i, n - 1 - k) = -kEdge0[k] / h;
        }
    }
    return d;
}

}  // namespace

LinOp derivative_op(const GridPtr& grid, int axis, int order) {
    if (axis < 0 || axis >= grid->dim())
        throw std::invalid_argument("derivative_op: axis out of range");
    if (order < 1) throw std::invalid_argument("derivative_op: order must be >= 1");
    const Axis& ax = grid->axes()[axis];
    const RMat d1 = first_derivative_1d(ax, grid->spacing(axis));

    // Lift the 1-D matrix to the flattened tensor-product index space.
    const Eigen::Index n = grid->size();
    Mat d = Mat::Zero(n, n);
    Eigen::Index stride = 1;
    for (int a = 0; a < axis; ++a) stride *= grid->axes()[a].points;
    const int na = ax.points;
    for (Eigen::Index i = 0; i < n; ++i) {
        const int ia = static_cast<int>((i / stride) % na);
        const Eigen::Index base = i - static_cast<Eigen::Index>(ia) * stride;
        for (int ja = 0; ja < na; ++ja) {
            const double c = d1(ia, ja);
            if (c != 0.0) d(i, base + static_cast<Eigen::Index>(ja) * stride) = c;
        }
    }
    LinOp op{grid, grid, std::move(d), SideContract::primal_to_primal};
    // Higher orders by repeated application of the first-derivative matrix.
    const Mat base = op.mat;
    for (int q = 1; q < order; ++q) op.mat = (op.mat * base).eval();
    return op;
}

LinOp multiplication_op(const GridPtr& grid, const std::function<Complex(const Point&)>& m) {
    Vec v(grid->size());
    for (Eigen::Index i = 0; i < grid->size(); ++i) {
        v[i] = m(grid->node(i));
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
            throw std::invalid_argument("multiplication_op: multiplier is non-finite at a node");
    }
    return multiplication_op(grid, v);
}

LinOp multiplication_op(const GridPtr& grid, const Vec& values) {
    if (values.size() != grid->size())
        throw std::invalid_argument("multiplication_op: value length does not match the grid");
    return LinOp{grid, grid, Mat(values.asDiagonal()), SideContract::primal_to_primal};
}

}  // namespace funcoord
