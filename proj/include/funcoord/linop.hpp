#pragma once

#include "funcoord/grid.hpp"
#include "funcoord/types.hpp"

namespace funcoord {

/// Which pairing sides an operator maps between.
enum class SideContract { primal_to_primal, primal_to_dual, dual_to_dual, dual_to_primal };

/// Dense operator between grid function spaces.
struct LinOp {
    GridPtr domain;
    GridPtr codomain;
    Mat mat;
    SideContract contract = SideContract::primal_to_primal;

    Eigen::Index rows() const { return mat.rows(); }
    Eigen::Index cols() const { return mat.cols(); }

    SampledFunction apply(const SampledFunction& f) const;
    Vec apply(const Vec& v) const { return mat * v; }
};

/// A ∘ B with grid/side checks.
LinOp compose(const LinOp& a, const LinOp& b);

/// Pairing adjoint A*: pairing(A*f, φ) = pairing(f, Aφ); matrix W_dom⁻¹ A† W_cod.
LinOp adjoint(const LinOp& a);

LinOp identity_op(const GridPtr& grid);

/// Operator l2 norm estimated by power iteration on A*A (20 steps).
double operator_norm(const LinOp& a, int iters = 20);
double operator_norm(const Mat& a, const RVec& w_dom, const RVec& w_cod, int iters = 20);

/// d/dx along one axis. Periodic axes get the exact trigonometric
/// differentiation matrix; non-periodic axes a 4th-order central stencil with
/// one-sided closure at the boundary. order >= 2 composes the first-derivative
/// matrix.
LinOp derivative_op(const GridPtr& grid, int axis = 0, int order = 1);

/// diag(m(x_i)).
LinOp multiplication_op(const GridPtr& grid, const std::function<Complex(const Point&)>& m);
LinOp multiplication_op(const GridPtr& grid, const Vec& values);

}  // namespace funcoord
