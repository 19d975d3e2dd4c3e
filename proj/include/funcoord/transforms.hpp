#pragma once

#include <vector>

#include "funcoord/kernels.hpp"
#include "funcoord/spaces.hpp"

namespace funcoord {

/// Invertible coordinate transformation ω: H̃ → H with cached inverse and
/// pairing adjoint. Construction verifies ω·ω⁻¹ ≈ 1 (relative, operator
/// norms by power iteration).
class Transform {
public:
    explicit Transform(LinOp forward);
    Transform(LinOp forward, LinOp inverse);

    const LinOp& forward() const { return fwd_; }
    const LinOp& inverse() const { return inv_; }
    const LinOp& adjoint_op() const { return adj_; }

    const GridPtr& domain() const { return fwd_.domain; }
    const GridPtr& codomain() const { return fwd_.codomain; }

private:
    LinOp fwd_, inv_, adj_;
};

/// φ = ω φ̃.
SampledFunction pushforward_vector(const Transform& omega, const SampledFunction& phi_tilde);

/// G̃ = ω* G ω; inner products are invariant.
Mat pushforward_metric(const Transform& omega, const Mat& g);
CoordinateSpace pushforward_space(const Transform& omega, const CoordinateSpace& space);

/// Ã = ω⁻¹ A ω; the spectrum is invariant.
LinOp conjugate_operator(const Transform& omega, const LinOp& a);

/// A⁺ = Ĝ⁻¹ A* Ĝ, the Hermitian conjugate in the space's inner product.
LinOp hermitian_conjugate(const LinOp& a, const CoordinateSpace& space);

/// Which operator a first-order locality kernel conjugates aD into.
enum class FirstOrderTarget {
    multiplication,  // ω⁻¹(aD)ω = b:       ω(x,y) = g(y) e^{c(x) b(y)}, c = ∫dx/a
    derivative       // ω⁻¹(aD)ω = D (b≡1): ω(x,y) = g(y) e^{f(x) e^{-y}}, f = e^{∫dx/a}
};

/// Solves a(x) ∂_x ω = ω·b (multiplication target) or a(x) ∂_x ω + ∂_y(ω b)=0
/// (derivative target, constant b only) on the given 1-D grid. The
/// antiderivative of 1/a is taken by cumulative trapezoid from the left
/// endpoint. Throws if a vanishes on the domain.
Kernel solve_first_order_transform(const std::function<double(double)>& a,
                                   const std::function<double(double)>& b,
                                   const std::function<double(double)>& g, const GridPtr& grid,
                                   FirstOrderTarget target = FirstOrderTarget::multiplication);

/// Residual ‖(aD)Ω − Ω·B‖ / ‖Ω‖ of the first-order relation for an assembled
/// kernel, with B = multiplication by b (complex-valued b allowed).
double first_order_residual(const Kernel& omega, const std::function<Complex(double)>& a,
                            const std::function<Complex(double)>& b, const GridPtr& grid);

struct ConjugationReport {
    double forward_residual = 0.0;      // max_ψ ‖AΩψ − ΩBψ‖ / ‖ΩBψ‖
    double conjugation_residual = 0.0;  // max_ψ ‖Ω⁻¹AΩψ − Bψ‖ / ‖Bψ‖ (rank-revealing solve)
    std::vector<double> per_function;   // conjugation residual per bank member
};

/// Residuals of ω⁻¹ A ω = B over a bank of test functions. Ω is applied
/// forwards; the inverse is a truncated-SVD least-squares solve, since
/// smoothing kernels are numerically low-rank.
ConjugationReport conjugation_residuals(const Mat& omega_mat, const Mat& a, const Mat& b,
                                        const std::vector<Vec>& bank,
                                        double svd_threshold = 1e-5);

/// Gaussian-envelope cos/sin bank with low frequencies, for derivative
/// preservation checks on open boxes.
std::vector<Vec> band_limited_bank(const GridPtr& grid);

/// Smooth positive test functions in the span of e^{−ky}, vanishing to third
/// order at the endpoints; the natural bank for first-order locality kernels
/// of Laplace type.
std::vector<Vec> exp_class_test_bank(const GridPtr& grid);

struct DerivativePreservationReport {
    double residual_d1 = 0.0;
    double residual_d2 = 0.0;
    double forward_d1 = 0.0;
    double forward_d2 = 0.0;
};

/// Checks that Ω assembled from ω(x,y) = f(x−y) commutes with D (and D² by
/// composition) on a band-limited bank of test functions.
DerivativePreservationReport verify_derivative_preservation(
    const std::function<double(double)>& f_shape, const GridPtr& grid);
DerivativePreservationReport verify_derivative_preservation(const Kernel& omega,
                                                            const GridPtr& grid);

struct ProductInvarianceReport {
    double residual = 0.0;  // max over the test bank
};

/// Measures ‖ω⁻¹(a·(ωφ)) − a·φ‖ / ‖a·φ‖ for ω = gauss_rho (or a supplied ω):
/// non-constant a breaks invariance, constant a and multiplication ω keep it.
ProductInvarianceReport product_noninvariance_demo(const std::function<double(double)>& a,
                                                   const GridPtr& grid);
ProductInvarianceReport product_noninvariance_demo(const std::function<double(double)>& a,
                                                   const Mat& omega_mat, const GridPtr& grid);

/// Rank-(1,2) tensor c^x_{uv} on a grid; stored dense, n ≤ 64 nodes.
class Tensor12 {
public:
    Tensor12(GridPtr grid, std::vector<Complex> data);  // data[x + n*(u + n*v)]

    /// The δ(x−u)δ(x−v) tensor: contraction squares functions pointwise.
    static Tensor12 delta_squared(const GridPtr& grid);

    const GridPtr& grid() const { return grid_; }
    Complex at(Eigen::Index x, Eigen::Index u, Eigen::Index v) const {
        return data_[x + n_ * (u + n_ * v)];
    }

    /// c(φ,ψ)^x = Σ_{uv} c^x_{uv} w_u w_v φ_u ψ_v.
    Vec contract(const Vec& phi, const Vec& psi) const;

private:
    GridPtr grid_;
    Eigen::Index n_ = 0;
    std::vector<Complex> data_;
};

/// c̃^x_{uv} = (ω⁻¹)^x_z c^z_{ab} ω^a_u ω^b_v, quadrature conventions folded.
Tensor12 pushforward_12tensor(const Transform& omega, const Tensor12& c);

}  // namespace funcoord
