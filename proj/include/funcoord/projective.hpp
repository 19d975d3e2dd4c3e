#pragma once

#include <vector>

#include "funcoord/types.hpp"

namespace funcoord {

/// Riemannian metric G(ξ,η) = (K̂ξ,η)/(φ,φ) on the punctured reference space
/// C^n∖{0} (plain l2 pairing, n ≤ 64). K is Hermitian positive definite and
/// constant; only the base point moves.
class ProjectiveMetric {
public:
    /// From an explicit Hermitian positive-definite K.
    static ProjectiveMetric from_k(Mat k);

    /// K = (AA*)⁻¹ for an invertible operator A; K⁻¹ = AA* is kept exactly.
    static ProjectiveMetric from_operator(const Mat& a);

    Eigen::Index dim() const { return k_.rows(); }
    const Mat& k() const { return k_; }

    Vec apply_k(const Vec& x) const { return k_ * x; }
    Vec solve_k(const Vec& x) const;

    /// G(ξ,η) at base point φ: (K̂ξ,η)/(φ,φ), conjugate-linear in ξ.
    Complex metric(const Vec& phi, const Vec& xi, const Vec& eta) const;

    /// G_R(X,Y) = 2 Re G(ξ,η), the underlying real metric.
    double metric_real(const Vec& phi, const Vec& xi, const Vec& eta) const;

private:
    Mat k_;
    Mat k_inv_;       // exact product when built from an operator
    bool has_exact_inv_ = false;
    Eigen::LDLT<Mat> ldlt_;
};

/// Holomorphic component Γ^b_{CD} X^C Y^D of the Levi-Civita connection at φ,
/// assembled from the three nonvanishing coefficient families as
/// matrix-vector products:
///   Γ(X,Y) = −[ X·Re(φ,Y) + Y·Re(φ,X) − K⁻¹φ·Re(X,KY) ] / ‖φ‖².
/// The antiholomorphic component is its conjugate.
Vec christoffel_contract(const ProjectiveMetric& m, const Vec& phi, const Vec& x, const Vec& y);

/// Difference of the two sides of the compatibility identity
/// 2G_R(Γ(X,Y),Z) = dG_R X(Y,Z) + dG_R Y(Z,X) − dG_R Z(X,Y),
/// the right side by directional finite differences (step 1e−5).
Complex levi_civita_residual(const ProjectiveMetric& m, const Vec& phi, const Vec& x, const Vec& y,
                             const Vec& z, double fd_step = 1e-5);

struct FlowState {
    Vec phi;
    Vec dphi;    // −iAφ
    Vec d2phi;   // −A²φ
};

/// φ_τ = e^{−iAτ}φ0 via the eigendecomposition of a Hermitian A, with exact
/// first and second τ-derivatives.
class SchrodingerFlow {
public:
    SchrodingerFlow(Mat a, Vec phi0);
    FlowState at(double tau) const;
    const Mat& a() const { return a_; }

private:
    Mat a_;
    RVec evals_;
    Mat evecs_;
    Vec coeffs_;  // eigenbasis coordinates of φ0
};

/// max over τ-samples of ‖d²φ/dτ² + Γ(φ̇,φ̇)‖ with K = (AA*)⁻¹.
double geodesic_residual(const Mat& a, const Vec& phi0, const std::vector<double>& taus);

struct GeodesicState {
    Vec phi;
    Vec phi_dot;
    double tau = 0.0;
};

/// Classic RK4 on (φ, φ̇) with the Christoffel contraction as force; no
/// renormalization — norm preservation is measured, not enforced. Throws on
/// NaN with the offending τ in the message; steps must be ≥ 16.
std::vector<GeodesicState> geodesic_integrate(const GeodesicState& state0,
                                              const ProjectiveMetric& metric, double tau_end,
                                              int steps);

/// 2n-dimensional real block metric [[0, K̄],[K, 0]]/‖φ‖² evaluated on
/// realified vectors (ξ, ξ̄); used once to validate the block bookkeeping.
double realified_block_metric(const ProjectiveMetric& m, const Vec& phi, const Vec& xi,
                              const Vec& eta);

}  // namespace funcoord
