#pragma once

#include <vector>

#include "funcoord/spaces.hpp"
#include "funcoord/transforms.hpp"

namespace funcoord {

/// Solution of f(Aφ) = λ f(φ): a dual-side functional, its eigenvalue, and
/// the equation residual over the unit-vector probe bank.
struct GeneralizedEigenpair {
    Complex lambda;
    SampledFunction functional;  // dual side, unit weighted-l2 norm, phase-fixed
    double residual = 0.0;
};

/// All generalized eigenpairs of A on the space, obtained from the pairing
/// adjoint A* = W⁻¹A†W (f is an eigenvector of A* with eigenvalue conj λ).
/// Sorted by (Re λ, Im λ); phases fixed by making the first significant
/// component real-positive. Throws solver_error on defective matrices.
std::vector<GeneralizedEigenpair> generalized_eigs(const LinOp& a, const CoordinateSpace& space);

/// Diagonalizing transform of a space-Hermitian operator. κ maps the space
/// onto the spectral side (an index grid with unit weights); κAκ⁻¹ = diag(λ).
struct ProperBasisResult {
    Transform kappa;               // space grid → index grid
    SampledFunction lambda;        // eigenvalue function on the index grid
    double diag_residual = 0.0;    // off-diagonal Frobenius mass of κAκ⁻¹
    double completeness = 0.0;     // 1 / cond(κ)
};

/// Requires hermitian_conjugate(A, space) = A within 1e−8 (relative).
ProperBasisResult proper_basis(const LinOp& a, const CoordinateSpace& space);

struct OrthogonalityReport {
    double offdiag_mass = 0.0;     // off-diagonal Frobenius mass of the pushed metric
    RVec diagonal;                 // a(x): the diagonal of the pushed metric
};

/// Pushes the space metric into the proper basis (ω = κ⁻¹) and measures how
/// diagonal it is — the discrete g(x,y) = a(x)δ(x−y).
OrthogonalityReport verify_proper_basis_orthogonality(const ProperBasisResult& result,
                                                      const CoordinateSpace& space);

/// φ̃ = κφ, the coefficients of φ in the proper basis.
Vec spectral_decomposition(const SampledFunction& phi, const ProperBasisResult& result);

/// Space with inner product (f,g)_H = (A⁻¹f, A⁻¹g)_{L2}; on it ‖Af‖_H =
/// ‖f‖_{L2}, the boundedness witness. A must be injective on the grid.
CoordinateSpace metric_from_unbounded(const LinOp& a, const CoordinateSpace& l2);

/// Index grid [0,n) with unit weights used as the spectral-side domain.
GridPtr index_grid(Eigen::Index n);

}  // namespace funcoord
