#pragma once

#include <memory>
#include <string>

#include "funcoord/kernels.hpp"
#include "funcoord/linop.hpp"

namespace funcoord {

/// A Hilbert space of grid functions on one pairing side, defined by its
/// metric operator (side → opposite side). The metric's Hermitian form is
/// checked positive definite at construction. Immutable afterwards.
class CoordinateSpace {
public:
    /// Identity metric; inner product is l2_inner.
    static CoordinateSpace l2(GridPtr grid);

    /// Metric (or dual metric, by side) given by the assembled kernel.
    static CoordinateSpace from_kernel(const Kernel& k, GridPtr grid, Side side = Side::primal);

    /// Metric induced by an invertible map ρ out of the l2 space:
    /// (φ,ψ)_H = (ρ⁻¹φ, ρ⁻¹ψ)_{L2}. The condition number of ρ is computed
    /// and construction is rejected above 1e12.
    static CoordinateSpace from_transform(const LinOp& rho);

    static CoordinateSpace from_metric(GridPtr grid, Side side, Mat metric,
                                       std::string provenance);

    /// Space of the opposite side with the inverse metric.
    CoordinateSpace dual() const;

    const GridPtr& grid() const { return grid_; }
    Side side() const { return side_; }
    const Mat& metric() const { return metric_; }
    const std::string& provenance() const { return provenance_; }

    /// Condition number of ρ when built from a transform; 0 otherwise.
    double condition_report() const { return cond_report_; }

    /// Hermitian matrix M of the inner product, inner(f,g) = f† M g.
    const Mat& pairing_form() const { return form_; }

    Complex inner(const SampledFunction& f, const SampledFunction& g) const;
    double norm(const SampledFunction& f) const;

    /// Apply the metric: members map to the opposite side.
    SampledFunction riesz(const SampledFunction& v) const;
    /// Solve with the cached factorization: opposite side back to members.
    SampledFunction riesz_inv(const SampledFunction& v) const;

    /// Solve metric · X = rhs with the cached factorization.
    Mat metric_solve(const Mat& rhs) const;

private:
    CoordinateSpace() = default;
    void finalize();  // Hermiticity + positive definiteness + factorization

    GridPtr grid_;
    Side side_ = Side::primal;
    Mat metric_;
    Mat form_;
    std::shared_ptr<const Eigen::PartialPivLU<Mat>> lu_;
    std::string provenance_;
    double cond_report_ = 0.0;
};

/// Per-function decay table for the Schwartz-embedding report:
/// sup(k,q) = sup_x |x^k φ^(q)(x)| with φ = ρ f.
struct DecayReport {
    int p = 0;
    RMat sup;       // (p+1) x (p+1), rows k, columns q
    double f_norm = 0.0;
};

DecayReport schwartz_decay_report(const LinOp& rho, const Vec& f, int p);

}  // namespace funcoord
