#pragma once

#include <functional>
#include <optional>
#include <string>

#include "funcoord/linop.hpp"

namespace funcoord {

enum class KernelFamily {
    gauss_rho,          // e^{-(x-y)^2}
    gauss_metric,       // e^{-s(x-y)^2/2}, s = scale (default 1)
    damped_gauss,       // e^{-(x-y)^2 - x^2}
    fourier,            // e^{i x·y}
    inv_fourier,        // (1/2π)^n e^{-i x·y}
    dirac,              // δ(x-y); diagonal, assembles to the identity
    plane_wave_weight,  // (1/√(2π))^n e^{-x^2/2} δ(x-y); diagonal
    minkowski_gauss,    // e^{-η(x-y,x-y)/2}, η from the signature
    custom
};

/// Two-point kernel k(x,y). Immutable. Custom kernels may declare an analytic
/// mixed-second-derivative rule; otherwise mixed_hessian falls back to
/// Richardson-refined central differences.
class Kernel {
public:
    using EvalFn = std::function<Complex(const Point&, const Point&, int dim)>;
    using HessFn = std::function<RMat(const Point&, int dim)>;

    static Kernel gauss_rho();
    static Kernel gauss_metric(double scale = 1.0);
    static Kernel damped_gauss();
    static Kernel fourier();
    static Kernel inv_fourier();
    static Kernel dirac();
    static Kernel plane_wave_weight();
    /// Signature taken from the grid the kernel is used with.
    static Kernel minkowski_gauss(std::vector<int> signature);
    static Kernel custom(std::string name, EvalFn eval, bool smooth,
                         std::optional<HessFn> hessian = std::nullopt,
                         bool symmetric = true);

    static Kernel by_name(const std::string& family, double scale,
                          const std::vector<int>& signature);

    KernelFamily family() const { return family_; }
    const std::string& name() const { return name_; }
    double scale() const { return scale_; }
    bool diagonal() const {
        return family_ == KernelFamily::dirac || family_ == KernelFamily::plane_wave_weight;
    }
    bool smooth() const { return smooth_; }
    bool symmetric() const { return symmetric_; }
    bool analytic_hessian() const;

    /// Pointwise value. Diagonal (distributional) kernels reject off-diagonal
    /// requests; dirac has no finite pointwise value at all.
    Complex eval(const Point& x, const Point& y, int dim) const;

    /// Diagonal weight of a distributional kernel.
    Complex diagonal_weight(const Point& x, int dim) const;

    /// g_μν(a) = ∂²k/∂x^μ∂y^ν at x = y = a. Analytic for the Gaussian
    /// families, finite differences (step 1e-4, one Richardson level) for the
    /// rest. Throws on non-smooth kernels.
    RMat mixed_hessian(const Point& a, int dim) const;

private:
    KernelFamily family_ = KernelFamily::custom;
    std::string name_;
    double scale_ = 1.0;
    bool smooth_ = true;
    bool symmetric_ = true;
    std::vector<int> signature_;
    EvalFn eval_;
    std::optional<HessFn> hess_;
};

/// Operator matrix A[i][j] = k(x_i, y_j) w_j, so that (Af)_i approximates
/// ∫ k(x_i, y) f(y) dy. Diagonal families act pointwise (no quadrature
/// factor): dirac gives the identity, plane_wave_weight diag of its weight.
LinOp assemble(const Kernel& k, const GridPtr& grid_in, const GridPtr& grid_out);
inline LinOp assemble(const Kernel& k, const GridPtr& grid) { return assemble(k, grid, grid); }

/// ‖Σ λ_i δ_{a_i}‖²_H = Σ_{ij} λ_i λ_j k(a_i, a_j), straight from kernel
/// evaluations (no grid). Requires a symmetric real kernel.
double gram_closed_form(const Kernel& k, const std::vector<double>& lambdas,
                        const std::vector<Point>& points, int dim);

}  // namespace funcoord
