#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "funcoord/types.hpp"

namespace funcoord {

inline constexpr int kMaxDim = 4;

/// One axis of a tensor-product grid.
struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    int points = 0;
    bool periodic = false;
};

using Point = std::array<double, kMaxDim>;

/// Tensor-product lattice with quadrature weights and a ±1 signature on the
/// variable space. Periodic axes carry uniform weights (hi excluded),
/// non-periodic axes trapezoid weights. Immutable after construction.
class Grid {
public:
    Grid(std::vector<Axis> axes, std::vector<int> signature);

    int dim() const { return static_cast<int>(axes_.size()); }
    Eigen::Index size() const { return total_; }
    const std::vector<Axis>& axes() const { return axes_; }
    const std::vector<int>& signature() const { return signature_; }

    const std::vector<double>& axis_nodes(int axis) const { return nodes_[axis]; }
    const RVec& weights() const { return weights_; }
    double weight(Eigen::Index i) const { return weights_[i]; }

    /// Coordinates of flat node i. Axis 0 is the fastest-running index.
    Point node(Eigen::Index i) const;

    /// Flat index from per-axis indices.
    Eigen::Index flat_index(const std::array<int, kMaxDim>& idx) const;

    /// Nearest flat node to a point; periodic axes wrap.
    Eigen::Index nearest_node(const Point& p) const;

    /// Axis spacing.
    double spacing(int axis) const { return spacing_[axis]; }

    bool fully_periodic() const;

    /// Volume of the domain box, Π (hi - lo).
    double volume() const;

private:
    std::vector<Axis> axes_;
    std::vector<int> signature_;
    std::vector<std::vector<double>> nodes_;
    std::vector<double> spacing_;
    RVec weights_;
    Eigen::Index total_ = 0;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(std::vector<Axis> axes, std::vector<int> signature = {});

/// Convenience: one axis, Euclidean signature.
GridPtr make_grid_1d(double lo, double hi, int points, bool periodic = false);

enum class Side { primal, dual };

/// Complex values on the nodes of a grid, tagged with the pairing side they
/// live on.
struct SampledFunction {
    GridPtr grid;
    Vec values;
    Side side = Side::primal;
};

/// Pointwise sampling; throws if f is non-finite at a node.
SampledFunction sample(const std::function<Complex(const Point&)>& f, const GridPtr& grid);
SampledFunction sample_real(const std::function<double(const Point&)>& f, const GridPtr& grid);

/// Σ w_i conj(f_i) g_i. Conjugate-linear in the first argument. Both
/// arguments must share the grid and the side.
Complex l2_inner(const SampledFunction& f, const SampledFunction& g);

/// Duality pairing of a dual vector with a primal vector; same quadrature
/// form as l2_inner but the side contract is dual × primal.
Complex pairing(const SampledFunction& f, const SampledFunction& phi);

/// Samples of (L/√π)^n e^{−L²(x−a)²}; throws resolution_error when fewer
/// than 4 nodes fall within 3/L of a along some axis.
SampledFunction mollified_delta(const GridPtr& grid, const Point& a, double L);

/// Discrete evaluation functional: 1/w_k at node k, zero elsewhere, dual
/// side. pairing(grid_delta(k), φ) = φ(x_k) exactly.
SampledFunction grid_delta(const GridPtr& grid, Eigen::Index k);

}  // namespace funcoord
