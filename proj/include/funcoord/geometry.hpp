#pragma once

#include <vector>

#include "funcoord/kernels.hpp"

namespace funcoord {

/// g_μν(a) = ∂²k/∂x^μ∂y^ν at x = y = a, symmetrized.
RMat induced_metric(const Kernel& k, const Point& a, int dim);

/// Parameter curve a(t) on a 1-D t-grid with per-component values; velocity
/// by the grid derivative (exact trigonometric on periodic t-grids).
struct DeltaPath {
    GridPtr t_grid;                 // 1-D
    std::vector<RVec> components;   // one vector of length T per space dimension

    int space_dim() const { return static_cast<int>(components.size()); }
    Point position(Eigen::Index step) const;
};

DeltaPath make_path(const GridPtr& t_grid,
                    const std::vector<std::function<double(double)>>& components);

/// Velocities ȧ(t) per step (rows: steps, cols: space dims).
RMat path_velocity(const DeltaPath& path);

/// q(t) = g_μν(a(t)) ȧ^μ ȧ^ν per time step. Works for indefinite kernels
/// (quadratic form only; no space is constructed).
RVec path_quadratic_form(const Kernel& k, const DeltaPath& path);

struct CrosscheckReport {
    double parameter_value = 0.0;     // g_μν ȧ ȧ at the probe time
    double mollified_value = 0.0;     // Richardson limit of the grid pathway
    double rel_error = 0.0;
    double observed_order = 0.0;      // convergence order in 1/L
    std::vector<double> per_L;        // raw values along the schedule
};

/// Quadrature value of ‖δφ‖²_H with mollified deltas against the closed-form
/// quadratic form, extrapolated over the L-schedule.
CrosscheckReport path_norm_crosscheck(const Kernel& k, const DeltaPath& path, const GridPtr& grid,
                                      const std::vector<double>& l_schedule,
                                      Eigen::Index probe_step);

struct GramReport {
    RMat gram;
    double min_eigenvalue = 0.0;
    double min_pairwise_distance = 0.0;
};

/// Gram[i][j] = k(a_i, a_j) for m ≤ 8 distinct points.
GramReport gram_deltas(const Kernel& k, const std::vector<Point>& points, int dim);

struct ContinuityReport {
    std::vector<double> values;       // ‖λδ_a − λ_k δ_{a_k}‖²_H along the sequence
    double observed_order = 0.0;      // order in |a − a_k| (when positions vary)
};

/// ‖λδ_a − λ_kδ_{a_k}‖² = λ²k(a,a) − λλ_k(k(a,a_k)+k(a_k,a)) + λ_k²k(a_k,a_k).
ContinuityReport linear_structure_continuity(const Kernel& k, const Point& a, double lambda,
                                             const std::vector<Point>& a_seq,
                                             const std::vector<double>& lambda_seq, int dim);

struct CircleReport {
    bool glued = false;               // δ at 0 and δ at 2π share a node
    double pairing_gap = 0.0;         // max over test functions
    double metric_variation = 0.0;    // max |g(θ) − g(0)| along the circle
    double metric_value = 0.0;        // g(0)
};

/// Chordal-distance Gaussian kernel on the circle, smooth and periodic.
Kernel circle_kernel();

CircleReport circle_embedding_check(const GridPtr& grid);

struct DirectionalDerivativeReport {
    double chain_rule = 0.0;          // route (i)
    double mollified = 0.0;           // route (ii)
    double abs_error = 0.0;
};

/// d/dt f(δ_{a(t)}) for f(φ) = f0 + ∫f1 φ + ∫∫f2 φφ, computed by the chain
/// rule on the parameter side and by finite differences of the functional
/// along the mollified path (Richardson over the L-schedule).
DirectionalDerivativeReport directional_derivative_check(
    const std::function<double(double)>& f1, const Kernel* f2, const DeltaPath& path,
    const GridPtr& grid, Eigen::Index probe_step, const std::vector<double>& l_schedule);

}  // namespace funcoord
