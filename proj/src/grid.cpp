#include "funcoord/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "funcoord/errors.hpp"

namespace funcoord {

Grid::Grid(std::vector<Axis> axes, std::vector<int> signature)
    : axes_(std::move(axes)), signature_(std::move(signature)) {
    if (axes_.empty() || static_cast<int>(axes_.size()) > kMaxDim)
        throw std::invalid_argument("grid: dimension must be between 1 and 4");
    if (signature_.empty()) signature_.assign(axes_.size(), +1);
    if (signature_.size() != axes_.size())
        throw std::invalid_argument("grid: signature length does not match dimension");
    for (int s : signature_)
        if (s != 1 && s != -1)
            throw std::invalid_argument("grid: signature entries must be +1 or -1");

    total_ = 1;
    for (const Axis& ax : axes_) {
        if (ax.points < 4) throw std::invalid_argument("grid: every axis needs at least 4 points");
        if (!(ax.hi > ax.lo)) throw std::invalid_argument("grid: axis extent must be positive");
        total_ *= ax.points;
    }

    nodes_.resize(axes_.size());
    spacing_.resize(axes_.size());
    for (size_t a = 0; a < axes_.size(); ++a) {
        const Axis& ax = axes_[a];
        const double h = ax.periodic ? (ax.hi - ax.lo) / ax.points
                                     : (ax.hi - ax.lo) / (ax.points - 1);
        spacing_[a] = h;
        nodes_[a].resize(ax.points);
        for (int i = 0; i < ax.points; ++i) nodes_[a][i] = ax.lo + h * i;
    }

    // Tensor-product quadrature: uniform on periodic axes, trapezoid otherwise.
    weights_.resize(total_);
    for (Eigen::Index i = 0; i < total_; ++i) {
        Eigen::Index rem = i;
        double w = 1.0;
        for (size_t a = 0; a < axes_.size(); ++a) {
            const Axis& ax = axes_[a];
            const int ia = static_cast<int>(rem % ax.points);
            rem /= ax.points;
            double wa = spacing_[a];
            if (!ax.periodic && (ia == 0 || ia == ax.points - 1)) wa *= 0.5;
            w *= wa;
        }
        weights_[i] = w;
    }
}

Point Grid::node(Eigen::Index i) const {
    Point p{};
    Eigen::Index rem = i;
    for (size_t a = 0; a < axes_.size(); ++a) {
        const int ia = static_cast<int>(rem % axes_[a].points);
        rem /= axes_[a].points;
        p[a] = nodes_[a][ia];
    }
    return p;
}

Eigen::Index Grid::flat_index(const std::array<int, kMaxDim>& idx) const {
    Eigen::Index flat = 0;
    Eigen::Index stride = 1;
    for (size_t a = 0; a < axes_.size(); ++a) {
        flat += stride * idx[a];
        stride *= axes_[a].points;
    }
    return flat;
}

Eigen::Index Grid::nearest_node(const Point& p) const {
    std::array<int, kMaxDim> idx{};
    for (size_t a = 0; a < axes_.size(); ++a) {
        const Axis& ax = axes_[a];
        double t = (p[a] - ax.lo) / spacing_[a];
        if (ax.periodic) {
            long k = std::lround(t);
            k %= ax.points;
            if (k < 0) k += ax.points;
            idx[a] = static_cast<int>(k);
        } else {
            long k = std::lround(t);
            if (k < 0) k = 0;
            if (k >= ax.points) k = ax.points - 1;
            idx[a] = static_cast<int>(k);
        }
    }
    return flat_index(idx);
}

bool Grid::fully_periodic() const {
    for (const Axis& ax : axes_)
        if (!ax.periodic) return false;
    return true;
}

double Grid::volume() const {
    double v = 1.0;
    for (const Axis& ax : axes_) v *= ax.hi - ax.lo;
    return v;
}

GridPtr make_grid(std::vector<Axis> axes, std::vector<int> signature) {
    return std::make_shared<Grid>(std::move(axes), std::move(signature));
}

GridPtr make_grid_1d(double lo, double hi, int points, bool periodic) {
    return make_grid({Axis{lo, hi, points, periodic}});
}

SampledFunction sample(const std::function<Complex(const Point&)>& f, const GridPtr& grid) {
    SampledFunction out{grid, Vec(grid->size()), Side::primal};
    for (Eigen::Index i = 0; i < grid->size(); ++i) {
        const Complex v = f(grid->node(i));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("sample: function is non-finite at a grid node");
        out.values[i] = v;
    }
    return out;
}

SampledFunction sample_real(const std::function<double(const Point&)>& f, const GridPtr& grid) {
    return sample([&f](const Point& p) { return Complex(f(p), 0.0); }, grid);
}

static void check_same_grid(const SampledFunction& f, const SampledFunction& g) {
    if (f.grid.get() != g.grid.get())
        throw std::invalid_argument("inner/pairing: arguments live on different grids");
    if (f.values.size() != g.values.size())
        throw std::invalid_argument("inner/pairing: value lengths differ");
}

Complex l2_inner(const SampledFunction& f, const SampledFunction& g) {
    check_same_grid(f, g);
    if (f.side != g.side)
        throw std::invalid_argument("l2_inner: arguments must share the pairing side");
    return (f.values.conjugate().cwiseProduct(g.values).array() *
            f.grid->weights().array().cast<Complex>())
        .sum();
}

Complex pairing(const SampledFunction& f, const SampledFunction& phi) {
    check_same_grid(f, phi);
    if (f.side != Side::dual || phi.side != Side::primal)
        throw std::invalid_argument("pairing: expects a dual functional and a primal vector");
    return (f.values.conjugate().cwiseProduct(phi.values).array() *
            f.grid->weights().array().cast<Complex>())
        .sum();
}

SampledFunction mollified_delta(const GridPtr& grid, const Point& a, double L) {
    if (!(L > 0)) throw std::invalid_argument("mollified_delta: L must be positive");
    const int n = grid->dim();
    for (int ax = 0; ax < n; ++ax) {
        const Axis& axis = grid->axes()[ax];
        if (a[ax] < axis.lo || a[ax] > axis.hi)
            throw std::invalid_argument("mollified_delta: center outside the domain box");
        int inside = 0;
        for (double x : grid->axis_nodes(ax))
            if (std::abs(x - a[ax]) <= 3.0 / L) ++inside;
        if (inside < 4)
            throw resolution_error("mollified_delta: grid under-resolves the mollifier (L too large)");
    }
    const double amp = std::pow(L / std::sqrt(kPi), n);
    SampledFunction out{grid, Vec(grid->size()), Side::dual};
    for (Eigen::Index i = 0; i < grid->size(); ++i) {
        const Point p = grid->node(i);
        double r2 = 0.0;
        for (int ax = 0; ax < n; ++ax) r2 += (p[ax] - a[ax]) * (p[ax] - a[ax]);
        out.values[i] = amp * std::exp(-L * L * r2);
    }
    return out;
}

SampledFunction grid_delta(const GridPtr& grid, Eigen::Index k) {
    if (k < 0 || k >= grid->size()) throw std::invalid_argument("grid_delta: node index out of range");
    SampledFunction out{grid, Vec::Zero(grid->size()), Side::dual};
    out.values[k] = 1.0 / grid->weight(k);
    return out;
}

}  // namespace funcoord
