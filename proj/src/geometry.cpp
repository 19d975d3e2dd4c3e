#include "funcoord/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "funcoord/errors.hpp"

namespace funcoord {

RMat induced_metric(const Kernel& k, const Point& a, int dim) {
    RMat g = k.mixed_hessian(a, dim);
    const double asym = (g - g.transpose()).norm();
    if (asym > 1e-8 * std::max(1.0, g.norm()))
        throw std::invalid_argument("induced_metric: mixed hessian is not symmetric");
    return 0.5 * (g + g.transpose().eval());
}

Point DeltaPath::position(Eigen::Index step) const {
    Point p{};
    for (int d = 0; d < space_dim(); ++d) p[d] = components[static_cast<size_t>(d)][step];
    return p;
}

DeltaPath make_path(const GridPtr& t_grid,
                    const std::vector<std::function<double(double)>>& components) {
    if (t_grid->dim() != 1) throw std::invalid_argument("make_path: t-grid must be one-dimensional");
    if (components.empty() || components.size() > 3)
        throw std::invalid_argument("make_path: 1 to 3 space components");
    DeltaPath path;
    path.t_grid = t_grid;
    for (const auto& comp : components) {
        RVec v(t_grid->size());
        for (Eigen::Index i = 0; i < t_grid->size(); ++i) v[i] = comp(t_grid->node(i)[0]);
        path.components.push_back(std::move(v));
    }
    return path;
}

RMat path_velocity(const DeltaPath& path) {
    const Mat d = derivative_op(path.t_grid).mat;
    RMat vel(path.t_grid->size(), path.space_dim());
    for (int c = 0; c < path.space_dim(); ++c)
        vel.col(c) = (d * path.components[static_cast<size_t>(c)].cast<Complex>()).real();
    return vel;
}

RVec path_quadratic_form(const Kernel& k, const DeltaPath& path) {
    const int dim = path.space_dim();
    const RMat vel = path_velocity(path);
    RVec q(path.t_grid->size());
    for (Eigen::Index t = 0; t < path.t_grid->size(); ++t) {
        const RMat g = k.mixed_hessian(path.position(t), dim);
        const RVec v = vel.row(t).transpose();
        q[t] = (v.transpose() * g * v)(0, 0);
    }
    return q;
}

namespace {

// ‖δφ‖² with mollified deltas: δφ_L = Σ_μ 2L²(x−a)_μ ȧ^μ f_L(x−a), paired
// through the kernel by direct double quadrature.
double mollified_tangent_norm2(const Kernel& k, const GridPtr& grid, const Point& a,
                               const RVec& adot, double L) {
    const int dim = grid->dim();
    const Eigen::Index n = grid->size();
    const double amp = std::pow(L / std::sqrt(kPi), dim);
    RVec psi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Point x = grid->node(i);
        double r2 = 0.0, dot = 0.0;
        for (int d = 0; d < dim; ++d) {
            const double u = x[d] - a[d];
            r2 += u * u;
            dot += u * adot[d];
        }
        psi[i] = 2.0 * L * L * dot * amp * std::exp(-L * L * r2);
    }
    const RVec u = grid->weights().cwiseProduct(psi);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (u[i] == 0.0) continue;
        const Point xi = grid->node(i);
        double row = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (u[j] == 0.0) continue;
            row += k.eval(xi, grid->node(j), dim).real() * u[j];
        }
        total += u[i] * row;
    }
    return total;
}

void check_mollifier_resolution(const GridPtr& grid, const Point& a, double L) {
    for (int ax = 0; ax < grid->dim(); ++ax) {
        const Axis& axis = grid->axes()[ax];
        if (a[ax] < axis.lo || a[ax] > axis.hi)
            throw std::invalid_argument("path leaves the grid domain");
        int inside = 0;
        for (double x : grid->axis_nodes(ax))
            if (std::abs(x - a[ax]) <= 3.0 / L) ++inside;
        if (inside < 4) throw resolution_error("grid under-resolves the mollifier schedule");
    }
}

}  // namespace

CrosscheckReport path_norm_crosscheck(const Kernel& k, const DeltaPath& path, const GridPtr& grid,
                                      const std::vector<double>& l_schedule,
                                      Eigen::Index probe_step) {
    if (l_schedule.size() < 2)
        throw std::invalid_argument("path_norm_crosscheck: need at least two L values");
    const int dim = grid->dim();
    if (dim != path.space_dim())
        throw std::invalid_argument("path_norm_crosscheck: grid and path dimensions differ");

    const Point a = path.position(probe_step);
    const RVec adot = path_velocity(path).row(probe_step).transpose();
    for (double L : l_schedule) check_mollifier_resolution(grid, a, L);

    CrosscheckReport rep;
    const RMat g = k.mixed_hessian(a, dim);
    rep.parameter_value = (adot.transpose() * g * adot)(0, 0);

    for (double L : l_schedule) rep.per_L.push_back(mollified_tangent_norm2(k, grid, a, adot, L));

    const size_t m = rep.per_L.size();
    // Richardson in 1/L² on the last pair (schedule assumed doubling).
    rep.mollified_value = (4.0 * rep.per_L[m - 1] - rep.per_L[m - 2]) / 3.0;

    if (m >= 3) {
        const double d1 = rep.per_L[m - 2] - rep.per_L[m - 3];
        const double d2 = rep.per_L[m - 1] - rep.per_L[m - 2];
        if (std::abs(d2) > 1e-14 * std::max(1.0, std::abs(rep.per_L[m - 1])))
            rep.observed_order = std::log2(std::abs(d1 / d2));
    } else {
        const double denom = std::max(std::abs(rep.parameter_value), 1e-300);
        const double e1 = std::abs(rep.per_L[0] - rep.parameter_value) / denom;
        const double e2 = std::abs(rep.per_L[1] - rep.parameter_value) / denom;
        if (e2 > 1e-14) rep.observed_order = std::log2(e1 / e2);
    }
    const double denom = std::abs(rep.parameter_value) > 0 ? std::abs(rep.parameter_value) : 1.0;
    rep.rel_error = std::abs(rep.mollified_value - rep.parameter_value) / denom;
    return rep;
}

GramReport gram_deltas(const Kernel& k, const std::vector<Point>& points, int dim) {
    const size_t m = points.size();
    if (m == 0 || m > 8) throw std::invalid_argument("gram_deltas: 1 to 8 points");
    GramReport rep;
    rep.min_pairwise_distance = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j) {
            double d2 = 0.0;
            for (int ax = 0; ax < dim; ++ax)
                d2 += (points[i][ax] - points[j][ax]) * (points[i][ax] - points[j][ax]);
            rep.min_pairwise_distance = std::min(rep.min_pairwise_distance, std::sqrt(d2));
        }
    if (m > 1 && rep.min_pairwise_distance < 1e-12)
        throw std::invalid_argument("gram_deltas: duplicate points make the Gram matrix singular");

    rep.gram = RMat(m, m);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
            rep.gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                k.eval(points[i], points[j], dim).real();
    Eigen::SelfAdjointEigenSolver<RMat> es(rep.gram, Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    return rep;
}

ContinuityReport linear_structure_continuity(const Kernel& k, const Point& a, double lambda,
                                             const std::vector<Point>& a_seq,
                                             const std::vector<double>& lambda_seq, int dim) {
    if (a_seq.size() != lambda_seq.size())
        throw std::invalid_argument("linear_structure_continuity: sequence lengths differ");
    ContinuityReport rep;
    std::vector<double> dists;
    for (size_t i = 0; i < a_seq.size(); ++i) {
        const double kaa = k.eval(a, a, dim).real();
        const double kak = k.eval(a, a_seq[i], dim).real();
        const double kka = k.eval(a_seq[i], a, dim).real();
        const double kkk = k.eval(a_seq[i], a_seq[i], dim).real();
        const double lk = lambda_seq[i];
        rep.values.push_back(lambda * lambda * kaa - lambda * lk * (kak + kka) + lk * lk * kkk);
        double d2 = 0.0;
        for (int ax = 0; ax < dim; ++ax) d2 += (a[ax] - a_seq[i][ax]) * (a[ax] - a_seq[i][ax]);
        dists.push_back(std::sqrt(d2));
    }
    // Order in |a − a_k| from successive ratios where the distances shrink.
    int count = 0;
    double sum = 0.0;
    for (size_t i = 0; i + 1 < dists.size(); ++i) {
        if (dists[i] > 0 && dists[i + 1] > 0 && dists[i] != dists[i + 1] &&
            rep.values[i] > 0 && rep.values[i + 1] > 0) {
            sum += std::log(rep.values[i] / rep.values[i + 1]) / std::log(dists[i] / dists[i + 1]);
            ++count;
        }
    }
    if (count > 0) rep.observed_order = sum / count;
    return rep;
}

Kernel circle_kernel() {
    // Chordal-distance Gaussian on the unit circle: d²/2 = 1 − cos(θ−θ').
    auto eval = [](const Point& x, const Point& y, int) {
        return Complex(std::exp(std::cos(x[0] - y[0]) - 1.0), 0.0);
    };
    auto hess = [](const Point&, int) {
        // −F''(0) for F(u) = e^{cos u − 1}.
        RMat g(1, 1);
        g(0, 0) = 1.0;
        return g;
    };
    return Kernel::custom("circle_gauss", eval, true, hess, true);
}

CircleReport circle_embedding_check(const GridPtr& grid) {
    if (grid->dim() != 1 || !grid->axes()[0].periodic)
        throw std::invalid_argument("circle_embedding_check: needs a periodic 1-D grid");
    const Axis& ax = grid->axes()[0];

    CircleReport rep;
    const Eigen::Index at0 = grid->nearest_node(Point{ax.lo});
    const Eigen::Index at2pi = grid->nearest_node(Point{ax.hi});
    rep.glued = (at0 == at2pi);

    const SampledFunction d0 = grid_delta(grid, at0);
    const SampledFunction d2pi = grid_delta(grid, at2pi);
    for (int j = 1; j <= 5; ++j) {
        const auto cosj = sample_real(
            [j](const Point& p) { return std::cos(j * p[0]); }, grid);
        const auto sinj = sample_real(
            [j](const Point& p) { return std::sin(j * p[0]); }, grid);
        rep.pairing_gap = std::max(rep.pairing_gap, std::abs(pairing(d0, cosj) - pairing(d2pi, cosj)));
        rep.pairing_gap = std::max(rep.pairing_gap, std::abs(pairing(d0, sinj) - pairing(d2pi, sinj)));
    }

    const Kernel k = circle_kernel();
    const double g0 = induced_metric(k, Point{ax.lo}, 1)(0, 0);
    rep.metric_value = g0;
    for (Eigen::Index i = 0; i < grid->size(); ++i) {
        const double gi = induced_metric(k, grid->node(i), 1)(0, 0);
        rep.metric_variation = std::max(rep.metric_variation, std::abs(gi - g0));
    }
    return rep;
}

namespace {

double functional_value(const std::function<double(const Point&)>* f1, const Kernel* f2,
                        const GridPtr& grid, const Point& a, double L) {
    const int dim = grid->dim();
    const Eigen::Index n = grid->size();
    const double amp = std::pow(L / std::sqrt(kPi), dim);
    RVec fl(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Point x = grid->node(i);
        double r2 = 0.0;
        for (int d = 0; d < dim; ++d) r2 += (x[d] - a[d]) * (x[d] - a[d]);
        fl[i] = amp * std::exp(-L * L * r2);
    }
    const RVec u = grid->weights().cwiseProduct(fl);
    double val = 0.0;
    if (f1 != nullptr) {
        for (Eigen::Index i = 0; i < n; ++i)
            if (u[i] != 0.0) val += (*f1)(grid->node(i)) * u[i];
    }
    if (f2 != nullptr) {
        double quad = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (u[i] == 0.0) continue;
            const Point xi = grid->node(i);
            double row = 0.0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (u[j] != 0.0) row += f2->eval(xi, grid->node(j), dim).real() * u[j];
            quad += u[i] * row;
        }
        val += quad;
    }
    return val;
}

}  // namespace

DirectionalDerivativeReport directional_derivative_check(
    const std::function<double(double)>& f1, const Kernel* f2, const DeltaPath& path,
    const GridPtr& grid, Eigen::Index probe_step, const std::vector<double>& l_schedule) {
    const int dim = grid->dim();
    if (dim != path.space_dim())
        throw std::invalid_argument("directional_derivative_check: dimensions differ");
    std::function<double(const Point&)> f1p;
    if (f1) {
        if (dim != 1)
            throw std::invalid_argument("directional_derivative_check: scalar f1 is 1-D only");
        f1p = [&f1](const Point& p) { return f1(p[0]); };
    }

    const Point a = path.position(probe_step);
    const RVec adot = path_velocity(path).row(probe_step).transpose();

    // Route (i): chain rule on the parameter side, gradients by central FD.
    double chain = 0.0;
    const double h = 1e-5;
    for (int d = 0; d < dim; ++d) {
        Point ap = a, am = a;
        ap[d] += h;
        am[d] -= h;
        double grad = 0.0;
        if (f1p) grad += (f1p(ap) - f1p(am)) / (2.0 * h);
        if (f2 != nullptr)
            grad += (f2->eval(ap, ap, dim).real() - f2->eval(am, am, dim).real()) / (2.0 * h);
        chain += grad * adot[d];
    }

    // Route (ii): 4th-order difference of the mollified functional along the
    // path samples, Richardson-extrapolated over the L schedule.
    const Eigen::Index T = path.t_grid->size();
    const bool periodic = path.t_grid->axes()[0].periodic;
    if (!periodic && (probe_step < 2 || probe_step > T - 3))
        throw std::invalid_argument("directional_derivative_check: probe too close to the ends");
    const double ht = path.t_grid->spacing(0);
    auto wrap = [&](Eigen::Index i) {
        if (periodic) return ((i % T) + T) % T;
        return i;
    };
    std::vector<double> route2;
    const std::function<double(const Point&)>* f1ptr = f1p ? &f1p : nullptr;
    for (double L : l_schedule) {
        check_mollifier_resolution(grid, a, L);
        const double fm2 = functional_value(f1ptr, f2, grid, path.position(wrap(probe_step - 2)), L);
        const double fm1 = functional_value(f1ptr, f2, grid, path.position(wrap(probe_step - 1)), L);
        const double fp1 = functional_value(f1ptr, f2, grid, path.position(wrap(probe_step + 1)), L);
        const double fp2 = functional_value(f1ptr, f2, grid, path.position(wrap(probe_step + 2)), L);
        route2.push_back((fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * ht));
    }
    double moll = route2.back();
    if (route2.size() >= 2)
        moll = (4.0 * route2[route2.size() - 1] - route2[route2.size() - 2]) / 3.0;

    DirectionalDerivativeReport rep;
    rep.chain_rule = chain;
    rep.mollified = moll;
    rep.abs_error = std::abs(chain - moll);
    return rep;
}

}  // namespace funcoord
