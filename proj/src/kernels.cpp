#include "funcoord/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "funcoord/errors.hpp"

namespace funcoord {

namespace {

double sq_dist(const Point& x, const Point& y, int dim) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += (x[a] - y[a]) * (x[a] - y[a]);
    return s;
}

double dot(const Point& x, const Point& y, int dim) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += x[a] * y[a];
    return s;
}

double minkowski_sq(const Point& x, const Point& y, const std::vector<int>& sig, int dim) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += sig[a] * (x[a] - y[a]) * (x[a] - y[a]);
    return s;
}

}  // namespace

Kernel Kernel::gauss_rho() {
    Kernel k;
    k.family_ = KernelFamily::gauss_rho;
    k.name_ = "gauss_rho";
    k.eval_ = [](const Point& x, const Point& y, int dim) {
        return Complex(std::exp(-sq_dist(x, y, dim)), 0.0);
    };
    return k;
}

Kernel Kernel::gauss_metric(double scale) {
    if (!(scale > 0)) throw std::invalid_argument("gauss_metric: scale must be positive");
    Kernel k;
    k.family_ = KernelFamily::gauss_metric;
    k.name_ = "gauss_metric";
    k.scale_ = scale;
    k.eval_ = [scale](const Point& x, const Point& y, int dim) {
        return Complex(std::exp(-0.5 * scale * sq_dist(x, y, dim)), 0.0);
    };
    return k;
}

Kernel Kernel::damped_gauss() {
    Kernel k;
    k.family_ = KernelFamily::damped_gauss;
    k.name_ = "damped_gauss";
    k.symmetric_ = false;
    k.eval_ = [](const Point& x, const Point& y, int dim) {
        return Complex(std::exp(-sq_dist(x, y, dim) - dot(x, x, dim)), 0.0);
    };
    return k;
}

Kernel Kernel::fourier() {
    Kernel k;
    k.family_ = KernelFamily::fourier;
    k.name_ = "fourier";
    k.smooth_ = false;  // smooth pointwise, but no real induced metric
    k.symmetric_ = true;
    k.eval_ = [](const Point& x, const Point& y, int dim) {
        return std::exp(Complex(0.0, dot(x, y, dim)));
    };
    return k;
}

Kernel Kernel::inv_fourier() {
    Kernel k;
    k.family_ = KernelFamily::inv_fourier;
    k.name_ = "inv_fourier";
    k.smooth_ = false;
    k.symmetric_ = true;
    k.eval_ = [](const Point& x, const Point& y, int dim) {
        const double norm = std::pow(2.0 * kPi, -dim);
        return norm * std::exp(Complex(0.0, -dot(x, y, dim)));
    };
    return k;
}

Kernel Kernel::dirac() {
    Kernel k;
    k.family_ = KernelFamily::dirac;
    k.name_ = "dirac";
    k.smooth_ = false;
    return k;
}

Kernel Kernel::plane_wave_weight() {
    Kernel k;
    k.family_ = KernelFamily::plane_wave_weight;
    k.name_ = "plane_wave_weight";
    k.smooth_ = false;
    return k;
}

Kernel Kernel::minkowski_gauss(std::vector<int> signature) {
    Kernel k;
    k.family_ = KernelFamily::minkowski_gauss;
    k.name_ = "minkowski_gauss";
    k.signature_ = std::move(signature);
    const std::vector<int>& sig = k.signature_;
    k.eval_ = [sig](const Point& x, const Point& y, int dim) {
        if (static_cast<int>(sig.size()) < dim)
            throw std::invalid_argument("minkowski_gauss: signature shorter than dimension");
        return Complex(std::exp(-0.5 * minkowski_sq(x, y, sig, dim)), 0.0);
    };
    return k;
}

Kernel Kernel::custom(std::string name, EvalFn eval, bool smooth, std::optional<HessFn> hessian,
                      bool symmetric) {
    Kernel k;
    k.family_ = KernelFamily::custom;
    k.name_ = std::move(name);
    k.smooth_ = smooth;
    k.symmetric_ = symmetric;
    k.eval_ = std::move(eval);
    k.hess_ = std::move(hessian);
    return k;
}

Kernel Kernel::by_name(const std::string& family, double scale, const std::vector<int>& signature) {
    if (family == "gauss_rho") return gauss_rho();
    if (family == "gauss_metric") return gauss_metric(scale);
    if (family == "damped_gauss") return damped_gauss();
    if (family == "fourier") return fourier();
    if (family == "inv_fourier") return inv_fourier();
    if (family == "dirac") return dirac();
    if (family == "plane_wave_weight") return plane_wave_weight();
    if (family == "minkowski_gauss") return minkowski_gauss(signature);
    throw std::invalid_argument("unknown kernel family: " + family);
}

bool Kernel::analytic_hessian() const {
    switch (family_) {
        case KernelFamily::gauss_rho:
        case KernelFamily::gauss_metric:
        case KernelFamily::minkowski_gauss:
            return true;
        case KernelFamily::custom:
            return hess_.has_value();
        default:
            return false;
    }
}

Complex Kernel::eval(const Point& x, const Point& y, int dim) const {
    if (family_ == KernelFamily::dirac)
        throw std::invalid_argument("dirac kernel has no finite pointwise value");
    if (family_ == KernelFamily::plane_wave_weight) {
        if (sq_dist(x, y, dim) > 1e-24)
            throw std::invalid_argument(
                "plane_wave_weight is diagonal; off-diagonal pointwise evaluation rejected");
        return diagonal_weight(x, dim);
    }
    return eval_(x, y, dim);
}

Complex Kernel::diagonal_weight(const Point& x, int dim) const {
    switch (family_) {
        case KernelFamily::dirac:
            return 1.0;
        case KernelFamily::plane_wave_weight:
            return std::pow(2.0 * kPi, -0.5 * dim) * std::exp(-0.5 * dot(x, x, dim));
        default:
            throw std::invalid_argument("diagonal_weight: kernel is not diagonal");
    }
}

RMat Kernel::mixed_hessian(const Point& a, int dim) const {
    if (!smooth_ && family_ != KernelFamily::damped_gauss)
        throw std::invalid_argument("mixed_hessian: kernel is not smooth at the diagonal");

    switch (family_) {
        case KernelFamily::gauss_rho:
            return 2.0 * RMat::Identity(dim, dim);
        case KernelFamily::gauss_metric:
            return scale_ * RMat::Identity(dim, dim);
        case KernelFamily::minkowski_gauss: {
            RMat g = RMat::Zero(dim, dim);
            for (int i = 0; i < dim; ++i) g(i, i) = signature_[i];
            return g;
        }
        case KernelFamily::custom:
            if (hess_) return (*hess_)(a, dim);
            break;
        default:
            break;
    }

    // Central finite differences with one Richardson level.
    auto fd = [&](double h) {
        RMat g(dim, dim);
        for (int mu = 0; mu < dim; ++mu) {
            for (int nu = 0; nu < dim; ++nu) {
                // x-offsets go in the first slot, y-offsets in the second.
                Point x1 = a, x2 = a;
                x1[mu] += h;
                x2[mu] -= h;
                Point y1 = a, y2 = a;
                y1[nu] += h;
                y2[nu] -= h;
                const double v = (eval_(x1, y1, dim).real() - eval_(x1, y2, dim).real() -
                                  eval_(x2, y1, dim).real() + eval_(x2, y2, dim).real()) /
                                 (4.0 * h * h);
                g(mu, nu) = v;
            }
        }
        return g;
    };
    const double h = 1e-4;
    const RMat gh = fd(h);
    const RMat gh2 = fd(h / 2.0);
    return (4.0 * gh2 - gh) / 3.0;
}

LinOp assemble(const Kernel& k, const GridPtr& grid_in, const GridPtr& grid_out) {
    if (grid_in->dim() != grid_out->dim())
        throw std::invalid_argument("assemble: grid dimensions do not match");
    const int dim = grid_in->dim();

    if (k.diagonal()) {
        if (grid_in->size() != grid_out->size())
            throw std::invalid_argument("assemble: diagonal kernels need matching grids");
        Vec d(grid_in->size());
        for (Eigen::Index i = 0; i < grid_in->size(); ++i)
            d[i] = k.diagonal_weight(grid_out->node(i), dim);
        return LinOp{grid_in, grid_out, Mat(d.asDiagonal()), SideContract::primal_to_primal};
    }

    Mat a(grid_out->size(), grid_in->size());
    for (Eigen::Index j = 0; j < grid_in->size(); ++j) {
        const Point y = grid_in->node(j);
        const double wj = grid_in->weight(j);
        for (Eigen::Index i = 0; i < grid_out->size(); ++i)
            a(i, j) = k.eval(grid_out->node(i), y, dim) * wj;
    }
    return LinOp{grid_in, grid_out, std::move(a), SideContract::primal_to_primal};
}

double gram_closed_form(const Kernel& k, const std::vector<double>& lambdas,
                        const std::vector<Point>& points, int dim) {
    if (!k.symmetric())
        throw std::invalid_argument("gram_closed_form: kernel must be symmetric");
    if (lambdas.size() != points.size())
        throw std::invalid_argument("gram_closed_form: weights and points differ in length");
    double s = 0.0;
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = 0; j < points.size(); ++j) {
            const Complex v = k.eval(points[i], points[j], dim);
            s += lambdas[i] * lambdas[j] * v.real();
        }
    return s;
}

}  // namespace funcoord
