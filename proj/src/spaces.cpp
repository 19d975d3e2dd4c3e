#include "funcoord/spaces.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "funcoord/errors.hpp"

namespace funcoord {

namespace {

Mat hermitian_form_of(const Mat& metric, const RVec& w, Side side) {
    if (side == Side::primal) return metric.adjoint() * w.asDiagonal();
    return w.asDiagonal() * metric;
}

}  // namespace

void CoordinateSpace::finalize() {
    form_ = hermitian_form_of(metric_, grid_->weights(), side_);
    const double scale = form_.norm();
    const double herm = (form_ - form_.adjoint()).norm();
    if (herm > 1e-10 * scale)
        throw indefinite_error(provenance_ + ": metric is not Hermitian w.r.t. the pairing", herm);
    form_ = 0.5 * (form_ + form_.adjoint().eval());

    Eigen::SelfAdjointEigenSolver<Mat> es(form_, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw solver_error(provenance_ + ": eigenvalue scan of the metric failed");
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    if (lmin < -1e-10 * lmax)
        throw indefinite_error(provenance_ + ": metric is indefinite", lmin);

    lu_ = std::make_shared<Eigen::PartialPivLU<Mat>>(metric_);
}

CoordinateSpace CoordinateSpace::l2(GridPtr grid) {
    CoordinateSpace s;
    s.grid_ = std::move(grid);
    s.side_ = Side::primal;
    s.metric_ = Mat::Identity(s.grid_->size(), s.grid_->size());
    s.provenance_ = "l2";
    s.finalize();
    return s;
}

CoordinateSpace CoordinateSpace::from_kernel(const Kernel& k, GridPtr grid, Side side) {
    CoordinateSpace s;
    s.grid_ = std::move(grid);
    s.side_ = side;
    s.metric_ = assemble(k, s.grid_).mat;
    s.provenance_ = "from_kernel(" + k.name() + ")";
    s.finalize();
    return s;
}

CoordinateSpace CoordinateSpace::from_transform(const LinOp& rho) {
    if (rho.rows() != rho.cols())
        throw std::invalid_argument("from_transform: rho must be an endomorphism");
    Eigen::BDCSVD<Mat> svd(rho.mat);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    const double cond = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond <= 1e12))
        throw singular_error("from_transform: rho is numerically singular on this grid (cond = " +
                             std::to_string(cond) + ")");

    const Mat rho_inv = Eigen::PartialPivLU<Mat>(rho.mat).inverse();
    const RVec& w = rho.domain->weights();
    // Built as B† W B so the pairing form is Hermitian by construction.
    Mat form = rho_inv.adjoint() * w.asDiagonal() * rho_inv;

    CoordinateSpace s;
    s.grid_ = rho.codomain;
    s.side_ = Side::primal;
    s.metric_ = s.grid_->weights().cwiseInverse().asDiagonal() * form;
    s.provenance_ = "from_transform";
    s.cond_report_ = cond;
    s.finalize();
    return s;
}

CoordinateSpace CoordinateSpace::from_metric(GridPtr grid, Side side, Mat metric,
                                             std::string provenance) {
    CoordinateSpace s;
    s.grid_ = std::move(grid);
    s.side_ = side;
    s.metric_ = std::move(metric);
    s.provenance_ = std::move(provenance);
    s.finalize();
    return s;
}

CoordinateSpace CoordinateSpace::dual() const {
    CoordinateSpace s;
    s.grid_ = grid_;
    s.side_ = side_ == Side::primal ? Side::dual : Side::primal;
    s.metric_ = lu_->inverse();
    s.provenance_ = "dual_of(" + provenance_ + ")";
    s.finalize();
    return s;
}

Complex CoordinateSpace::inner(const SampledFunction& f, const SampledFunction& g) const {
    if (f.grid.get() != grid_.get() || g.grid.get() != grid_.get())
        throw std::invalid_argument("inner: arguments do not live on the space's grid");
    if (f.side != side_ || g.side != side_)
        throw std::invalid_argument("inner: pairing side mismatch with the space");
    return (f.values.adjoint() * form_ * g.values)(0, 0);
}

double CoordinateSpace::norm(const SampledFunction& f) const {
    const Complex v = inner(f, f);
    return std::sqrt(std::max(0.0, v.real()));
}

SampledFunction CoordinateSpace::riesz(const SampledFunction& v) const {
    if (v.grid.get() != grid_.get() || v.side != side_)
        throw std::invalid_argument("riesz: argument must be a member of the space");
    const Side out = side_ == Side::primal ? Side::dual : Side::primal;
    return SampledFunction{grid_, metric_ * v.values, out};
}

SampledFunction CoordinateSpace::riesz_inv(const SampledFunction& v) const {
    const Side opp = side_ == Side::primal ? Side::dual : Side::primal;
    if (v.grid.get() != grid_.get() || v.side != opp)
        throw std::invalid_argument("riesz_inv: argument must live on the opposite side");
    return SampledFunction{grid_, lu_->solve(v.values), side_};
}

Mat CoordinateSpace::metric_solve(const Mat& rhs) const { return lu_->solve(rhs); }

DecayReport schwartz_decay_report(const LinOp& rho, const Vec& f, int p) {
    if (p < 0 || p > 3) throw std::invalid_argument("schwartz_decay_report: p must be in [0,3]");
    if (rho.domain->dim() != 1)
        throw std::invalid_argument("schwartz_decay_report: one-dimensional grids only");
    const GridPtr& grid = rho.codomain;

    DecayReport rep;
    rep.p = p;
    rep.sup = RMat::Zero(p + 1, p + 1);
    SampledFunction fs{rho.domain, f, Side::primal};
    rep.f_norm = std::sqrt(std::abs(l2_inner(fs, fs).real()));

    Vec phi = rho.mat * f;
    for (int q = 0; q <= p; ++q) {
        Vec dq = phi;
        if (q > 0) dq = derivative_op(grid, 0, q).mat * phi;
        for (int k = 0; k <= p; ++k) {
            double sup = 0.0;
            for (Eigen::Index i = 0; i < grid->size(); ++i) {
                const double x = grid->node(i)[0];
                sup = std::max(sup, std::abs(dq[i]) * std::pow(std::abs(x), k));
            }
            rep.sup(k, q) = sup;
        }
    }
    return rep;
}

}  // namespace funcoord
