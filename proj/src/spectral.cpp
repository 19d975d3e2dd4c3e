#include "funcoord/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "funcoord/errors.hpp"

namespace funcoord {

GridPtr index_grid(Eigen::Index n) {
    // Periodic [0,n) with n points gives unit spacing and unit weights.
    return make_grid_1d(0.0, static_cast<double>(n), static_cast<int>(n), /*periodic=*/true);
}

namespace {

void fix_phase(Vec& v) {
    const double vmax = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-8 * vmax) {
            const Complex ph = std::conj(v[i]) / std::abs(v[i]);
            v *= ph;
            return;
        }
    }
}

double weighted_norm(const Vec& v, const RVec& w) {
    return std::sqrt((v.cwiseAbs2().array() * w.array()).sum());
}

}  // namespace

std::vector<GeneralizedEigenpair> generalized_eigs(const LinOp& a, const CoordinateSpace& space) {
    if (a.domain.get() != space.grid().get() || a.codomain.get() != space.grid().get())
        throw std::invalid_argument("generalized_eigs: A must be an endomorphism of the space");
    const GridPtr& grid = space.grid();
    const RVec& w = grid->weights();
    const Eigen::Index n = grid->size();

    // f(Aφ) = λ f(φ) for all φ reads f†WA = λ f†W, i.e. f is an eigenvector
    // of the pairing adjoint A* = W⁻¹A†W with eigenvalue conj(λ).
    const Mat astar = w.cwiseInverse().asDiagonal() * a.mat.adjoint() * w.asDiagonal();

    Mat vecs(n, n);
    Vec vals(n);
    const double herm = (astar - a.mat).norm();
    if (herm <= 1e-12 * std::max(1.0, a.mat.norm())) {
        // Pairing-Hermitian operator: the weighted symmetrization is Hermitian.
        const RVec sqw = w.cwiseSqrt();
        const Mat sym = sqw.asDiagonal() * a.mat * sqw.cwiseInverse().asDiagonal();
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sym + sym.adjoint()));
        if (es.info() != Eigen::Success) throw solver_error("generalized_eigs: eigensolver failed");
        vals = es.eigenvalues().cast<Complex>();
        vecs = sqw.cwiseInverse().asDiagonal() * es.eigenvectors();
    } else {
        Eigen::ComplexEigenSolver<Mat> es(astar);
        if (es.info() != Eigen::Success) throw solver_error("generalized_eigs: eigensolver failed");
        vals = es.eigenvalues().conjugate();
        vecs = es.eigenvectors();
        // A defective matrix has no eigenbasis; report it, no silent fallback.
        Eigen::JacobiSVD<Mat> svd(vecs);
        const auto& s = svd.singularValues();
        if (s(s.size() - 1) < 1e-10 * s(0))
            throw solver_error("generalized_eigs: matrix is numerically defective");
    }

    std::vector<GeneralizedEigenpair> out(static_cast<size_t>(n));
    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        if (vals[i].real() != vals[j].real()) return vals[i].real() < vals[j].real();
        return vals[i].imag() < vals[j].imag();
    });

    for (Eigen::Index r = 0; r < n; ++r) {
        const Eigen::Index j = order[static_cast<size_t>(r)];
        Vec f = vecs.col(j);
        fix_phase(f);
        f /= weighted_norm(f, w);
        // Residual of f(Aφ) = λf(φ) over the unit-vector probe bank.
        const Eigen::RowVectorXcd fw = f.adjoint() * w.asDiagonal();
        const Eigen::RowVectorXcd row = fw * a.mat - vals[j] * fw;
        double resid = 0.0;
        for (Eigen::Index k = 0; k < n; ++k)
            resid = std::max(resid, std::abs(row[k]) / std::sqrt(w[k]));
        out[static_cast<size_t>(r)] =
            GeneralizedEigenpair{vals[j], SampledFunction{grid, std::move(f), Side::dual}, resid};
    }
    return out;
}

ProperBasisResult proper_basis(const LinOp& a, const CoordinateSpace& space) {
    if (a.domain.get() != space.grid().get() || a.codomain.get() != space.grid().get())
        throw std::invalid_argument("proper_basis: A must be an endomorphism of the space");
    const LinOp aplus = hermitian_conjugate(a, space);
    const double dev = (aplus.mat - a.mat).norm();
    if (dev > 1e-8 * std::max(1.0, a.mat.norm()))
        throw std::invalid_argument("proper_basis: operator is not Hermitian in the space");

    // Whiten with the Cholesky factor of the pairing form M = L L†; then
    // B = L† A L^{-†} is Hermitian and its unitary eigenbasis gives
    // M-orthonormal eigenvectors V = L^{-†} U.
    const Mat m = space.pairing_form();
    Eigen::LLT<Mat> llt(m);
    if (llt.info() != Eigen::Success)
        throw solver_error("proper_basis: pairing form is not positive definite");
    const Mat lh = Mat(llt.matrixL()).adjoint();
    const Mat linv_h =
        lh.triangularView<Eigen::Upper>().solve(Mat::Identity(a.rows(), a.rows()));
    const Mat b = lh * a.mat * linv_h;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (b + b.adjoint()));
    if (es.info() != Eigen::Success) throw solver_error("proper_basis: eigensolver failed");

    Mat v = linv_h * es.eigenvectors();
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        Vec col = v.col(j);
        fix_phase(col);
        v.col(j) = col;
    }

    const GridPtr idx = index_grid(a.rows());
    LinOp kappa_op{space.grid(), idx, Eigen::PartialPivLU<Mat>(v).inverse(),
                   SideContract::primal_to_primal};
    LinOp kappa_inv{idx, space.grid(), v, SideContract::primal_to_primal};
    Transform kappa(std::move(kappa_op), std::move(kappa_inv));

    const Mat diag = kappa.forward().mat * a.mat * kappa.inverse().mat;
    const double total = diag.norm();
    double off = 0.0;
    for (Eigen::Index i = 0; i < diag.rows(); ++i)
        for (Eigen::Index j = 0; j < diag.cols(); ++j)
            if (i != j) off += std::norm(diag(i, j));
    off = std::sqrt(off);

    Eigen::JacobiSVD<Mat> svd(kappa.forward().mat);
    const auto& s = svd.singularValues();

    ProperBasisResult res{std::move(kappa),
                          SampledFunction{idx, es.eigenvalues().cast<Complex>(), Side::primal},
                          total > 0 ? off / total : 0.0,
                          s(0) > 0 ? s(s.size() - 1) / s(0) : 0.0};
    return res;
}

OrthogonalityReport verify_proper_basis_orthogonality(const ProperBasisResult& result,
                                                      const CoordinateSpace& space) {
    // ω = κ⁻¹ maps the spectral side into the space; push the metric along it.
    const Mat& v = result.kappa.inverse().mat;
    const RVec& w_idx = result.kappa.codomain()->weights();  // index grid, unit weights
    const RVec& w = space.grid()->weights();
    const Mat omega_star = w_idx.cwiseInverse().asDiagonal() * v.adjoint() * w.asDiagonal();
    const Mat pushed = omega_star * space.metric() * v;

    OrthogonalityReport rep;
    const double total = pushed.norm();
    double off = 0.0;
    rep.diagonal = RVec(pushed.rows());
    for (Eigen::Index i = 0; i < pushed.rows(); ++i) {
        rep.diagonal[i] = pushed(i, i).real();
        for (Eigen::Index j = 0; j < pushed.cols(); ++j)
            if (i != j) off += std::norm(pushed(i, j));
    }
    rep.offdiag_mass = total > 0 ? std::sqrt(off) / total : 0.0;
    return rep;
}

Vec spectral_decomposition(const SampledFunction& phi, const ProperBasisResult& result) {
    if (phi.grid.get() != result.kappa.domain().get())
        throw std::invalid_argument("spectral_decomposition: vector is not on the space grid");
    return result.kappa.forward().mat * phi.values;
}

CoordinateSpace metric_from_unbounded(const LinOp& a, const CoordinateSpace& l2) {
    if (a.domain.get() != l2.grid().get() || a.codomain.get() != l2.grid().get())
        throw std::invalid_argument("metric_from_unbounded: A must act on the l2 grid");
    Eigen::PartialPivLU<Mat> lu(a.mat);
    const Mat ainv = lu.inverse();
    const RVec& w = l2.grid()->weights();
    const Mat form = ainv.adjoint() * w.asDiagonal() * ainv;
    const double cond_probe = a.mat.norm() * ainv.norm();
    if (!(cond_probe < 1e14))
        throw singular_error("metric_from_unbounded: A is numerically singular");
    Mat metric = w.cwiseInverse().asDiagonal() * form;
    return CoordinateSpace::from_metric(l2.grid(), Side::primal, std::move(metric),
                                        "metric_from_unbounded");
}

}  // namespace funcoord
