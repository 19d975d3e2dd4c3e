#include "funcoord.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>

#include "funcoord/acceptance.hpp"
#include "funcoord/errors.hpp"
#include "funcoord/expr.hpp"
#include "funcoord/geometry.hpp"
#include "funcoord/grid.hpp"
#include "funcoord/kernels.hpp"
#include "funcoord/projective.hpp"
#include "funcoord/rng.hpp"
#include "funcoord/spaces.hpp"
#include "funcoord/spectral.hpp"
#include "funcoord/transforms.hpp"

using namespace funcoord;

namespace {

thread_local std::string g_last_error;

fc_status set_error(fc_status code, const std::string& what) {
    g_last_error = what;
    return code;
}

template <typename Fn>
fc_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const expr_error& e) {
        return set_error(FC_ERR_PARSE, e.what());
    } catch (const singular_error& e) {
        return set_error(FC_ERR_SINGULAR, e.what());
    } catch (const indefinite_error& e) {
        return set_error(FC_ERR_INDEFINITE, e.what());
    } catch (const resolution_error& e) {
        return set_error(FC_ERR_RESOLUTION, e.what());
    } catch (const solver_error& e) {
        return set_error(FC_ERR_SOLVER, e.what());
    } catch (const std::invalid_argument& e) {
        return set_error(FC_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return set_error(FC_ERR_INTERNAL, e.what());
    }
}

Vec to_vec(const double* re, const double* im, Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(re[i], im ? im[i] : 0.0);
    return v;
}

void from_vec(const Vec& v, double* re, double* im) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        re[i] = v[i].real();
        if (im) im[i] = v[i].imag();
    }
}

}  // namespace

struct fc_grid {
    GridPtr grid;
};
struct fc_kernel {
    Kernel kernel;
};
struct fc_linop {
    LinOp op;
};
struct fc_space {
    CoordinateSpace space;
};

extern "C" {

const char* fc_last_error(void) { return g_last_error.c_str(); }

fc_status fc_grid_create(const fc_axis* axes, const int* signature, int dim, fc_grid** out) {
    return guarded([&]() {
        if (axes == nullptr || out == nullptr || dim < 1)
            return set_error(FC_ERR_INVALID_ARGUMENT, "fc_grid_create: bad arguments");
        std::vector<Axis> ax;
        for (int i = 0; i < dim; ++i)
            ax.push_back(Axis{axes[i].lo, axes[i].hi, axes[i].points, axes[i].periodic != 0});
        std::vector<int> sig;
        if (signature != nullptr) sig.assign(signature, signature + dim);
        *out = new fc_grid{make_grid(std::move(ax), std::move(sig))};
        return FC_OK;
    });
}

void fc_grid_destroy(fc_grid* grid) { delete grid; }

int64_t fc_grid_size(const fc_grid* grid) { return grid ? grid->grid->size() : 0; }

int fc_grid_dim(const fc_grid* grid) { return grid ? grid->grid->dim() : 0; }

fc_status fc_grid_nodes(const fc_grid* grid, double* nodes) {
    return guarded([&]() {
        if (grid == nullptr || nodes == nullptr)
            return set_error(FC_ERR_INVALID_ARGUMENT, "fc_grid_nodes: bad arguments");
        const int dim = grid->grid->dim();
        for (Eigen::Index i = 0; i < grid->grid->size(); ++i) {
            const Point p = grid->grid->node(i);
            for (int d = 0; d < dim; ++d) nodes[i * dim + d] = p[d];
        }
        return FC_OK;
    });
}

fc_status fc_grid_weights(const fc_grid* grid, double* weights) {
    return guarded([&]() {
        if (grid == nullptr || weights == nullptr)
            return set_error(FC_ERR_INVALID_ARGUMENT, "fc_grid_weights: bad arguments");
        for (Eigen::Index i = 0; i < grid->grid->size(); ++i) weights[i] = grid->grid->weight(i);
        return FC_OK;
    });
}

fc_status fc_kernel_create(const char* family, double scale, const int* signature, int dim,
                           fc_kernel** out) {
    return guarded([&]() {
        if (family == nullptr || out == nullptr)
            return set_error(FC_ERR_INVALID_ARGUMENT, "fc_kernel_create: bad arguments");
        std::vector<int> sig;
        if (signature != nullptr && dim > 0) sig.assign(signature, signature + dim);
        *out = new fc_kernel{Kernel::by_name(family, scale == 0.0 ? 1.0 : scale, sig)};
        return FC_OK;
    });
}

void fc_kernel_destroy(fc_kernel* kernel) { delete kernel; }

fc_status fc_kernel_eval(const fc_kernel* kernel, const double* x, const double* y, int dim,
                         double* re, double* im) {
    return guarded([&]() {
        if (!kernel || !x || !y || !re) return set_error(FC_ERR_INVALID_ARGUMENT, "fc_kernel_eval");
        Point px{}, py{};
        for (int d = 0; d < dim; ++d) {
            px[d] = x[d];
            py[d] = y[d];
        }
        const Complex v = kernel->kernel.eval(px, py, dim);
        *re = v.real();
        if (im) *im = v.imag();
        return FC_OK;
    });
}

fc_status fc_kernel_mixed_hessian(const fc_kernel* kernel, const double* a, int dim, double* out) {
    return guarded([&]() {
        if (!kernel || !a || !out)
            return set_error(FC_ERR_INVALID_ARGUMENT, "fc_kernel_mixed_hessian");
        Point pa{};
        for (int d = 0; d < dim; ++d) pa[d] = a[d];
        const RMat g = kernel->kernel.mixed_hessian(pa, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) out[i * dim + j] = g(i, j);
        return FC_OK;
    });
}

fc_status fc_gram_closed_form(const fc_kernel* kernel, const double* lambdas, const double* points,
                              int m, int dim, double* out) {
    return guarded([&]() {
        if (!kernel || !lambdas || !points || !out || m < 1)
            return set_error(FC_ERR_INVALID_ARGUMENT, "fc_gram_closed_form");
        std::vector<double> l(lambdas, lambdas + m);
        std::vector<Point> pts(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i)
            for (int d = 0; d < dim; ++d) pts[static_cast<size_t>(i)][d] = points[i * dim + d];
        *out = gram_closed_form(kernel->kernel, l, pts, dim);
        return FC_OK;
    });
}

fc_status fc_assemble(const fc_kernel* kernel, const fc_grid* grid_in, const fc_grid* grid_out,
                      fc_linop** out) {
    return guarded([&]() {
        if (!kernel || !grid_in || !grid_out || !out)
            return set_error(FC_ERR_INVALID_ARGUMENT, "fc_assemble");
        *out = new fc_linop{assemble(kernel->kernel, grid_in->grid, grid_out->grid)};
        return FC_OK;
    });
}

fc_status fc_derivative_op(const fc_grid* grid, int axis, int order, fc_linop** out) {
    return guarded([&]() {
        if (!grid || !out) return set_error(FC_ERR_INVALID_ARGUMENT, "fc_derivative_op");
        *out = new fc_linop{derivative_op(grid->grid, axis, order)};
        return FC_OK;
    });
}

fc_status fc_multiplication_op(const fc_grid* grid, const char* expr, fc_linop** out) {
    return guarded([&]() {
        if (!grid || !expr || !out) return set_error(FC_ERR_INVALID_ARGUMENT, "fc_multiplication_op");
        const Expr e = Expr::parse(expr, {"x"});
        *out = new fc_linop{multiplication_op(
            grid->grid, [e](const Point& p) { return Complex(e.eval1(p[0]), 0.0); })};
        return FC_OK;
    });
}

void fc_linop_destroy(fc_linop* op) { delete op; }

int64_t fc_linop_rows(const fc_linop* op) { return op ? op->op.rows() : 0; }

int64_t fc_linop_cols(const fc_linop* op) { return op ? op->op.cols() : 0; }

fc_status fc_linop_scale(fc_linop* op, double re, double im) {
    return guarded([&]() {
        if (!op) return set_error(FC_ERR_INVALID_ARGUMENT, "fc_linop_scale");
        op->op.mat *= Complex(re, im);
        return FC_OK;
    });
}

fc_status fc_linop_apply(const fc_linop* op, const double* in_re, const double* in_im,
                         double* out_re, double* out_im) {
    return guarded([&]() {
        if (!op || !in_re || !out_re) return set_error(FC_ERR_INVALID_ARGUMENT, "fc_linop_apply");
        const Vec v = op->op.mat * to_vec(in_re, in_im, op->op.cols());
        from_vec(v, out_re, out_im);
        return FC_OK;
    });
}

fc_status fc_space_l2(const fc_grid* grid, fc_space** out) {
    return guarded([&]() {
        if (!grid || !out) return set_error(FC_ERR_INVALID_ARGUMENT, "fc_space_l2");
        *out = new fc_space{CoordinateSpace::l2(grid->grid)};
        return FC_OK;
    });
}

fc_status fc_space_from_kernel(const fc_kernel* kernel, const fc_grid* grid, int side,
                               fc_space** out) {
    return guarded([&]() {
        if (!kernel || !grid || !out)
            return set_error(FC_ERR_INVALID_ARGUMENT, "fc_space_from_kernel");
        *out = new fc_space{CoordinateSpace::from_kernel(
            kernel->kernel, grid->grid, side == 0 ? Side::primal : Side::dual)};
        return FC_OK;
    });
}

fc_status fc_space_from_transform(const fc_linop* rho, fc_space** out) {
    return guarded([&]() {
        if (!rho || !out) return set_error(FC_ERR_INVALID_ARGUMENT, "fc_space_from_transform");
        *out = new fc_space{CoordinateSpace::from_transform(rho->op)};
        return FC_OK;
    });
}

void fc_space_destroy(fc_space* space) { delete space; }

fc_status fc_space_inner(const fc_space* space, const double* f_re, const double* f_im,
                         const double* g_re, const double* g_im, double* out_re, double* out_im) {
    return guarded([&]() {
        if (!space || !f_re || !g_re || !out_re)
            return set_error(FC_ERR_INVALID_ARGUMENT, "fc_space_inner");
        const Eigen::Index n = space->space.grid()->size();
        SampledFunction f{space->space.grid(), to_vec(f_re, f_im, n), space->space.side()};
        SampledFunction g{space->space.grid(), to_vec(g_re, g_im, n), space->space.side()};
        const Complex v = space->space.inner(f, g);
        *out_re = v.real();
        if (out_im) *out_im = v.imag();
        return FC_OK;
    });
}

fc_status fc_space_condition(const fc_space* space, double* out) {
    return guarded([&]() {
        if (!space || !out) return set_error(FC_ERR_INVALID_ARGUMENT, "fc_space_condition");
        *out = space->space.condition_report();
        return FC_OK;
    });
}

fc_status fc_generalized_eigs(const fc_linop* op, const fc_space* space, double* lambda_re,
                              double* lambda_im, double* residual) {
    return guarded([&]() {
        if (!op || !space || !lambda_re)
            return set_error(FC_ERR_INVALID_ARGUMENT, "fc_generalized_eigs");
        const auto pairs = generalized_eigs(op->op, space->space);
        for (size_t i = 0; i < pairs.size(); ++i) {
            lambda_re[i] = pairs[i].lambda.real();
            if (lambda_im) lambda_im[i] = pairs[i].lambda.imag();
            if (residual) residual[i] = pairs[i].residual;
        }
        return FC_OK;
    });
}

fc_status fc_proper_basis(const fc_linop* op, const fc_space* space, double* lambda,
                          double* diag_residual, double* metric_offdiag, double* completeness) {
    return guarded([&]() {
        if (!op || !space) return set_error(FC_ERR_INVALID_ARGUMENT, "fc_proper_basis");
        const ProperBasisResult pb = proper_basis(op->op, space->space);
        if (lambda)
            for (Eigen::Index i = 0; i < pb.lambda.values.size(); ++i)
                lambda[i] = pb.lambda.values[i].real();
        if (diag_residual) *diag_residual = pb.diag_residual;
        if (completeness) *completeness = pb.completeness;
        if (metric_offdiag)
            *metric_offdiag = verify_proper_basis_orthogonality(pb, space->space).offdiag_mass;
        return FC_OK;
    });
}

fc_status fc_transform_check(const char* a_expr, const char* b_expr, const char* g_expr,
                             const char* target, const fc_grid* grid,
                             fc_transform_check_result* out) {
    return guarded([&]() {
        if (!a_expr || !b_expr || !g_expr || !target || !grid || !out)
            return set_error(FC_ERR_INVALID_ARGUMENT, "fc_transform_check");
        const Expr ea = Expr::parse(a_expr, {"x"});
        const Expr eb = Expr::parse(b_expr, {"y"});
        const Expr eg = Expr::parse(g_expr, {"y"});
        const std::string tgt = target;
        const FirstOrderTarget t = tgt == "derivative" ? FirstOrderTarget::derivative
                                                       : FirstOrderTarget::multiplication;
        const GridPtr& g = grid->grid;

        auto af = [ea](double x) { return ea.eval1(x); };
        auto bf = [eb](double y) { return eb.eval1(y); };
        auto gf = [eg](double y) { return eg.eval1(y); };
        const Kernel omega = solve_first_order_transform(af, bf, gf, g, t);

        const Mat om = assemble(omega, g).mat;
        const Mat d = derivative_op(g).mat;
        Vec av(g->size()), bv(g->size());
        for (Eigen::Index i = 0; i < g->size(); ++i) {
            av[i] = af(g->node(i)[0]);
            bv[i] = bf(g->node(i)[0]);
        }
        const Mat ad = av.asDiagonal() * d;
        const Mat target_mat =
            t == FirstOrderTarget::derivative ? Mat(bv.asDiagonal() * d) : Mat(bv.asDiagonal());

        // smooth test functions vanishing at the ends; the Laplace-type
        // derivative-target kernels get the bank from their own analytic class
        std::vector<Vec> bank;
        if (t == FirstOrderTarget::derivative) {
            bank = exp_class_test_bank(g);
        } else {
            const Axis& ax = g->axes()[0];
            for (int j = 1; j <= 6; ++j) {
                Vec psi(g->size());
                for (Eigen::Index i = 0; i < g->size(); ++i)
                    psi[i] = std::sin(j * kPi * (g->node(i)[0] - ax.lo) / (ax.hi - ax.lo));
                bank.push_back(psi);
            }
        }
        const ConjugationReport rep = conjugation_residuals(om, ad, target_mat, bank);
        if (t == FirstOrderTarget::multiplication) {
            // (aD)ω = ωb is a pointwise kernel identity: operator-norm residual
            const RVec& w = g->weights();
            out->solve_residual =
                operator_norm(Mat(ad * om - om * target_mat), w, w) / operator_norm(om, w, w);
        } else {
            // the derivative target holds against boundary-vanishing test
            // functions (integration by parts), so the bank residual is the gate
            out->solve_residual = rep.forward_residual;
        }
        out->conjugation_residual = rep.conjugation_residual;
        out->forward_residual = rep.forward_residual;
        return FC_OK;
    });
}

fc_status fc_embed_run(const fc_kernel* kernel, const char* const* path_exprs, int space_dim,
                       double t_lo, double t_hi, int steps, int periodic, double* out_t,
                       double* out_a, double* out_q) {
    return guarded([&]() {
        if (!kernel || !path_exprs || space_dim < 1 || space_dim > 3 || !out_t || !out_a || !out_q)
            return set_error(FC_ERR_INVALID_ARGUMENT, "fc_embed_run");
        const GridPtr tg = make_grid_1d(t_lo, t_hi, steps, periodic != 0);
        std::vector<std::function<double(double)>> comps;
        for (int d = 0; d < space_dim; ++d) {
            const Expr e = Expr::parse(path_exprs[d], {"t"});
            comps.push_back([e](double t) { return e.eval1(t); });
        }
        const DeltaPath path = make_path(tg, comps);
        const RVec q = path_quadratic_form(kernel->kernel, path);
        for (Eigen::Index i = 0; i < tg->size(); ++i) {
            out_t[i] = tg->node(i)[0];
            for (int d = 0; d < space_dim; ++d)
                out_a[i * space_dim + d] = path.components[static_cast<size_t>(d)][i];
            out_q[i] = q[i];
        }
        return FC_OK;
    });
}

namespace {

fc_status geodesic_run_impl(const Mat& a, const Vec& phi0, double tau_end, int steps,
                            double* out_tau, double* out_norm_drift, double* out_tangency,
                            double* out_residual, double* out_flow_gap) {
    const ProjectiveMetric metric = ProjectiveMetric::from_operator(a);
    const SchrodingerFlow flow(a, phi0);
    GeodesicState s0{phi0, Complex(0.0, -1.0) * (a * phi0), 0.0};
    const auto path = geodesic_integrate(s0, metric, tau_end, steps);
    for (size_t i = 0; i < path.size(); ++i) {
        const GeodesicState& st = path[i];
        const FlowState fs = flow.at(st.tau);
        out_tau[i] = st.tau;
        out_norm_drift[i] = st.phi.norm() - 1.0;
        out_tangency[i] = (st.phi.adjoint() * st.phi_dot)(0, 0).real();
        // geodesic-equation residual of the exact flow at this τ
        const Vec gamma = christoffel_contract(metric, fs.phi, fs.dphi, fs.dphi);
        out_residual[i] = (fs.d2phi + gamma).norm();
        out_flow_gap[i] = (st.phi - fs.phi).norm();
    }
    return FC_OK;
}

}  // namespace

fc_status fc_geodesic_run(int n, uint64_t seed, double tau_end, int steps, double* out_tau,
                          double* out_norm_drift, double* out_tangency, double* out_residual,
                          double* out_flow_gap) {
    return guarded([&]() {
        if (n < 2 || n > 64 || !out_tau || !out_norm_drift || !out_tangency || !out_residual ||
            !out_flow_gap)
            return set_error(FC_ERR_INVALID_ARGUMENT, "fc_geodesic_run");
        Rng rng(seed);
        const Mat a = rng.hermitian_invertible(n);
        const Vec phi0 = rng.unit_vector(n);
        return geodesic_run_impl(a, phi0, tau_end, steps, out_tau, out_norm_drift, out_tangency,
                                 out_residual, out_flow_gap);
    });
}

fc_status fc_geodesic_run_explicit(int n, const double* a_re, const double* a_im,
                                   const double* phi0_re, const double* phi0_im, double tau_end,
                                   int steps, double* out_tau, double* out_norm_drift,
                                   double* out_tangency, double* out_residual,
                                   double* out_flow_gap) {
    return guarded([&]() {
        if (n < 2 || n > 64 || !a_re || !out_tau || !out_norm_drift || !out_tangency ||
            !out_residual || !out_flow_gap)
            return set_error(FC_ERR_INVALID_ARGUMENT, "fc_geodesic_run_explicit");
        Mat a(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                a(r, c) = Complex(a_re[r * n + c], a_im ? a_im[r * n + c] : 0.0);
        Vec phi0;
        if (phi0_re != nullptr) {
            phi0 = to_vec(phi0_re, phi0_im, n);
            if (!(phi0.norm() > 0))
                return set_error(FC_ERR_INVALID_ARGUMENT, "fc_geodesic_run_explicit: zero phi0");
            phi0 /= phi0.norm();
        } else {
            phi0 = Vec::Zero(n);
            phi0[0] = 1.0;
        }
        return geodesic_run_impl(a, phi0, tau_end, steps, out_tau, out_norm_drift, out_tangency,
                                 out_residual, out_flow_gap);
    });
}

fc_status fc_acceptance_run(uint64_t seed, fc_criterion_result* results, int* count) {
    return guarded([&]() {
        if (count == nullptr) return set_error(FC_ERR_INVALID_ARGUMENT, "fc_acceptance_run");
        if (results == nullptr) {
            *count = 12;
            return FC_OK;
        }
        const auto rs = run_acceptance(seed);
        const int n = std::min<int>(*count, static_cast<int>(rs.size()));
        for (int i = 0; i < n; ++i) {
            std::snprintf(results[i].name, sizeof(results[i].name), "%s", rs[static_cast<size_t>(i)].name.c_str());
            std::snprintf(results[i].detail, sizeof(results[i].detail), "%s",
                          rs[static_cast<size_t>(i)].detail.c_str());
            results[i].passed = rs[static_cast<size_t>(i)].passed ? 1 : 0;
            results[i].max_residual = rs[static_cast<size_t>(i)].max_residual;
            results[i].tolerance = rs[static_cast<size_t>(i)].tolerance;
        }
        *count = static_cast<int>(rs.size());
        return FC_OK;
    });
}

}  // extern "C"
