/* C API for the funcoord shared library.
 *
 * Objects are opaque handles created and destroyed through this interface;
 * every entry point returns an fc_status, with a thread-local message
 * available from fc_last_error(). Complex data crosses the boundary as
 * separate re/im arrays. All functions are deterministic in their inputs.
 */
#ifndef FUNCOORD_H
#define FUNCOORD_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fc_status {
    FC_OK = 0,
    FC_ERR_INVALID_ARGUMENT = 1,
    FC_ERR_SINGULAR = 2,
    FC_ERR_INDEFINITE = 3,
    FC_ERR_RESOLUTION = 4,
    FC_ERR_SOLVER = 5,
    FC_ERR_PARSE = 6,
    FC_ERR_INTERNAL = 7
} fc_status;

/* Message for the most recent failure on this thread. */
const char* fc_last_error(void);

/* ------------------------------------------------------------------ grids */

typedef struct fc_grid fc_grid;

typedef struct fc_axis {
    double lo;
    double hi;
    int points;
    int periodic; /* 0 or 1 */
} fc_axis;

fc_status fc_grid_create(const fc_axis* axes, const int* signature, int dim, fc_grid** out);
void fc_grid_destroy(fc_grid* grid);
int64_t fc_grid_size(const fc_grid* grid);
int fc_grid_dim(const fc_grid* grid);
/* nodes: size*dim doubles, node-major; weights: size doubles. */
fc_status fc_grid_nodes(const fc_grid* grid, double* nodes);
fc_status fc_grid_weights(const fc_grid* grid, double* weights);

/* ---------------------------------------------------------------- kernels */

typedef struct fc_kernel fc_kernel;

/* family: gauss_rho | gauss_metric | damped_gauss | fourier | inv_fourier |
 *         dirac | plane_wave_weight | minkowski_gauss
 * signature (length dim) is only read by minkowski_gauss; may be NULL. */
fc_status fc_kernel_create(const char* family, double scale, const int* signature, int dim,
                           fc_kernel** out);
void fc_kernel_destroy(fc_kernel* kernel);
fc_status fc_kernel_eval(const fc_kernel* kernel, const double* x, const double* y, int dim,
                         double* re, double* im);
/* out: dim*dim doubles, row-major. */
fc_status fc_kernel_mixed_hessian(const fc_kernel* kernel, const double* a, int dim, double* out);
/* points: m*dim doubles, node-major. */
fc_status fc_gram_closed_form(const fc_kernel* kernel, const double* lambdas, const double* points,
                              int m, int dim, double* out);

/* -------------------------------------------------------------- operators */

typedef struct fc_linop fc_linop;

fc_status fc_assemble(const fc_kernel* kernel, const fc_grid* grid_in, const fc_grid* grid_out,
                      fc_linop** out);
fc_status fc_derivative_op(const fc_grid* grid, int axis, int order, fc_linop** out);
/* multiplier: expression in x (1-D grids). */
fc_status fc_multiplication_op(const fc_grid* grid, const char* expr, fc_linop** out);
void fc_linop_destroy(fc_linop* op);
int64_t fc_linop_rows(const fc_linop* op);
int64_t fc_linop_cols(const fc_linop* op);
/* In-place complex scalar multiple of the operator. */
fc_status fc_linop_scale(fc_linop* op, double re, double im);
fc_status fc_linop_apply(const fc_linop* op, const double* in_re, const double* in_im,
                         double* out_re, double* out_im);

/* ----------------------------------------------------------------- spaces */

typedef struct fc_space fc_space;

fc_status fc_space_l2(const fc_grid* grid, fc_space** out);
/* side: 0 primal, 1 dual. */
fc_status fc_space_from_kernel(const fc_kernel* kernel, const fc_grid* grid, int side,
                               fc_space** out);
fc_status fc_space_from_transform(const fc_linop* rho, fc_space** out);
void fc_space_destroy(fc_space* space);
fc_status fc_space_inner(const fc_space* space, const double* f_re, const double* f_im,
                         const double* g_re, const double* g_im, double* out_re, double* out_im);
fc_status fc_space_condition(const fc_space* space, double* out);

/* --------------------------------------------------------------- spectral */

/* Generalized eigenpairs of op in the space; arrays of length
 * fc_linop_rows(op): eigenvalues (re, im) sorted by (re, im) and equation
 * residuals. */
fc_status fc_generalized_eigs(const fc_linop* op, const fc_space* space, double* lambda_re,
                              double* lambda_im, double* residual);
/* Proper basis of a space-Hermitian operator: sorted eigenvalue function plus
 * diagnostics. */
fc_status fc_proper_basis(const fc_linop* op, const fc_space* space, double* lambda,
                          double* diag_residual, double* metric_offdiag, double* completeness);

/* ------------------------------------------------------------- transforms */

typedef struct fc_transform_check_result {
    double solve_residual;       /* ‖(aD)Ω − ΩB‖/‖Ω‖ for the solved kernel */
    double conjugation_residual; /* bank residual of ω⁻¹(aD)ω against the target */
    double forward_residual;     /* intertwining residual on the bank */
} fc_transform_check_result;

/* a, b, g: expressions in x (a) and y (b, g); target: "multiplication" or
 * "derivative". */
fc_status fc_transform_check(const char* a_expr, const char* b_expr, const char* g_expr,
                             const char* target, const fc_grid* grid,
                             fc_transform_check_result* out);

/* ----------------------------------------------------------------- embed */

/* Delta-embedding run: path components are expressions in t (space_dim of
 * them); out_t and out_q hold steps values, out_a holds steps*space_dim. */
fc_status fc_embed_run(const fc_kernel* kernel, const char* const* path_exprs, int space_dim,
                       double t_lo, double t_hi, int steps, int periodic, double* out_t,
                       double* out_a, double* out_q);

/* -------------------------------------------------------------- geodesics */

/* Geodesic integration for a seeded random Hermitian invertible A of size n
 * with K = (AA*)⁻¹, started at (φ0, −iAφ0) with a seeded random unit φ0.
 * Arrays hold steps+1 entries. */
fc_status fc_geodesic_run(int n, uint64_t seed, double tau_end, int steps, double* out_tau,
                          double* out_norm_drift, double* out_tangency, double* out_residual,
                          double* out_flow_gap);

/* Same with an explicit Hermitian generator (n*n row-major re/im; im may be
 * NULL) and start vector (normalized internally; NULL for the first basis
 * vector). */
fc_status fc_geodesic_run_explicit(int n, const double* a_re, const double* a_im,
                                   const double* phi0_re, const double* phi0_im, double tau_end,
                                   int steps, double* out_tau, double* out_norm_drift,
                                   double* out_tangency, double* out_residual,
                                   double* out_flow_gap);

/* ------------------------------------------------------------- acceptance */

typedef struct fc_criterion_result {
    char name[64];
    int passed;
    double max_residual;
    double tolerance;
    char detail[192];
} fc_criterion_result;

/* results may be NULL to query the count. */
fc_status fc_acceptance_run(uint64_t seed, fc_criterion_result* results, int* count);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FUNCOORD_H */
