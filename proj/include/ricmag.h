/* SPDX-License-Identifier: Apache-2.0
 * Copyright (c) 2026 ricmag authors
 *
 * ricmag -- structure-preserving solvers for linear-quadratic optimal
 * control. C API of the shared library: opaque handles, status codes, and
 * a scenario driver for the bundled benchmarks. All matrices cross the
 * boundary as row-major double arrays.
 *
 * Unless stated otherwise, functions returning ricmag_status leave their
 * outputs untouched on failure; ricmag_last_error() holds a thread-local
 * description of the most recent failure on the calling thread.
 */

#ifndef RICMAG_H
#define RICMAG_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ricmag_status {
    RICMAG_OK = 0,
    RICMAG_ERR_INVALID_ARGUMENT = 1,
    RICMAG_ERR_SINGULAR = 2,        /* matrix singular to working tolerance */
    RICMAG_ERR_NO_CONVERGENCE = 3,  /* iteration budget exhausted, values finite */
    RICMAG_ERR_DIVERGED = 4,        /* non-finite values encountered */
    RICMAG_ERR_ARE_FAILURE = 5,     /* no stabilizing algebraic Riccati solution */
    RICMAG_ERR_BAD_CONFIG = 6,
    RICMAG_ERR_IO = 7,
    RICMAG_ERR_INTERNAL = 8
} ricmag_status;

typedef enum ricmag_integrator {
    RICMAG_MAGNUS2_MIDPOINT = 0,
    RICMAG_MAGNUS2_TRAPEZOIDAL = 1,
    RICMAG_MAGNUS4_GAUSS = 2,
    RICMAG_MAGNUS4_SIMPSON = 3,
    RICMAG_EULER_EXPLICIT = 4,
    RICMAG_EULER_IMPLICIT = 5,
    RICMAG_RK_IMPLICIT_MIDPOINT = 6,
    RICMAG_RK_TRAPEZOIDAL = 7
} ricmag_integrator;

const char* ricmag_version(void);
const char* ricmag_status_string(ricmag_status status);
const char* ricmag_last_error(void);

/* Name <-> enum mapping ("magnus2-trapezoidal", "euler-implicit", ...).
 * Returns RICMAG_ERR_INVALID_ARGUMENT for unknown names. */
ricmag_status ricmag_integrator_from_name(const char* name, ricmag_integrator* out);
const char* ricmag_integrator_name(ricmag_integrator family);

/* 1 when every quadrature weight of the family is positive (the positive
 * definiteness of sampled weight matrices survives any step size), 0 when
 * a negative weight makes that conditional on the step size. */
ricmag_status ricmag_integrator_preserves_positivity(ricmag_integrator family, int* out);

/* ---- dense kernels ---------------------------------------------------- */

/* out = exp(m), both n*n row-major. */
ricmag_status ricmag_expm(int n, const double* m, double* out);

/* Stabilizing symmetric psd solution of 0 = -PA - A'P + PSP - Q.
 * residual_out may be NULL. */
ricmag_status ricmag_solve_are(int n, const double* a, const double* s, const double* q,
                               double* p_out, double* residual_out);

/* ---- linear time-varying problems ------------------------------------- */

/* Fills out (row-major, rows*cols per the owning dimension) with the value
 * of a coefficient at time t. Must be pure. */
typedef void (*ricmag_matrix_fn)(double t, double* out, void* user);

typedef struct ricmag_problem ricmag_problem;

/* Constant-coefficient problem; a is n*n, b is n*m, q is n*n, r is m*m. */
ricmag_problem* ricmag_problem_constant(int n, int m, const double* a, const double* b,
                                        const double* q, const double* r);

/* Time-varying problem from callbacks (a: n*n, b: n*m, q: n*n, r: m*m). */
ricmag_problem* ricmag_problem_callbacks(int n, int m, ricmag_matrix_fn a, ricmag_matrix_fn b,
                                         ricmag_matrix_fn q, ricmag_matrix_fn r, void* user);

void ricmag_problem_free(ricmag_problem* prob);

/* ---- Riccati solves ---------------------------------------------------- */

typedef struct ricmag_riccati_solution ricmag_riccati_solution;

/* Solves the Riccati equation backward from tf to t0 on `steps` uniform
 * steps. Magnus families go through the linear V/W embedding; the
 * Euler/RK baselines step the quadratic field directly. p_final is n*n
 * row-major or NULL for the zero final condition. */
ricmag_status ricmag_riccati_solve(const ricmag_problem* prob, double t0, double tf, int steps,
                                   ricmag_integrator family, const double* p_final,
                                   ricmag_riccati_solution** out);

int ricmag_riccati_node_count(const ricmag_riccati_solution* sol);
ricmag_status ricmag_riccati_p_at(const ricmag_riccati_solution* sol, int node, double* out);
double ricmag_riccati_min_eig_at(const ricmag_riccati_solution* sol, int node);
double ricmag_riccati_min_eig_global(const ricmag_riccati_solution* sol);
/* cond_2(W) at a node (NaN for the direct baselines). */
double ricmag_riccati_w_condition_at(const ricmag_riccati_solution* sol, int node);
void ricmag_riccati_free(ricmag_riccati_solution* sol);

/* ---- closed-loop state propagation ------------------------------------- */

typedef struct ricmag_trajectory ricmag_trajectory;

/* Integrates x' = (A - S P) x forward from x0 (length n) on the Riccati
 * grid and fills in controls u = -R^{-1} B' P x and the trapezoidal cost. */
ricmag_status ricmag_state_forward(const ricmag_problem* prob,
                                   const ricmag_riccati_solution* rsol, const double* x0,
                                   ricmag_integrator family, ricmag_trajectory** out);

int ricmag_trajectory_node_count(const ricmag_trajectory* traj);
int ricmag_trajectory_state_dim(const ricmag_trajectory* traj);
int ricmag_trajectory_control_dim(const ricmag_trajectory* traj);
double ricmag_trajectory_time_at(const ricmag_trajectory* traj, int node);
ricmag_status ricmag_trajectory_state_at(const ricmag_trajectory* traj, int node, double* out);
ricmag_status ricmag_trajectory_control_at(const ricmag_trajectory* traj, int node, double* out);
double ricmag_trajectory_cost(const ricmag_trajectory* traj);
void ricmag_trajectory_free(ricmag_trajectory* traj);

/* ---- scenario driver ---------------------------------------------------- */

typedef struct ricmag_run_summary {
    char scheme_label[32];
    double cost; /* +inf when diverged */
    int iterations;
    int converged;
    int diverged;
    double min_eig_p_global;
    double wall_time_seconds;
    char csv_path[1024];
} ricmag_run_summary;

/* Runs a JSON scenario config (see README for the schema), writes the
 * trajectory CSV, fills the summary. output_override (may be NULL)
 * replaces the config's output path. A diverged run reports
 * RICMAG_ERR_DIVERGED but still fills the summary and writes the CSV of
 * the last finite iterate; an unconverged run reports
 * RICMAG_ERR_NO_CONVERGENCE the same way. */
ricmag_status ricmag_run_config_file(const char* path, const char* output_override,
                                     ricmag_run_summary* out);
ricmag_status ricmag_run_config_text(const char* json_text, const char* output_override,
                                     ricmag_run_summary* out);

/* Runs the stock comparison schemes (S1, S2, W1, W2, W3, T1, T2, T3) on
 * the quadrotor benchmark. rows must hold max_rows entries; *n_rows gets
 * the count. out_dir may be NULL (no CSV artifacts). The formatted table
 * (with reference optima) is returned by ricmag_format_benchmark_table
 * into a caller buffer. */
ricmag_status ricmag_run_benchmark_table(const char* out_dir, ricmag_run_summary* rows,
                                         int max_rows, int* n_rows);
ricmag_status ricmag_format_benchmark_table(const ricmag_run_summary* rows, int n_rows,
                                            char* buffer, int buffer_size);

/* Writes scalar_demo_p.csv and scalar_demo_x.csv under out_dir. */
ricmag_status ricmag_run_scalar_demo(const char* out_dir);

typedef struct ricmag_convergence_row {
    double h;
    double error;
    double observed_order; /* NaN on the first row */
} ricmag_convergence_row;

/* Error at t = 0 on the smooth scalar problem against a fine-grid
 * reference, one row per step size. */
ricmag_status ricmag_run_convergence(ricmag_integrator family, const double* h_list, int n_h,
                                     ricmag_convergence_row* rows_out);

#ifdef __cplusplus
}
#endif

#endif /* RICMAG_H */
