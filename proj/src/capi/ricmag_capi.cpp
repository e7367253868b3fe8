// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors
//
// extern-C surface over the core library. Exceptions are caught at this
// boundary and mapped to status codes; the message lands in a thread-local
// buffer readable through ricmag_last_error().

#include "ricmag.h"

#include <cstring>
#include <limits>
#include <string>

#include "core/scenario.hpp"

using namespace ricmag;

namespace {

thread_local std::string g_last_error;

ricmag_status status_of(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return RICMAG_ERR_INVALID_ARGUMENT;
    case ErrorCode::Singular: return RICMAG_ERR_SINGULAR;
    case ErrorCode::NoConvergence: return RICMAG_ERR_NO_CONVERGENCE;
    case ErrorCode::Diverged: return RICMAG_ERR_DIVERGED;
    case ErrorCode::AreFailure: return RICMAG_ERR_ARE_FAILURE;
    case ErrorCode::BadConfig: return RICMAG_ERR_BAD_CONFIG;
    case ErrorCode::Io: return RICMAG_ERR_IO;
    case ErrorCode::Internal: return RICMAG_ERR_INTERNAL;
    }
    return RICMAG_ERR_INTERNAL;
}

template <typename Fn>
ricmag_status guarded(Fn&& fn)
{
    try {
        fn();
        return RICMAG_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return RICMAG_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return RICMAG_ERR_INTERNAL;
    }
}

ricmag_status invalid(const char* message)
{
    g_last_error = message;
    return RICMAG_ERR_INVALID_ARGUMENT;
}

IntegratorFamily family_of(ricmag_integrator family)
{
    switch (family) {
    case RICMAG_MAGNUS2_MIDPOINT: return IntegratorFamily::Magnus2Midpoint;
    case RICMAG_MAGNUS2_TRAPEZOIDAL: return IntegratorFamily::Magnus2Trapezoidal;
    case RICMAG_MAGNUS4_GAUSS: return IntegratorFamily::Magnus4Gauss;
    case RICMAG_MAGNUS4_SIMPSON: return IntegratorFamily::Magnus4Simpson;
    case RICMAG_EULER_EXPLICIT: return IntegratorFamily::EulerExplicit;
    case RICMAG_EULER_IMPLICIT: return IntegratorFamily::EulerImplicit;
    case RICMAG_RK_IMPLICIT_MIDPOINT: return IntegratorFamily::RkImplicitMidpoint;
    case RICMAG_RK_TRAPEZOIDAL: return IntegratorFamily::RkTrapezoidal;
    }
    fail(ErrorCode::InvalidArgument, "unknown integrator family enum value");
}

ricmag_integrator enum_of(IntegratorFamily family)
{
    switch (family) {
    case IntegratorFamily::Magnus2Midpoint: return RICMAG_MAGNUS2_MIDPOINT;
    case IntegratorFamily::Magnus2Trapezoidal: return RICMAG_MAGNUS2_TRAPEZOIDAL;
    case IntegratorFamily::Magnus4Gauss: return RICMAG_MAGNUS4_GAUSS;
    case IntegratorFamily::Magnus4Simpson: return RICMAG_MAGNUS4_SIMPSON;
    case IntegratorFamily::EulerExplicit: return RICMAG_EULER_EXPLICIT;
    case IntegratorFamily::EulerImplicit: return RICMAG_EULER_IMPLICIT;
    case IntegratorFamily::RkImplicitMidpoint: return RICMAG_RK_IMPLICIT_MIDPOINT;
    case IntegratorFamily::RkTrapezoidal: return RICMAG_RK_TRAPEZOIDAL;
    }
    return RICMAG_MAGNUS2_TRAPEZOIDAL;
}

Matrix matrix_from_row_major(int rows, int cols, const double* data)
{
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(data, rows, cols);
}

void matrix_to_row_major(const Matrix& m, double* out)
{
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        out, m.rows(), m.cols()) = m;
}

void copy_string(const std::string& text, char* out, size_t capacity)
{
    const size_t n = std::min(text.size(), capacity - 1);
    std::memcpy(out, text.data(), n);
    out[n] = '\0';
}

void summary_to_c(const RunSummary& summary, ricmag_run_summary* out)
{
    copy_string(summary.scheme_label, out->scheme_label, sizeof(out->scheme_label));
    out->cost = summary.cost;
    out->iterations = summary.iterations;
    out->converged = summary.converged ? 1 : 0;
    out->diverged = summary.diverged ? 1 : 0;
    out->min_eig_p_global = summary.min_eig_p_global;
    out->wall_time_seconds = summary.wall_time_seconds;
    copy_string(summary.csv_path, out->csv_path, sizeof(out->csv_path));
}

RunSummary summary_from_c(const ricmag_run_summary& in)
{
    RunSummary summary;
    summary.scheme_label = in.scheme_label;
    summary.cost = in.cost;
    summary.iterations = in.iterations;
    summary.converged = in.converged != 0;
    summary.diverged = in.diverged != 0;
    summary.min_eig_p_global = in.min_eig_p_global;
    summary.wall_time_seconds = in.wall_time_seconds;
    summary.csv_path = in.csv_path;
    return summary;
}

ricmag_status finish_run(const RunSummary& summary, ricmag_run_summary* out)
{
    summary_to_c(summary, out);
    if (summary.diverged) {
        g_last_error = "run diverged (non-finite values); cost is infinite";
        return RICMAG_ERR_DIVERGED;
    }
    if (!summary.converged) {
        g_last_error = "run did not converge within max_iter";
        return RICMAG_ERR_NO_CONVERGENCE;
    }
    return RICMAG_OK;
}

} // namespace

struct ricmag_problem {
    LTVProblem prob;
};

struct ricmag_riccati_solution {
    RiccatiSolution sol;
};

struct ricmag_trajectory {
    Trajectory traj;
};

extern "C" {

const char* ricmag_version(void)
{
    return "0.1.0";
}

const char* ricmag_status_string(ricmag_status status)
{
    switch (status) {
    case RICMAG_OK: return "ok";
    case RICMAG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RICMAG_ERR_SINGULAR: return "singular matrix";
    case RICMAG_ERR_NO_CONVERGENCE: return "no convergence";
    case RICMAG_ERR_DIVERGED: return "diverged";
    case RICMAG_ERR_ARE_FAILURE: return "algebraic Riccati failure";
    case RICMAG_ERR_BAD_CONFIG: return "bad config";
    case RICMAG_ERR_IO: return "io error";
    case RICMAG_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* ricmag_last_error(void)
{
    return g_last_error.c_str();
}

ricmag_status ricmag_integrator_from_name(const char* name, ricmag_integrator* out)
{
    if (name == nullptr || out == nullptr)
        return invalid("ricmag_integrator_from_name: null argument");
    const auto family = IntegratorSpec::parse(name);
    if (!family) {
        g_last_error = std::string("unknown integrator family: ") + name;
        return RICMAG_ERR_INVALID_ARGUMENT;
    }
    *out = enum_of(*family);
    return RICMAG_OK;
}

const char* ricmag_integrator_name(ricmag_integrator family)
{
    switch (family) {
    case RICMAG_MAGNUS2_MIDPOINT:
    case RICMAG_MAGNUS2_TRAPEZOIDAL:
    case RICMAG_MAGNUS4_GAUSS:
    case RICMAG_MAGNUS4_SIMPSON:
    case RICMAG_EULER_EXPLICIT:
    case RICMAG_EULER_IMPLICIT:
    case RICMAG_RK_IMPLICIT_MIDPOINT:
    case RICMAG_RK_TRAPEZOIDAL:
        return integrator_name(family_of(family)).data();
    }
    return "unknown";
}

ricmag_status ricmag_integrator_preserves_positivity(ricmag_integrator family, int* out)
{
    if (out == nullptr)
        return invalid("ricmag_integrator_preserves_positivity: null output");
    return guarded([&] {
        const auto cls = quadrature_positivity_class(IntegratorSpec::of(family_of(family)));
        *out = cls == PositivityClass::Unconditional ? 1 : 0;
    });
}

ricmag_status ricmag_expm(int n, const double* m, double* out)
{
    if (n < 1 || m == nullptr || out == nullptr)
        return invalid("ricmag_expm: need n >= 1 and non-null buffers");
    return guarded([&] { matrix_to_row_major(expm(matrix_from_row_major(n, n, m)), out); });
}

ricmag_status ricmag_solve_are(int n, const double* a, const double* s, const double* q,
                               double* p_out, double* residual_out)
{
    if (n < 1 || a == nullptr || s == nullptr || q == nullptr || p_out == nullptr)
        return invalid("ricmag_solve_are: need n >= 1 and non-null buffers");
    return guarded([&] {
        const Matrix am = matrix_from_row_major(n, n, a);
        const Matrix sm = matrix_from_row_major(n, n, s);
        const Matrix qm = matrix_from_row_major(n, n, q);
        const Matrix p = solve_are(am, sm, qm);
        matrix_to_row_major(p, p_out);
        if (residual_out != nullptr)
            *residual_out =
                (am.transpose() * p + p * am - p * sm * p + qm).norm();
    });
}

ricmag_problem* ricmag_problem_constant(int n, int m, const double* a, const double* b,
                                        const double* q, const double* r)
{
    if (n < 1 || m < 1 || a == nullptr || b == nullptr || q == nullptr || r == nullptr) {
        g_last_error = "ricmag_problem_constant: need n, m >= 1 and non-null buffers";
        return nullptr;
    }
    ricmag_problem* handle = nullptr;
    guarded([&] {
        handle = new ricmag_problem{LTVProblem::constant(
            matrix_from_row_major(n, n, a), matrix_from_row_major(n, m, b),
            matrix_from_row_major(n, n, q), matrix_from_row_major(m, m, r))};
    });
    return handle;
}

ricmag_problem* ricmag_problem_callbacks(int n, int m, ricmag_matrix_fn a, ricmag_matrix_fn b,
                                         ricmag_matrix_fn q, ricmag_matrix_fn r, void* user)
{
    if (n < 1 || m < 1 || a == nullptr || b == nullptr || q == nullptr || r == nullptr) {
        g_last_error = "ricmag_problem_callbacks: need n, m >= 1 and non-null callbacks";
        return nullptr;
    }
    auto wrap = [user](ricmag_matrix_fn fn, int rows, int cols) -> MatrixFn {
        return [fn, user, rows, cols](double t) {
            Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> buffer(rows,
                                                                                          cols);
            fn(t, buffer.data(), user);
            return Matrix(buffer);
        };
    };
    auto* handle = new ricmag_problem;
    handle->prob.state_dim = n;
    handle->prob.control_dim = m;
    handle->prob.a = wrap(a, n, n);
    handle->prob.b = wrap(b, n, m);
    handle->prob.q = wrap(q, n, n);
    handle->prob.r = wrap(r, m, m);
    return handle;
}

void ricmag_problem_free(ricmag_problem* prob)
{
    delete prob;
}

ricmag_status ricmag_riccati_solve(const ricmag_problem* prob, double t0, double tf, int steps,
                                   ricmag_integrator family, const double* p_final,
                                   ricmag_riccati_solution** out)
{
    if (prob == nullptr || out == nullptr)
        return invalid("ricmag_riccati_solve: null problem or output");
    return guarded([&] {
        const TimeGrid grid = TimeGrid::uniform(t0, tf, steps);
        const int n = prob->prob.state_dim;
        const Matrix pf = p_final != nullptr ? matrix_from_row_major(n, n, p_final)
                                             : Matrix(Matrix::Zero(n, n));
        const IntegratorSpec spec = IntegratorSpec::of(family_of(family));
        RiccatiSolution sol = spec.is_magnus()
                                  ? riccati_backward(prob->prob, grid, spec, pf)
                                  : riccati_backward_direct(prob->prob, grid, spec, pf);
        *out = new ricmag_riccati_solution{std::move(sol)};
    });
}

int ricmag_riccati_node_count(const ricmag_riccati_solution* sol)
{
    return sol == nullptr ? 0 : sol->sol.grid.node_count();
}

ricmag_status ricmag_riccati_p_at(const ricmag_riccati_solution* sol, int node, double* out)
{
    if (sol == nullptr || out == nullptr || node < 0 || node >= sol->sol.grid.node_count())
        return invalid("ricmag_riccati_p_at: bad handle or node index");
    matrix_to_row_major(sol->sol.p[node], out);
    return RICMAG_OK;
}

double ricmag_riccati_min_eig_at(const ricmag_riccati_solution* sol, int node)
{
    if (sol == nullptr || node < 0 || node >= sol->sol.grid.node_count())
        return std::numeric_limits<double>::quiet_NaN();
    return sol->sol.min_eigenvalues[node];
}

double ricmag_riccati_min_eig_global(const ricmag_riccati_solution* sol)
{
    if (sol == nullptr)
        return std::numeric_limits<double>::quiet_NaN();
    return sol->sol.min_eigenvalue_global();
}

double ricmag_riccati_w_condition_at(const ricmag_riccati_solution* sol, int node)
{
    if (sol == nullptr || node < 0 || node >= sol->sol.grid.node_count())
        return std::numeric_limits<double>::quiet_NaN();
    return sol->sol.w_condition[node];
}

void ricmag_riccati_free(ricmag_riccati_solution* sol)
{
    delete sol;
}

ricmag_status ricmag_state_forward(const ricmag_problem* prob,
                                   const ricmag_riccati_solution* rsol, const double* x0,
                                   ricmag_integrator family, ricmag_trajectory** out)
{
    if (prob == nullptr || rsol == nullptr || x0 == nullptr || out == nullptr)
        return invalid("ricmag_state_forward: null argument");
    return guarded([&] {
        const Vector x0_vec = Eigen::Map<const Vector>(x0, prob->prob.state_dim);
        Trajectory traj = state_forward(prob->prob, rsol->sol, x0_vec,
                                        IntegratorSpec::of(family_of(family)));
        *out = new ricmag_trajectory{std::move(traj)};
    });
}

int ricmag_trajectory_node_count(const ricmag_trajectory* traj)
{
    return traj == nullptr ? 0 : traj->traj.grid.node_count();
}

int ricmag_trajectory_state_dim(const ricmag_trajectory* traj)
{
    if (traj == nullptr || traj->traj.states.empty())
        return 0;
    return static_cast<int>(traj->traj.states[0].size());
}

int ricmag_trajectory_control_dim(const ricmag_trajectory* traj)
{
    if (traj == nullptr || traj->traj.controls.empty())
        return 0;
    return static_cast<int>(traj->traj.controls[0].size());
}

double ricmag_trajectory_time_at(const ricmag_trajectory* traj, int node)
{
    if (traj == nullptr || node < 0 || node >= traj->traj.grid.node_count())
        return std::numeric_limits<double>::quiet_NaN();
    return traj->traj.grid.node(node);
}

ricmag_status ricmag_trajectory_state_at(const ricmag_trajectory* traj, int node, double* out)
{
    if (traj == nullptr || out == nullptr || node < 0 || node >= traj->traj.grid.node_count())
        return invalid("ricmag_trajectory_state_at: bad handle or node index");
    Eigen::Map<Vector>(out, traj->traj.states[node].size()) = traj->traj.states[node];
    return RICMAG_OK;
}

ricmag_status ricmag_trajectory_control_at(const ricmag_trajectory* traj, int node, double* out)
{
    if (traj == nullptr || out == nullptr || node < 0 || node >= traj->traj.grid.node_count())
        return invalid("ricmag_trajectory_control_at: bad handle or node index");
    Eigen::Map<Vector>(out, traj->traj.controls[node].size()) = traj->traj.controls[node];
    return RICMAG_OK;
}

double ricmag_trajectory_cost(const ricmag_trajectory* traj)
{
    if (traj == nullptr)
        return std::numeric_limits<double>::quiet_NaN();
    return traj->traj.cost;
}

void ricmag_trajectory_free(ricmag_trajectory* traj)
{
    delete traj;
}

ricmag_status ricmag_run_config_file(const char* path, const char* output_override,
                                     ricmag_run_summary* out)
{
    if (path == nullptr || out == nullptr)
        return invalid("ricmag_run_config_file: null path or output");
    RunSummary summary;
    const ricmag_status status = guarded([&] {
        const ScenarioConfig config = ScenarioConfig::from_json_file(path);
        summary = run_scenario(config, output_override != nullptr ? output_override : "");
    });
    if (status != RICMAG_OK)
        return status;
    return finish_run(summary, out);
}

ricmag_status ricmag_run_config_text(const char* json_text, const char* output_override,
                                     ricmag_run_summary* out)
{
    if (json_text == nullptr || out == nullptr)
        return invalid("ricmag_run_config_text: null config or output");
    RunSummary summary;
    const ricmag_status status = guarded([&] {
        const ScenarioConfig config = ScenarioConfig::from_json_text(json_text);
        summary = run_scenario(config, output_override != nullptr ? output_override : "");
    });
    if (status != RICMAG_OK)
        return status;
    return finish_run(summary, out);
}

ricmag_status ricmag_run_benchmark_table(const char* out_dir, ricmag_run_summary* rows,
                                         int max_rows, int* n_rows)
{
    if (rows == nullptr || n_rows == nullptr)
        return invalid("ricmag_run_benchmark_table: null outputs");
    return guarded([&] {
        const std::vector<RunSummary> summaries =
            run_benchmark_table(out_dir != nullptr ? out_dir : "");
        if (static_cast<int>(summaries.size()) > max_rows)
            fail(ErrorCode::InvalidArgument,
                 "ricmag_run_benchmark_table: rows buffer too small (need "
                     + std::to_string(summaries.size()) + ")");
        for (size_t i = 0; i < summaries.size(); ++i)
            summary_to_c(summaries[i], &rows[i]);
        *n_rows = static_cast<int>(summaries.size());
    });
}

ricmag_status ricmag_format_benchmark_table(const ricmag_run_summary* rows, int n_rows,
                                            char* buffer, int buffer_size)
{
    if (rows == nullptr || buffer == nullptr || buffer_size < 1)
        return invalid("ricmag_format_benchmark_table: null buffers");
    return guarded([&] {
        std::vector<RunSummary> summaries;
        summaries.reserve(n_rows);
        for (int i = 0; i < n_rows; ++i)
            summaries.push_back(summary_from_c(rows[i]));
        const std::string text = format_benchmark_table(summaries);
        copy_string(text, buffer, static_cast<size_t>(buffer_size));
    });
}

ricmag_status ricmag_run_scalar_demo(const char* out_dir)
{
    return guarded([&] { run_scalar_demo(out_dir != nullptr ? out_dir : "."); });
}

ricmag_status ricmag_run_convergence(ricmag_integrator family, const double* h_list, int n_h,
                                     ricmag_convergence_row* rows_out)
{
    if (h_list == nullptr || rows_out == nullptr || n_h < 1)
        return invalid("ricmag_run_convergence: need at least one step size");
    return guarded([&] {
        const std::vector<ConvergenceRow> rows =
            run_convergence(family_of(family), std::vector<double>(h_list, h_list + n_h));
        for (size_t i = 0; i < rows.size(); ++i) {
            rows_out[i].h = rows[i].h;
            rows_out[i].error = rows[i].error;
            rows_out[i].observed_order = rows[i].observed_order;
        }
    });
}

} // extern "C"
