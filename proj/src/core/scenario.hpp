// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors
//
// Batch scenario driver behind the CLI: JSON scenario configs, the
// benchmark comparison table, the scalar stiffness demo, and convergence
// studies. All artifacts are plain CSV with full-precision values so runs
// diff cleanly.

#pragma once

#include <iosfwd>
#include <string>

#include "core/models.hpp"

namespace ricmag {

enum class ModelKind { Scalar, Quadrotor, CustomLinear };
enum class Strategy { LqDirect, Sdre, Waveform, Taylor };

std::string_view model_name(ModelKind model);
std::string_view strategy_name(Strategy strategy);

/// One solver run: which model, which linearization strategy, which
/// integrator families for the backward and forward passes. Parsed from a
/// JSON document; unknown keys are ignored, invalid values are rejected.
struct ScenarioConfig {
    ModelKind model = ModelKind::Quadrotor;
    Strategy strategy = Strategy::Taylor;
    IntegratorFamily riccati_integrator = IntegratorFamily::Magnus2Trapezoidal;
    IntegratorFamily state_integrator = IntegratorFamily::Magnus2Trapezoidal;
    TimeGrid grid;
    double tolerance = 1e-3;
    int max_iter = 50;
    Vector initial_state;
    std::string output_path = "run.csv";
    // custom-linear model data
    Matrix a, b, q, r;

    static ScenarioConfig from_json_text(const std::string& text);
    static ScenarioConfig from_json_file(const std::string& path);
};

struct RunSummary {
    std::string scheme_label;
    double cost = 0.0; // +inf when diverged
    int iterations = 0;
    bool converged = false;
    bool diverged = false;
    double min_eig_p_global = 0.0;
    double wall_time_seconds = 0.0;
    std::string csv_path;
};

std::string format_summary_line(const RunSummary& summary);

/// Executes the configured pipeline and writes the trajectory CSV
/// (columns t, x1..xn, u1..um, minEigP, runningCost). `output_override`
/// replaces the config's output path when non-empty.
RunSummary run_scenario(const ScenarioConfig& config, const std::string& output_override = "");

/// Runs the stock comparison schemes (S1, S2, W1, W2, W3, T1, T2, T3) on
/// the quadrotor benchmark. Individual failures become diverged rows; the
/// sweep always completes. When `out_dir` is non-empty, writes per-scheme
/// trajectory CSVs and a summary table2.csv there.
std::vector<RunSummary> run_benchmark_table(const std::string& out_dir);

/// Human-readable table with the per-strategy reference optima appended.
std::string format_benchmark_table(const std::vector<RunSummary>& rows);

/// Reference optima quoted alongside the benchmark table (best known cost
/// per strategy on the stock quadrotor scenario).
struct ReferenceOptimum {
    Strategy strategy;
    double cost;
};
const std::vector<ReferenceOptimum>& benchmark_reference_optima();

/// Scalar stiffness demo: implicit Euler, implicit midpoint, trapezoidal
/// RK and the trapezoidal exponential rule on the logistic benchmark with
/// h = 1/2 for the Riccati pass and h = 1 for the state pass, plus a fine
/// implicit-Euler reference. Writes scalar_demo_p.csv and
/// scalar_demo_x.csv under out_dir (method columns side by side).
void run_scalar_demo(const std::string& out_dir);

struct ConvergenceRow {
    double h = 0.0;
    double error = 0.0;
    double observed_order = 0.0; // NaN on the first row
};

/// Error at t = t0 of the smooth scalar problem (a(t) = 0.1 sin t,
/// q = s = 1) against a fine-grid reference, for each step size.
std::vector<ConvergenceRow> run_convergence(IntegratorFamily family,
                                            const std::vector<double>& h_list);

std::string format_convergence_table(IntegratorFamily family,
                                     const std::vector<ConvergenceRow>& rows);

} // namespace ricmag
