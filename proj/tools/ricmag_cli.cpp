// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors
//
// Batch front end over the ricmag C API.
//   ricmag run --config scenario.json [--out path.csv]
//   ricmag table2 [--out dir]
//   ricmag scalar-demo [--out dir]
//   ricmag convergence --family magnus2-trapezoidal --h 0.5,0.25,0.125
//
// Exit codes: 0 success/converged, 1 usage or config error, 2 divergence
// (or failure to converge within the iteration budget).

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ricmag.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDiverged = 2;

int exit_code_for(ricmag_status status)
{
    switch (status) {
    case RICMAG_OK:
        return kExitOk;
    case RICMAG_ERR_DIVERGED:
    case RICMAG_ERR_NO_CONVERGENCE:
        return kExitDiverged;
    default:
        return kExitUsage;
    }
}

void print_error(const char* what, ricmag_status status)
{
    std::fprintf(stderr, "ricmag: %s: %s (%s)\n", what, ricmag_last_error(),
                 ricmag_status_string(status));
}

void print_summary(const ricmag_run_summary& summary)
{
    std::printf("scheme=%s cost=", summary.scheme_label);
    if (std::isfinite(summary.cost))
        std::printf("%.6g", summary.cost);
    else
        std::printf("inf");
    std::printf(" iterations=%d converged=%s diverged=%s minEigP=%.3g wall=%.3fs",
                summary.iterations, summary.converged ? "yes" : "no",
                summary.diverged ? "yes" : "no", summary.min_eig_p_global,
                summary.wall_time_seconds);
    if (summary.csv_path[0] != '\0')
        std::printf(" csv=%s", summary.csv_path);
    std::printf("\n");
}

std::vector<double> parse_h_list(const std::string& text)
{
    std::vector<double> values;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ','))
        if (!token.empty())
            values.push_back(std::stod(token));
    return values;
}

int cmd_run(const std::string& config_path, const std::string& out_override)
{
    ricmag_run_summary summary = {};
    const ricmag_status status = ricmag_run_config_file(
        config_path.c_str(), out_override.empty() ? nullptr : out_override.c_str(), &summary);
    if (status == RICMAG_OK || status == RICMAG_ERR_DIVERGED
        || status == RICMAG_ERR_NO_CONVERGENCE) {
        print_summary(summary);
    } else {
        print_error("run", status);
    }
    return exit_code_for(status);
}

int cmd_table2(const std::string& out_dir)
{
    ricmag_run_summary rows[16] = {};
    int n_rows = 0;
    const ricmag_status status = ricmag_run_benchmark_table(
        out_dir.empty() ? nullptr : out_dir.c_str(), rows, 16, &n_rows);
    if (status != RICMAG_OK) {
        print_error("table2", status);
        return kExitUsage;
    }
    char table[4096];
    if (ricmag_format_benchmark_table(rows, n_rows, table, sizeof(table)) == RICMAG_OK)
        std::fputs(table, stdout);
    if (!out_dir.empty())
        std::printf("artifacts written under %s\n", out_dir.c_str());
    return kExitOk;
}

int cmd_scalar_demo(const std::string& out_dir)
{
    const ricmag_status status = ricmag_run_scalar_demo(out_dir.c_str());
    if (status != RICMAG_OK) {
        print_error("scalar-demo", status);
        return kExitUsage;
    }
    std::printf("wrote %s/scalar_demo_p.csv and %s/scalar_demo_x.csv\n", out_dir.c_str(),
                out_dir.c_str());
    return kExitOk;
}

int cmd_convergence(const std::string& family_name, const std::string& h_text)
{
    ricmag_integrator family;
    if (ricmag_integrator_from_name(family_name.c_str(), &family) != RICMAG_OK) {
        std::fprintf(stderr, "ricmag: convergence: %s\n", ricmag_last_error());
        return kExitUsage;
    }
    const std::vector<double> h_list = parse_h_list(h_text);
    if (h_list.empty()) {
        std::fprintf(stderr, "ricmag: convergence: --h needs a comma-separated list\n");
        return kExitUsage;
    }
    std::vector<ricmag_convergence_row> rows(h_list.size());
    const ricmag_status status =
        ricmag_run_convergence(family, h_list.data(), static_cast<int>(h_list.size()),
                               rows.data());
    if (status != RICMAG_OK) {
        print_error("convergence", status);
        return kExitUsage;
    }
    std::printf("family: %s\n", ricmag_integrator_name(family));
    std::printf("%12s %14s %10s\n", "h", "error", "order");
    for (const ricmag_convergence_row& row : rows) {
        if (std::isnan(row.observed_order))
            std::printf("%12.6g %14.6e %10s\n", row.h, row.error, "-");
        else
            std::printf("%12.6g %14.6e %10.2f\n", row.h, row.error, row.observed_order);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"structure-preserving LQ optimal control solver"};
    app.set_version_flag("--version", ricmag_version());
    app.require_subcommand(1);

    std::string config_path, out_path;
    CLI::App* run = app.add_subcommand("run", "run a JSON scenario config");
    run->add_option("--config", config_path, "path to the scenario config")->required();
    run->add_option("--out", out_path, "override the config's CSV output path");

    std::string table_dir;
    CLI::App* table2 =
        app.add_subcommand("table2", "run the quadrotor benchmark scheme comparison");
    table2->add_option("--out", table_dir, "directory for CSV artifacts");

    std::string demo_dir = ".";
    CLI::App* demo =
        app.add_subcommand("scalar-demo", "scalar stiff benchmark, one CSV column per method");
    demo->add_option("--out", demo_dir, "output directory");

    std::string family_name, h_text;
    CLI::App* conv = app.add_subcommand("convergence", "order study on the smooth scalar problem");
    conv->set_help_flag("--help", "print help"); // frees -h for the step-size list
    conv->add_option("--family", family_name, "integrator family name")->required();
    conv->add_option("--h", h_text, "comma-separated step sizes (must divide tf = 10)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (run->parsed())
        return cmd_run(config_path, out_path);
    if (table2->parsed())
        return cmd_table2(table_dir);
    if (demo->parsed())
        return cmd_scalar_demo(demo_dir);
    if (conv->parsed())
        return cmd_convergence(family_name, h_text);
    return kExitUsage;
}
