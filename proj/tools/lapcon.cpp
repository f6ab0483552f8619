// lapcon: consensus analysis of weighted dependency digraphs.
// Subcommands: analyze, project, simulate, verify.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lapcon/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"consensus analysis and simulation for weighted dependency digraphs"};
    app.require_subcommand(1);

    lapcon::cli::AnalyzeOptions analyze;
    lapcon::cli::ProjectOptions project;
    lapcon::cli::SimulateOptions simulate;
    lapcon::cli::VerifyOptions verify;
    std::string analyze_tau, simulate_tau, verify_tau;

    auto* cmd_analyze =
        app.add_subcommand("analyze", "digraph structure, spectrum, and eigenprojection");
    cmd_analyze->add_option("graph", analyze.graph_path, "graph file (edge list or JSON)")
        ->required();
    cmd_analyze->add_option("--tau", analyze_tau, "step parameter: a rational/decimal or 'max'");
    cmd_analyze->add_option("--matrices", analyze.matrices,
                            "matrices to include: L,J,S,P_tilde,L_tilde,JS or 'all'")
        ->delimiter(',');
    cmd_analyze->add_flag("--float", analyze.force_float, "force the float backend");
    cmd_analyze->add_flag("--json", analyze.json, "JSON output");

    auto* cmd_project =
        app.add_subcommand("project", "project an initial state onto the consensus domain");
    cmd_project->add_option("graph", project.graph_path, "graph file")->required();
    cmd_project->add_option("--x0", project.x0, "initial state, comma-separated")->required();
    cmd_project->add_flag("--float", project.force_float, "force the float backend");
    cmd_project->add_flag("--json", project.json, "JSON output");

    auto* cmd_simulate = app.add_subcommand("simulate", "run one protocol and write a CSV trace");
    cmd_simulate->add_option("graph", simulate.graph_path, "graph file")->required();
    cmd_simulate
        ->add_option("--protocol", simulate.protocol,
                     "basic | projected | ltilde | degroot | degroot-proj")
        ->required();
    cmd_simulate->add_option("--x0", simulate.x0, "initial state, comma-separated")->required();
    cmd_simulate->add_option("--tau", simulate_tau, "step parameter or 'max'");
    cmd_simulate->add_option("--t-max", simulate.t_max, "time horizon (continuous protocols)");
    cmd_simulate->add_option("--k-max", simulate.k_max, "step cap (discrete protocols)");
    cmd_simulate->add_option("--out", simulate.out_path, "trace CSV path (default trace.csv)");
    cmd_simulate->add_option("--tol", simulate.tolerance, "consensus tolerance (default 1e-8)");
    cmd_simulate->add_option("--conv-tol", simulate.conv_tolerance,
                             "convergence window tolerance (default 1e-10)");
    cmd_simulate->add_flag("--float", simulate.force_float, "force the float backend");
    cmd_simulate->add_flag("--json", simulate.json, "JSON output");

    auto* cmd_verify =
        app.add_subcommand("verify", "run the invariant battery against this instance");
    cmd_verify->add_option("graph", verify.graph_path, "graph file")->required();
    cmd_verify->add_option("--tau", verify_tau, "step parameter or 'max'");
    cmd_verify->add_flag("--float", verify.force_float, "force the float backend");
    cmd_verify->add_flag("--json", verify.json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : lapcon::cli::kExitUsage;
    }

    if (!analyze_tau.empty()) analyze.tau = analyze_tau;
    if (!simulate_tau.empty()) simulate.tau = simulate_tau;
    if (!verify_tau.empty()) verify.tau = verify_tau;

    if (cmd_analyze->parsed()) return lapcon::cli::run_analyze(analyze, std::cout, std::cerr);
    if (cmd_project->parsed()) return lapcon::cli::run_project(project, std::cout, std::cerr);
    if (cmd_simulate->parsed()) return lapcon::cli::run_simulate(simulate, std::cout, std::cerr);
    if (cmd_verify->parsed()) return lapcon::cli::run_verify(verify, std::cout, std::cerr);
    return lapcon::cli::kExitUsage;
}
