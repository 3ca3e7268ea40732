#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "depfid/audit.hpp"
#include "depfid/commands.hpp"
#include "depfid/csv.hpp"
#include "depfid/errors.hpp"
#include "depfid/report.hpp"
#include "depfid/scenarios.hpp"

namespace {

struct AuditArgs {
    std::string real_path;
    std::string syn_path;
    bool header = false;
    std::optional<std::size_t> pca_dims;
    std::vector<std::size_t> subspace_dims{1, 2, 3, 5, 10};
    std::string bootstrap;
    std::optional<std::size_t> subsets;
    std::size_t subset_size = 20;
    bool mmd = false;
    bool copula_mmd = false;
    std::size_t slope_target = 0;
    std::vector<std::size_t> slope_predictors;
    std::string cov_mode = "empirical";
    std::uint64_t seed = 42;
    std::string format = "json";
    std::string out;
    bool fail_on_unstable = false;
};

int run_audit_command(const AuditArgs& args, const CLI::Option* bootstrap_opt) {
    using namespace depfid;
    const DataMatrix ref = ingest_csv(args.real_path, args.header);
    const DataMatrix syn = ingest_csv(args.syn_path, args.header);

    AuditOptions options;
    options.pca_dims = args.pca_dims;
    options.subspace_dims = args.subspace_dims;
    if (bootstrap_opt->count() > 0) {
        options.bootstrap_b = args.bootstrap.empty() ? kDefaultBootstrapResamples
                                                     : std::stoull(args.bootstrap);
    }
    if (args.subsets) options.subsets = SubsetOptions{*args.subsets, args.subset_size};
    options.mmd = args.mmd;
    options.copula_mmd = args.copula_mmd;
    options.slope_target = args.slope_target;
    options.slope_predictors = args.slope_predictors;
    options.seed = args.seed;
    if (args.cov_mode == "empirical") options.cov_mode = CovMode::Empirical;
    else if (args.cov_mode == "ledoit-wolf") options.cov_mode = CovMode::LedoitWolf;
    else throw Error(ErrorKind::InvalidArgument, "unknown covariance mode '" + args.cov_mode + "'");

    const AuditReport report = run_audit(ref, syn, options);
    const std::string text = emit_report(report, parse_report_format(args.format));
    if (args.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(args.out, std::ios::binary);
        if (!out) throw Error(ErrorKind::IoError, "cannot open " + args.out + " for writing");
        out << text;
    }
    return exit_code_policy(report, args.fail_on_unstable);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"depfid: covariance-level dependence fidelity audits for synthetic data"};
    app.set_version_flag("--version", depfid::tool_version());
    app.require_subcommand(1);

    AuditArgs audit;
    auto* audit_cmd = app.add_subcommand("audit", "Compare a synthetic dataset against a reference");
    audit_cmd->add_option("--real", audit.real_path, "Reference CSV")->required();
    audit_cmd->add_option("--syn", audit.syn_path, "Synthetic CSV")->required();
    audit_cmd->add_flag("--header", audit.header, "CSV files start with a header row");
    audit_cmd->add_option("--pca-dims", audit.pca_dims, "Project onto the reference's top-P components");
    audit_cmd->add_option("--subspace-dims", audit.subspace_dims, "Subspace ranks r")
        ->delimiter(',')
        ->capture_default_str();
    auto* bootstrap_opt = audit_cmd->add_option("--bootstrap", audit.bootstrap,
                                                "Bootstrap D_Σ with B resamples (default 500)")
                              ->expected(0, 1);
    audit_cmd->add_option("--subsets", audit.subsets, "Number of random column subsets");
    audit_cmd->add_option("--subset-size", audit.subset_size, "Columns per subset")->capture_default_str();
    audit_cmd->add_flag("--mmd", audit.mmd, "Gaussian-kernel MMD on the data");
    audit_cmd->add_flag("--copula-mmd", audit.copula_mmd, "Gaussian-kernel MMD on pseudo-observations");
    audit_cmd->add_option("--slope-target", audit.slope_target, "Regression target column")
        ->capture_default_str();
    audit_cmd->add_option("--slope-predictors", audit.slope_predictors, "Predictor columns")->delimiter(',');
    audit_cmd->add_option("--cov-mode", audit.cov_mode, "empirical or ledoit-wolf")->capture_default_str();
    audit_cmd->add_option("--seed", audit.seed, "Seed for every randomised step")->capture_default_str();
    audit_cmd->add_option("--format", audit.format, "json or md")->capture_default_str();
    audit_cmd->add_option("--out", audit.out, "Write the report here instead of stdout");
    audit_cmd->add_flag("--fail-on-unstable", audit.fail_on_unstable, "Exit 2 when the regime is unstable");

    depfid::ScenarioSpec spec;
    std::string scenario = "sign-flip";
    std::string out_ref, out_syn;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a closed-form scenario pair");
    synth_cmd->add_option("--scenario", scenario,
                          "sign-flip|eigengap|gaussian-copula|t-copula|diagonal-collapse")
        ->required();
    synth_cmd->add_option("--rho", spec.rho)->capture_default_str();
    synth_cmd->add_option("--sigma2", spec.sigma2)->capture_default_str();
    synth_cmd->add_option("--eps", spec.epsilon)->capture_default_str();
    synth_cmd->add_option("--nu", spec.nu)->capture_default_str();
    synth_cmd->add_option("--n", spec.n)->capture_default_str();
    synth_cmd->add_option("--d", spec.d, "Dimension for sign-flip padding")->capture_default_str();
    synth_cmd->add_option("--seed", spec.seed)->capture_default_str();
    synth_cmd->add_option("--out-ref", out_ref)->required();
    synth_cmd->add_option("--out-syn", out_syn)->required();

    std::string sweep_scenario = "eigengap";
    std::string sweep_eps = "0:1.4:0.1";
    std::size_t sweep_n = 100000;
    std::uint64_t sweep_seed = 42;
    std::string sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "Eigengap perturbation curve");
    sweep_cmd->add_option("--scenario", sweep_scenario)->check(CLI::IsMember({"eigengap"}))->capture_default_str();
    sweep_cmd->add_option("--eps", sweep_eps, "START:STOP:STEP")->capture_default_str();
    sweep_cmd->add_option("--n", sweep_n)->capture_default_str();
    sweep_cmd->add_option("--seed", sweep_seed)->capture_default_str();
    sweep_cmd->add_option("--out", sweep_out)->required();

    double tail_rho = 0.5;
    double tail_nu = 3.0;
    std::string tail_u = "0:3:0.5";
    std::size_t tail_n = 100000;
    std::uint64_t tail_seed = 42;
    std::string tail_out;
    auto* tail_cmd = app.add_subcommand("tail", "Joint exceedance probabilities, Gaussian vs t copula");
    tail_cmd->add_option("--rho", tail_rho)->capture_default_str();
    tail_cmd->add_option("--nu", tail_nu)->capture_default_str();
    tail_cmd->add_option("--u", tail_u, "START:STOP:STEP")->capture_default_str();
    tail_cmd->add_option("--n", tail_n)->capture_default_str();
    tail_cmd->add_option("--seed", tail_seed)->capture_default_str();
    tail_cmd->add_option("--out", tail_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : depfid::kExitError;
    }

    try {
        if (*audit_cmd) return run_audit_command(audit, bootstrap_opt);
        if (*synth_cmd) {
            spec.kind = depfid::parse_scenario_kind(scenario);
            return depfid::cmd_synth(spec, out_ref, out_syn, std::cout);
        }
        if (*sweep_cmd) return depfid::cmd_sweep(depfid::parse_grid(sweep_eps), sweep_n, sweep_seed, sweep_out);
        if (*tail_cmd) {
            return depfid::cmd_tail(tail_rho, tail_nu, depfid::parse_grid(tail_u), tail_n, tail_seed, tail_out);
        }
    } catch (const depfid::Error& e) {
        std::cerr << "depfid: " << e.what() << '\n';
        return depfid::kExitError;
    } catch (const std::exception& e) {
        std::cerr << "depfid: " << e.what() << '\n';
        return depfid::kExitError;
    }
    return depfid::kExitError;
}
