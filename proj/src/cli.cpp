#include "fdglm/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdglm/csv.hpp"
#include "fdglm/diagnostics.hpp"
#include "fdglm/fit_report.hpp"
#include "fdglm/glm.hpp"
#include "fdglm/limitlab.hpp"
#include "fdglm/simreport.hpp"

namespace fdglm::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;

struct DataFlags {
    std::string data;
    std::string response;
    std::vector<std::string> covariates;
    std::string family = "poisson";
    std::string link = "canonical";
    std::string na_policy = "drop";
    bool no_intercept = false;
};

void add_data_flags(CLI::App* cmd, DataFlags& flags) {
    cmd->add_option("--data", flags.data, "CSV file with a header row")->required();
    cmd->add_option("--response", flags.response, "response column name")->required();
    cmd->add_option("--covariates", flags.covariates,
                    "comma-separated covariate column names (empty: intercept only)")
        ->delimiter(',');
    cmd->add_option("--family", flags.family, "poisson | bernoulli | gaussian")
        ->check(CLI::IsMember({"poisson", "bernoulli", "gaussian"}));
    cmd->add_option("--link", flags.link, "link function")
        ->check(CLI::IsMember({"canonical"}));
    cmd->add_option("--na-policy", flags.na_policy, "drop | fail")
        ->check(CLI::IsMember({"drop", "fail"}));
    cmd->add_flag("--no-intercept", flags.no_intercept, "do not prepend a row of ones");
}

FamilySpec family_from_name(const std::string& name) {
    if (name == "poisson") return FamilySpec::poisson();
    if (name == "bernoulli") return FamilySpec::bernoulli();
    return FamilySpec::gaussian_unit_var();
}

DatasetSpec dataset_from_flags(const DataFlags& flags) {
    DatasetSpec spec;
    spec.path = flags.data;
    spec.response_column = flags.response;
    spec.covariate_columns = flags.covariates;
    spec.add_intercept = !flags.no_intercept;
    spec.na_policy = flags.na_policy == "fail" ? NaPolicy::Fail : NaPolicy::DropRow;
    return spec;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write to " + out_path);
    }
    out << text;
}

ReferenceDistribution distribution_from_name(const std::string& name) {
    if (name == "uniform") return uniform_reference();
    if (name == "normal") return normal_reference();
    return exponential_reference();
}

int run_impl(int argc, const char* const* argv) {
    CLI::App app{"MLE and Wald inference for canonical exponential-family GLMs under "
                 "fixed designs, with regularity diagnostics and seeded Monte Carlo "
                 "convergence experiments"};
    app.set_config("--config", "", "key=value configuration file");
    app.set_version_flag("--version", "fdglm 0.1.0");
    app.require_subcommand(1);

    // fit ------------------------------------------------------------------
    DataFlags fit_flags;
    double level = 0.95;
    int max_iterations = 50;
    double grad_tol = 1e-10;
    std::string fit_format = "table";
    int digits = 4;
    std::string fit_out;
    CLI::App* fit_cmd = app.add_subcommand("fit", "fit a GLM by maximum likelihood");
    fit_cmd->configurable();
    fit_cmd->fallthrough();
    add_data_flags(fit_cmd, fit_flags);
    fit_cmd->add_option("--level", level, "Wald interval level")
        ->check(CLI::Range(1e-12, 1.0 - 1e-12));
    fit_cmd->add_option("--max-iterations", max_iterations)->check(CLI::PositiveNumber);
    fit_cmd->add_option("--grad-tol", grad_tol)->check(CLI::PositiveNumber);
    fit_cmd->add_option("--format", fit_format, "table | json")
        ->check(CLI::IsMember({"table", "json"}));
    fit_cmd->add_option("--digits", digits, "significant digits in tables")
        ->check(CLI::Range(1, 17));
    fit_cmd->add_option("--out", fit_out, "write the report to a file");

    // diagnose --------------------------------------------------------------
    DataFlags diag_flags;
    std::vector<double> theta0_values;
    std::string diag_format = "kv";
    std::string diag_out;
    CLI::App* diag_cmd =
        app.add_subcommand("diagnose", "regularity diagnostics for a design");
    diag_cmd->configurable();
    diag_cmd->fallthrough();
    add_data_flags(diag_cmd, diag_flags);
    diag_cmd->add_option("--theta0", theta0_values,
                         "reference parameter (default: the fitted estimate)")
        ->delimiter(',');
    diag_cmd->add_option("--format", diag_format, "kv | json")
        ->check(CLI::IsMember({"kv", "json"}));
    diag_cmd->add_option("--out", diag_out, "write the report to a file");

    // sim --------------------------------------------------------------------
    std::string sim_name;
    SimConfig cfg;
    cfg.seed = 1;
    cfg.replications = 1000;
    cfg.sample_sizes = {100, 1000, 10000};
    double rho = 0.5;
    double delta = 0.1;
    std::string dist_name = "uniform";
    std::vector<double> coeffs;
    std::vector<double> points = {0.0, 0.5};
    double bandwidth_c = std::numeric_limits<double>::quiet_NaN();
    std::string kernel_name = "gaussian";
    std::string sim_format = "csv";
    std::string sim_out;
    CLI::App* sim_cmd = app.add_subcommand("sim", "seeded Monte Carlo experiments");
    sim_cmd->configurable();
    sim_cmd->fallthrough();
    sim_cmd
        ->add_option("name", sim_name,
                     "one of: stpetersburg, pareto, spacings, boosting, gc, dkw, "
                     "kde-clt, dependent")
        ->required()
        ->check(CLI::IsMember({"stpetersburg", "pareto", "spacings", "boosting", "gc",
                               "dkw", "kde-clt", "dependent"}));
    sim_cmd->add_option("--seed", cfg.seed, "RNG seed");
    CLI::Option* reps_opt =
        sim_cmd->add_option("--reps", cfg.replications, "replications")
            ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--n-grid,--n", cfg.sample_sizes, "sample sizes, ascending")
        ->delimiter(',');
    sim_cmd->add_option("--eps", cfg.epsilon,
                        "deviation threshold (boosting: failure probability)")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--rho", rho, "dependent: autocorrelation decay in (0,1)");
    sim_cmd->add_option("--delta", delta, "boosting: per-vote edge in (0, 0.5)");
    sim_cmd->add_option("--dist", dist_name, "gc/dkw: uniform | normal | exponential")
        ->check(CLI::IsMember({"uniform", "normal", "exponential"}));
    sim_cmd->add_option("--a", coeffs, "spacings: order-statistic coefficients")
        ->delimiter(',');
    sim_cmd->add_option("--points", points, "kde-clt: evaluation points")->delimiter(',');
    sim_cmd->add_option("--bandwidth-c", bandwidth_c,
                        "kde-clt: constant in b_n = c n^{-1/5} (default: normal "
                        "reference rule)");
    sim_cmd->add_option("--kernel", kernel_name, "kde-clt: gaussian | epanechnikov")
        ->check(CLI::IsMember({"gaussian", "epanechnikov"}));
    sim_cmd->add_option("--format", sim_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    sim_cmd->add_option("--out", sim_out, "write the report to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (fit_cmd->parsed()) {
            const LoadedDesign loaded = load_csv(dataset_from_flags(fit_flags));
            FitOptions opts;
            opts.max_iterations = max_iterations;
            opts.grad_tol = grad_tol;
            const FitReport report = build_fit_report(
                loaded, family_from_name(fit_flags.family), LinkSpec::canonical(), opts,
                level);
            emit(fit_format == "json" ? to_json(report) : render_table(report, digits),
                 fit_out);
            if (!report.fit.converged) {
                std::cerr << "warning: fit did not converge within " << max_iterations
                          << " iterations (final gradient norm "
                          << report.fit.final_grad_norm << ")\n";
                return kExitNotConverged;
            }
            return kExitOk;
        }

        if (diag_cmd->parsed()) {
            const LoadedDesign loaded = load_csv(dataset_from_flags(diag_flags));
            const FamilySpec family = family_from_name(diag_flags.family);
            const LinkSpec link = LinkSpec::canonical();
            Eigen::VectorXd theta0;
            if (!theta0_values.empty()) {
                if (static_cast<Eigen::Index>(theta0_values.size()) != loaded.design.p()) {
                    throw std::invalid_argument("--theta0 must have one value per "
                                                "design row");
                }
                theta0 = Eigen::Map<const Eigen::VectorXd>(
                    theta0_values.data(), static_cast<Eigen::Index>(theta0_values.size()));
            } else {
                theta0 = Eigen::VectorXd::Zero(loaded.design.p());
                try {
                    const FitResult fit = fit_mle(loaded.design, family, link, {});
                    theta0 = fit.theta_hat;
                } catch (const SingularInformationError& e) {
                    std::cerr << "warning: reference fit failed (" << e.what()
                              << "); diagnostics evaluated at zero\n";
                }
            }
            const ConditionReport report =
                condition_report(loaded.design, family, link, theta0);
            emit(diag_format == "json" ? to_json(report) : to_kv(report), diag_out);
            if (!report.positive_definite) {
                std::cerr << "warning: Z Z^T is numerically singular\n";
            } else if (report.max_info_leverage > 0.5) {
                std::cerr << "warning: dominating design point "
                          << "(max information leverage > 0.5)\n";
            }
            return kExitOk;
        }

        // sim
        SimReport report;
        if (sim_name == "stpetersburg") {
            report = st_petersburg_sim(cfg);
        } else if (sim_name == "pareto") {
            report = pareto_sim(cfg);
        } else if (sim_name == "dependent") {
            report = dependent_mean_sim(rho, cfg);
        } else if (sim_name == "spacings") {
            report = spacings_sim(coeffs, cfg);
        } else if (sim_name == "gc" || sim_name == "dkw") {
            report = dkw_check(cfg, distribution_from_name(dist_name));
            report.name = sim_name;
        } else if (sim_name == "kde-clt") {
            const KernelKind kernel = kernel_name == "epanechnikov"
                                          ? KernelKind::Epanechnikov
                                          : KernelKind::Gaussian;
            report = kde_clt_check(normal_density(), points, cfg, kernel, bandwidth_c);
        } else {  // boosting
            if (!(cfg.epsilon < 1.0)) {
                throw std::invalid_argument("boosting: --eps must lie in (0,1)");
            }
            if (reps_opt->count() == 0) cfg.replications = 10000;
            const std::int64_t n = boosting_bound(delta, cfg.epsilon);
            const double success = majority_vote_sim(delta, n, cfg);
            report.name = "boosting";
            report.seed = cfg.seed;
            report.replications = cfg.replications;
            report.epsilon = cfg.epsilon;
            SimRow row;
            row.sample_size = n;
            row.mean = success;
            row.median = success > 0.5 ? 1.0 : (success == 0.5 ? 0.5 : 0.0);
            row.deviation_prob = 1.0 - success;
            row.bound = 1.0 - cfg.epsilon;
            report.rows.push_back(row);
            report.extras.emplace_back("delta", delta);
            std::cerr << "majority-vote bound: n = " << n
                      << ", empirical success = " << format_double(success) << "\n";
        }
        emit(sim_format == "json" ? to_json(report) : to_csv(report), sim_out);
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

}  // namespace

int run(int argc, const char* const* argv) {
    return run_impl(argc, argv);
}

}  // namespace fdglm::cli
