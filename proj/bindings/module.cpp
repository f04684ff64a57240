#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fdglm/csv.hpp"
#include "fdglm/diagnostics.hpp"
#include "fdglm/expfam.hpp"
#include "fdglm/fit_report.hpp"
#include "fdglm/glm.hpp"
#include "fdglm/limitlab.hpp"
#include "fdglm/rng.hpp"
#include "fdglm/simreport.hpp"
#include "fdglm/special.hpp"

namespace py = pybind11;
using namespace fdglm;

namespace {

FamilySpec family_from_string(const std::string& name) {
    if (name == "poisson") return FamilySpec::poisson();
    if (name == "bernoulli") return FamilySpec::bernoulli();
    if (name == "gaussian") return FamilySpec::gaussian_unit_var();
    throw std::invalid_argument("unknown family: " + name);
}

ReferenceDistribution distribution_from_string(const std::string& name) {
    if (name == "uniform") return uniform_reference();
    if (name == "normal") return normal_reference();
    if (name == "exponential") return exponential_reference();
    throw std::invalid_argument("unknown distribution: " + name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fixed-design GLM maximum likelihood with Wald inference, regularity "
              "diagnostics, and seeded Monte Carlo convergence experiments";

    // expfam ------------------------------------------------------------
    py::enum_<FamilyKind>(m, "FamilyKind")
        .value("Poisson", FamilyKind::Poisson)
        .value("Bernoulli", FamilyKind::Bernoulli)
        .value("GaussianUnitVar", FamilyKind::GaussianUnitVar);

    py::class_<FamilySpec>(m, "FamilySpec")
        .def(py::init(&family_from_string), py::arg("name"),
             "poisson | bernoulli | gaussian")
        .def_readonly("kind", &FamilySpec::kind)
        .def("contains", &FamilySpec::contains)
        .def("__repr__",
             [](const FamilySpec& f) { return std::string("FamilySpec(") + f.name() + ")"; });

    py::class_<Cumulant>(m, "Cumulant")
        .def_readonly("value", &Cumulant::value)
        .def_readonly("d1", &Cumulant::d1)
        .def_readonly("d2", &Cumulant::d2);

    m.def("cumulant_eval", &cumulant_eval, py::arg("family"), py::arg("eta"),
          "K(eta) with its first two derivatives");

    py::class_<LinkValue>(m, "LinkValue")
        .def_readonly("r", &LinkValue::r)
        .def_readonly("rprime", &LinkValue::rprime)
        .def_readonly("rsecond", &LinkValue::rsecond);

    py::class_<LinkSpec>(m, "LinkSpec")
        .def_static("canonical", &LinkSpec::canonical)
        .def("__repr__",
             [](const LinkSpec& l) { return std::string("LinkSpec(") + l.name() + ")"; });

    m.def("link_eval", &link_eval, py::arg("link"), py::arg("s"));

    // glm ----------------------------------------------------------------
    py::class_<FixedDesign>(m, "FixedDesign",
                            "Design matrix Z (p x n, one column per observation) with "
                            "response vector y")
        .def(py::init([](Eigen::MatrixXd Z, Eigen::VectorXd y) {
                 FixedDesign d;
                 d.Z = std::move(Z);
                 d.y = std::move(y);
                 return d;
             }),
             py::arg("Z"), py::arg("y"))
        .def_readwrite("Z", &FixedDesign::Z)
        .def_readwrite("y", &FixedDesign::y)
        .def_property_readonly("p", &FixedDesign::p)
        .def_property_readonly("n", &FixedDesign::n);

    py::enum_<FitInit>(m, "FitInit")
        .value("Zero", FitInit::Zero)
        .value("InterceptAtTransformedMean", FitInit::InterceptAtTransformedMean);

    py::class_<FitOptions>(m, "FitOptions")
        .def(py::init<>())
        .def_readwrite("max_iterations", &FitOptions::max_iterations)
        .def_readwrite("grad_tol", &FitOptions::grad_tol)
        .def_readwrite("step_halving_max", &FitOptions::step_halving_max)
        .def_readwrite("init", &FitOptions::init);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("theta_hat", &FitResult::theta_hat)
        .def_readonly("information", &FitResult::information)
        .def_readonly("covariance", &FitResult::covariance)
        .def_readonly("converged", &FitResult::converged)
        .def_readonly("iterations", &FitResult::iterations)
        .def_readonly("final_grad_norm", &FitResult::final_grad_norm)
        .def_readonly("loglik_trace", &FitResult::loglik_trace);

    py::class_<HessianParts>(m, "HessianParts")
        .def_readonly("H", &HessianParts::H)
        .def_readonly("H1", &HessianParts::H1)
        .def_readonly("H2", &HessianParts::H2);

    py::register_exception<SingularInformationError>(m, "SingularInformationError");
    py::register_exception<DomainEscapeError>(m, "DomainEscapeError");

    m.def("log_likelihood", &log_likelihood, py::arg("theta"), py::arg("design"),
          py::arg("family"), py::arg("link") = LinkSpec::canonical());
    m.def("score", &score, py::arg("theta"), py::arg("design"), py::arg("family"),
          py::arg("link") = LinkSpec::canonical());
    m.def("hessian", &hessian, py::arg("theta"), py::arg("design"), py::arg("family"),
          py::arg("link") = LinkSpec::canonical());
    m.def("information", &information, py::arg("theta"), py::arg("design"),
          py::arg("family"), py::arg("link") = LinkSpec::canonical());
    m.def("fit_mle", &fit_mle, py::arg("design"), py::arg("family"),
          py::arg("link") = LinkSpec::canonical(), py::arg("options") = FitOptions{});
    m.def("wald_intervals", &wald_intervals, py::arg("fit"), py::arg("level") = 0.95);

    // diagnostics ---------------------------------------------------------
    py::class_<ConditionReport>(m, "ConditionReport")
        .def_readonly("lambda_min_ZZt", &ConditionReport::lambda_min_ZZt)
        .def_readonly("max_leverage", &ConditionReport::max_leverage)
        .def_readonly("info_lambda_min", &ConditionReport::info_lambda_min)
        .def_readonly("max_info_leverage", &ConditionReport::max_info_leverage)
        .def_readonly("link_deriv_range", &ConditionReport::link_deriv_range)
        .def_readonly("link_second_max", &ConditionReport::link_second_max)
        .def_readonly("natural_param_range", &ConditionReport::natural_param_range)
        .def_readonly("positive_definite", &ConditionReport::positive_definite)
        .def("to_kv", [](const ConditionReport& r) { return to_kv(r); })
        .def("to_json", [](const ConditionReport& r) { return to_json(r); });

    m.def("condition_report", &condition_report, py::arg("design"), py::arg("family"),
          py::arg("link"), py::arg("theta0"));
    m.def("growth_curve", &growth_curve, py::arg("designs"), py::arg("family"),
          py::arg("link"), py::arg("theta0"));
    m.def("leverages", &leverages, py::arg("M"), py::arg("Z"));

    // limit lab -------------------------------------------------------------
    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init([](std::uint64_t seed, int replications,
                         std::vector<std::int64_t> sample_sizes, double epsilon) {
                 SimConfig cfg;
                 cfg.seed = seed;
                 cfg.replications = replications;
                 cfg.sample_sizes = std::move(sample_sizes);
                 cfg.epsilon = epsilon;
                 return cfg;
             }),
             py::arg("seed"), py::arg("replications"), py::arg("sample_sizes"),
             py::arg("epsilon") = 0.1)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("replications", &SimConfig::replications)
        .def_readwrite("sample_sizes", &SimConfig::sample_sizes)
        .def_readwrite("epsilon", &SimConfig::epsilon);

    py::class_<SimRow>(m, "SimRow")
        .def_readonly("sample_size", &SimRow::sample_size)
        .def_readonly("mean", &SimRow::mean)
        .def_readonly("median", &SimRow::median)
        .def_readonly("deviation_prob", &SimRow::deviation_prob)
        .def_readonly("bound", &SimRow::bound);

    py::class_<SimReport>(m, "SimReport")
        .def_readonly("name", &SimReport::name)
        .def_readonly("seed", &SimReport::seed)
        .def_readonly("replications", &SimReport::replications)
        .def_readonly("epsilon", &SimReport::epsilon)
        .def_readonly("rows", &SimReport::rows)
        .def_readonly("extras", &SimReport::extras)
        .def("to_csv", [](const SimReport& r) { return to_csv(r); })
        .def("to_json", [](const SimReport& r) { return to_json(r); });

    py::enum_<TailModel>(m, "TailModel")
        .value("PlugIn", TailModel::PlugIn)
        .value("StPetersburg", TailModel::StPetersburg);

    py::class_<TruncatedMeanResult>(m, "TruncatedMeanResult")
        .def_readonly("sum", &TruncatedMeanResult::sum)
        .def_readonly("centering", &TruncatedMeanResult::centering)
        .def_readonly("normalized", &TruncatedMeanResult::normalized);

    py::class_<SpacingsResult>(m, "SpacingsResult")
        .def_readonly("t_n", &SpacingsResult::t_n)
        .def_readonly("expected_t_n", &SpacingsResult::expected_t_n);

    py::class_<Edf>(m, "Edf")
        .def_readonly("points", &Edf::points)
        .def_readonly("levels", &Edf::levels)
        .def("__call__", &Edf::operator());

    m.def("weighted_mean",
          [](const std::vector<double>& x, const std::vector<double>& v) {
              return weighted_mean(x, v);
          },
          py::arg("samples"), py::arg("variances"));
    m.def("dependent_mean_sim", &dependent_mean_sim, py::arg("rho_decay"), py::arg("cfg"));
    m.def("truncated_mean_stat",
          [](const std::vector<double>& samples, double v_n, TailModel tail) {
              return truncated_mean_stat(samples, v_n, tail);
          },
          py::arg("samples"), py::arg("v_n"), py::arg("tail") = TailModel::PlugIn);
    m.def("st_petersburg_truncated_mean", &st_petersburg_truncated_mean, py::arg("v"));
    m.def("st_petersburg_reward", &st_petersburg_reward, py::arg("tosses"));
    m.def("pareto_from_uniform", &pareto_from_uniform, py::arg("u"));
    m.def("st_petersburg_sim", &st_petersburg_sim, py::arg("cfg"));
    m.def("pareto_sim", &pareto_sim, py::arg("cfg"));
    m.def("exp_spacings_stat",
          [](const std::vector<double>& a, const std::vector<double>& x) {
              return exp_spacings_stat(a, x);
          },
          py::arg("coeffs"), py::arg("samples"));
    m.def("spacings_sim",
          [](const std::vector<double>& a, const SimConfig& cfg) {
              return spacings_sim(a, cfg);
          },
          py::arg("coeffs"), py::arg("cfg"));
    m.def("boosting_bound", &boosting_bound, py::arg("delta"), py::arg("eps"));
    m.def("majority_vote_sim", &majority_vote_sim, py::arg("delta"), py::arg("n"),
          py::arg("cfg"));
    m.def("edf", [](const std::vector<double>& x) { return edf(x); }, py::arg("samples"));
    m.def("gc_sup_distance",
          [](const std::vector<double>& x, const std::function<double(double)>& cdf) {
              return gc_sup_distance(x, cdf);
          },
          py::arg("samples"), py::arg("reference_cdf"));
    m.def("dkw_check",
          [](const SimConfig& cfg, const std::string& dist) {
              return dkw_check(cfg, distribution_from_string(dist));
          },
          py::arg("cfg"), py::arg("dist") = "uniform");

    py::enum_<KernelKind>(m, "KernelKind")
        .value("Gaussian", KernelKind::Gaussian)
        .value("Epanechnikov", KernelKind::Epanechnikov);

    m.def("kernel_l2", &kernel_l2, py::arg("kernel"));
    m.def("kde",
          [](const std::vector<double>& samples, double bandwidth, KernelKind kernel,
             const std::vector<double>& points) {
              return kde(samples, bandwidth, kernel, points);
          },
          py::arg("samples"), py::arg("bandwidth"),
          py::arg("kernel") = KernelKind::Gaussian, py::arg("points"));
    m.def("kde_clt_check",
          [](const std::vector<double>& points, const SimConfig& cfg, KernelKind kernel,
             double bandwidth_constant) {
              return kde_clt_check(normal_density(), points, cfg, kernel,
                                   bandwidth_constant);
          },
          py::arg("points"), py::arg("cfg"), py::arg("kernel") = KernelKind::Gaussian,
          py::arg("bandwidth_constant") = std::numeric_limits<double>::quiet_NaN(),
          "Scaled-variance and cross-correlation check against a standard normal "
          "target");

    // csv / reports ----------------------------------------------------------
    py::enum_<NaPolicy>(m, "NaPolicy")
        .value("DropRow", NaPolicy::DropRow)
        .value("Fail", NaPolicy::Fail);

    py::class_<DatasetSpec>(m, "DatasetSpec")
        .def(py::init([](std::string path, std::string response,
                         std::vector<std::string> covariates, bool add_intercept,
                         NaPolicy na_policy) {
                 DatasetSpec s;
                 s.path = std::move(path);
                 s.response_column = std::move(response);
                 s.covariate_columns = std::move(covariates);
                 s.add_intercept = add_intercept;
                 s.na_policy = na_policy;
                 return s;
             }),
             py::arg("path"), py::arg("response"),
             py::arg("covariates") = std::vector<std::string>{},
             py::arg("add_intercept") = true, py::arg("na_policy") = NaPolicy::DropRow)
        .def_readwrite("path", &DatasetSpec::path)
        .def_readwrite("response_column", &DatasetSpec::response_column)
        .def_readwrite("covariate_columns", &DatasetSpec::covariate_columns)
        .def_readwrite("add_intercept", &DatasetSpec::add_intercept)
        .def_readwrite("na_policy", &DatasetSpec::na_policy);

    py::class_<LoadedDesign>(m, "LoadedDesign")
        .def_readonly("design", &LoadedDesign::design)
        .def_readonly("coefficient_names", &LoadedDesign::coefficient_names)
        .def_readonly("rows_read", &LoadedDesign::rows_read)
        .def_readonly("rows_dropped", &LoadedDesign::rows_dropped);

    m.def("load_csv", &load_csv, py::arg("spec"));

    // special -----------------------------------------------------------------
    m.def("normal_pdf", &normal_pdf, py::arg("x"));
    m.def("normal_cdf", &normal_cdf, py::arg("x"));
    m.def("normal_quantile", &normal_quantile, py::arg("p"));

    m.attr("__version__") = "0.1.0";
}
