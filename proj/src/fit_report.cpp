#include "fdglm/fit_report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "fdglm/simreport.hpp"

namespace fdglm {

using ordered_json = nlohmann::ordered_json;

std::vector<double> FitReport::std_errors() const {
    std::vector<double> se;
    se.reserve(coefficient_names.size());
    for (Eigen::Index j = 0; j < fit.covariance.rows(); ++j) {
        se.push_back(std::sqrt(fit.covariance(j, j)));
    }
    return se;
}

FitReport build_fit_report(const LoadedDesign& loaded, const FamilySpec& family,
                           const LinkSpec& link, const FitOptions& opts, double level) {
    FitReport report;
    report.coefficient_names = loaded.coefficient_names;
    report.family = family.name();
    report.link = link.name();
    report.n = loaded.design.n();
    report.rows_dropped = loaded.rows_dropped;
    report.level = level;
    report.fit = fit_mle(loaded.design, family, link, opts);
    if (report.fit.converged) {
        report.intervals = wald_intervals(report.fit, level);
    }
    report.diagnostics =
        condition_report(loaded.design, family, link, report.fit.theta_hat);
    return report;
}

namespace {

std::string sci(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*e", digits - 1, v);
    return buf;
}

void pad_to(std::string& line, std::size_t width) {
    if (line.size() < width) line.append(width - line.size(), ' ');
}

}  // namespace

std::string render_table(const FitReport& report, int digits) {
    const std::size_t p = report.coefficient_names.size();
    const std::vector<double> se = report.std_errors();

    std::string out;
    out += "family: " + report.family + "   link: " + report.link +
           "   n: " + std::to_string(report.n);
    if (report.rows_dropped > 0) {
        out += "   rows_dropped: " + std::to_string(report.rows_dropped);
    }
    out += "\n";
    out += std::string("converged: ") + (report.fit.converged ? "yes" : "no") +
           "   iterations: " + std::to_string(report.fit.iterations) +
           "   final_grad_norm: " + sci(report.fit.final_grad_norm, 3) + "\n\n";

    std::size_t name_width = 11;
    for (const auto& name : report.coefficient_names) {
        name_width = std::max(name_width, name.size());
    }
    const std::size_t col = static_cast<std::size_t>(digits) + 10;

    std::string header = "coefficient";
    pad_to(header, name_width + 2);
    const bool with_intervals = !report.intervals.empty();
    for (const char* h : {"estimate", "std_error", "lower", "upper"}) {
        if (!with_intervals && (h[0] == 'l' || h[0] == 'u')) continue;
        std::string cell = h;
        pad_to(cell, col);
        header += cell;
    }
    out += header + "\n";

    for (std::size_t j = 0; j < p; ++j) {
        std::string line = report.coefficient_names[j];
        pad_to(line, name_width + 2);
        const auto jj = static_cast<Eigen::Index>(j);
        std::string cell = sci(report.fit.theta_hat[jj], digits);
        pad_to(cell, col);
        line += cell;
        cell = sci(se[j], digits);
        pad_to(cell, col);
        line += cell;
        if (!report.intervals.empty()) {
            cell = sci(report.intervals[j].first, digits);
            pad_to(cell, col);
            line += cell;
            cell = sci(report.intervals[j].second, digits);
            pad_to(cell, col);
            line += cell;
        }
        out += line + "\n";
    }
    if (!report.intervals.empty()) {
        out += "\nwald level: " + format_double(report.level) + "\n";
    }
    out += "\ndiagnostics:\n" + to_kv(report.diagnostics);
    return out;
}

namespace {

ordered_json condition_json(const ConditionReport& r) {
    ordered_json j;
    j["lambda_min_ZZt"] = r.lambda_min_ZZt;
    j["max_leverage"] = r.max_leverage;
    j["info_lambda_min"] = r.info_lambda_min;
    j["max_info_leverage"] = r.max_info_leverage;
    j["link_deriv_range"] = {r.link_deriv_range.first, r.link_deriv_range.second};
    j["link_second_max"] = r.link_second_max;
    j["natural_param_range"] = {r.natural_param_range.first, r.natural_param_range.second};
    j["positive_definite"] = r.positive_definite;
    return j;
}

}  // namespace

std::string to_json(const FitReport& report) {
    ordered_json j;
    ordered_json coef, se_obj, bounds;
    const std::vector<double> se = report.std_errors();
    for (std::size_t k = 0; k < report.coefficient_names.size(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        coef[report.coefficient_names[k]] = report.fit.theta_hat[kk];
        se_obj[report.coefficient_names[k]] = se[k];
        if (!report.intervals.empty()) {
            bounds[report.coefficient_names[k]] = {report.intervals[k].first,
                                                   report.intervals[k].second};
        }
    }
    j["coefficients"] = coef;

    ordered_json cov = ordered_json::array();
    for (Eigen::Index r = 0; r < report.fit.covariance.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < report.fit.covariance.cols(); ++c) {
            row.push_back(report.fit.covariance(r, c));
        }
        cov.push_back(row);
    }
    j["covariance"] = cov;
    j["std_errors"] = se_obj;
    j["intervals"] = ordered_json{{"level", report.level}, {"bounds", bounds}};
    j["diagnostics"] = condition_json(report.diagnostics);
    j["convergence"] = ordered_json{{"converged", report.fit.converged},
                                    {"iterations", report.fit.iterations},
                                    {"final_grad_norm", report.fit.final_grad_norm},
                                    {"loglik_trace", report.fit.loglik_trace}};
    j["family"] = report.family;
    j["link"] = report.link;
    j["n"] = report.n;
    j["rows_dropped"] = report.rows_dropped;
    return j.dump(2) + "\n";
}

std::string to_json(const ConditionReport& report) {
    return condition_json(report).dump(2) + "\n";
}

std::string to_json(const SimReport& report) {
    ordered_json j;
    j["name"] = report.name;
    j["seed"] = report.seed;
    j["replications"] = report.replications;
    j["epsilon"] = report.epsilon;
    ordered_json rows = ordered_json::array();
    for (const SimRow& r : report.rows) {
        rows.push_back(ordered_json{{"sample_size", r.sample_size},
                                    {"mean", r.mean},
                                    {"median", r.median},
                                    {"deviation_prob", r.deviation_prob},
                                    {"bound", r.bound}});
    }
    j["rows"] = rows;
    ordered_json extras;
    for (const auto& [key, value] : report.extras) extras[key] = value;
    j["extras"] = extras;
    return j.dump(2) + "\n";
}

}  // namespace fdglm
