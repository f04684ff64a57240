#include "fdglm/diagnostics.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace fdglm {

namespace {

constexpr double kSingularConditionNumber = 1e12;

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

Eigen::VectorXd leverages(const Eigen::MatrixXd& M, const Eigen::MatrixXd& Z) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
    const Eigen::MatrixXd W = ldlt.solve(Z);  // p x n
    return (Z.array() * W.array()).colwise().sum().transpose();
}

ConditionReport condition_report(const FixedDesign& design, const FamilySpec& family,
                                 const LinkSpec& link, const Eigen::VectorXd& theta0) {
    if (theta0.size() != design.p()) {
        throw std::invalid_argument("condition_report: theta0 length does not match p");
    }
    if (!design.Z.allFinite() || !theta0.allFinite()) {
        throw std::invalid_argument("condition_report: non-finite inputs");
    }

    ConditionReport rep;
    const Eigen::MatrixXd ZZt = design.Z * design.Z.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ZZt);
    const double lam_min = es.eigenvalues().minCoeff();
    const double lam_max = es.eigenvalues().maxCoeff();
    rep.lambda_min_ZZt = lam_min;
    rep.positive_definite = lam_min > 0.0 && lam_min * kSingularConditionNumber >= lam_max;
    rep.max_leverage = leverages(ZZt, design.Z).maxCoeff();

    const Eigen::MatrixXd info = information(theta0, design, family, link);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_info(info);
    rep.info_lambda_min = es_info.eigenvalues().minCoeff();
    rep.max_info_leverage = leverages(info, design.Z).maxCoeff();

    const Eigen::VectorXd s = design.Z.transpose() * theta0;
    double r_lo = std::numeric_limits<double>::infinity();
    double r_hi = -std::numeric_limits<double>::infinity();
    double rp_lo = std::numeric_limits<double>::infinity();
    double rp_hi = -std::numeric_limits<double>::infinity();
    double rpp_max = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const LinkValue lv = link_eval(link, s[i]);
        r_lo = std::min(r_lo, lv.r);
        r_hi = std::max(r_hi, lv.r);
        rp_lo = std::min(rp_lo, lv.rprime);
        rp_hi = std::max(rp_hi, lv.rprime);
        rpp_max = std::max(rpp_max, std::fabs(lv.rsecond));
    }
    rep.natural_param_range = {r_lo, r_hi};
    rep.link_deriv_range = {rp_lo, rp_hi};
    rep.link_second_max = rpp_max;
    return rep;
}

std::vector<ConditionReport> growth_curve(const std::vector<FixedDesign>& designs,
                                          const FamilySpec& family, const LinkSpec& link,
                                          const Eigen::VectorXd& theta0) {
    std::vector<ConditionReport> reports;
    reports.reserve(designs.size());
    for (const FixedDesign& d : designs) {
        if (d.p() != theta0.size()) {
            throw std::invalid_argument("growth_curve: designs must share p");
        }
        reports.push_back(condition_report(d, family, link, theta0));
    }
    return reports;
}

std::string to_kv(const ConditionReport& r) {
    std::string out;
    out += "lambda_min_ZZt=" + format_double(r.lambda_min_ZZt) + "\n";
    out += "max_leverage=" + format_double(r.max_leverage) + "\n";
    out += "info_lambda_min=" + format_double(r.info_lambda_min) + "\n";
    out += "max_info_leverage=" + format_double(r.max_info_leverage) + "\n";
    out += "link_deriv_min=" + format_double(r.link_deriv_range.first) + "\n";
    out += "link_deriv_max=" + format_double(r.link_deriv_range.second) + "\n";
    out += "link_second_max=" + format_double(r.link_second_max) + "\n";
    out += "natural_param_min=" + format_double(r.natural_param_range.first) + "\n";
    out += "natural_param_max=" + format_double(r.natural_param_range.second) + "\n";
    out += std::string("positive_definite=") + (r.positive_definite ? "true" : "false") + "\n";
    return out;
}

}  // namespace fdglm
