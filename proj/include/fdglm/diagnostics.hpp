#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "fdglm/glm.hpp"

namespace fdglm {

/// Computable regularity diagnostics for a fixed design at a reference
/// parameter: eigenvalue growth of Z Z^T and of the information matrix,
/// leverage of the most influential design point, and the range of the link
/// evaluations entering the information weights. Designs whose Z Z^T has
/// condition number above 1e12 are reported with positive_definite=false
/// instead of aborting.
struct ConditionReport {
    double lambda_min_ZZt = 0.0;
    double max_leverage = 0.0;        // max_i z_i^T (Z Z^T)^{-1} z_i
    double info_lambda_min = 0.0;
    double max_info_leverage = 0.0;   // max_i z_i^T I_n(theta0)^{-1} z_i
    std::pair<double, double> link_deriv_range = {0.0, 0.0};   // inf/sup of r'(theta0^T z_i)
    double link_second_max = 0.0;                              // max_i |r''(theta0^T z_i)|
    std::pair<double, double> natural_param_range = {0.0, 0.0};  // inf/sup of r(theta0^T z_i)
    bool positive_definite = false;
};

/// Leverages z_i^T M^{-1} z_i for a symmetric positive (semi)definite M,
/// one entry per design column. Exposed so tests and the CLI can check the
/// trace identities directly.
Eigen::VectorXd leverages(const Eigen::MatrixXd& M, const Eigen::MatrixXd& Z);

ConditionReport condition_report(const FixedDesign& design, const FamilySpec& family,
                                 const LinkSpec& link, const Eigen::VectorXd& theta0);

/// One report per design; the designs must share p (typically nested
/// prefixes of one covariate stream). Throws std::invalid_argument on a
/// dimension mismatch.
std::vector<ConditionReport> growth_curve(const std::vector<FixedDesign>& designs,
                                          const FamilySpec& family, const LinkSpec& link,
                                          const Eigen::VectorXd& theta0);

/// Flat `name=value` serialization, one field per line.
std::string to_kv(const ConditionReport& report);

}  // namespace fdglm
