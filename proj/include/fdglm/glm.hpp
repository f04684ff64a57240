#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "fdglm/expfam.hpp"

namespace fdglm {

/// Fixed design for a one-parameter exponential-family GLM. Z is p x n with
/// one column per observation (an intercept, if any, is a row of ones); y is
/// the length-n response vector.
struct FixedDesign {
    Eigen::MatrixXd Z;
    Eigen::VectorXd y;

    Eigen::Index p() const { return Z.rows(); }
    Eigen::Index n() const { return Z.cols(); }
};

/// Validates shape (n >= p >= 1), finiteness, and family-specific response
/// constraints (nonnegative integers for Poisson, {0,1} for Bernoulli).
/// Throws std::invalid_argument on violation.
void validate_design(const FixedDesign& design, const FamilySpec& family);

enum class FitInit { Zero, InterceptAtTransformedMean };

struct FitOptions {
    int max_iterations = 50;
    double grad_tol = 1e-10;           // max-norm of the score
    int step_halving_max = 30;
    FitInit init = FitInit::InterceptAtTransformedMean;
};

/// The MLE with its observed information and asymptotic covariance.
/// When converged, information is symmetric positive definite and
/// covariance * information = I to high relative accuracy.
struct FitResult {
    Eigen::VectorXd theta_hat;
    Eigen::MatrixXd information;
    Eigen::MatrixXd covariance;
    bool converged = false;
    int iterations = 0;
    double final_grad_norm = 0.0;
    std::vector<double> loglik_trace;  // up to the additive data constant
};

struct HessianParts {
    Eigen::MatrixXd H;   // full Hessian of the log-likelihood
    Eigen::MatrixXd H1;  // information part; H = -H1 + H2
    Eigen::MatrixXd H2;  // zero for canonical links
};

class SingularInformationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainEscapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Log-likelihood up to the additive constant that does not depend on theta.
double log_likelihood(const Eigen::VectorXd& theta, const FixedDesign& design,
                      const FamilySpec& family, const LinkSpec& link);

/// Score vector: sum_i z_i r'(theta^T z_i) [y_i - K'(r(theta^T z_i))].
Eigen::VectorXd score(const Eigen::VectorXd& theta, const FixedDesign& design,
                      const FamilySpec& family, const LinkSpec& link);

/// Hessian split H = -H1 + H2 with
///   H1 = sum_i z_i z_i^T K''(r_i) r'(s_i)^2,
///   H2 = sum_i z_i z_i^T [y_i - K'(r_i)] r''(s_i).
HessianParts hessian(const Eigen::VectorXd& theta, const FixedDesign& design,
                     const FamilySpec& family, const LinkSpec& link);

/// Fisher information, i.e. the H1 part of the Hessian.
Eigen::MatrixXd information(const Eigen::VectorXd& theta, const FixedDesign& design,
                            const FamilySpec& family, const LinkSpec& link);

/// Maximum likelihood by Fisher scoring (Newton on the score with the
/// information as step matrix) with step halving on log-likelihood decrease.
/// Convergence means ||score||_inf <= grad_tol. Exhausting max_iterations is
/// reported through converged=false, never an exception. Throws
/// SingularInformationError when the information factorization fails at an
/// iterate and DomainEscapeError when the linear predictor leaves the
/// natural domain and step halving cannot recover.
FitResult fit_mle(const FixedDesign& design, const FamilySpec& family,
                  const LinkSpec& link, const FitOptions& opts = {});

/// Two-sided Wald intervals theta_j +/- z_{(1+level)/2} sqrt(cov_jj).
/// Requires a converged fit and level in (0,1).
std::vector<std::pair<double, double>> wald_intervals(const FitResult& fit, double level);

}  // namespace fdglm
