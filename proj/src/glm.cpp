#include "fdglm/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "fdglm/special.hpp"

namespace fdglm {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct ObsEval {
    Eigen::ArrayXd r, rprime, rsecond;  // link values at s_i = theta^T z_i
    Eigen::ArrayXd K, Kd, Kdd;          // cumulant values at eta_i = r(s_i)
};

void check_theta(const Eigen::VectorXd& theta, const FixedDesign& design) {
    if (theta.size() != design.p()) {
        throw std::invalid_argument("theta has length " + std::to_string(theta.size()) +
                                    ", design has p=" + std::to_string(design.p()));
    }
    if (!theta.allFinite()) {
        throw std::domain_error("theta contains non-finite entries");
    }
}

ObsEval evaluate_observations(const Eigen::VectorXd& theta, const FixedDesign& design,
                              const FamilySpec& family, const LinkSpec& link) {
    const Eigen::Index n = design.n();
    const Eigen::VectorXd s = design.Z.transpose() * theta;
    ObsEval ev;
    ev.r.resize(n);
    ev.rprime.resize(n);
    ev.rsecond.resize(n);
    ev.K.resize(n);
    ev.Kd.resize(n);
    ev.Kdd.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const LinkValue lv = link_eval(link, s[i]);
        const Cumulant c = cumulant_eval(family, lv.r);
        ev.r[i] = lv.r;
        ev.rprime[i] = lv.rprime;
        ev.rsecond[i] = lv.rsecond;
        ev.K[i] = c.value;
        ev.Kd[i] = c.d1;
        ev.Kdd[i] = c.d2;
    }
    return ev;
}

}  // namespace

void validate_design(const FixedDesign& design, const FamilySpec& family) {
    const Eigen::Index p = design.p();
    const Eigen::Index n = design.n();
    if (p < 1 || n < p) {
        throw std::invalid_argument("design requires n >= p >= 1, got p=" +
                                    std::to_string(p) + ", n=" + std::to_string(n));
    }
    if (design.y.size() != n) {
        throw std::invalid_argument("response length " + std::to_string(design.y.size()) +
                                    " does not match n=" + std::to_string(n));
    }
    if (!design.Z.allFinite() || !design.y.allFinite()) {
        throw std::invalid_argument("design contains non-finite entries");
    }
    if (family.kind == FamilyKind::Poisson) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double yi = design.y[i];
            if (yi < 0.0 || std::floor(yi) != yi) {
                throw std::invalid_argument("Poisson responses must be nonnegative integers "
                                            "(row " + std::to_string(i) + ")");
            }
        }
    } else if (family.kind == FamilyKind::Bernoulli) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double yi = design.y[i];
            if (yi != 0.0 && yi != 1.0) {
                throw std::invalid_argument("Bernoulli responses must be 0 or 1 "
                                            "(row " + std::to_string(i) + ")");
            }
        }
    }
}

double log_likelihood(const Eigen::VectorXd& theta, const FixedDesign& design,
                      const FamilySpec& family, const LinkSpec& link) {
    check_theta(theta, design);
    const ObsEval ev = evaluate_observations(theta, design, family, link);
    return (design.y.array() * ev.r - ev.K).sum();
}

Eigen::VectorXd score(const Eigen::VectorXd& theta, const FixedDesign& design,
                      const FamilySpec& family, const LinkSpec& link) {
    check_theta(theta, design);
    const ObsEval ev = evaluate_observations(theta, design, family, link);
    const Eigen::ArrayXd w = ev.rprime * (design.y.array() - ev.Kd);
    return design.Z * w.matrix();
}

HessianParts hessian(const Eigen::VectorXd& theta, const FixedDesign& design,
                     const FamilySpec& family, const LinkSpec& link) {
    check_theta(theta, design);
    const ObsEval ev = evaluate_observations(theta, design, family, link);
    const Eigen::ArrayXd w1 = ev.Kdd * ev.rprime.square();
    const Eigen::ArrayXd w2 = (design.y.array() - ev.Kd) * ev.rsecond;
    HessianParts parts;
    parts.H1 = design.Z * w1.matrix().asDiagonal() * design.Z.transpose();
    parts.H2 = design.Z * w2.matrix().asDiagonal() * design.Z.transpose();
    parts.H = -parts.H1 + parts.H2;
    return parts;
}

Eigen::MatrixXd information(const Eigen::VectorXd& theta, const FixedDesign& design,
                            const FamilySpec& family, const LinkSpec& link) {
    check_theta(theta, design);
    const ObsEval ev = evaluate_observations(theta, design, family, link);
    const Eigen::ArrayXd w1 = ev.Kdd * ev.rprime.square();
    return design.Z * w1.matrix().asDiagonal() * design.Z.transpose();
}

namespace {

// Candidate evaluation inside the fit loop: domain violations and overflow
// surface as "no value" instead of an exception so step halving can react.
std::optional<double> try_log_likelihood(const Eigen::VectorXd& theta,
                                         const FixedDesign& design,
                                         const FamilySpec& family, const LinkSpec& link) {
    try {
        const double ll = log_likelihood(theta, design, family, link);
        if (!std::isfinite(ll)) return std::nullopt;
        return ll;
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

Eigen::VectorXd initial_theta(const FixedDesign& design, const FamilySpec& family,
                              const LinkSpec& link, const FitOptions& opts) {
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(design.p());
    if (opts.init != FitInit::InterceptAtTransformedMean || !link.is_canonical()) {
        return theta;
    }
    Eigen::Index intercept_row = -1;
    for (Eigen::Index r = 0; r < design.p(); ++r) {
        if ((design.Z.row(r).array() == 1.0).all()) {
            intercept_row = r;
            break;
        }
    }
    if (intercept_row < 0) return theta;

    const double n = static_cast<double>(design.n());
    double ybar = design.y.mean();
    switch (family.kind) {
        case FamilyKind::Poisson:
            if (ybar <= 0.0) ybar = (design.y.sum() + 0.5) / n;
            break;
        case FamilyKind::Bernoulli:
            ybar = std::clamp(ybar, 0.5 / n, 1.0 - 0.5 / n);
            break;
        case FamilyKind::GaussianUnitVar:
            break;
    }
    theta[intercept_row] = mean_inverse(family, ybar);
    return theta;
}

}  // namespace

FitResult fit_mle(const FixedDesign& design, const FamilySpec& family,
                  const LinkSpec& link, const FitOptions& opts) {
    validate_design(design, family);
    if (opts.max_iterations < 1) {
        throw std::invalid_argument("max_iterations must be >= 1");
    }
    if (!(opts.grad_tol > 0.0)) {
        throw std::invalid_argument("grad_tol must be positive");
    }
    if (opts.step_halving_max < 0) {
        throw std::invalid_argument("step_halving_max must be nonnegative");
    }

    const Eigen::Index p = design.p();
    Eigen::VectorXd theta = initial_theta(design, family, link, opts);
    std::optional<double> ll = try_log_likelihood(theta, design, family, link);
    if (!ll) {
        throw DomainEscapeError("fit_mle: initial point maps outside the natural domain");
    }

    FitResult res;
    res.loglik_trace.push_back(*ll);
    res.iterations = 0;

    // A score below grad_tol certifies the score equation only when the
    // Newton step is also small; under separation the score underflows while
    // the step stays O(1) because the curvature collapses with it.
    const double step_tol = std::max(std::sqrt(opts.grad_tol), 1e-8);

    double grad_norm = 0.0;
    bool converged = false;
    for (;;) {
        const Eigen::VectorXd grad = score(theta, design, family, link);
        grad_norm = grad.lpNorm<Eigen::Infinity>();

        const Eigen::MatrixXd info = information(theta, design, family, link);
        Eigen::LLT<Eigen::MatrixXd> llt(info);
        if (llt.info() != Eigen::Success) {
            if (res.iterations == 0) {
                throw SingularInformationError(
                    "fit_mle: information matrix is not positive definite at the "
                    "initial point");
            }
            break;  // curvature degenerated along the path: report, don't throw
        }
        const Eigen::VectorXd delta = llt.solve(grad);
        const double step_norm = delta.lpNorm<Eigen::Infinity>();

        if (grad_norm <= opts.grad_tol &&
            step_norm <= step_tol * (1.0 + theta.lpNorm<Eigen::Infinity>())) {
            converged = true;
            break;
        }
        if (res.iterations >= opts.max_iterations) break;

        const double slack = 1e-12 * (1.0 + std::fabs(*ll));
        double step = 1.0;
        bool accepted = false;
        bool any_valid = false;
        for (int h = 0; h <= opts.step_halving_max; ++h, step *= 0.5) {
            const Eigen::VectorXd candidate = theta + step * delta;
            const std::optional<double> cand_ll =
                try_log_likelihood(candidate, design, family, link);
            if (!cand_ll) continue;
            any_valid = true;
            if (*cand_ll >= *ll - slack) {
                theta = candidate;
                ll = cand_ll;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (!any_valid) {
                throw DomainEscapeError(
                    "fit_mle: linear predictor left the natural domain and step halving "
                    "could not recover");
            }
            break;  // stalled: no non-decreasing step within the halving budget
        }
        ++res.iterations;
        res.loglik_trace.push_back(*ll);
    }

    res.theta_hat = theta;
    res.final_grad_norm = grad_norm;
    res.converged = converged;
    res.information = information(theta, design, family, link);
    Eigen::LLT<Eigen::MatrixXd> llt(res.information);
    if (llt.info() == Eigen::Success) {
        res.covariance = llt.solve(Eigen::MatrixXd::Identity(p, p));
    } else {
        if (converged) {
            throw SingularInformationError(
                "fit_mle: information matrix is not positive definite at the optimum");
        }
        res.covariance = Eigen::MatrixXd::Constant(p, p, kNan);
    }
    return res;
}

std::vector<std::pair<double, double>> wald_intervals(const FitResult& fit, double level) {
    if (!fit.converged) {
        throw std::invalid_argument("wald_intervals: fit did not converge");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("wald_intervals: level must lie in (0,1)");
    }
    const double z = normal_quantile(0.5 * (1.0 + level));
    std::vector<std::pair<double, double>> intervals;
    intervals.reserve(static_cast<std::size_t>(fit.theta_hat.size()));
    for (Eigen::Index j = 0; j < fit.theta_hat.size(); ++j) {
        const double half = z * std::sqrt(fit.covariance(j, j));
        intervals.emplace_back(fit.theta_hat[j] - half, fit.theta_hat[j] + half);
    }
    return intervals;
}

}  // namespace fdglm
