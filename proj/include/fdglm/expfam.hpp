#pragma once

#include <functional>
#include <limits>

namespace fdglm {

enum class FamilyKind { Poisson, Bernoulli, GaussianUnitVar };

/// Cumulant function of a canonical one-parameter exponential family,
/// evaluated together with its first two derivatives. The first derivative
/// is the mean function, the second the variance function.
struct Cumulant {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// A canonical one-parameter exponential family, identified by its cumulant
/// function on an open natural-parameter interval. All three shipped
/// families have the whole real line as natural domain; the interval is kept
/// explicit so the GLM layer can check range containment uniformly.
struct FamilySpec {
    FamilyKind kind = FamilyKind::Poisson;
    double eta_min = -std::numeric_limits<double>::infinity();
    double eta_max = std::numeric_limits<double>::infinity();

    static FamilySpec poisson() { return {FamilyKind::Poisson}; }
    static FamilySpec bernoulli() { return {FamilyKind::Bernoulli}; }
    static FamilySpec gaussian_unit_var() { return {FamilyKind::GaussianUnitVar}; }

    bool contains(double eta) const { return eta > eta_min && eta < eta_max; }
    const char* name() const;
};

/// K(eta), K'(eta), K''(eta). Throws std::domain_error when eta is not
/// finite or lies outside the family's natural domain. Bernoulli uses the
/// log1p-of-exp form and is overflow-safe for |eta| up to 700.
Cumulant cumulant_eval(const FamilySpec& family, double eta);

/// Inverse of the mean function, used to seed the intercept from the sample
/// mean. The argument must lie in the family's open mean range.
double mean_inverse(const FamilySpec& family, double mean);

enum class LinkKind { Canonical };

struct LinkValue {
    double r = 0.0;
    double rprime = 0.0;
    double rsecond = 0.0;
};

/// The map from linear predictor to natural parameter with its first two
/// derivatives. Canonical is the identity. A custom evaluator implementing
/// the same contract (strictly increasing, twice differentiable) may be
/// supplied; only the canonical link is exposed through the CLI.
struct LinkSpec {
    LinkKind kind = LinkKind::Canonical;
    std::function<LinkValue(double)> custom_eval;

    static LinkSpec canonical() { return {}; }
    static LinkSpec custom(std::function<LinkValue(double)> eval) {
        LinkSpec link;
        link.custom_eval = std::move(eval);
        return link;
    }
    bool is_canonical() const { return !custom_eval; }
    const char* name() const { return is_canonical() ? "canonical" : "custom"; }
};

/// r(s), r'(s), r''(s). Throws std::domain_error when s is not finite or the
/// evaluation violates strict monotonicity (r'(s) <= 0).
LinkValue link_eval(const LinkSpec& link, double s);

}  // namespace fdglm
