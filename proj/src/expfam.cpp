#include "fdglm/expfam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fdglm {

const char* FamilySpec::name() const {
    switch (kind) {
        case FamilyKind::Poisson: return "poisson";
        case FamilyKind::Bernoulli: return "bernoulli";
        case FamilyKind::GaussianUnitVar: return "gaussian";
    }
    return "unknown";
}

namespace {

Cumulant bernoulli_cumulant(double eta) {
    // q is the probability on the far side of zero: logistic(-|eta|).
    // Stable down to |eta| ~ 745 where exp(-|eta|) underflows.
    const double e = std::exp(-std::fabs(eta));
    const double q = e / (1.0 + e);
    Cumulant c;
    c.value = eta <= 0.0 ? std::log1p(std::exp(eta)) : eta + std::log1p(std::exp(-eta));
    c.d1 = eta > 0.0 ? 1.0 - q : q;
    c.d2 = q * (1.0 - q);
    return c;
}

}  // namespace

Cumulant cumulant_eval(const FamilySpec& family, double eta) {
    if (!std::isfinite(eta)) {
        throw std::domain_error("cumulant_eval: eta is not finite");
    }
    if (!family.contains(eta)) {
        throw std::domain_error("cumulant_eval: eta=" + std::to_string(eta) +
                                " outside the natural domain");
    }
    switch (family.kind) {
        case FamilyKind::Poisson: {
            const double m = std::exp(eta);
            return {m, m, m};
        }
        case FamilyKind::Bernoulli:
            return bernoulli_cumulant(eta);
        case FamilyKind::GaussianUnitVar:
            return {0.5 * eta * eta, eta, 1.0};
    }
    throw std::logic_error("cumulant_eval: unhandled family kind");
}

double mean_inverse(const FamilySpec& family, double mean) {
    switch (family.kind) {
        case FamilyKind::Poisson:
            return std::log(mean);
        case FamilyKind::Bernoulli:
            return std::log(mean / (1.0 - mean));
        case FamilyKind::GaussianUnitVar:
            return mean;
    }
    throw std::logic_error("mean_inverse: unhandled family kind");
}

LinkValue link_eval(const LinkSpec& link, double s) {
    if (!std::isfinite(s)) {
        throw std::domain_error("link_eval: argument is not finite");
    }
    LinkValue v;
    if (link.custom_eval) {
        v = link.custom_eval(s);
    } else {
        v = {s, 1.0, 0.0};
    }
    if (!(v.rprime > 0.0)) {
        throw std::domain_error("link_eval: link is not strictly increasing at s=" +
                                std::to_string(s));
    }
    return v;
}

}  // namespace fdglm
