#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fdglm/special.hpp"

using namespace fdglm;

namespace {

// Oracle: bisection on the normal CDF, independent of the quantile routine.
double quantile_by_bisection(double p) {
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (normal_cdf(mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("special") {

TEST_CASE("quantile matches bisection oracle to 1e-8") {
    for (const double p : {0.5, 0.975, 0.025, 0.9, 0.1, 0.999, 0.001, 1e-6, 1.0 - 1e-6}) {
        CHECK(std::fabs(normal_quantile(p) - quantile_by_bisection(p)) <= 1e-8);
    }
}

TEST_CASE("97.5% quantile") {
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
}

TEST_CASE("quantile and cdf are inverse") {
    for (double p = 0.02; p < 1.0; p += 0.07) {
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("out-of-range p rejected") {
    CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(-0.3), std::domain_error);
}

TEST_CASE("pdf and cdf basics") {
    CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(normal_cdf(10.0) == doctest::Approx(1.0));
    CHECK(normal_cdf(-40.0) >= 0.0);
}

}  // TEST_SUITE
