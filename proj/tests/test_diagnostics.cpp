#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "fdglm/diagnostics.hpp"
#include "fdglm/rng.hpp"

using namespace fdglm;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

FixedDesign prefix(const MatrixXd& stream, int n) {
    FixedDesign d;
    d.Z = stream.leftCols(n);
    d.y = VectorXd::Ones(n);
    return d;
}

MatrixXd covariate_stream(std::uint64_t seed, int p, int n) {
    Rng rng(seed);
    MatrixXd Z(p, n);
    for (int c = 0; c < n; ++c) {
        Z(0, c) = 1.0;
        for (int r = 1; r < p; ++r) Z(r, c) = 2.0 * rng.uniform01() - 1.0;
    }
    return Z;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("intercept-only design") {
    const int n = 4;
    FixedDesign d;
    d.Z = MatrixXd::Ones(1, n);
    d.y = VectorXd::Ones(n);
    const ConditionReport rep = condition_report(d, FamilySpec::poisson(),
                                                 LinkSpec::canonical(), VectorXd::Zero(1));
    CHECK(rep.lambda_min_ZZt == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(rep.max_leverage == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rep.info_lambda_min == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(rep.max_info_leverage == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rep.positive_definite);
    CHECK(rep.link_deriv_range.first == 1.0);
    CHECK(rep.link_deriv_range.second == 1.0);
    CHECK(rep.link_second_max == 0.0);
    CHECK(rep.natural_param_range.first == 0.0);
    CHECK(rep.natural_param_range.second == 0.0);
}

TEST_CASE("orthonormal 2x2 design") {
    FixedDesign d;
    d.Z = MatrixXd::Identity(2, 2);
    d.y = VectorXd::Ones(2);
    const ConditionReport rep = condition_report(d, FamilySpec::gaussian_unit_var(),
                                                 LinkSpec::canonical(), VectorXd::Zero(2));
    CHECK(rep.lambda_min_ZZt == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.max_leverage == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("leverage sums: trace identities") {
    const MatrixXd stream = covariate_stream(99, 3, 60);
    const FixedDesign d = prefix(stream, 60);
    const VectorXd theta0 = (VectorXd(3) << 0.3, -0.2, 0.1).finished();
    const FamilySpec fam = FamilySpec::poisson();
    const LinkSpec link = LinkSpec::canonical();

    const VectorXd lev = leverages(d.Z * d.Z.transpose(), d.Z);
    CHECK(std::fabs(lev.sum() - 3.0) <= 1e-8 * 3.0);

    // Information leverages sum to p once weighted by the information weights.
    const MatrixXd info = information(theta0, d, fam, link);
    const VectorXd ilev = leverages(info, d.Z);
    double weighted = 0.0;
    for (Eigen::Index i = 0; i < d.n(); ++i) {
        const double eta = d.Z.col(i).dot(theta0);
        weighted += std::exp(eta) * ilev[i];
    }
    CHECK(std::fabs(weighted - 3.0) <= 1e-8 * 3.0);
}

TEST_CASE("information eigenvalue lower bound from the design") {
    const MatrixXd stream = covariate_stream(1234, 2, 30);
    const FixedDesign d = prefix(stream, 30);
    const VectorXd theta0 = (VectorXd(2) << 0.4, -0.5).finished();
    const ConditionReport rep =
        condition_report(d, FamilySpec::poisson(), LinkSpec::canonical(), theta0);

    double min_weight = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < d.n(); ++i) {
        min_weight = std::min(min_weight, std::exp(d.Z.col(i).dot(theta0)));
    }
    CHECK(rep.info_lambda_min >= rep.lambda_min_ZZt * min_weight - 1e-10);
}

TEST_CASE("growth curve: eigenvalues grow, leverage decays") {
    const MatrixXd stream = covariate_stream(2024, 3, 400);
    std::vector<FixedDesign> designs;
    for (const int n : {50, 100, 200, 400}) designs.push_back(prefix(stream, n));
    const auto reports = growth_curve(designs, FamilySpec::poisson(), LinkSpec::canonical(),
                                      VectorXd::Zero(3));
    REQUIRE(reports.size() == 4);
    for (std::size_t k = 1; k < reports.size(); ++k) {
        CHECK(reports[k].lambda_min_ZZt > reports[k - 1].lambda_min_ZZt);
        CHECK(reports[k].max_leverage < reports[k - 1].max_leverage);
    }
}

TEST_CASE("constant-row design: leverage is exactly 1/n") {
    for (const int n : {5, 10, 20}) {
        FixedDesign d;
        d.Z = MatrixXd::Ones(1, n);
        d.y = VectorXd::Ones(n);
        const ConditionReport rep = condition_report(
            d, FamilySpec::gaussian_unit_var(), LinkSpec::canonical(), VectorXd::Zero(1));
        CHECK(rep.max_leverage == doctest::Approx(1.0 / n).epsilon(1e-12));
    }
}

TEST_CASE("an extreme design point dominates the leverage") {
    FixedDesign base;
    base.Z = MatrixXd(2, 3);
    base.Z << 1.0, 1.0, 1.0, -0.5, 0.0, 0.5;
    base.y = VectorXd::Ones(3);
    const ConditionReport before = condition_report(
        base, FamilySpec::gaussian_unit_var(), LinkSpec::canonical(), VectorXd::Zero(2));

    FixedDesign with_outlier;
    with_outlier.Z = MatrixXd(2, 4);
    with_outlier.Z.leftCols(3) = base.Z;
    with_outlier.Z.col(3) << 1.0, 50.0;
    with_outlier.y = VectorXd::Ones(4);
    const ConditionReport after =
        condition_report(with_outlier, FamilySpec::gaussian_unit_var(),
                         LinkSpec::canonical(), VectorXd::Zero(2));
    CHECK(after.max_leverage > before.max_leverage);
    CHECK(after.max_leverage > 0.95);
}

TEST_CASE("numerically singular design is reported, not thrown") {
    FixedDesign d;
    d.Z = MatrixXd(2, 5);
    d.Z.row(0).setOnes();
    d.Z.row(1) = d.Z.row(0);  // duplicated covariate
    d.y = VectorXd::Ones(5);
    const ConditionReport rep = condition_report(d, FamilySpec::gaussian_unit_var(),
                                                 LinkSpec::canonical(), VectorXd::Zero(2));
    CHECK_FALSE(rep.positive_definite);
}

TEST_CASE("growth curve rejects mismatched dimensions") {
    std::vector<FixedDesign> designs;
    designs.push_back(prefix(covariate_stream(5, 2, 10), 10));
    designs.push_back(prefix(covariate_stream(5, 3, 10), 10));
    CHECK_THROWS_AS(growth_curve(designs, FamilySpec::poisson(), LinkSpec::canonical(),
                                 VectorXd::Zero(2)),
                    std::invalid_argument);
}

TEST_CASE("reports are deterministic") {
    const MatrixXd stream = covariate_stream(77, 2, 25);
    const FixedDesign d = prefix(stream, 25);
    const VectorXd theta0 = (VectorXd(2) << 0.1, 0.2).finished();
    const ConditionReport a =
        condition_report(d, FamilySpec::poisson(), LinkSpec::canonical(), theta0);
    const ConditionReport b =
        condition_report(d, FamilySpec::poisson(), LinkSpec::canonical(), theta0);
    CHECK(to_kv(a) == to_kv(b));
}

TEST_CASE("kv serialization carries every field") {
    FixedDesign d;
    d.Z = MatrixXd::Ones(1, 2);
    d.y = VectorXd::Ones(2);
    const std::string kv = to_kv(
        condition_report(d, FamilySpec::poisson(), LinkSpec::canonical(), VectorXd::Zero(1)));
    for (const char* key :
         {"lambda_min_ZZt=", "max_leverage=", "info_lambda_min=", "max_info_leverage=",
          "link_deriv_min=", "link_deriv_max=", "link_second_max=", "natural_param_min=",
          "natural_param_max=", "positive_definite="}) {
        CHECK(kv.find(key) != std::string::npos);
    }
}

}  // TEST_SUITE
