#pragma once

#include <string>
#include <vector>

#include "fdglm/csv.hpp"
#include "fdglm/diagnostics.hpp"
#include "fdglm/glm.hpp"
#include "fdglm/simreport.hpp"

namespace fdglm {

/// Everything the fit command reports: estimates with their asymptotic
/// uncertainty, the design diagnostics at the estimate, and convergence
/// metadata.
struct FitReport {
    std::vector<std::string> coefficient_names;
    FitResult fit;
    std::vector<std::pair<double, double>> intervals;  // empty when not converged
    double level = 0.95;
    ConditionReport diagnostics;
    std::string family;
    std::string link;
    std::int64_t n = 0;
    std::int64_t rows_dropped = 0;

    std::vector<double> std_errors() const;
};

/// Assembles the report from a loaded design: fit, Wald intervals at
/// `level`, and the condition diagnostics evaluated at the estimate.
FitReport build_fit_report(const LoadedDesign& loaded, const FamilySpec& family,
                           const LinkSpec& link, const FitOptions& opts, double level);

/// Fixed-width table with scientific notation at `digits` significant
/// digits.
std::string render_table(const FitReport& report, int digits);

/// JSON with the stable top-level keys {coefficients, covariance,
/// std_errors, intervals, diagnostics, convergence}; numbers at full
/// precision.
std::string to_json(const FitReport& report);

std::string to_json(const ConditionReport& report);

std::string to_json(const SimReport& report);

}  // namespace fdglm
