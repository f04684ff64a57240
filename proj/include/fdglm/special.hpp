#pragma once

namespace fdglm {

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal CDF, computed through erfc (accurate over the full tail).
double normal_cdf(double x);

/// Inverse of the standard normal CDF for p in (0,1). Rational initial
/// approximation polished with one Halley step; absolute accuracy is well
/// below 1e-12, comfortably inside the 1e-8 contract used by Wald intervals.
/// Throws std::domain_error for p outside (0,1).
double normal_quantile(double p);

}  // namespace fdglm
