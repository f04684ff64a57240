#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fdglm/rng.hpp"
#include "fdglm/simreport.hpp"

// Every simulator here is a pure function of its arguments. Replication r
// draws from Rng::substream(cfg.seed, r) and results aggregate in
// replication order, so reports are identical no matter how work is
// scheduled and unchanged when cfg.replications grows.

namespace fdglm {

/// Precision-weighted average with weights 1/variance. Equal variances
/// reduce algebraically to the arithmetic mean (exact). Throws
/// std::invalid_argument on empty input, length mismatch, or a nonpositive
/// variance.
double weighted_mean(std::span<const double> samples, std::span<const double> variances);

/// Sample means of a stationary mean-zero Gaussian AR(1) sequence with
/// autocorrelation rho_decay^k, summarized per sample size. The bound column
/// is the covariance Chebyshev bound 2(1-rho^n) / ((1-rho) n eps^2).
SimReport dependent_mean_sim(double rho_decay, const SimConfig& cfg);

enum class TailModel { PlugIn, StPetersburg };

struct TruncatedMeanResult {
    double sum = 0.0;         // S_n
    double centering = 0.0;   // B_n actually used
    double normalized = 0.0;  // (S_n - B_n) / v_n
};

/// Truncated-sum statistic: S_n, the centering B_n, and (S_n - B_n)/v_n.
/// B_n is n * E[X 1(|X| <= v_n)] when a tail model with a known expectation
/// is named (St. Petersburg: the expectation is the exact finite sum, equal
/// to floor(log2 v_n) for v_n >= 2), and the plug-in sum of the truncated
/// sample otherwise.
TruncatedMeanResult truncated_mean_stat(std::span<const double> samples, double v_n,
                                        TailModel tail = TailModel::PlugIn);

/// Exact E[X 1(X <= v)] for P(X = 2^n) = 2^{-n}, n >= 1.
double st_petersburg_truncated_mean(double v);

/// Reward for a first head on toss `tosses`: 2^tosses, matching
/// P(X = 2^n) = 2^{-n}. Levels are confined to [1, 63].
double st_petersburg_reward(int tosses);

/// Inverse-transform Pareto(shape 1) draw X = 1/u for u in (0, 1).
double pareto_from_uniform(double u);

/// St. Petersburg totals S_n normalized by the fair stake n*log2(n); rows
/// report the ratio (target 1). Draw levels are capped at 63 so rewards fit
/// exactly in a double; cap hits are counted in extras. Sample sizes must be
/// >= 2.
SimReport st_petersburg_sim(const SimConfig& cfg);

/// Pareto(shape 1) totals S_n normalized by n*ln(n); rows report the ratio
/// (target 1). Sample sizes must be >= 3.
SimReport pareto_sim(const SimConfig& cfg);

struct SpacingsResult {
    double t_n = 0.0;
    double expected_t_n = 0.0;  // closed form from the order-statistic means
};

/// T_n = sum_i a_i X_(i) for the sorted samples, together with the exact
/// E T_n = sum_k (sum_{i>=k} a_i) / (n-k+1) valid for iid unit exponentials.
/// Throws std::invalid_argument on empty input or length mismatch.
SpacingsResult exp_spacings_stat(std::span<const double> coeffs,
                                 std::span<const double> samples);

/// Monte Carlo around exp_spacings_stat: per sample size draws unit
/// exponentials and reports mean/median of T_n with bound = E T_n; the
/// deviation threshold is eps * sqrt(n ln n). Empty coeffs mean all ones;
/// otherwise their length must match every sample size. Sample sizes >= 2.
SimReport spacings_sim(std::span<const double> coeffs, const SimConfig& cfg);

/// Least n with n >= ln(1/eps) / (2 delta^2). Requires delta in (0, 0.5)
/// and eps in (0, 1).
std::int64_t boosting_bound(double delta, double eps);

/// Fraction of replications in which the majority of n independent votes,
/// each correct with probability 1/2 + delta, is correct. Ties count as
/// failure. Uses cfg.seed and cfg.replications only.
double majority_vote_sim(double delta, std::int64_t n, const SimConfig& cfg);

/// Right-continuous empirical distribution function.
struct Edf {
    std::vector<double> points;  // sorted unique sample values
    std::vector<double> levels;  // F(points[i]); last level is 1

    double operator()(double x) const;
};

Edf edf(std::span<const double> samples);

/// Exact sup_x |F_hat(x) - F(x)| for a nondecreasing reference CDF, scanning
/// both one-sided limits at every jump point.
double gc_sup_distance(std::span<const double> samples,
                       const std::function<double(double)>& reference_cdf);

/// A named distribution with CDF and sampler, as consumed by the empirical
/// process checks.
struct ReferenceDistribution {
    std::string name;
    std::function<double(double)> cdf;
    std::function<double(Rng&)> sample;
};

ReferenceDistribution uniform_reference();
ReferenceDistribution normal_reference();
ReferenceDistribution exponential_reference();

/// Per sample size: mean/median of the sup distance, the empirical
/// exceedance probability P(D_n > eps), and the bound 2 exp(-2 n eps^2).
/// extras carry one violation flag per n, set when the empirical probability
/// exceeds the bound by more than 3 binomial standard errors.
SimReport dkw_check(const SimConfig& cfg, const ReferenceDistribution& dist);

enum class KernelKind { Gaussian, Epanechnikov };

/// L2 norm integral of the kernel.
double kernel_l2(KernelKind kernel);

/// Kernel density estimate (1/(n b)) sum_i K((x - X_i)/b) at each point.
std::vector<double> kde(std::span<const double> samples, double bandwidth,
                        KernelKind kernel, std::span<const double> points);

struct SampledDensity {
    std::string name;
    std::function<double(double)> pdf;
    std::function<double(Rng&)> sample;
};

SampledDensity normal_density();

/// Variance check for the scaled estimator sqrt(n b_n) f_hat(x_j) under
/// b_n = c n^{-1/5}. One row per (sample size, point): mean holds the
/// across-replication variance of the scaled estimator, median its median,
/// bound the asymptotic value f(x_j) * kernel_l2, and deviation_prob the
/// largest absolute cross-point correlation at that sample size. A NaN
/// bandwidth_constant selects the normal-reference rule 1.06 * (pilot
/// sample standard deviation). Points must be distinct.
SimReport kde_clt_check(const SampledDensity& density, std::span<const double> points,
                        const SimConfig& cfg, KernelKind kernel,
                        double bandwidth_constant);

}  // namespace fdglm
