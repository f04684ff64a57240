#include "fdglm/limitlab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fdglm/special.hpp"

namespace fdglm {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double median_inplace(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double deviation_prob(const std::vector<double>& v, double target, double eps) {
    std::size_t count = 0;
    for (const double x : v) {
        if (std::fabs(x - target) > eps) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(v.size());
}

SimRow summarize(std::vector<double> values, std::int64_t n, double target, double eps,
                 double bound) {
    SimRow row;
    row.sample_size = n;
    row.mean = mean_of(values);
    row.deviation_prob = deviation_prob(values, target, eps);
    row.median = median_inplace(values);
    row.bound = bound;
    return row;
}

void require_min_sample_size(const SimConfig& cfg, std::int64_t lo, const char* who) {
    if (cfg.sample_sizes.front() < lo) {
        throw std::invalid_argument(std::string(who) + ": sample sizes must be >= " +
                                    std::to_string(lo));
    }
}

}  // namespace

double weighted_mean(std::span<const double> samples, std::span<const double> variances) {
    if (samples.empty()) {
        throw std::invalid_argument("weighted_mean: empty input");
    }
    if (samples.size() != variances.size()) {
        throw std::invalid_argument("weighted_mean: length mismatch");
    }
    bool all_equal = true;
    for (const double v : variances) {
        if (!(v > 0.0)) {
            throw std::invalid_argument("weighted_mean: variances must be positive");
        }
        if (v != variances[0]) all_equal = false;
    }
    if (all_equal) {
        // Weights cancel; returning the plain mean keeps the reduction exact.
        double s = 0.0;
        for (const double x : samples) s += x;
        return s / static_cast<double>(samples.size());
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        num += samples[i] / variances[i];
        den += 1.0 / variances[i];
    }
    return num / den;
}

SimReport dependent_mean_sim(double rho_decay, const SimConfig& cfg) {
    if (!(rho_decay > 0.0 && rho_decay < 1.0)) {
        throw std::invalid_argument("dependent_mean_sim: rho_decay must lie in (0,1)");
    }
    validate(cfg);
    const std::int64_t max_n = cfg.sample_sizes.back();
    const double innovation_sd = std::sqrt(1.0 - rho_decay * rho_decay);

    std::vector<std::vector<double>> means(cfg.sample_sizes.size());
    for (auto& v : means) v.reserve(static_cast<std::size_t>(cfg.replications));

    for (int rep = 0; rep < cfg.replications; ++rep) {
        Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(rep));
        double x = rng.normal();
        double sum = x;
        std::size_t cut = 0;
        for (std::int64_t t = 1; t <= max_n; ++t) {
            while (cut < cfg.sample_sizes.size() && cfg.sample_sizes[cut] == t) {
                means[cut].push_back(sum / static_cast<double>(t));
                ++cut;
            }
            if (t == max_n) break;
            x = rho_decay * x + innovation_sd * rng.normal();
            sum += x;
        }
    }

    SimReport report;
    report.name = "dependent";
    report.seed = cfg.seed;
    report.replications = cfg.replications;
    report.epsilon = cfg.epsilon;
    for (std::size_t k = 0; k < cfg.sample_sizes.size(); ++k) {
        const auto n = static_cast<double>(cfg.sample_sizes[k]);
        const double rho_sum = (1.0 - std::pow(rho_decay, n)) / (1.0 - rho_decay);
        const double bound = 2.0 * rho_sum / (n * cfg.epsilon * cfg.epsilon);
        report.rows.push_back(
            summarize(std::move(means[k]), cfg.sample_sizes[k], 0.0, cfg.epsilon, bound));
    }
    return report;
}

double st_petersburg_truncated_mean(double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("st_petersburg_truncated_mean: v must be positive");
    }
    // E[X 1(X <= v)] = sum over n>=1 with 2^n <= v of 2^n * 2^{-n}; each term is 1.
    double count = 0.0;
    for (double pow2 = 2.0; pow2 <= v; pow2 *= 2.0) count += 1.0;
    return count;
}

TruncatedMeanResult truncated_mean_stat(std::span<const double> samples, double v_n,
                                        TailModel tail) {
    if (samples.empty()) {
        throw std::invalid_argument("truncated_mean_stat: empty input");
    }
    if (!(v_n > 0.0)) {
        throw std::invalid_argument("truncated_mean_stat: v_n must be positive");
    }
    TruncatedMeanResult res;
    double truncated_sum = 0.0;
    for (const double x : samples) {
        res.sum += x;
        if (std::fabs(x) <= v_n) truncated_sum += x;
    }
    switch (tail) {
        case TailModel::PlugIn:
            res.centering = truncated_sum;
            break;
        case TailModel::StPetersburg:
            res.centering =
                static_cast<double>(samples.size()) * st_petersburg_truncated_mean(v_n);
            break;
    }
    res.normalized = (res.sum - res.centering) / v_n;
    return res;
}

double st_petersburg_reward(int tosses) {
    if (tosses < 1 || tosses > 63) {
        throw std::invalid_argument("st_petersburg_reward: tosses must lie in [1, 63]");
    }
    return std::ldexp(1.0, tosses);
}

double pareto_from_uniform(double u) {
    if (!(u > 0.0 && u < 1.0)) {
        throw std::invalid_argument("pareto_from_uniform: u must lie in (0, 1)");
    }
    return 1.0 / u;
}

SimReport st_petersburg_sim(const SimConfig& cfg) {
    validate(cfg);
    require_min_sample_size(cfg, 2, "st_petersburg_sim");

    std::vector<std::vector<double>> ratios(cfg.sample_sizes.size());
    for (auto& v : ratios) v.reserve(static_cast<std::size_t>(cfg.replications));
    std::uint64_t cap_hits = 0;

    for (int rep = 0; rep < cfg.replications; ++rep) {
        Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(rep));
        double sum = 0.0;
        std::size_t cut = 0;
        const std::int64_t max_n = cfg.sample_sizes.back();
        for (std::int64_t t = 1; t <= max_n; ++t) {
            const std::uint64_t bits = rng.next_u64();
            int level = bits == 0 ? 64 : std::countl_zero(bits) + 1;
            if (level > 63) {
                level = 63;
                ++cap_hits;
            }
            sum += st_petersburg_reward(level);
            while (cut < cfg.sample_sizes.size() && cfg.sample_sizes[cut] == t) {
                const auto n = static_cast<double>(t);
                ratios[cut].push_back(sum / (n * std::log2(n)));
                ++cut;
            }
        }
    }

    SimReport report;
    report.name = "stpetersburg";
    report.seed = cfg.seed;
    report.replications = cfg.replications;
    report.epsilon = cfg.epsilon;
    for (std::size_t k = 0; k < cfg.sample_sizes.size(); ++k) {
        report.rows.push_back(
            summarize(std::move(ratios[k]), cfg.sample_sizes[k], 1.0, cfg.epsilon, kNan));
    }
    report.extras.emplace_back("cap_hits", static_cast<double>(cap_hits));
    return report;
}

SimReport pareto_sim(const SimConfig& cfg) {
    validate(cfg);
    require_min_sample_size(cfg, 3, "pareto_sim");

    std::vector<std::vector<double>> ratios(cfg.sample_sizes.size());
    for (auto& v : ratios) v.reserve(static_cast<std::size_t>(cfg.replications));

    for (int rep = 0; rep < cfg.replications; ++rep) {
        Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(rep));
        double sum = 0.0;
        std::size_t cut = 0;
        const std::int64_t max_n = cfg.sample_sizes.back();
        for (std::int64_t t = 1; t <= max_n; ++t) {
            sum += pareto_from_uniform(rng.uniform_open01());
            while (cut < cfg.sample_sizes.size() && cfg.sample_sizes[cut] == t) {
                const auto n = static_cast<double>(t);
                ratios[cut].push_back(sum / (n * std::log(n)));
                ++cut;
            }
        }
    }

    SimReport report;
    report.name = "pareto";
    report.seed = cfg.seed;
    report.replications = cfg.replications;
    report.epsilon = cfg.epsilon;
    for (std::size_t k = 0; k < cfg.sample_sizes.size(); ++k) {
        report.rows.push_back(
            summarize(std::move(ratios[k]), cfg.sample_sizes[k], 1.0, cfg.epsilon, kNan));
    }
    return report;
}

SpacingsResult exp_spacings_stat(std::span<const double> coeffs,
                                 std::span<const double> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("exp_spacings_stat: empty input");
    }
    if (coeffs.size() != samples.size()) {
        throw std::invalid_argument("exp_spacings_stat: length mismatch");
    }
    const std::size_t n = samples.size();
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());

    SpacingsResult res;
    for (std::size_t i = 0; i < n; ++i) res.t_n += coeffs[i] * sorted[i];

    // E T_n = sum_k suffix_sum(k) / (n - k + 1) with 1-based k.
    double suffix = 0.0;
    for (std::size_t k = n; k >= 1; --k) {
        suffix += coeffs[k - 1];
        res.expected_t_n += suffix / static_cast<double>(n - k + 1);
    }
    return res;
}

SimReport spacings_sim(std::span<const double> coeffs, const SimConfig& cfg) {
    validate(cfg);
    require_min_sample_size(cfg, 2, "spacings_sim");
    if (!coeffs.empty()) {
        for (const std::int64_t n : cfg.sample_sizes) {
            if (static_cast<std::int64_t>(coeffs.size()) != n) {
                throw std::invalid_argument(
                    "spacings_sim: coefficient length must match every sample size");
            }
        }
    }

    SimReport report;
    report.name = "spacings";
    report.seed = cfg.seed;
    report.replications = cfg.replications;
    report.epsilon = cfg.epsilon;

    std::vector<double> draws;
    for (std::size_t k = 0; k < cfg.sample_sizes.size(); ++k) {
        const std::int64_t n = cfg.sample_sizes[k];
        std::vector<double> ones;
        std::span<const double> a = coeffs;
        if (a.empty()) {
            ones.assign(static_cast<std::size_t>(n), 1.0);
            a = ones;
        }
        std::vector<double> stats;
        stats.reserve(static_cast<std::size_t>(cfg.replications));
        double expected = 0.0;
        for (int rep = 0; rep < cfg.replications; ++rep) {
            Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(rep));
            draws.clear();
            for (std::int64_t t = 0; t < n; ++t) draws.push_back(rng.exponential());
            const SpacingsResult r = exp_spacings_stat(a, draws);
            stats.push_back(r.t_n);
            expected = r.expected_t_n;
        }
        const double v_n = std::sqrt(static_cast<double>(n) * std::log(static_cast<double>(n)));
        report.rows.push_back(
            summarize(std::move(stats), n, expected, cfg.epsilon * v_n, expected));
    }
    return report;
}

std::int64_t boosting_bound(double delta, double eps) {
    if (!(delta > 0.0 && delta < 0.5)) {
        throw std::invalid_argument("boosting_bound: delta must lie in (0, 0.5)");
    }
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("boosting_bound: eps must lie in (0, 1)");
    }
    const double raw = std::log(1.0 / eps) / (2.0 * delta * delta);
    return static_cast<std::int64_t>(std::ceil(raw));
}

double majority_vote_sim(double delta, std::int64_t n, const SimConfig& cfg) {
    if (!(delta > 0.0 && delta < 0.5)) {
        throw std::invalid_argument("majority_vote_sim: delta must lie in (0, 0.5)");
    }
    if (n < 1) {
        throw std::invalid_argument("majority_vote_sim: n must be >= 1");
    }
    if (cfg.replications < 1) {
        throw std::invalid_argument("majority_vote_sim: replications must be >= 1");
    }
    const double p = 0.5 + delta;
    std::int64_t successes = 0;
    for (int rep = 0; rep < cfg.replications; ++rep) {
        Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(rep));
        std::int64_t correct = 0;
        for (std::int64_t t = 0; t < n; ++t) {
            if (rng.bernoulli(p)) ++correct;
        }
        if (2 * correct > n) ++successes;  // exact splits count as failure
    }
    return static_cast<double>(successes) / static_cast<double>(cfg.replications);
}

double Edf::operator()(double x) const {
    const auto it = std::upper_bound(points.begin(), points.end(), x);
    if (it == points.begin()) return 0.0;
    return levels[static_cast<std::size_t>(it - points.begin()) - 1];
}

Edf edf(std::span<const double> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("edf: empty input");
    }
    for (const double x : samples) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("edf: samples must be finite");
        }
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    Edf f;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        f.points.push_back(sorted[i]);
        f.levels.push_back(static_cast<double>(j) / n);
        i = j;
    }
    return f;
}

double gc_sup_distance(std::span<const double> samples,
                       const std::function<double(double)>& reference_cdf) {
    if (samples.empty()) {
        throw std::invalid_argument("gc_sup_distance: empty input");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    double sup = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double fx = reference_cdf(sorted[i]);
        const double before = static_cast<double>(i) / n;   // F_hat(x-)
        const double after = static_cast<double>(j) / n;    // F_hat(x)
        sup = std::max(sup, std::max(std::fabs(before - fx), std::fabs(after - fx)));
        i = j;
    }
    return sup;
}

ReferenceDistribution uniform_reference() {
    return {"uniform",
            [](double x) { return std::clamp(x, 0.0, 1.0); },
            [](Rng& rng) { return rng.uniform01(); }};
}

ReferenceDistribution normal_reference() {
    return {"normal",
            [](double x) { return normal_cdf(x); },
            [](Rng& rng) { return rng.normal(); }};
}

ReferenceDistribution exponential_reference() {
    return {"exponential",
            [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); },
            [](Rng& rng) { return rng.exponential(); }};
}

SimReport dkw_check(const SimConfig& cfg, const ReferenceDistribution& dist) {
    validate(cfg);

    const std::int64_t max_n = cfg.sample_sizes.back();
    std::vector<std::vector<double>> sups(cfg.sample_sizes.size());
    for (auto& v : sups) v.reserve(static_cast<std::size_t>(cfg.replications));

    std::vector<double> draws(static_cast<std::size_t>(max_n));
    std::vector<double> prefix;
    for (int rep = 0; rep < cfg.replications; ++rep) {
        Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(rep));
        for (auto& d : draws) d = dist.sample(rng);
        for (std::size_t k = 0; k < cfg.sample_sizes.size(); ++k) {
            const auto n = static_cast<std::size_t>(cfg.sample_sizes[k]);
            prefix.assign(draws.begin(), draws.begin() + static_cast<std::ptrdiff_t>(n));
            sups[k].push_back(gc_sup_distance(prefix, dist.cdf));
        }
    }

    SimReport report;
    report.name = "dkw";
    report.seed = cfg.seed;
    report.replications = cfg.replications;
    report.epsilon = cfg.epsilon;
    for (std::size_t k = 0; k < cfg.sample_sizes.size(); ++k) {
        const auto n = static_cast<double>(cfg.sample_sizes[k]);
        const double bound =
            std::min(1.0, 2.0 * std::exp(-2.0 * n * cfg.epsilon * cfg.epsilon));
        SimRow row;
        row.sample_size = cfg.sample_sizes[k];
        row.mean = mean_of(sups[k]);
        row.deviation_prob = 0.0;
        for (const double d : sups[k]) {
            if (d > cfg.epsilon) row.deviation_prob += 1.0;
        }
        row.deviation_prob /= static_cast<double>(cfg.replications);
        row.median = median_inplace(sups[k]);
        row.bound = bound;
        report.rows.push_back(row);

        const double se =
            std::sqrt(bound * (1.0 - bound) / static_cast<double>(cfg.replications));
        const bool violated = row.deviation_prob > bound + 3.0 * se;
        report.extras.emplace_back(
            "violation_n=" + std::to_string(cfg.sample_sizes[k]), violated ? 1.0 : 0.0);
    }
    return report;
}

double kernel_l2(KernelKind kernel) {
    switch (kernel) {
        case KernelKind::Gaussian:
            return 0.28209479177387814;  // 1 / (2 sqrt(pi))
        case KernelKind::Epanechnikov:
            return 0.6;
    }
    throw std::logic_error("kernel_l2: unhandled kernel");
}

namespace {

double kernel_value(KernelKind kernel, double u) {
    switch (kernel) {
        case KernelKind::Gaussian:
            return normal_pdf(u);
        case KernelKind::Epanechnikov:
            return std::fabs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    }
    throw std::logic_error("kernel_value: unhandled kernel");
}

}  // namespace

std::vector<double> kde(std::span<const double> samples, double bandwidth,
                        KernelKind kernel, std::span<const double> points) {
    if (samples.empty()) {
        throw std::invalid_argument("kde: empty samples");
    }
    if (!(bandwidth > 0.0)) {
        throw std::invalid_argument("kde: bandwidth must be positive");
    }
    std::vector<double> out;
    out.reserve(points.size());
    const double scale = 1.0 / (static_cast<double>(samples.size()) * bandwidth);
    for (const double x : points) {
        double acc = 0.0;
        for (const double s : samples) {
            acc += kernel_value(kernel, (x - s) / bandwidth);
        }
        out.push_back(acc * scale);
    }
    return out;
}

SampledDensity normal_density() {
    return {"normal",
            [](double x) { return normal_pdf(x); },
            [](Rng& rng) { return rng.normal(); }};
}

SimReport kde_clt_check(const SampledDensity& density, std::span<const double> points,
                        const SimConfig& cfg, KernelKind kernel,
                        double bandwidth_constant) {
    validate(cfg);
    if (points.empty()) {
        throw std::invalid_argument("kde_clt_check: points must be nonempty");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i] == points[j]) {
                throw std::invalid_argument("kde_clt_check: points must be distinct");
            }
        }
    }

    const std::int64_t max_n = cfg.sample_sizes.back();
    double c = bandwidth_constant;
    if (std::isnan(c)) {
        // Normal-reference rule from a pilot stream kept apart from the
        // replication streams.
        Rng pilot = Rng::substream(cfg.seed, std::uint64_t{1} << 63);
        const std::int64_t m = std::max<std::int64_t>(2, std::min<std::int64_t>(max_n, 4096));
        double s1 = 0.0, s2 = 0.0;
        for (std::int64_t i = 0; i < m; ++i) {
            const double x = density.sample(pilot);
            s1 += x;
            s2 += x * x;
        }
        const double var = (s2 - s1 * s1 / static_cast<double>(m)) /
                           static_cast<double>(m - 1);
        c = 1.06 * std::sqrt(std::max(var, 0.0));
    }
    if (!(c > 0.0)) {
        throw std::invalid_argument("kde_clt_check: bandwidth constant must be positive");
    }

    const std::size_t n_sizes = cfg.sample_sizes.size();
    const std::size_t n_pts = points.size();
    const auto reps = static_cast<std::size_t>(cfg.replications);
    // values[k][j][rep] = f_hat at point j with the first sample_sizes[k] draws
    std::vector<std::vector<std::vector<double>>> values(
        n_sizes, std::vector<std::vector<double>>(n_pts, std::vector<double>(reps, 0.0)));

    std::vector<double> draws(static_cast<std::size_t>(max_n));
    for (std::size_t rep = 0; rep < reps; ++rep) {
        Rng rng = Rng::substream(cfg.seed, rep);
        for (auto& d : draws) d = density.sample(rng);
        for (std::size_t k = 0; k < n_sizes; ++k) {
            const auto n = static_cast<std::size_t>(cfg.sample_sizes[k]);
            const double b = c * std::pow(static_cast<double>(n), -0.2);
            const std::vector<double> f =
                kde(std::span<const double>(draws.data(), n), b, kernel, points);
            for (std::size_t j = 0; j < n_pts; ++j) values[k][j][rep] = f[j];
        }
    }

    SimReport report;
    report.name = "kde-clt";
    report.seed = cfg.seed;
    report.replications = cfg.replications;
    report.epsilon = cfg.epsilon;
    const double l2 = kernel_l2(kernel);

    for (std::size_t k = 0; k < n_sizes; ++k) {
        const auto n = static_cast<double>(cfg.sample_sizes[k]);
        const double b = c * std::pow(n, -0.2);
        const double scale = std::sqrt(n * b);

        // Largest absolute cross-point correlation of the estimates at this n.
        double max_corr = 0.0;
        double first_corr = 0.0;
        for (std::size_t j1 = 0; j1 < n_pts; ++j1) {
            for (std::size_t j2 = j1 + 1; j2 < n_pts; ++j2) {
                const double m1 = mean_of(values[k][j1]);
                const double m2 = mean_of(values[k][j2]);
                double c11 = 0.0, c22 = 0.0, c12 = 0.0;
                for (std::size_t r = 0; r < reps; ++r) {
                    const double d1 = values[k][j1][r] - m1;
                    const double d2 = values[k][j2][r] - m2;
                    c11 += d1 * d1;
                    c22 += d2 * d2;
                    c12 += d1 * d2;
                }
                const double corr = c12 / std::sqrt(c11 * c22);
                if (j1 == 0 && j2 == 1) first_corr = corr;
                max_corr = std::max(max_corr, std::fabs(corr));
            }
        }

        for (std::size_t j = 0; j < n_pts; ++j) {
            std::vector<double> scaled(reps);
            for (std::size_t r = 0; r < reps; ++r) scaled[r] = scale * values[k][j][r];
            const double m = mean_of(scaled);
            double var = 0.0;
            for (const double x : scaled) var += (x - m) * (x - m);
            var /= static_cast<double>(reps - 1);

            SimRow row;
            row.sample_size = cfg.sample_sizes[k];
            row.mean = var;
            row.median = median_inplace(scaled);
            row.deviation_prob = max_corr;
            row.bound = density.pdf(points[j]) * l2;
            report.rows.push_back(row);
        }
        report.extras.emplace_back("bandwidth_n=" + std::to_string(cfg.sample_sizes[k]), b);
        if (n_pts >= 2) {
            report.extras.emplace_back("corr_n=" + std::to_string(cfg.sample_sizes[k]),
                                       first_corr);
        }
    }
    report.extras.emplace_back("bandwidth_constant", c);
    return report;
}

}  // namespace fdglm
