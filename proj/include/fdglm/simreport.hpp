#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fdglm {

/// Shared configuration for the seeded Monte Carlo simulators.
struct SimConfig {
    std::uint64_t seed = 0;
    int replications = 1;
    std::vector<std::int64_t> sample_sizes;
    double epsilon = 0.1;  // deviation threshold where applicable
};

/// Throws std::invalid_argument unless replications >= 1, epsilon > 0 and
/// sample_sizes is nonempty, positive and strictly increasing.
void validate(const SimConfig& cfg);

/// One summary line of a Monte Carlo run. `bound` carries whatever analytic
/// value the estimator is being compared against (NaN when there is none);
/// for the KDE CLT check there is one row per evaluation point and `mean`
/// holds the scaled-variance estimate (see limitlab.hpp).
struct SimRow {
    std::int64_t sample_size = 0;
    double mean = 0.0;
    double median = 0.0;
    double deviation_prob = 0.0;
    double bound = 0.0;
};

struct SimReport {
    std::string name;
    std::uint64_t seed = 0;
    int replications = 0;
    double epsilon = 0.0;
    std::vector<SimRow> rows;
    std::vector<std::pair<std::string, double>> extras;
};

/// CSV with header `sample_size,mean,median,deviation_prob,bound`,
/// shortest-round-trip number formatting, LF line endings. Byte-identical
/// across reruns of the same seeded simulation.
std::string to_csv(const SimReport& report);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace fdglm
