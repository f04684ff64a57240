#include "fdglm/simreport.hpp"

#include <charconv>
#include <stdexcept>

namespace fdglm {

void validate(const SimConfig& cfg) {
    if (cfg.replications < 1) {
        throw std::invalid_argument("SimConfig: replications must be >= 1");
    }
    if (!(cfg.epsilon > 0.0)) {
        throw std::invalid_argument("SimConfig: epsilon must be positive");
    }
    if (cfg.sample_sizes.empty()) {
        throw std::invalid_argument("SimConfig: sample_sizes must be nonempty");
    }
    std::int64_t prev = 0;
    for (const std::int64_t n : cfg.sample_sizes) {
        if (n <= prev) {
            throw std::invalid_argument(
                "SimConfig: sample_sizes must be positive and strictly increasing");
        }
        prev = n;
    }
}

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const SimReport& report) {
    std::string out = "sample_size,mean,median,deviation_prob,bound\n";
    for (const SimRow& row : report.rows) {
        out += std::to_string(row.sample_size);
        out += ',';
        out += format_double(row.mean);
        out += ',';
        out += format_double(row.median);
        out += ',';
        out += format_double(row.deviation_prob);
        out += ',';
        out += format_double(row.bound);
        out += '\n';
    }
    return out;
}

}  // namespace fdglm
