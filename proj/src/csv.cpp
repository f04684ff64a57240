#include "fdglm/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace fdglm {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool any_field = false;

    const auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        any_field = true;
    };
    const auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
        any_field = false;
    };

    std::size_t i = 0;
    // Skip a UTF-8 BOM if present.
    if (text.size() >= 3 && text.compare(0, 3, "\xef\xbb\xbf") == 0) i = 3;

    for (; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        switch (ch) {
            case '"':
                in_quotes = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
                end_record();
                break;
            case '\n':
                end_record();
                break;
            default:
                field += ch;
        }
    }
    if (in_quotes) {
        throw CsvError("unterminated quoted field");
    }
    if (!field.empty() || any_field) {
        end_record();
    }
    return records;
}

namespace {

bool is_missing(const std::string& cell) {
    return cell.empty() || cell == "NA";
}

bool parse_double(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\t')) --last;
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last && first != last;
}

}  // namespace

LoadedDesign load_csv(const DatasetSpec& spec) {
    if (spec.response_column.empty()) {
        throw CsvError("response column must be named");
    }
    if (spec.covariate_columns.empty() && !spec.add_intercept) {
        throw CsvError("need at least one covariate or an intercept");
    }
    for (const std::string& c : spec.covariate_columns) {
        if (c == spec.response_column) {
            throw CsvError("response and covariate columns must be disjoint: " + c);
        }
    }

    std::ifstream in(spec.path, std::ios::binary);
    if (!in) {
        throw CsvError("cannot open file: " + spec.path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::vector<std::vector<std::string>> records = parse_csv(buffer.str());
    if (records.empty()) {
        throw CsvError("empty CSV file: " + spec.path);
    }

    const std::vector<std::string>& header = records.front();
    const auto column_index = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw MissingColumnError(name);
        return static_cast<std::size_t>(it - header.begin());
    };

    const std::size_t response_idx = column_index(spec.response_column);
    std::vector<std::size_t> covariate_idx;
    covariate_idx.reserve(spec.covariate_columns.size());
    for (const std::string& c : spec.covariate_columns) {
        covariate_idx.push_back(column_index(c));
    }

    const std::size_t n_covs = spec.covariate_columns.size();
    const std::size_t p = n_covs + (spec.add_intercept ? 1 : 0);
    std::vector<double> y_values;
    std::vector<double> z_values;  // row-major per observation, length p each

    LoadedDesign out;
    std::vector<double> row_buf(p);
    for (std::size_t rec = 1; rec < records.size(); ++rec) {
        const std::vector<std::string>& row = records[rec];
        ++out.rows_read;
        if (row.size() != header.size()) {
            throw CsvError("row " + std::to_string(rec) + " has " +
                           std::to_string(row.size()) + " fields, header has " +
                           std::to_string(header.size()));
        }
        bool missing = false;
        const auto read_cell = [&](std::size_t idx, const std::string& name) {
            const std::string& cell = row[idx];
            if (is_missing(cell)) {
                if (spec.na_policy == NaPolicy::Fail) {
                    throw NonNumericCellError(out.rows_read, name, cell);
                }
                missing = true;
                return 0.0;
            }
            double v = 0.0;
            if (!parse_double(cell, v)) {
                throw NonNumericCellError(out.rows_read, name, cell);
            }
            return v;
        };

        const double y = read_cell(response_idx, spec.response_column);
        std::size_t k = 0;
        if (spec.add_intercept) row_buf[k++] = 1.0;
        for (std::size_t c = 0; c < n_covs; ++c) {
            row_buf[k++] = read_cell(covariate_idx[c], spec.covariate_columns[c]);
        }
        if (missing) {
            ++out.rows_dropped;
            continue;
        }
        y_values.push_back(y);
        z_values.insert(z_values.end(), row_buf.begin(), row_buf.end());
    }

    const std::size_t n = y_values.size();
    if (n == 0) {
        throw EmptyAfterFilteringError("no usable rows after filtering: " + spec.path);
    }

    out.design.Z.resize(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));
    out.design.y.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        out.design.y[static_cast<Eigen::Index>(i)] = y_values[i];
        for (std::size_t j = 0; j < p; ++j) {
            out.design.Z(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
                z_values[i * p + j];
        }
    }
    if (spec.add_intercept) out.coefficient_names.push_back("(intercept)");
    for (const std::string& c : spec.covariate_columns) out.coefficient_names.push_back(c);
    return out;
}

}  // namespace fdglm
