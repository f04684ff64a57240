#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdglm/glm.hpp"

namespace fdglm {

enum class NaPolicy { DropRow, Fail };

/// Selection of response and covariate columns from a CSV file.
struct DatasetSpec {
    std::string path;
    std::string response_column;
    std::vector<std::string> covariate_columns;
    bool add_intercept = true;
    NaPolicy na_policy = NaPolicy::DropRow;
};

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MissingColumnError : public CsvError {
public:
    explicit MissingColumnError(const std::string& column)
        : CsvError("missing column: " + column), column(column) {}
    std::string column;
};

class NonNumericCellError : public CsvError {
public:
    NonNumericCellError(std::int64_t row, const std::string& column, const std::string& cell)
        : CsvError("non-numeric cell \"" + cell + "\" at row " + std::to_string(row) +
                   ", column " + column),
          row(row),
          column(column) {}
    std::int64_t row;  // 1-based data row, header excluded
    std::string column;
};

class EmptyAfterFilteringError : public CsvError {
public:
    using CsvError::CsvError;
};

/// A parsed design together with its provenance.
struct LoadedDesign {
    FixedDesign design;
    std::vector<std::string> coefficient_names;  // "(intercept)" first when added
    std::int64_t rows_read = 0;
    std::int64_t rows_dropped = 0;
};

/// RFC-4180 CSV with a required header row. Empty cells and the literal NA
/// are treated as missing and handled per na_policy; any other unparsable
/// cell raises NonNumericCellError regardless of policy.
LoadedDesign load_csv(const DatasetSpec& spec);

/// Low-level parse of one RFC-4180 record set (quotes, embedded commas and
/// newlines, CRLF). Exposed for tests.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace fdglm
