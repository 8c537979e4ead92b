#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sigstream/embeddings.hpp"
#include "sigstream/errors.hpp"
#include "sigstream/feature_matrix.hpp"

namespace sigstream {

/// Malformed input file; `line` is 1-based.
struct ParseError : InvalidInput {
    ParseError(std::size_t line, const std::string& message);
    std::size_t line;
};

/// Header of the dataset CSV, version 1.
inline constexpr const char* kDatasetHeader = "subject,week,delay,missing,label";

/// Reads `subject,week,delay,missing,label` rows. Rows of one subject must be
/// contiguous with strictly increasing weeks; a missing week has `missing=1`
/// and an empty delay. Records come back in file order.
std::vector<StreamRecord> read_dataset(std::istream& in);
std::vector<StreamRecord> read_dataset_file(const std::string& path);

void write_dataset(std::ostream& out, const std::vector<StreamRecord>& records);

/// Comma-separated numbers, optional header row. Empty fields and the tokens
/// `*`, `NA`, `nan` read as missing.
struct NumericTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::optional<double>>> rows;
    std::vector<std::size_t> lines;  // source line of each row
};

NumericTable read_numeric_table(std::istream& in);

/// 17 significant digits ("%.17g"); round-trips every double.
std::string format_double(double value);

/// subject,label,<column names...> with one row per subject.
void write_features(std::ostream& out, const FeatureMatrix& m,
                    const std::vector<std::string>& subjects);

std::string read_file(const std::string& path);

}  // namespace sigstream
