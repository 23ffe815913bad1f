#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scorecard/dataset.hpp"

namespace scorecard {

enum class MissingPolicy {
  kDropRow,
  /// Median for continuous features, mode for categorical ones.
  kImpute,
};

struct CsvOptions {
  std::string label_column = "label";
  /// When set, only these columns are read, with these kinds and levels.
  std::optional<std::vector<FeatureSpec>> schema;
  MissingPolicy missing = MissingPolicy::kDropRow;
  std::vector<std::string> na_tokens{"", "NA", "NaN"};
  /// Raw label value treated as the positive class. When unset the rarer
  /// label is positive; on an exact tie "1" wins, else the larger string.
  std::optional<std::string> positive_label;
};

/// Header plus raw text cells, no typing applied.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based source line of each row.
  std::vector<std::size_t> line_numbers;
};

CsvTable read_csv_table(std::istream& in);
void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);

Dataset parse_csv(std::istream& in, const CsvOptions& options);
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options);

/// Writes features then the label column. Continuous values use the
/// shortest round-trip representation; categorical values are level names.
void write_csv(const Dataset& ds, std::ostream& out);
void save_csv(const Dataset& ds, const std::filesystem::path& path);

std::string format_double(double value);

/// Strict full-token parse; nullopt on any trailing characters or non-finite.
std::optional<double> parse_double(const std::string& token);

}  // namespace scorecard
