#include "scorecard/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include <fmt/format.h>

#include "scorecard/error.hpp"

namespace scorecard {

namespace {

// Splits one logical record; quoted fields may span lines.
bool read_record(std::istream& in, std::vector<std::string>& cells,
                 std::size_t& line) {
  cells.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      cells.push_back(std::move(field));
      field.clear();
    } else if (ch == '\r') {
      // Tolerate CRLF.
    } else if (ch == '\n') {
      ++line;
      cells.push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
    }
  }
  if (in_quotes) throw DataError(fmt::format("line {}: unterminated quote", line));
  if (!any) return false;
  cells.push_back(std::move(field));
  return true;
}

bool needs_quotes(const std::string& cell) {
  return cell.find_first_of(",\"\n\r") != std::string::npos;
}

bool is_na(const std::string& token, const std::vector<std::string>& na) {
  return std::find(na.begin(), na.end(), token) != na.end();
}

struct ColumnData {
  FeatureSpec spec;
  std::vector<std::string> raw;
};

}  // namespace

std::optional<double> parse_double(const std::string& token) {
  if (token.empty()) return std::nullopt;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (*begin == '+') ++begin;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    return std::nullopt;
  return value;
}

std::string format_double(double value) { return fmt::format("{}", value); }

CsvTable read_csv_table(std::istream& in) {
  CsvTable table;
  std::size_t line = 1;
  std::vector<std::string> cells;
  if (!read_record(in, cells, line)) throw DataError("empty CSV: missing header");
  if (!cells.empty() && cells[0].size() >= 3 &&
      cells[0].compare(0, 3, "\xEF\xBB\xBF") == 0)
    cells[0].erase(0, 3);
  table.header = cells;
  while (true) {
    std::size_t start = line;
    if (!read_record(in, cells, line)) break;
    if (cells.size() == 1 && cells[0].empty()) continue;  // blank line
    if (cells.size() != table.header.size())
      throw DataError(fmt::format("line {}: expected {} fields, found {}", start,
                                  table.header.size(), cells.size()));
    table.rows.push_back(cells);
    table.line_numbers.push_back(start);
  }
  return table;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    const auto& cell = cells[i];
    if (needs_quotes(cell)) {
      out << '"';
      for (char ch : cell) {
        if (ch == '"') out << '"';
        out << ch;
      }
      out << '"';
    } else {
      out << cell;
    }
  }
  out << '\n';
}

Dataset parse_csv(std::istream& in, const CsvOptions& options) {
  CsvTable table = read_csv_table(in);
  const auto& header = table.header;
  {
    std::set<std::string> seen;
    for (const auto& h : header)
      if (!seen.insert(h).second)
        throw DataError(fmt::format("duplicate column '{}'", h));
  }
  auto label_it = std::find(header.begin(), header.end(), options.label_column);
  if (label_it == header.end())
    throw DataError(fmt::format("label column '{}' not found", options.label_column));
  const std::size_t label_col = static_cast<std::size_t>(label_it - header.begin());

  // Columns to read and their specs (kinds inferred below when no schema).
  std::vector<std::size_t> source_cols;
  std::vector<FeatureSpec> specs;
  if (options.schema) {
    for (const auto& spec : *options.schema) {
      auto it = std::find(header.begin(), header.end(), spec.name);
      if (it == header.end())
        throw DataError(fmt::format("schema column '{}' not found", spec.name));
      if (spec.name == options.label_column)
        throw DataError("schema must not include the label column");
      if (spec.is_categorical() && spec.categories.empty())
        throw DataError(fmt::format("schema: categorical '{}' has no levels", spec.name));
      source_cols.push_back(static_cast<std::size_t>(it - header.begin()));
      specs.push_back(spec);
    }
  } else {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == label_col) continue;
      source_cols.push_back(c);
      specs.push_back(FeatureSpec::continuous(header[c]));
    }
  }
  const std::size_t p = source_cols.size();
  const auto& na = options.na_tokens;

  // Label mapping.
  std::map<std::string, std::size_t> label_counts;
  for (const auto& row : table.rows)
    if (!is_na(row[label_col], na)) ++label_counts[row[label_col]];
  if (label_counts.size() > 2)
    throw DataError(fmt::format("label column '{}' has {} distinct values; expected 2",
                                options.label_column, label_counts.size()));
  LabelCoding coding;
  coding.column = options.label_column;
  if (options.positive_label) {
    coding.positive = *options.positive_label;
    coding.negative.clear();
    for (const auto& [value, count] : label_counts)
      if (value != coding.positive) coding.negative = value;
  } else if (label_counts.size() == 2) {
    auto first = label_counts.begin();
    auto second = std::next(first);
    bool second_positive;
    if (first->second != second->second) {
      second_positive = second->second < first->second;
    } else if (first->first == "1") {
      second_positive = false;
    } else {
      second_positive = true;  // "1" or the larger string
    }
    coding.positive = second_positive ? second->first : first->first;
    coding.negative = second_positive ? first->first : second->first;
  } else if (label_counts.size() == 1) {
    coding.negative = label_counts.begin()->first;
    coding.positive.clear();
  }

  // Infer kinds when no schema was given.
  if (!options.schema) {
    for (std::size_t j = 0; j < p; ++j) {
      bool numeric = true;
      std::set<std::string> levels;
      for (const auto& row : table.rows) {
        const auto& tok = row[source_cols[j]];
        if (is_na(tok, na)) continue;
        levels.insert(tok);
        if (numeric && !parse_double(tok)) numeric = false;
      }
      if (!numeric)
        specs[j] = FeatureSpec::categorical(
            specs[j].name, std::vector<std::string>(levels.begin(), levels.end()));
    }
  }

  std::vector<std::vector<double>> parsed;  // per kept row
  std::vector<std::vector<bool>> missing;
  std::vector<std::uint8_t> labels;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::size_t line = table.line_numbers[i];
    if (is_na(row[label_col], na)) continue;  // unlabeled rows are never usable
    std::vector<double> values(p, 0.0);
    std::vector<bool> miss(p, false);
    bool any_missing = false;
    for (std::size_t j = 0; j < p; ++j) {
      const auto& tok = row[source_cols[j]];
      if (is_na(tok, na)) {
        miss[j] = true;
        any_missing = true;
        continue;
      }
      const auto& spec = specs[j];
      if (spec.is_categorical()) {
        auto it = std::find(spec.categories.begin(), spec.categories.end(), tok);
        if (it == spec.categories.end())
          throw DataError(fmt::format("line {}: unknown level '{}' for '{}'", line,
                                      tok, spec.name));
        values[j] = static_cast<double>(it - spec.categories.begin());
      } else {
        auto v = parse_double(tok);
        if (!v)
          throw DataError(fmt::format("line {}: malformed number '{}' in column '{}'",
                                      line, tok, spec.name));
        values[j] = *v;
      }
    }
    if (any_missing && options.missing == MissingPolicy::kDropRow) continue;
    parsed.push_back(std::move(values));
    missing.push_back(std::move(miss));
    labels.push_back(row[label_col] == coding.positive ? 1 : 0);
  }

  if (options.missing == MissingPolicy::kImpute) {
    for (std::size_t j = 0; j < p; ++j) {
      std::vector<double> observed;
      for (std::size_t r = 0; r < parsed.size(); ++r)
        if (!missing[r][j]) observed.push_back(parsed[r][j]);
      if (observed.size() == parsed.size()) continue;
      if (observed.empty())
        throw DataError(fmt::format("column '{}' has no observed values to impute from",
                                    specs[j].name));
      double fill;
      if (specs[j].is_categorical()) {
        std::vector<std::size_t> counts(specs[j].categories.size(), 0);
        for (double v : observed) ++counts[static_cast<std::size_t>(v)];
        fill = static_cast<double>(std::max_element(counts.begin(), counts.end()) -
                                   counts.begin());
      } else {
        std::sort(observed.begin(), observed.end());
        const std::size_t n = observed.size();
        fill = n % 2 ? observed[n / 2] : 0.5 * (observed[n / 2 - 1] + observed[n / 2]);
      }
      for (std::size_t r = 0; r < parsed.size(); ++r)
        if (missing[r][j]) parsed[r][j] = fill;
    }
  }

  std::vector<double> flat;
  flat.reserve(parsed.size() * p);
  for (const auto& row : parsed) flat.insert(flat.end(), row.begin(), row.end());
  return Dataset(std::move(specs), std::move(flat), std::move(labels), coding);
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  return parse_csv(in, options);
}

void write_csv(const Dataset& ds, std::ostream& out) {
  std::vector<std::string> cells = ds.feature_names();
  cells.push_back(ds.label_coding().column);
  write_csv_row(out, cells);
  const auto& coding = ds.label_coding();
  for (std::size_t r = 0; r < ds.num_rows(); ++r) {
    cells.clear();
    for (std::size_t c = 0; c < ds.num_features(); ++c) {
      const auto& f = ds.feature(c);
      double v = ds.value(r, c);
      cells.push_back(f.is_categorical() ? f.categories[static_cast<std::size_t>(v)]
                                         : format_double(v));
    }
    cells.push_back(ds.label(r) ? coding.positive : coding.negative);
    write_csv_row(out, cells);
  }
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  write_csv(ds, out);
}

}  // namespace scorecard
