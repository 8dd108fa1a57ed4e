#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace affl1 {

/// Self-describing CSV: "# key: value" lines (including a "# generated:"
/// timestamp line, the only nondeterministic content), then the column
/// header and the rows.
class CsvReport {
 public:
  explicit CsvReport(std::string columns) : columns_(std::move(columns)) {}

  void meta(std::string key, std::string value) { meta_.emplace_back(std::move(key), std::move(value)); }
  void row(std::string line) { rows_.push_back(std::move(line)); }
  const std::vector<std::string>& rows() const { return rows_; }

  void write(const std::filesystem::path& path) const;
  std::string str() const;

 private:
  std::string columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> rows_;
};

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

/// Word for display: the identity prints as "1", as in rule and action files.
std::string display_word(const std::string& word);

/// Joins fields with commas.
std::string csv_line(std::initializer_list<std::string> fields);

}  // namespace affl1
