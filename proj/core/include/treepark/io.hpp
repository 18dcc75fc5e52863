#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace treepark {

/// RFC-4180 CSV writer: CRLF line endings, header row, numeric fields.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<std::string>& fields);
  /// Appends a preformatted block of rows (already CRLF-terminated).
  void raw(const std::string& block);
  void close();

 private:
  std::string buf_;
  std::filesystem::path path_;
  int fd_ = -1;
  void flush();
};

std::string csv_field(double v);
std::string csv_field(std::int64_t v);
std::string csv_field(std::uint64_t v);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

/// Double formatting used in reports: shortest round-trip representation.
std::string format_double(double v);

}  // namespace treepark
