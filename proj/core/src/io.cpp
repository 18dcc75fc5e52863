#include "treepark/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "treepark/errors.hpp"

namespace treepark {

namespace {
constexpr std::size_t kFlushThreshold = 1 << 20;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw Error(Errc::ConfigError, "cannot open " + path.string());
  std::fclose(f);
  fd_ = 0;
  row(header);
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
  }
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) buf_.push_back(',');
    buf_ += fields[i];
  }
  buf_ += "\r\n";
  if (buf_.size() > kFlushThreshold) flush();
}

void CsvWriter::raw(const std::string& block) {
  buf_ += block;
  if (buf_.size() > kFlushThreshold) flush();
}

void CsvWriter::flush() {
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
  buf_.clear();
}

void CsvWriter::close() {
  if (fd_ == 0) {
    flush();
    fd_ = -1;
  }
}

std::string format_double(double v) {
  char tmp[64];
  auto [p, ec] = std::to_chars(tmp, tmp + sizeof(tmp), v);
  (void)ec;
  return std::string(tmp, p);
}

std::string csv_field(double v) { return format_double(v); }
std::string csv_field(std::int64_t v) { return std::to_string(v); }
std::string csv_field(std::uint64_t v) { return std::to_string(v); }

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::ConfigError, "cannot open " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace treepark
