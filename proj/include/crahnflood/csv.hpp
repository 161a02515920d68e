#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace crahn {

// CSV with a fixed preamble: one comment line carrying the tool version, the
// config hash, and the seed, then the header row. No timestamps or locale
// dependence anywhere, so identical inputs give byte-identical files.
class CsvWriter {
 public:
  // Empty path -> stdout.
  CsvWriter(const std::string& path, const std::string& header, std::uint64_t config_hash,
            std::uint64_t seed);
  ~CsvWriter();

  void row(const std::vector<double>& values);
  void row_with_tag(const std::vector<double>& values, const std::string& tag);
  void line(const std::string& raw);  // preformatted data row
  void comment(const std::string& text);
  void flush();

  static std::string format(double v);  // %.9g

 private:
  std::ofstream file_;
  std::ostream* out_;
};

}  // namespace crahn
