#include "crahnflood/csv.hpp"

#include <cinttypes>
#include <cstdio>
#include <iostream>

#include "crahnflood/errors.hpp"
#include "crahnflood/version.hpp"

namespace crahn {

CsvWriter::CsvWriter(const std::string& path, const std::string& header,
                     std::uint64_t config_hash, std::uint64_t seed) {
  if (path.empty()) {
    out_ = &std::cout;
  } else {
    file_.open(path, std::ios::out | std::ios::trunc);
    if (!file_) fail(Errc::kIo, "cannot open output file '" + path + "'");
    out_ = &file_;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "# crahnflood %s config=%016" PRIx64 " seed=%" PRIu64, kVersion,
                config_hash, seed);
  *out_ << buf << "\n" << header << "\n";
}

CsvWriter::~CsvWriter() {
  if (out_) out_->flush();
}

std::string CsvWriter::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) *out_ << ',';
    *out_ << format(values[i]);
  }
  *out_ << '\n';
}

void CsvWriter::row_with_tag(const std::vector<double>& values, const std::string& tag) {
  for (const double v : values) *out_ << format(v) << ',';
  *out_ << tag << '\n';
}

void CsvWriter::line(const std::string& raw) { *out_ << raw << '\n'; }

void CsvWriter::comment(const std::string& text) { *out_ << "# " << text << '\n'; }

void CsvWriter::flush() { out_->flush(); }

}  // namespace crahn
