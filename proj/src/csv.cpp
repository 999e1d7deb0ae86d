#include "mmlqg/csv.hpp"

#include <cstdio>
#include <fstream>

#include "mmlqg/errors.hpp"

namespace mmlqg {

CsvWriter::CsvWriter(std::vector<std::string> header)
    : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ += ',';
    out_ += header[i];
  }
  out_ += '\n';
}

std::string CsvWriter::format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvWriter::begin_row() {
  if (row_open_) throw UsageError("csv: row already open");
  row_open_ = true;
  in_row_ = 0;
}

void CsvWriter::add(double v) { add(format_double(v)); }
void CsvWriter::add(int v) { add(std::to_string(v)); }
void CsvWriter::add(long long v) { add(std::to_string(v)); }
void CsvWriter::add(unsigned long long v) { add(std::to_string(v)); }

void CsvWriter::add(const std::string& v) {
  if (!row_open_) throw UsageError("csv: no open row");
  if (in_row_ >= columns_) throw UsageError("csv: too many columns in row");
  if (in_row_) out_ += ',';
  out_ += v;
  ++in_row_;
}

void CsvWriter::end_row() {
  if (!row_open_ || in_row_ != columns_) {
    throw UsageError("csv: row does not match header width");
  }
  out_ += '\n';
  row_open_ = false;
}

void CsvWriter::write_file(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("csv: cannot write " + path);
  f << out_;
}

}  // namespace mmlqg
