#pragma once

#include <string>
#include <vector>

namespace mmlqg {

// CSV writing with fixed headers and locale-independent %.17g formatting,
// so equal runs produce byte-identical files.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void begin_row();
  void add(double v);
  void add(int v);
  void add(long long v);
  void add(unsigned long long v);
  void add(const std::string& v);
  void end_row();

  const std::string& str() const { return out_; }
  void write_file(const std::string& path) const;

  static std::string format_double(double v);

 private:
  std::string out_;
  std::size_t columns_ = 0;
  std::size_t in_row_ = 0;
  bool row_open_ = false;
};

}  // namespace mmlqg
