#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace twist::cli {

/// 17 significant digits with a "." decimal separator, independent of the locale.
std::string format_number(double v);

class CsvWriter {
 public:
  void header(const std::vector<std::string>& names);
  void row(std::span<const double> values);
  void row(std::initializer_list<double> values);
  const std::string& str() const { return buf_; }

 private:
  std::string buf_;
  std::size_t columns_ = 0;
};

/// Writes to a sibling temporary file and renames it into place on commit,
/// so a failed run never leaves a partial file. The temporary is created on
/// construction, which surfaces unwritable paths before any computation.
class OutputFile {
 public:
  explicit OutputFile(std::string path);
  ~OutputFile();
  OutputFile(const OutputFile&) = delete;
  OutputFile& operator=(const OutputFile&) = delete;

  void commit(const std::string& content);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::string tmp_;
  bool done_ = false;
};

}  // namespace twist::cli
