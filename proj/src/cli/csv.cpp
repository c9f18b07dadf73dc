#include "twist/cli/csv.hpp"

#include "twist/types.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <system_error>

#include <unistd.h>

namespace twist::cli {

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // fold -0
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

void CsvWriter::header(const std::vector<std::string>& names) {
  columns_ = names.size();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += names[i];
  }
  buf_ += '\n';
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_) throw std::logic_error("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += format_number(values[i]);
  }
  buf_ += '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
  row(std::span<const double>(values.begin(), values.size()));
}

OutputFile::OutputFile(std::string path) : path_(std::move(path)) {
  tmp_ = path_ + ".tmp" + std::to_string(::getpid());
  std::ofstream probe(tmp_, std::ios::binary | std::ios::trunc);
  if (!probe) throw ConfigError("out: cannot write " + path_);
}

OutputFile::~OutputFile() {
  if (!done_) std::remove(tmp_.c_str());
}

void OutputFile::commit(const std::string& content) {
  {
    std::ofstream f(tmp_, std::ios::binary | std::ios::trunc);
    f << content;
    f.close();
    if (!f) throw std::runtime_error("out: write to " + path_ + " failed");
  }
  if (std::rename(tmp_.c_str(), path_.c_str()) != 0)
    throw std::runtime_error("out: cannot move output into place at " + path_);
  done_ = true;
}

}  // namespace twist::cli
