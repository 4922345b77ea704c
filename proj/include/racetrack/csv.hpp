#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>

namespace racetrack {

/// Comma-separated output with a header row and 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header);

  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((write_cell(cells, first)), ...);
    out_ << '\n';
    check();
  }

  void close();

 private:
  template <class T>
  void write_cell(const T& value, bool& first) {
    if (!first) out_ << ',';
    first = false;
    out_ << value;
  }

  void check();

  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace racetrack
