#include "racetrack/csv.hpp"

#include <iomanip>

#include "racetrack/errors.hpp"

namespace racetrack {

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header)
    : path_(path), out_(path) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  out_.imbue(std::locale::classic());
  out_ << std::setprecision(17);
  bool first = true;
  for (const auto& name : header) write_cell(name, first);
  out_ << '\n';
  check();
}

void CsvWriter::close() {
  out_.close();
  if (out_.fail()) throw IoError("failed to close " + path_.string());
}

void CsvWriter::check() {
  if (!out_) throw IoError("write failed on " + path_.string());
}

}  // namespace racetrack
