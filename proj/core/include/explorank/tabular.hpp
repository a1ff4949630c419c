#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

namespace explorank {

/// Reader for UTF-8 delimited text with a header row. The delimiter is tab if the
/// header line contains one, comma otherwise. Fields may be double-quoted; a quoted
/// field may contain the delimiter and doubled quotes (""), but not newlines.
class TabularReader {
 public:
  explicit TabularReader(std::istream& in);

  const std::vector<std::string>& header() const noexcept { return header_; }
  char delimiter() const noexcept { return delimiter_; }

  /// Reads the next non-blank row. Returns false at end of input.
  bool next(std::vector<std::string>& fields);

  /// 1-based line number of the row most recently returned.
  std::size_t line() const noexcept { return line_; }

  static std::vector<std::string> split(const std::string& line, char delimiter, std::size_t line_number);

 private:
  std::istream& in_;
  std::vector<std::string> header_;
  char delimiter_ = ',';
  std::size_t line_ = 0;
};

}  // namespace explorank
