#include "explorank/tabular.hpp"

#include "explorank/error.hpp"

namespace explorank {
namespace {

void strip_line_end(std::string& line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

}  // namespace

TabularReader::TabularReader(std::istream& in) : in_(in) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    strip_line_end(line);
    if (line_ == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (blank(line)) continue;
    delimiter_ = line.find('\t') != std::string::npos ? '\t' : ',';
    header_ = split(line, delimiter_, line_);
    return;
  }
  throw LoadError("missing header row", line_ == 0 ? 1 : line_);
}

bool TabularReader::next(std::vector<std::string>& fields) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    strip_line_end(line);
    if (blank(line)) continue;
    fields = split(line, delimiter_, line_);
    return true;
  }
  return false;
}

std::vector<std::string> TabularReader::split(const std::string& line, char delimiter,
                                              std::size_t line_number) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (c == delimiter) {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      if (was_quoted) throw LoadError("unexpected character after closing quote", line_number);
      field.push_back(c);
    }
  }
  if (quoted) throw LoadError("unterminated quoted field", line_number);
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace explorank
