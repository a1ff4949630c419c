#include "explorank/fingerprint.hpp"

#include <charconv>

#include "explorank/error.hpp"

namespace explorank {

std::string to_hex(std::uint64_t value) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::uint64_t parse_hex(std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 16);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw IndexMismatch("malformed fingerprint '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace explorank
