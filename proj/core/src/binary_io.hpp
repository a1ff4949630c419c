#pragma once

// Little-endian primitives shared by the canonical graph encoding and the index file.

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "explorank/error.hpp"

namespace explorank::detail {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

inline void put_u64(std::ostream& out, std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); }
inline void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
inline void put_string(std::ostream& out, const std::string& s) {
  put_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}
template <typename T>
void put_array(std::ostream& out, std::span<const T> values) {
  put_u64(out, values.size());
  out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
}

inline void check(std::istream& in) {
  if (!in) throw IndexMismatch("truncated or unreadable binary data");
}
inline std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  check(in);
  return v;
}
inline double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }
inline std::string get_string(std::istream& in, std::uint64_t limit = 1ULL << 32) {
  const auto n = get_u64(in);
  if (n > limit) throw IndexMismatch("implausible string length in binary data");
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  check(in);
  return s;
}
template <typename T>
std::vector<T> get_array(std::istream& in, std::uint64_t limit = 1ULL << 34) {
  const auto n = get_u64(in);
  if (n > limit) throw IndexMismatch("implausible array length in binary data");
  std::vector<T> v(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
  check(in);
  return v;
}

}  // namespace explorank::detail
