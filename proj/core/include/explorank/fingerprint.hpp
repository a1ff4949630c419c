#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>

namespace explorank {

/// 64-bit FNV-1a over a canonical byte stream. Not cryptographic; used to tie
/// precomputed files to the graph and binnings they were built from.
class Fingerprint {
 public:
  Fingerprint& bytes(const void* data, std::size_t size) noexcept {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  Fingerprint& u64(std::uint64_t v) noexcept { return bytes(&v, sizeof v); }
  Fingerprint& f64(double v) noexcept { return u64(std::bit_cast<std::uint64_t>(v)); }
  Fingerprint& str(std::string_view s) noexcept {
    u64(s.size());
    return bytes(s.data(), s.size());
  }

  std::uint64_t value() const noexcept { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string to_hex(std::uint64_t value);
std::uint64_t parse_hex(std::string_view text);

}  // namespace explorank
