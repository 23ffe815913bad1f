#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>

namespace scorecard {

/// Incremental 64-bit FNV-1a. Used for dataset and config fingerprints in
/// run records; not a cryptographic hash.
class Fnv1a {
 public:
  void update(std::span<const unsigned char> bytes) {
    for (unsigned char b : bytes) {
      state_ ^= b;
      state_ *= 0x100000001b3ULL;
    }
  }
  void update(std::string_view text) {
    update(std::span(reinterpret_cast<const unsigned char*>(text.data()),
                     text.size()));
    // Length terminator so ("ab","c") and ("a","bc") differ.
    update_u64(text.size());
  }
  void update_u64(std::uint64_t value) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(value >> (8 * i));
    update(std::span<const unsigned char>(buf, 8));
  }
  void update_double(double value) {
    std::uint64_t bits;
    std::memcpy(&bits, &value, sizeof bits);
    update_u64(bits);
  }

  std::uint64_t digest() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string hash_hex(std::string_view text);

}  // namespace scorecard
