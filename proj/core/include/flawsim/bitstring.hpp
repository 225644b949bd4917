#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace flawsim {

/// Growable bit sequence, packed most-significant-bit first.
class BitString {
 public:
  BitString() = default;
  /// From a string of '0'/'1'. Throws CodecError on other characters.
  static BitString from_binary(std::string_view bits);
  /// Inverse of to_bytes(): 8-byte big-endian bit length, then packed bits.
  static BitString from_bytes(std::span<const std::uint8_t> bytes);

  void push_back(bool bit);
  bool operator[](std::size_t i) const;
  std::size_t size() const noexcept { return size_; }

  std::string to_binary() const;
  /// Packed bytes as lowercase hex (no length prefix; final byte zero-padded).
  std::string to_hex() const;
  std::vector<std::uint8_t> to_bytes() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t size_ = 0;
};

}  // namespace flawsim
