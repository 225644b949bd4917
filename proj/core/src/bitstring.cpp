#include "flawsim/bitstring.hpp"

#include "flawsim/error.hpp"

namespace flawsim {

BitString BitString::from_binary(std::string_view bits) {
  BitString b;
  for (char c : bits) {
    if (c != '0' && c != '1') throw CodecError("bitstring may contain only '0' and '1'");
    b.push_back(c == '1');
  }
  return b;
}

BitString BitString::from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw CodecError("bit buffer lacks its length prefix");
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n = (n << 8) | bytes[static_cast<std::size_t>(i)];
  if ((n + 7) / 8 != bytes.size() - 8) throw CodecError("bit buffer length does not match its prefix");
  BitString b;
  b.size_ = static_cast<std::size_t>(n);
  b.bytes_.assign(bytes.begin() + 8, bytes.end());
  return b;
}

void BitString::push_back(bool bit) {
  if (size_ % 8 == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80U >> (size_ % 8));
  ++size_;
}

bool BitString::operator[](std::size_t i) const {
  if (i >= size_) throw std::out_of_range("bit index out of range");
  return ((bytes_[i / 8] >> (7 - i % 8)) & 1U) != 0;
}

std::string BitString::to_binary() const {
  std::string s;
  s.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) s.push_back((*this)[i] ? '1' : '0');
  return s;
}

std::string BitString::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  for (auto byte : bytes_) {
    s.push_back(kDigits[byte >> 4]);
    s.push_back(kDigits[byte & 0xF]);
  }
  return s;
}

std::vector<std::uint8_t> BitString::to_bytes() const {
  std::vector<std::uint8_t> out;
  out.reserve(8 + bytes_.size());
  const auto n = static_cast<std::uint64_t>(size_);
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>((n >> shift) & 0xFF));
  for (auto b : bytes_) out.push_back(b);
  return out;
}

}  // namespace flawsim
