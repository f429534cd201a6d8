#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace recsim {

// MSB-first bit sequence. Serialized form: 8-byte little-endian bit count,
// then packed bytes, MSB-first within each byte.
class BitString {
 public:
  void push_bit(int b);
  void append(const BitString& other);

  int bit(std::size_t i) const;
  std::size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }

  std::vector<std::uint8_t> serialize() const;
  static BitString deserialize(const std::vector<std::uint8_t>& bytes);

  std::string to_string() const;  // e.g. "00101"
  static BitString from_string(const std::string& s);

  bool operator==(const BitString&) const = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t nbits_ = 0;
};

// Sequential cursor over a BitString; position can be realigned explicitly.
class BitReader {
 public:
  explicit BitReader(const BitString& s) : s_(&s) {}
  int next();
  bool have(std::size_t n) const { return pos_ + n <= s_->size(); }
  std::size_t position() const { return pos_; }
  void seek(std::size_t pos);

 private:
  const BitString* s_;
  std::size_t pos_ = 0;
};

}  // namespace recsim
