#include "recsim/bits.hpp"

#include <stdexcept>

namespace recsim {

void BitString::push_bit(int b) {
  std::size_t byte = nbits_ / 8;
  if (byte == bytes_.size()) bytes_.push_back(0);
  if (b) bytes_[byte] |= static_cast<std::uint8_t>(0x80u >> (nbits_ % 8));
  ++nbits_;
}

void BitString::append(const BitString& other) {
  for (std::size_t i = 0; i < other.size(); ++i) push_bit(other.bit(i));
}

int BitString::bit(std::size_t i) const {
  if (i >= nbits_) throw std::out_of_range("BitString::bit");
  return (bytes_[i / 8] >> (7 - i % 8)) & 1;
}

std::vector<std::uint8_t> BitString::serialize() const {
  std::vector<std::uint8_t> out(8 + bytes_.size());
  std::uint64_t n = nbits_;
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>((n >> (8 * i)) & 0xFF);
  for (std::size_t i = 0; i < bytes_.size(); ++i) out[8 + i] = bytes_[i];
  return out;
}

BitString BitString::deserialize(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8) throw std::invalid_argument("BitString: truncated header");
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  if (bytes.size() < 8 + (n + 7) / 8) throw std::invalid_argument("BitString: truncated payload");
  BitString s;
  s.nbits_ = n;
  s.bytes_.assign(bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>((n + 7) / 8));
  // Clear any trailing garbage bits so equality is well defined.
  if (n % 8 != 0 && !s.bytes_.empty())
    s.bytes_.back() &= static_cast<std::uint8_t>(0xFF00u >> (n % 8));
  return s;
}

std::string BitString::to_string() const {
  std::string out;
  out.reserve(nbits_);
  for (std::size_t i = 0; i < nbits_; ++i) out.push_back(bit(i) ? '1' : '0');
  return out;
}

BitString BitString::from_string(const std::string& s) {
  BitString out;
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("BitString: bad character");
    out.push_bit(c == '1');
  }
  return out;
}

int BitReader::next() {
  if (pos_ >= s_->size()) throw std::out_of_range("BitReader: past end");
  return s_->bit(pos_++);
}

void BitReader::seek(std::size_t pos) {
  if (pos > s_->size()) throw std::out_of_range("BitReader: bad seek");
  pos_ = pos;
}

}  // namespace recsim
