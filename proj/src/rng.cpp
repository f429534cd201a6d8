#include "recsim/rng.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace recsim {

double SeedStream::exponential_at(std::uint64_t slot) const {
  return -std::log(uniform_at(slot));
}

std::uint64_t parse_seed(const char* text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty seed");
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) base = 16;
  char* end = nullptr;
  std::uint64_t v = std::strtoull(s.c_str(), &end, base);
  if (end == nullptr || *end != '\0') throw std::invalid_argument("bad seed: " + s);
  return v;
}

}  // namespace recsim
