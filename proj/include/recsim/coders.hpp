#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <vector>

#include "recsim/bits.hpp"
#include "recsim/bnb.hpp"
#include "recsim/distributions.hpp"

namespace recsim {

inline constexpr std::uint64_t kDefaultZetaCap = std::uint64_t{1} << 32;

// ---------------------------------------------------------------------------
// Exact dyadic interval coder (two-stage arithmetic coding with rational
// bounds). Probabilities enter as IEEE doubles, which are dyadic rationals,
// so every interval endpoint is exact and the emitted code is at most
// ceil(-lb width) + 1 bits.
// ---------------------------------------------------------------------------
class DyadicEncoder {
 public:
  DyadicEncoder();
  // Refine to the relative subinterval [a, b), a and b dyadic (from doubles).
  void refine(double a, double b);
  // Refine to cell `bit` of the two-cell layout {[0, 1-wr), [1-wr, 1)}.
  void refine_cell(int bit, double wr);
  // Shortest dyadic interval inside [low, low+width), MSB-first.
  BitString finish() const;

 private:
  void refine_exact(const mpz_class& ma, const mpz_class& mb, unsigned long s);
  void normalize();
  mpz_class low_, wid_;
  unsigned long exp_ = 0;
  friend class DyadicDecoder;
};

class DyadicDecoder {
 public:
  explicit DyadicDecoder(BitReader& reader);
  // Decodes one bit of the two-cell layout {[0, 1-wr), [1-wr, 1)}.
  int decode_cell(double wr);
  // Decodes one symbol n in [1, n_max + 1] where n_max + 1 is the escape
  // cell; cdf(n) must be a nondecreasing map with cdf(0) = 0 and the escape
  // cell spanning [cdf(n_max), 1).
  std::uint64_t decode_by_cdf(const std::function<double(std::uint64_t)>& cdf,
                              std::uint64_t n_max);
  // Realigns the reader to exactly the bits the encoder emitted.
  void finalize();

 private:
  void ensure_bit();
  // -1: window left of the exact boundary (lo + wid * m/2^s), +1: right,
  // 0: straddles.
  int window_side(const mpz_class& m, unsigned long s);
  void refine_exact(const mpz_class& ma, const mpz_class& mb, unsigned long s);
  void normalize();

  BitReader* reader_;
  std::size_t start_;
  mpz_class low_, wid_;
  unsigned long exp_ = 0;
  mpz_class win_v_ = 0;
  std::size_t win_k_ = 0;
};

// ---------------------------------------------------------------------------
// Zeta (Zipf) coding of positive integers, pmf q(k) proportional to k^-alpha,
// truncated at n_max with an escape cell of the analytic tail mass. Indices
// whose truncated interval underflows are escaped to Elias-delta raw coding.
// ---------------------------------------------------------------------------
class ZetaModel {
 public:
  ZetaModel(double alpha, std::uint64_t n_max);
  double cdf(std::uint64_t n) const;  // P[N <= n] under the escape-completed model
  double alpha() const { return alpha_; }
  std::uint64_t cap() const { return n_max_; }
  double normalizer() const { return z_; }  // zeta(alpha)

 private:
  double tail_from(double m) const;  // sum_{k >= m} k^-alpha
  double alpha_, z_;
  std::uint64_t n_max_;
  std::vector<double> prefix_;
};

class ZetaCoder {
 public:
  ZetaCoder(double alpha, std::uint64_t n_max = kDefaultZetaCap) : model_(alpha, n_max) {}
  BitString encode(std::uint64_t n) const;             // throws above the cap
  std::uint64_t decode(BitReader& reader) const;
  double ideal_length_bits(std::uint64_t n) const;     // alpha lb n + lb Z
  const ZetaModel& model() const { return model_; }

 private:
  ZetaModel model_;
};

BitString zeta_encode(std::uint64_t n, double alpha, std::uint64_t n_max = kDefaultZetaCap);
std::uint64_t zeta_decode(BitReader& reader, double alpha,
                          std::uint64_t n_max = kDefaultZetaCap);
double zeta_ideal_length(std::uint64_t n, double alpha, std::uint64_t n_max = kDefaultZetaCap);

// ---------------------------------------------------------------------------
// Elias gamma / delta codes for positive integers.
// ---------------------------------------------------------------------------
BitString elias_gamma_encode(std::uint64_t n);
std::uint64_t elias_gamma_decode(BitReader& reader);
BitString elias_delta_encode(std::uint64_t n);
std::uint64_t elias_delta_decode(BitReader& reader);

// ---------------------------------------------------------------------------
// Heap-path code: bit d is coded against the model P(left) = 1 - wr_d where
// wr_d = 1 - U_d is the right-cell fraction of the on-sample split. The code
// is at most -sum lb(taken fraction) + 2 bits.
// ---------------------------------------------------------------------------
BitString encode_heap_path(const std::vector<double>& taken_fractions,
                           const std::vector<std::uint8_t>& path_bits);
// next_uniform() yields U_d for the current step, on_bit consumes the decoded
// bit (advancing the caller's replay state).
std::vector<std::uint8_t> decode_heap_path(BitReader& reader, std::size_t depth,
                                           const std::function<double()>& next_uniform,
                                           const std::function<void(int)>& on_bit);

// ---------------------------------------------------------------------------
// Two-part branch-and-bound code: zeta(depth + 1) followed by the heap path.
// ---------------------------------------------------------------------------
BitString encode_bnb_run(const BnbRunResult& run, double depth_alpha,
                         std::uint64_t n_max = kDefaultZetaCap);

struct BnbDecoded {
  double sample = 0.0;
  std::uint64_t depth = 0;
  std::vector<std::uint8_t> path_bits;
};
// Replays the branch from the shared seed; does not need the mode point.
BnbDecoded decode_bnb_run(BitReader& reader, const TargetProposalPair& pair,
                          std::uint64_t seed, double depth_alpha,
                          std::uint64_t n_max = kDefaultZetaCap);

// ---------------------------------------------------------------------------
// Sorted-uniform rejection coding: Elias-gamma(L + 1) for L = ceil(lb N),
// then the zeta-coded rank of the acceptance uniform among the first 2^L.
// ---------------------------------------------------------------------------
struct SortedUniformCode {
  std::uint64_t level = 0;   // L
  std::uint64_t rank = 0;    // J'
  BitString bits;
};
SortedUniformCode sorted_uniform_encode(std::uint64_t seed, const TargetProposalPair& pair,
                                        double bound_m, double mi_bits,
                                        std::uint64_t n_max = kDefaultZetaCap);

struct SortedUniformDecoded {
  double sample = 0.0;
  std::uint64_t index = 0;  // the original rejection index N
};
SortedUniformDecoded sorted_uniform_decode(BitReader& reader, std::uint64_t seed,
                                           const TargetProposalPair& pair, double mi_bits,
                                           std::uint64_t n_max = kDefaultZetaCap);

}  // namespace recsim
