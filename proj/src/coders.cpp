#include "recsim/coders.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "recsim/poisson.hpp"
#include "recsim/rng.hpp"
#include "recsim/special.hpp"

namespace recsim {

namespace {

struct Dyadic {
  mpz_class m;
  unsigned long s;  // value = m / 2^s
};

Dyadic to_dyadic(double x) {
  if (x < 0.0 || x > 1.0 || std::isnan(x)) throw std::domain_error("coder: value outside [0,1]");
  if (x == 0.0) return {mpz_class(0), 0};
  if (x == 1.0) return {mpz_class(1), 0};
  int e = 0;
  double f = std::frexp(x, &e);       // x = f * 2^e, f in [0.5, 1)
  double scaled = std::ldexp(f, 53);  // exact 53-bit integer
  mpz_class m(static_cast<unsigned long>(scaled));
  long s = 53 - e;
  // Strip trailing zeros to keep the arithmetic small.
  unsigned long tz = mpz_scan1(m.get_mpz_t(), 0);
  if (tz > 0) {
    m >>= tz;
    s -= static_cast<long>(tz);
  }
  if (s < 0) throw std::logic_error("coder: dyadic scale underflow");
  return {m, static_cast<unsigned long>(s)};
}

// Common-scale pair for the endpoints of [a, b).
void common_scale(double a, double b, mpz_class& ma, mpz_class& mb, unsigned long& s) {
  Dyadic da = to_dyadic(a), db = to_dyadic(b);
  s = std::max(da.s, db.s);
  ma = da.m << (s - da.s);
  mb = db.m << (s - db.s);
}

std::uint64_t floor_log2(std::uint64_t n) { return std::bit_width(n) - 1; }

std::uint64_t ceil_log2(std::uint64_t n) {
  return n <= 1 ? 0 : 64 - static_cast<std::uint64_t>(std::countl_zero(n - 1));
}

// Shortest dyadic interval [c 2^-l, (c+1) 2^-l) inside [low, low+wid)/2^exp.
BitString emit_dyadic(const mpz_class& low, const mpz_class& wid, unsigned long exp) {
  std::size_t bl = mpz_sizeinbase(wid.get_mpz_t(), 2);
  long l0 = static_cast<long>(exp) - static_cast<long>(bl);
  if (l0 < 0) l0 = 0;
  for (long l = l0; l <= l0 + 3; ++l) {
    mpz_class num = low << l;
    mpz_class c, den = mpz_class(1) << exp;
    mpz_cdiv_q(c.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    mpz_class lhs = (c + 1) << exp;
    mpz_class rhs = (low + wid) << l;
    if (lhs <= rhs) {
      BitString out;
      for (long i = l - 1; i >= 0; --i)
        out.push_bit(mpz_tstbit(c.get_mpz_t(), static_cast<unsigned long>(i)));
      return out;
    }
  }
  throw std::logic_error("coder: no dyadic interval found");
}

}  // namespace

// ---------------------------------------------------------------------------
// DyadicEncoder
// ---------------------------------------------------------------------------

DyadicEncoder::DyadicEncoder() : low_(0), wid_(1), exp_(0) {}

void DyadicEncoder::refine_exact(const mpz_class& ma, const mpz_class& mb, unsigned long s) {
  if (!(mb > ma)) throw std::runtime_error("coder: empty interval");
  low_ = (low_ << s) + wid_ * ma;
  wid_ = wid_ * (mb - ma);
  exp_ += s;
  normalize();
}

void DyadicEncoder::normalize() {
  unsigned long k = std::min(exp_, mpz_scan1(wid_.get_mpz_t(), 0));
  if (low_ != 0) k = std::min(k, mpz_scan1(low_.get_mpz_t(), 0));
  if (k > 0) {
    low_ >>= k;
    wid_ >>= k;
    exp_ -= k;
  }
}

void DyadicEncoder::refine(double a, double b) {
  mpz_class ma, mb;
  unsigned long s;
  common_scale(a, b, ma, mb, s);
  refine_exact(ma, mb, s);
}

void DyadicEncoder::refine_cell(int bit, double wr) {
  if (!(wr > 0.0 && wr < 1.0)) throw std::domain_error("coder: fraction outside (0,1)");
  Dyadic d = to_dyadic(wr);
  mpz_class boundary = (mpz_class(1) << d.s) - d.m;
  if (bit == 0)
    refine_exact(mpz_class(0), boundary, d.s);
  else
    refine_exact(boundary, mpz_class(1) << d.s, d.s);
}

BitString DyadicEncoder::finish() const { return emit_dyadic(low_, wid_, exp_); }

// ---------------------------------------------------------------------------
// DyadicDecoder
// ---------------------------------------------------------------------------

DyadicDecoder::DyadicDecoder(BitReader& reader)
    : reader_(&reader), start_(reader.position()), low_(0), wid_(1), exp_(0) {}

void DyadicDecoder::ensure_bit() {
  win_v_ = (win_v_ << 1) + reader_->next();
  ++win_k_;
}

int DyadicDecoder::window_side(const mpz_class& m, unsigned long s) {
  // Boundary B = (low * 2^s + wid * m) / 2^(exp + s); window [v, v+1) / 2^k.
  mpz_class bnum = (low_ << s) + wid_ * m;
  mpz_class lhs = (win_v_ + 1) << (exp_ + s);
  mpz_class rhs = bnum << win_k_;
  if (lhs <= rhs) return -1;  // window entirely left of B
  mpz_class lhs2 = win_v_ << (exp_ + s);
  if (lhs2 >= rhs) return 1;  // entirely right
  return 0;
}

void DyadicDecoder::refine_exact(const mpz_class& ma, const mpz_class& mb, unsigned long s) {
  if (!(mb > ma)) throw std::runtime_error("coder: empty interval");
  low_ = (low_ << s) + wid_ * ma;
  wid_ = wid_ * (mb - ma);
  exp_ += s;
  normalize();
}

void DyadicDecoder::normalize() {
  unsigned long k = std::min(exp_, mpz_scan1(wid_.get_mpz_t(), 0));
  if (low_ != 0) k = std::min(k, mpz_scan1(low_.get_mpz_t(), 0));
  if (k > 0) {
    low_ >>= k;
    wid_ >>= k;
    exp_ -= k;
  }
}

int DyadicDecoder::decode_cell(double wr) {
  if (!(wr > 0.0 && wr < 1.0)) throw std::domain_error("coder: fraction outside (0,1)");
  Dyadic d = to_dyadic(wr);
  mpz_class boundary = (mpz_class(1) << d.s) - d.m;
  for (;;) {
    int side = window_side(boundary, d.s);
    if (side < 0) {
      refine_exact(mpz_class(0), boundary, d.s);
      return 0;
    }
    if (side > 0) {
      refine_exact(boundary, mpz_class(1) << d.s, d.s);
      return 1;
    }
    ensure_bit();
  }
}

std::uint64_t DyadicDecoder::decode_by_cdf(const std::function<double(std::uint64_t)>& cdf,
                                           std::uint64_t n_max) {
  auto boundary_le_window_lo = [this](double x) {
    // (low * 2^s + wid * m) / 2^(exp+s) <= v / 2^k ?
    Dyadic d = to_dyadic(x);
    mpz_class bnum = (low_ << d.s) + wid_ * d.m;
    return bnum << win_k_ <= win_v_ << (exp_ + d.s);
  };
  for (;;) {
    // Largest j in [0, n_max] with boundary(cdf(j)) <= window lo.
    std::uint64_t lo = 0, hi = n_max;
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo + 1) / 2;
      if (boundary_le_window_lo(cdf(mid)))
        lo = mid;
      else
        hi = mid - 1;
    }
    std::uint64_t sym = lo + 1;  // candidate; n_max + 1 is the escape cell
    double upper = sym <= n_max ? cdf(sym) : 1.0;
    Dyadic du = to_dyadic(upper);
    int side = window_side(du.m, du.s);
    if (side < 0) {
      // Window inside [cdf(sym-1), cdf(sym)): commit.
      double lower = cdf(sym - 1);
      mpz_class ma, mb;
      unsigned long s;
      common_scale(lower, upper, ma, mb, s);
      refine_exact(ma, mb, s);
      return sym;
    }
    ensure_bit();
  }
}

void DyadicDecoder::finalize() {
  BitString code = emit_dyadic(low_, wid_, exp_);
  reader_->seek(start_ + code.size());
}

// ---------------------------------------------------------------------------
// Zeta coding
// ---------------------------------------------------------------------------

ZetaModel::ZetaModel(double alpha, std::uint64_t n_max) : alpha_(alpha), n_max_(n_max) {
  if (!(alpha > 1.0)) throw std::invalid_argument("zeta: alpha must exceed 1");
  if (n_max < 1) throw std::invalid_argument("zeta: cap must be >= 1");
  z_ = special::riemann_zeta(alpha);
  std::uint64_t np = std::min<std::uint64_t>(n_max, 4096);
  prefix_.resize(np + 1, 0.0);
  double acc = 0.0;
  for (std::uint64_t k = 1; k <= np; ++k) {
    acc += std::pow(static_cast<double>(k), -alpha);
    prefix_[k] = acc / z_;
  }
}

double ZetaModel::tail_from(double m) const {
  double fm = std::pow(m, -alpha_);
  return m * fm / (alpha_ - 1.0) + 0.5 * fm + alpha_ * fm / m / 12.0 -
         alpha_ * (alpha_ + 1.0) * (alpha_ + 2.0) * fm / (m * m * m) / 720.0;
}

double ZetaModel::cdf(std::uint64_t n) const {
  if (n == 0) return 0.0;
  if (n > n_max_) n = n_max_;
  if (n < prefix_.size()) return prefix_[n];
  double v = 1.0 - tail_from(static_cast<double>(n) + 1.0) / z_;
  return v >= 1.0 ? std::nextafter(1.0, 0.0) : v;
}

BitString ZetaCoder::encode(std::uint64_t n) const {
  if (n == 0) throw std::invalid_argument("zeta: index must be >= 1");
  if (n > model_.cap()) throw std::out_of_range("zeta: index exceeds cap");
  double a = model_.cdf(n - 1), b = model_.cdf(n);
  DyadicEncoder enc;
  if (b > a) {
    enc.refine(a, b);
    return enc.finish();
  }
  // Interval underflow deep in the tail: escape to raw Elias-delta coding.
  enc.refine(model_.cdf(model_.cap()), 1.0);
  BitString out = enc.finish();
  out.append(elias_delta_encode(n));
  return out;
}

std::uint64_t ZetaCoder::decode(BitReader& reader) const {
  DyadicDecoder dec(reader);
  auto cdf = [this](std::uint64_t k) { return model_.cdf(k); };
  std::uint64_t sym = dec.decode_by_cdf(cdf, model_.cap());
  dec.finalize();
  if (sym <= model_.cap()) {
    // Guard against committing to an empty (escaped) symbol interval.
    if (model_.cdf(sym) > model_.cdf(sym - 1)) return sym;
    throw std::runtime_error("zeta: decoded an escaped symbol");
  }
  return elias_delta_decode(reader);
}

double ZetaCoder::ideal_length_bits(std::uint64_t n) const {
  return model_.alpha() * std::log2(static_cast<double>(n)) + std::log2(model_.normalizer());
}

BitString zeta_encode(std::uint64_t n, double alpha, std::uint64_t n_max) {
  return ZetaCoder(alpha, n_max).encode(n);
}

std::uint64_t zeta_decode(BitReader& reader, double alpha, std::uint64_t n_max) {
  return ZetaCoder(alpha, n_max).decode(reader);
}

double zeta_ideal_length(std::uint64_t n, double alpha, std::uint64_t n_max) {
  return ZetaCoder(alpha, n_max).ideal_length_bits(n);
}

// ---------------------------------------------------------------------------
// Elias codes
// ---------------------------------------------------------------------------

BitString elias_gamma_encode(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("elias_gamma: needs n >= 1");
  std::uint64_t k = floor_log2(n);
  BitString out;
  for (std::uint64_t i = 0; i < k; ++i) out.push_bit(0);
  for (std::uint64_t i = 0; i <= k; ++i) out.push_bit((n >> (k - i)) & 1);
  return out;
}

std::uint64_t elias_gamma_decode(BitReader& reader) {
  std::uint64_t zeros = 0;
  while (reader.next() == 0) {
    if (++zeros > 63) throw std::runtime_error("elias_gamma: bad prefix");
  }
  std::uint64_t n = 1;
  for (std::uint64_t i = 0; i < zeros; ++i) n = (n << 1) | static_cast<std::uint64_t>(reader.next());
  return n;
}

BitString elias_delta_encode(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("elias_delta: needs n >= 1");
  std::uint64_t k = floor_log2(n);
  BitString out = elias_gamma_encode(k + 1);
  for (std::uint64_t i = 0; i < k; ++i) out.push_bit((n >> (k - 1 - i)) & 1);
  return out;
}

std::uint64_t elias_delta_decode(BitReader& reader) {
  std::uint64_t len = elias_gamma_decode(reader);
  std::uint64_t n = 1;
  for (std::uint64_t i = 0; i + 1 < len; ++i)
    n = (n << 1) | static_cast<std::uint64_t>(reader.next());
  return n;
}

// ---------------------------------------------------------------------------
// Heap-path coding
// ---------------------------------------------------------------------------

BitString encode_heap_path(const std::vector<double>& taken_fractions,
                           const std::vector<std::uint8_t>& path_bits) {
  if (taken_fractions.size() != path_bits.size())
    throw std::invalid_argument("encode_heap_path: size mismatch");
  DyadicEncoder enc;
  for (std::size_t d = 0; d < path_bits.size(); ++d) {
    double frac = taken_fractions[d];
    if (!(frac > 0.0 && frac < 1.0))
      throw std::domain_error("encode_heap_path: fraction outside (0,1)");
    // Right-cell fraction 1 - U: equals the recorded fraction on right
    // retains, and its complement on left retains (where frac == U exactly).
    double wr = path_bits[d] ? frac : 1.0 - frac;
    enc.refine_cell(path_bits[d], wr);
  }
  return enc.finish();
}

std::vector<std::uint8_t> decode_heap_path(BitReader& reader, std::size_t depth,
                                           const std::function<double()>& next_uniform,
                                           const std::function<void(int)>& on_bit) {
  DyadicDecoder dec(reader);
  std::vector<std::uint8_t> bits;
  bits.reserve(depth);
  for (std::size_t d = 0; d < depth; ++d) {
    double u = next_uniform();
    double wr = 1.0 - u;
    int bit = dec.decode_cell(wr);
    on_bit(bit);
    bits.push_back(static_cast<std::uint8_t>(bit));
  }
  dec.finalize();
  return bits;
}

// ---------------------------------------------------------------------------
// Two-part branch-and-bound code
// ---------------------------------------------------------------------------

BitString encode_bnb_run(const BnbRunResult& run, double depth_alpha, std::uint64_t n_max) {
  ZetaCoder zc(depth_alpha, n_max);
  BitString out = zc.encode(run.accept_depth + 1);
  std::vector<double> fr(run.per_step_fraction.begin(),
                         run.per_step_fraction.begin() +
                             static_cast<std::ptrdiff_t>(run.accept_depth));
  out.append(encode_heap_path(fr, run.path_bits));
  return out;
}

BnbDecoded decode_bnb_run(BitReader& reader, const TargetProposalPair& pair,
                          std::uint64_t seed, double depth_alpha, std::uint64_t n_max) {
  ZetaCoder zc(depth_alpha, n_max);
  std::uint64_t depth = zc.decode(reader) - 1;
  SeedStream base(seed);
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::uint64_t d = 0;
  double y_pivot = 0.0;
  auto next_u = [&]() {
    double u = base.fold_in(d).uniform_at(1);
    y_pivot = quantile_restricted(pair.proposal, lo, hi, u);
    return u;
  };
  auto on_bit = [&](int bit) {
    if (bit == 0)
      hi = y_pivot;
    else
      lo = y_pivot;
    ++d;
  };
  BnbDecoded out;
  out.path_bits = decode_heap_path(reader, depth, next_u, on_bit);
  out.depth = depth;
  out.sample = quantile_restricted(pair.proposal, lo, hi, base.fold_in(depth).uniform_at(1));
  return out;
}

// ---------------------------------------------------------------------------
// Sorted-uniform rejection coding
// ---------------------------------------------------------------------------

SortedUniformCode sorted_uniform_encode(std::uint64_t seed, const TargetProposalPair& pair,
                                        double bound_m, double mi_bits,
                                        std::uint64_t n_max) {
  RunResult run = rejection_sample(pair, bound_m, seed);
  const std::uint64_t n = run.selected_index;
  const double u_accept = *run.acceptance_uniform;
  SortedUniformCode code;
  code.level = ceil_log2(n);
  const std::uint64_t np = std::uint64_t{1} << code.level;
  SeedStream base(seed);
  std::uint64_t rank = 1;
  for (std::uint64_t i = 1; i <= np; ++i) {
    if (i == n) continue;
    if (base.fold_in(i).uniform_at(0) < u_accept) ++rank;
  }
  code.rank = rank;
  const double alpha = 1.0 + 1.0 / (mi_bits + std::log2(2.5));
  code.bits = elias_gamma_encode(code.level + 1);
  code.bits.append(zeta_encode(rank, alpha, n_max));
  return code;
}

SortedUniformDecoded sorted_uniform_decode(BitReader& reader, std::uint64_t seed,
                                           const TargetProposalPair& pair, double mi_bits,
                                           std::uint64_t n_max) {
  std::uint64_t level = elias_gamma_decode(reader) - 1;
  const double alpha = 1.0 + 1.0 / (mi_bits + std::log2(2.5));
  std::uint64_t rank = zeta_decode(reader, alpha, n_max);
  const std::uint64_t np = std::uint64_t{1} << level;
  SeedStream base(seed);
  std::vector<std::pair<double, std::uint64_t>> us;
  us.reserve(np);
  for (std::uint64_t i = 1; i <= np; ++i) us.emplace_back(base.fold_in(i).uniform_at(0), i);
  if (rank > np) throw std::runtime_error("sorted_uniform: rank exceeds block");
  std::nth_element(us.begin(), us.begin() + static_cast<std::ptrdiff_t>(rank - 1), us.end());
  std::uint64_t index = us[rank - 1].second;
  SortedUniformDecoded out;
  out.index = index;
  out.sample = pair.proposal.quantile(base.fold_in(index).uniform_at(1));
  return out;
}

}  // namespace recsim
