#include "bincorr/gf2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>
#include <utility>

#include "bincorr/error.hpp"
#include "bincorr/rng.hpp"

namespace bincorr {
namespace {

constexpr std::size_t kWordBits = 64;

std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

std::string shape(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

void require_square(const BitMatrix& a, const char* what) {
  if (!a.is_square()) {
    throw DimensionMismatch(std::string(what) + ": matrix must be square, got " +
                            shape(a.rows(), a.cols()));
  }
}

void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
}

bool test_bit(std::span<const std::uint64_t> words, std::size_t c) {
  return ((words[c / kWordBits] >> (c % kWordBits)) & 1U) != 0;
}

}  // namespace

// ---------------------------------------------------------------------------
// BitVector

BitVector::BitVector(std::size_t len) : len_(len), words_(words_for(len), 0) {
  if (len == 0) throw std::invalid_argument("BitVector: length must be >= 1");
}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i, true);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("BitVector: expected only '0'/'1', got '" +
                                  std::string(bits) + "'");
    }
  }
  return v;
}

BitVector BitVector::from_mask(std::uint64_t mask, std::size_t len) {
  if (len > kWordBits) throw std::invalid_argument("BitVector::from_mask: len > 64");
  BitVector v(len);
  v.words_[0] = len == kWordBits ? mask : (mask & ((std::uint64_t{1} << len) - 1));
  return v;
}

bool BitVector::get(std::size_t i) const {
  if (i >= len_) throw std::out_of_range("BitVector::get: index out of range");
  return test_bit(words_, i);
}

void BitVector::set(std::size_t i, bool value) {
  if (i >= len_) throw std::out_of_range("BitVector::set: index out of range");
  const std::uint64_t bit = std::uint64_t{1} << (i % kWordBits);
  if (value) {
    words_[i / kWordBits] |= bit;
  } else {
    words_[i / kWordBits] &= ~bit;
  }
}

void BitVector::flip(std::size_t i) {
  if (i >= len_) throw std::out_of_range("BitVector::flip: index out of range");
  words_[i / kWordBits] ^= std::uint64_t{1} << (i % kWordBits);
}

std::size_t BitVector::count() const noexcept {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::uint64_t BitVector::to_mask() const {
  if (len_ > kWordBits) throw std::invalid_argument("BitVector::to_mask: size > 64");
  return words_[0];
}

std::string BitVector::to_string() const {
  std::string out(len_, '0');
  for (std::size_t i = 0; i < len_; ++i) {
    if (test_bit(words_, i)) out[i] = '1';
  }
  return out;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.len_ != len_) {
    throw DimensionMismatch("BitVector xor: lengths " + std::to_string(len_) + " and " +
                            std::to_string(other.len_));
  }
  xor_into(words_, other.words_);
  return *this;
}

// ---------------------------------------------------------------------------
// BitMatrix

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), words_(rows * stride_, 0) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("BitMatrix: dimensions must be >= 1, got " + shape(rows, cols));
  }
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMatrix BitMatrix::from_rows(std::span<const std::string> rows) {
  if (rows.empty()) throw std::invalid_argument("BitMatrix::from_rows: no rows");
  BitMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) {
      throw std::invalid_argument("BitMatrix::from_rows: row " + std::to_string(r) +
                                  " has length " + std::to_string(rows[r].size()) +
                                  ", expected " + std::to_string(m.cols_));
    }
    const auto bits = BitVector::from_string(rows[r]);
    std::copy(bits.words().begin(), bits.words().end(), m.row_words(r).begin());
  }
  return m;
}

BitMatrix BitMatrix::from_rows(std::initializer_list<std::string_view> rows) {
  std::vector<std::string> owned(rows.begin(), rows.end());
  return from_rows(std::span<const std::string>(owned));
}

bool BitMatrix::get(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("BitMatrix::get: index out of range");
  return test_bit(row_words(r), c);
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("BitMatrix::set: index out of range");
  auto& word = words_[r * stride_ + c / kWordBits];
  const std::uint64_t bit = std::uint64_t{1} << (c % kWordBits);
  word = value ? (word | bit) : (word & ~bit);
}

BitVector BitMatrix::row(std::size_t r) const {
  BitVector v(cols_);
  for (std::size_t c = 0; c < cols_; ++c) v.set(c, get(r, c));
  return v;
}

std::vector<std::string> BitMatrix::to_strings() const {
  std::vector<std::string> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r).to_string());
  return out;
}

std::uint64_t BitMatrix::row_mask(std::size_t r) const {
  if (cols_ > kWordBits) throw std::invalid_argument("BitMatrix::row_mask: cols > 64");
  return row_words(r)[0];
}

// ---------------------------------------------------------------------------
// Algebra

BitVector matvec(const BitMatrix& a, const BitVector& x) {
  if (a.cols() != x.size()) {
    throw DimensionMismatch("matvec: matrix is " + shape(a.rows(), a.cols()) +
                            " but vector has length " + std::to_string(x.size()));
  }
  BitVector out(a.rows());
  const auto xw = x.words();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto rw = a.row_words(r);
    unsigned parity = 0;
    for (std::size_t w = 0; w < rw.size(); ++w) {
      parity ^= static_cast<unsigned>(std::popcount(rw[w] & xw[w])) & 1U;
    }
    out.set(r, parity != 0);
  }
  return out;
}

BitMatrix multiply(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("multiply: shapes " + shape(a.rows(), a.cols()) + " and " +
                            shape(b.rows(), b.cols()));
  }
  BitMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row_words(r);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a.get(r, k)) xor_into(dst, b.row_words(k));
    }
  }
  return out;
}

std::size_t rank(const BitMatrix& a) {
  BitMatrix work = a;
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < work.cols() && pivot_row < work.rows(); ++c) {
    std::size_t found = pivot_row;
    while (found < work.rows() && !work.get(found, c)) ++found;
    if (found == work.rows()) continue;
    if (found != pivot_row) {
      std::swap_ranges(work.row_words(found).begin(), work.row_words(found).end(),
                       work.row_words(pivot_row).begin());
    }
    for (std::size_t r = pivot_row + 1; r < work.rows(); ++r) {
      if (work.get(r, c)) xor_into(work.row_words(r), work.row_words(pivot_row));
    }
    ++pivot_row;
  }
  return pivot_row;
}

bool determinant(const BitMatrix& a) {
  require_square(a, "determinant");
  return rank(a) == a.rows();
}

std::optional<BitMatrix> invert(const BitMatrix& a) {
  require_square(a, "invert");
  const std::size_t n = a.rows();
  BitMatrix work = a;
  BitMatrix inv = BitMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t found = c;
    while (found < n && !work.get(found, c)) ++found;
    if (found == n) return std::nullopt;
    if (found != c) {
      std::swap_ranges(work.row_words(found).begin(), work.row_words(found).end(),
                       work.row_words(c).begin());
      std::swap_ranges(inv.row_words(found).begin(), inv.row_words(found).end(),
                       inv.row_words(c).begin());
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r != c && work.get(r, c)) {
        xor_into(work.row_words(r), work.row_words(c));
        xor_into(inv.row_words(r), inv.row_words(c));
      }
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Structured matrices

BitMatrix build_recursive_matrix(std::size_t n, std::size_t depth,
                                 std::span<const std::vector<bool>> taps) {
  if (depth == 0) throw InvalidSpec("recursive matrix: depth must be >= 1");
  if (taps.size() != n) {
    throw InvalidSpec("recursive matrix: expected taps for " + std::to_string(n) +
                      " rows, got " + std::to_string(taps.size()));
  }
  BitMatrix a = BitMatrix::identity(n);
  for (std::size_t l = 0; l < n; ++l) {
    const std::size_t band = std::min(depth, l);
    if (taps[l].size() != band) {
      throw InvalidSpec("recursive matrix: row " + std::to_string(l + 1) + " has " +
                        std::to_string(taps[l].size()) + " taps, band allows exactly " +
                        std::to_string(band));
    }
    for (std::size_t lag = 1; lag <= band; ++lag) a.set(l, l - lag, taps[l][lag - 1]);
  }
  return a;
}

BitMatrix build_recursive_toeplitz(std::size_t n, const std::vector<bool>& coefficients) {
  std::vector<std::vector<bool>> taps(n);
  for (std::size_t l = 0; l < n; ++l) {
    const std::size_t band = std::min(coefficients.size(), l);
    taps[l].assign(coefficients.begin(), coefficients.begin() + static_cast<std::ptrdiff_t>(band));
  }
  return build_recursive_matrix(n, coefficients.size(), taps);
}

BitMatrix serial_equivalent_matrix(std::size_t n) {
  return build_recursive_toeplitz(n, std::vector<bool>{true});
}

BitMatrix build_circulant(std::size_t n, std::size_t d) {
  if (n == 0 || d == 0 || d > n) {
    throw InvalidSpec("circulant: need 1 <= d <= n, got n=" + std::to_string(n) +
                      " d=" + std::to_string(d));
  }
  BitMatrix a(n, n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < d; ++k) a.set(l, (l + k) % n, true);
  }
  return a;
}

bool is_prime(std::size_t d) noexcept {
  if (d < 2) return false;
  for (std::size_t f = 2; f * f <= d; ++f) {
    if (d % f == 0) return false;
  }
  return true;
}

CirculantVerdict circulant_rule(std::size_t n, std::size_t d) {
  if (n == 0 || d == 0 || d > n) {
    throw InvalidSpec("circulant: need 1 <= d <= n, got n=" + std::to_string(n) +
                      " d=" + std::to_string(d));
  }
  if (!is_prime(d)) return CirculantVerdict::kNotCovered;
  if (n % d == 0) return CirculantVerdict::kSingularDividesN;
  return d % 2 == 0 ? CirculantVerdict::kSingularEven : CirculantVerdict::kInvertible;
}

BitMatrix toeplitz_from_diagonals(std::size_t n, const std::vector<bool>& diagonals) {
  if (n == 0 || diagonals.size() != 2 * n - 1) {
    throw InvalidSpec("toeplitz: need 2n-1 diagonals");
  }
  BitMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a.set(i, j, diagonals[i + n - 1 - j]);
  }
  return a;
}

double toeplitz_nonsingular_fraction(std::size_t n, std::size_t trials, std::uint64_t seed) {
  if (n == 0) throw InvalidSpec("toeplitz fraction: n must be >= 1");
  if (trials == 0) throw InvalidSpec("toeplitz fraction: trials must be >= 1");
  std::vector<bool> diagonals(2 * n - 1);
  std::size_t nonsingular = 0;
  // The two- and eight-member families are enumerated outright.
  const std::size_t free_bits = diagonals.size();
  if (n <= 2) {
    const std::uint64_t family = std::uint64_t{1} << free_bits;
    for (std::uint64_t mask = 0; mask < family; ++mask) {
      for (std::size_t k = 0; k < free_bits; ++k) diagonals[k] = ((mask >> k) & 1U) != 0;
      if (determinant(toeplitz_from_diagonals(n, diagonals))) ++nonsingular;
    }
    return static_cast<double>(nonsingular) / static_cast<double>(family);
  }
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = substream(seed, t);
    for (std::size_t k = 0; k < diagonals.size(); ++k) diagonals[k] = rng.fair_bit();
    if (determinant(toeplitz_from_diagonals(n, diagonals))) ++nonsingular;
  }
  return static_cast<double>(nonsingular) / static_cast<double>(trials);
}

}  // namespace bincorr
