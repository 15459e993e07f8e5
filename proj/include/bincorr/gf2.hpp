#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bincorr {

/// Fixed-length vector over GF(2), packed 64 bits per word. Bit i lives in
/// word i / 64 at position i % 64; unused high bits of the last word stay 0.
class BitVector {
 public:
  /// All-zero vector of `len` bits. Throws std::invalid_argument if len == 0.
  explicit BitVector(std::size_t len);

  /// Parses a string of '0'/'1' characters, first character is bit 0.
  static BitVector from_string(std::string_view bits);
  /// Low `len` bits of `mask` (len <= 64).
  static BitVector from_mask(std::uint64_t mask, std::size_t len);

  std::size_t size() const noexcept { return len_; }
  bool get(std::size_t i) const;
  bool operator[](std::size_t i) const { return get(i); }
  void set(std::size_t i, bool value);
  void flip(std::size_t i);

  std::size_t count() const noexcept;
  /// Packs the vector into one word; requires size() <= 64.
  std::uint64_t to_mask() const;
  std::string to_string() const;

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector lhs, const BitVector& rhs) {
    lhs ^= rhs;
    return lhs;
  }
  bool operator==(const BitVector&) const = default;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

 private:
  std::size_t len_;
  std::vector<std::uint64_t> words_;
};

/// Dense matrix over GF(2) with packed rows.
class BitMatrix {
 public:
  /// All-zero rows x cols matrix. Both dimensions must be >= 1.
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix identity(std::size_t n);
  /// One '0'/'1' string per row; all rows must have the same length.
  static BitMatrix from_rows(std::span<const std::string> rows);
  static BitMatrix from_rows(std::initializer_list<std::string_view> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  bool get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, bool value);

  BitVector row(std::size_t r) const;
  std::vector<std::string> to_strings() const;

  /// Row r packed into a single word; requires cols() <= 64.
  std::uint64_t row_mask(std::size_t r) const;

  std::span<std::uint64_t> row_words(std::size_t r) noexcept {
    return {words_.data() + r * stride_, stride_};
  }
  std::span<const std::uint64_t> row_words(std::size_t r) const noexcept {
    return {words_.data() + r * stride_, stride_};
  }

  bool operator==(const BitMatrix&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t stride_;
  std::vector<std::uint64_t> words_;
};

// Throws DimensionMismatch when a.cols() != x.size().
BitVector matvec(const BitMatrix& a, const BitVector& x);
// Throws DimensionMismatch when a.cols() != b.rows().
BitMatrix multiply(const BitMatrix& a, const BitMatrix& b);

std::size_t rank(const BitMatrix& a);

/// Determinant over GF(2) by elimination. Throws DimensionMismatch for a
/// non-square matrix.
bool determinant(const BitMatrix& a);

/// Gauss-Jordan inverse. Returns std::nullopt when `a` is singular; throws
/// DimensionMismatch for a non-square matrix.
std::optional<BitMatrix> invert(const BitMatrix& a);

/// Lower-triangular recursion matrix with unit diagonal and band depth
/// `depth`. `taps[l]` holds the entries A(l, l-1), A(l, l-2), ... for row l
/// (0-based), i.e. ordered by lag, and must have exactly min(depth, l)
/// entries. Throws InvalidSpec on a wrong tap count or depth == 0.
BitMatrix build_recursive_matrix(std::size_t n, std::size_t depth,
                                 std::span<const std::vector<bool>> taps);

/// Row-independent (Toeplitz) variant: `coefficients[i-1]` is A(l, l-i) for
/// every row l that reaches lag i. Depth is coefficients.size().
BitMatrix build_recursive_toeplitz(std::size_t n, const std::vector<bool>& coefficients);

/// Serial-equivalent recursion: depth 1 with every A(l, l-1) = 1.
BitMatrix serial_equivalent_matrix(std::size_t n);

/// Circulant with ones at columns l, l+1, ..., l+d-1 (mod n) in row l.
/// Throws InvalidSpec unless 1 <= d <= n.
BitMatrix build_circulant(std::size_t n, std::size_t d);

bool is_prime(std::size_t d) noexcept;

enum class CirculantVerdict {
  kSingularDividesN,  // prime d with d | n
  kSingularEven,      // d = 2, d does not divide n
  kInvertible,        // odd prime d with d not dividing n
  kNotCovered,        // d not prime; only elimination decides
};

/// Closed-form invertibility rule for the consecutive-ones circulant, valid
/// for prime d only.
CirculantVerdict circulant_rule(std::size_t n, std::size_t d);

/// Toeplitz matrix from its 2n-1 diagonals; `diagonals[i - j + n - 1]` is the
/// value of entry (i, j).
BitMatrix toeplitz_from_diagonals(std::size_t n, const std::vector<bool>& diagonals);

/// Monte Carlo estimate of the fraction of uniformly drawn n x n binary
/// Toeplitz matrices that are non-singular. Trial t draws its diagonals from
/// substream(seed, t). For n <= 2 every member of the family is enumerated
/// and the result is exact regardless of `trials`.
double toeplitz_nonsingular_fraction(std::size_t n, std::size_t trials, std::uint64_t seed);

}  // namespace bincorr
