#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "bincorr/error.hpp"
#include "bincorr/gf2.hpp"
#include "oracles.hpp"

using namespace bincorr;

namespace {

std::vector<std::vector<bool>> random_taps(std::size_t n, std::size_t depth, std::mt19937_64& gen) {
  std::vector<std::vector<bool>> taps(n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t i = 0; i < std::min(depth, l); ++i) taps[l].push_back((gen() & 1U) != 0);
  }
  return taps;
}

}  // namespace

TEST_CASE("bit vectors parse, pack and compare") {
  const auto v = BitVector::from_string("1011");
  CHECK(v.size() == 4);
  CHECK(v.get(0));
  CHECK_FALSE(v.get(1));
  CHECK(v.count() == 3);
  CHECK(v.to_mask() == 0b1101U);
  CHECK(v.to_string() == "1011");
  CHECK(BitVector::from_mask(0b1101U, 4) == v);
  CHECK_THROWS_AS(BitVector(0), std::invalid_argument);
  CHECK_THROWS(BitVector::from_string("10a"));

  BitVector long_vec(130);
  long_vec.set(129, true);
  long_vec.flip(64);
  CHECK(long_vec.count() == 2);
  CHECK(long_vec.get(64));
}

TEST_CASE("matvec examples") {
  CHECK(matvec(BitMatrix::identity(3), BitVector::from_string("101")).to_string() == "101");
  CHECK(matvec(BitMatrix::from_rows({"11", "11"}), BitVector::from_string("11")).to_string() ==
        "00");
  const auto a = build_recursive_toeplitz(3, {true});
  CHECK(matvec(a, BitVector::from_string("110")).to_string() == "101");
}

TEST_CASE("matvec reports both shapes on mismatch") {
  const BitMatrix a(2, 3);
  try {
    (void)matvec(a, BitVector(4));
    FAIL("expected DimensionMismatch");
  } catch (const DimensionMismatch& e) {
    const std::string what = e.what();
    CHECK(what.find("2x3") != std::string::npos);
    CHECK(what.find('4') != std::string::npos);
  }
}

TEST_CASE("determinant examples") {
  CHECK(determinant(BitMatrix::identity(4)));
  auto zero_row = BitMatrix::identity(4);
  zero_row.set(2, 2, false);
  CHECK_FALSE(determinant(zero_row));
  CHECK(determinant(build_circulant(8, 3)));
  CHECK_THROWS_AS((void)determinant(BitMatrix(2, 3)), DimensionMismatch);
}

TEST_CASE("invert examples") {
  CHECK(invert(BitMatrix::identity(5)) == BitMatrix::identity(5));
  const auto a = BitMatrix::from_rows({"11", "01"});
  const auto inv = invert(a);
  REQUIRE(inv);
  CHECK(*inv == a);
  CHECK(multiply(a, *inv) == BitMatrix::identity(2));

  std::vector<std::vector<bool>> taps(6);
  for (std::size_t l = 0; l < 6; ++l) taps[l].assign(std::min<std::size_t>(2, l), true);
  const auto r = build_recursive_matrix(6, 2, taps);
  const auto r_inv = invert(r);
  REQUIRE(r_inv);
  CHECK(multiply(r, *r_inv) == BitMatrix::identity(6));
  CHECK(multiply(*r_inv, r) == BitMatrix::identity(6));

  CHECK_FALSE(invert(BitMatrix::from_rows({"11", "11"})).has_value());
  CHECK_THROWS_AS((void)invert(BitMatrix(3, 2)), DimensionMismatch);
}

TEST_CASE("recursive matrix construction") {
  std::vector<std::vector<bool>> one(1);
  CHECK(build_recursive_matrix(1, 3, one) == BitMatrix::identity(1));
  CHECK(build_recursive_toeplitz(3, {true}) == BitMatrix::from_rows({"100", "110", "011"}));
  CHECK(determinant(build_recursive_toeplitz(4, {true, true, true})));

  std::vector<std::vector<bool>> wrong{{}, {true, true}, {true}};
  CHECK_THROWS_AS((void)build_recursive_matrix(3, 2, wrong), InvalidSpec);
  std::vector<std::vector<bool>> three(3);
  CHECK_THROWS_AS((void)build_recursive_matrix(3, 0, three), InvalidSpec);
}

TEST_CASE("circulant construction and the prime rule") {
  CHECK(build_circulant(3, 1) == BitMatrix::identity(3));
  CHECK_FALSE(determinant(build_circulant(4, 2)));
  CHECK_FALSE(determinant(build_circulant(9, 3)));
  CHECK(circulant_rule(9, 3) == CirculantVerdict::kSingularDividesN);
  CHECK(circulant_rule(5, 2) == CirculantVerdict::kSingularEven);
  CHECK(circulant_rule(8, 3) == CirculantVerdict::kInvertible);
  CHECK(circulant_rule(8, 4) == CirculantVerdict::kNotCovered);
  CHECK(build_circulant(5, 2).row(4).to_string() == "10001");
  CHECK_THROWS_AS((void)build_circulant(3, 4), InvalidSpec);
  CHECK_THROWS_AS((void)build_circulant(3, 0), InvalidSpec);
}

TEST_CASE("toeplitz non-singular fraction") {
  for (std::size_t trials : {1U, 2U, 7U, 1000U}) {
    CHECK(toeplitz_nonsingular_fraction(1, trials, 3) == 0.5);
  }
  CHECK(toeplitz_nonsingular_fraction(2, 8, 3) == 0.5);

  // Independent count over the eight 2x2 Toeplitz matrices.
  std::size_t nonsingular = 0;
  for (unsigned mask = 0; mask < 8; ++mask) {
    std::vector<bool> diag{(mask & 1U) != 0, (mask & 2U) != 0, (mask & 4U) != 0};
    if (oracle::injective(toeplitz_from_diagonals(2, diag))) ++nonsingular;
  }
  CHECK(nonsingular == 4);

  const double f = toeplitz_nonsingular_fraction(8, 20000, 11);
  CHECK(std::abs(f - 0.5) < 0.02);
  CHECK(toeplitz_nonsingular_fraction(8, 500, 5) == toeplitz_nonsingular_fraction(8, 500, 5));
  CHECK_THROWS_AS((void)toeplitz_nonsingular_fraction(0, 10, 1), InvalidSpec);
  CHECK_THROWS_AS((void)toeplitz_nonsingular_fraction(4, 0, 1), InvalidSpec);
}

TEST_CASE("toeplitz diagonals land on the right entries") {
  // diagonals[i - j + n - 1]: index 0 is the top-right corner.
  const auto t = toeplitz_from_diagonals(3, {true, false, false, false, false});
  CHECK(t == BitMatrix::from_rows({"001", "000", "000"}));
  const auto lower = toeplitz_from_diagonals(3, {false, false, false, false, true});
  CHECK(lower == BitMatrix::from_rows({"000", "000", "100"}));
}

TEST_CASE("determinant agrees with invertibility and injectivity on random matrices") {
  std::mt19937_64 gen(2024);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 1 + gen() % 10;
    const auto a = oracle::random_matrix(n, n, gen);
    const bool det = determinant(a);
    const auto inv = invert(a);
    REQUIRE(det == inv.has_value());
    if (n <= 8) REQUIRE(det == oracle::injective(a));
    if (det) {
      REQUIRE(multiply(a, *inv) == BitMatrix::identity(n));
      REQUIRE(multiply(*inv, a) == BitMatrix::identity(n));
    }
    REQUIRE((rank(a) == n) == det);
  }
}

TEST_CASE("inverse is two-sided for invertible matrices up to n = 12") {
  std::mt19937_64 gen(99);
  int seen = 0;
  for (int t = 0; t < 3000 && seen < 500; ++t) {
    const std::size_t n = 1 + gen() % 12;
    const auto a = oracle::random_matrix(n, n, gen);
    const auto inv = invert(a);
    if (!inv) continue;
    ++seen;
    REQUIRE(multiply(a, *inv) == BitMatrix::identity(n));
    REQUIRE(multiply(*inv, a) == BitMatrix::identity(n));
  }
  CHECK(seen >= 300);
}

TEST_CASE("recursive matrices are unit lower triangular with determinant one") {
  std::mt19937_64 gen(7);
  for (std::size_t n = 1; n <= 16; ++n) {
    for (std::size_t depth = 1; depth <= std::max<std::size_t>(1, n - 1); ++depth) {
      const auto taps = random_taps(n, depth, gen);
      const auto a = build_recursive_matrix(n, depth, taps);
      for (std::size_t i = 0; i < n; ++i) {
        REQUIRE(a.get(i, i));
        for (std::size_t k = i + 1; k < n; ++k) REQUIRE_FALSE(a.get(i, k));
        for (std::size_t k = 0; k + depth < i; ++k) REQUIRE_FALSE(a.get(i, k));
      }
      REQUIRE(determinant(a));
    }
  }
}

TEST_CASE("recursive toeplitz rows repeat their coefficients") {
  const auto a = build_recursive_toeplitz(5, {true, false, true});
  CHECK(a == BitMatrix::from_rows({"10000", "11000", "01100", "10110", "01011"}));
}

TEST_CASE("circulant rule matches elimination for odd primes") {
  for (std::size_t d : {3U, 5U, 7U, 11U, 13U}) {
    for (std::size_t n = d; n <= 16; ++n) {
      const bool expected = n % d != 0;
      const auto a = build_circulant(n, d);
      REQUIRE(determinant(a) == expected);
      REQUIRE((circulant_rule(n, d) == CirculantVerdict::kInvertible) == expected);
    }
  }
}

TEST_CASE("matvec is linear") {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 500; ++t) {
    const std::size_t rows = 1 + gen() % 70;
    const std::size_t cols = 1 + gen() % 70;
    const auto a = oracle::random_matrix(rows, cols, gen);
    BitVector x(cols), y(cols);
    for (std::size_t k = 0; k < cols; ++k) {
      x.set(k, (gen() & 1U) != 0);
      y.set(k, (gen() & 1U) != 0);
    }
    REQUIRE(matvec(a, x ^ y) == (matvec(a, x) ^ matvec(a, y)));
  }
}

TEST_CASE("matvec agrees with the naive product") {
  std::mt19937_64 gen(17);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + gen() % 12;
    const auto a = oracle::random_matrix(n, n, gen);
    const std::uint64_t x = gen() & ((std::uint64_t{1} << n) - 1);
    REQUIRE(matvec(a, BitVector::from_mask(x, n)).to_mask() == oracle::apply(a, x));
  }
}

TEST_CASE("matrix text round trip") {
  const std::vector<std::string> rows{"101", "011", "110"};
  const auto a = BitMatrix::from_rows(rows);
  CHECK(a.to_strings() == rows);
  CHECK(a.row_mask(0) == 0b101U);
  CHECK_THROWS(BitMatrix::from_rows({"10", "1"}));
  CHECK_THROWS(BitMatrix(0, 2));
}
