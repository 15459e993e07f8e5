#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bincorr/gf2.hpp"
#include "bincorr/tolerances.hpp"

namespace bincorr {

enum class ModelKind { kParallel, kSerial, kMixed, kLinear };

std::string_view to_string(ModelKind kind) noexcept;
/// Throws InvalidSpec for an unknown name.
ModelKind model_kind_from_string(std::string_view name);

/// A realization of all sources of a model. Mixed models are flattened chain
/// by chain: source l of chain j (both 0-based) is bit j * n + l.
using SourceRealization = BitVector;

/// Immutable description of one correlation model.
///
/// BSC-based models (parallel, serial, mixed) are driven by a hidden fair
/// bit B. Every edge parameter rho is the probability that the corresponding
/// binary symmetric channel passes its input unchanged, restricted to
/// [1/2, 1]. The linear model solves A X = Z over GF(2), where Z has
/// independent entries with P(Z_l = 0) = rho_l in [0, 1] and A must be
/// invertible.
class ModelSpec {
 public:
  /// X_l = B xor Z_l for l = 1..N.
  static ModelSpec parallel(std::vector<double> rho);
  /// X_1 = B xor Z_1 and X_l = X_{l-1} xor Z_l. rho[0] belongs to the first
  /// channel, which has no effect on the joint distribution of X.
  static ModelSpec serial(std::vector<double> rho);
  /// Serial chain of n sources with rho on edges 2..n and `first_rho` on the
  /// leading edge.
  static ModelSpec serial_constant(std::size_t n, double rho, double first_rho = 1.0);
  /// chains[j][l] is the parameter of channel l on chain j. Every chain must
  /// have the same length.
  static ModelSpec mixed(const std::vector<std::vector<double>>& chains);
  static ModelSpec linear(BitMatrix a, std::vector<double> rho);

  ModelKind kind() const noexcept { return kind_; }
  /// Sources per chain.
  std::size_t n() const noexcept { return n_; }
  /// Number of chains, 1 unless mixed.
  std::size_t m() const noexcept { return m_; }
  std::size_t total() const noexcept { return n_ * m_; }

  /// All edge parameters, chain-major for mixed models.
  std::span<const double> rho() const noexcept { return rho_; }
  /// Parameter of channel l (0-based) on chain j.
  double rho(std::size_t l, std::size_t j = 0) const { return rho_.at(j * n_ + l); }

  /// Present for the linear model only.
  const std::optional<BitMatrix>& matrix() const noexcept { return a_; }
  const std::optional<BitMatrix>& inverse() const noexcept { return a_inv_; }

  /// Linear model: whether every P(X_i = 1) equals 1/2, when the model is
  /// small enough to check by enumeration. Always true for BSC-based models.
  std::optional<bool> uniform_marginals() const noexcept { return uniform_marginals_; }

  bool operator==(const ModelSpec& other) const;

  // Packed-word fast paths, available when total() <= 64.
  std::span<const std::uint64_t> matrix_row_masks() const noexcept { return a_rows_; }
  std::span<const std::uint64_t> inverse_row_masks() const noexcept { return a_inv_rows_; }

 private:
  ModelSpec(ModelKind kind, std::size_t n, std::size_t m, std::vector<double> rho);
  void validate_bsc_range() const;

  ModelKind kind_;
  std::size_t n_;
  std::size_t m_;
  std::vector<double> rho_;
  std::optional<BitMatrix> a_;
  std::optional<BitMatrix> a_inv_;
  std::vector<std::uint64_t> a_rows_;
  std::vector<std::uint64_t> a_inv_rows_;
  std::optional<bool> uniform_marginals_ = true;
};

/// P(Z' = 0) for the xor of independent noise bits with P(Z_i = 0) = rhos[i]:
/// (1 + prod(2 rho_i - 1)) / 2. Throws InvalidSpec on an empty sequence or a
/// value outside [0, 1].
double cascade_flip_prob(std::span<const double> rhos);

/// Exact joint probability of a realization. Throws DimensionMismatch when
/// x.size() != spec.total().
double pmf(const ModelSpec& spec, const SourceRealization& x);
/// Same as pmf() with the realization packed into a word (bit i = source i);
/// requires spec.total() <= 64.
double pmf_mask(const ModelSpec& spec, std::uint64_t x);

/// P(X = x | B = b) for the BSC-based models. Throws Unsupported for the
/// linear model, which has no hidden common bit.
double conditional_pmf(const ModelSpec& spec, const SourceRealization& x, bool b);

/// Probability of every outcome, indexed by packed realization. Throws
/// CapExceeded when spec.total() > cap.
std::vector<double> pmf_table(const ModelSpec& spec, std::size_t cap = kDefaultEnumerationCap);

/// `count` i.i.d. realizations. Realization k is generated from
/// substream(seed, k): first the hidden bit B (BSC models), then the noise
/// bits in flattened source order.
std::vector<SourceRealization> sample(const ModelSpec& spec, std::uint64_t seed, std::size_t count);

/// Packed realizations first_index, ..., first_index + count - 1 of the same
/// stream family as sample(); requires spec.total() <= 64.
std::vector<std::uint64_t> sample_masks(const ModelSpec& spec, std::uint64_t seed,
                                        std::uint64_t first_index, std::size_t count);

}  // namespace bincorr
