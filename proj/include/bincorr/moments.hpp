#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "bincorr/model.hpp"
#include "bincorr/tolerances.hpp"

namespace bincorr {

struct CovarianceStructure {
  bool symmetric = false;
  bool toeplitz = false;
  // Only evaluated when the matrix carries a block size (mixed models).
  bool block_toeplitz = false;
};

/// Real dim x dim covariance matrix, row-major. Structure flags are derived
/// on construction with Tolerances::structural.
class CovarianceMatrix {
 public:
  CovarianceMatrix(std::size_t dim, std::vector<double> entries,
                   std::optional<std::size_t> block_size = std::nullopt);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t k) const { return entries_[i * dim_ + k]; }
  std::span<const double> entries() const noexcept { return entries_; }
  std::vector<double> row(std::size_t i) const;
  const CovarianceStructure& structure() const noexcept { return structure_; }
  std::optional<std::size_t> block_size() const noexcept { return block_size_; }

  double max_abs_diff(const CovarianceMatrix& other) const;

 private:
  std::size_t dim_;
  std::vector<double> entries_;
  std::optional<std::size_t> block_size_;
  CovarianceStructure structure_;
};

/// Closed forms for the BSC-based models; exact enumeration over the noise
/// vector Z through X = A^{-1} Z for the linear model. Throws CapExceeded when
/// a linear model has more than `cap` sources.
CovarianceMatrix covariance_exact(const ModelSpec& spec, std::size_t cap = kDefaultEnumerationCap);

/// Sample covariance with 1/samples normalization over the realizations of
/// sample(spec, seed, samples). Throws InvalidSpec when samples < 2.
CovarianceMatrix covariance_empirical(const ModelSpec& spec, std::size_t samples,
                                      std::uint64_t seed);

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
  // Representative value: the distinct value itself, or the bin centre.
  double value = 0.0;
};

struct Histogram {
  bool distinct_values = true;
  std::vector<HistogramBin> bins;  // ascending
};

/// With bins == 0, groups entries into distinct values (values closer than
/// Tolerances::structural merge). Otherwise uses `bins` equal-width bins over
/// [min, max].
Histogram covariance_histogram(const CovarianceMatrix& c, std::size_t bins = 0);

struct BlockReport {
  // blocks[s] is the n x n covariance between chains separated by s,
  // row-major, taken from the first block row.
  std::vector<std::vector<double>> blocks;
  double max_deviation = 0.0;
};

/// Compares every n x n block (a, b) with blocks[|a - b|] (transposed below
/// the diagonal). Throws DimensionMismatch when c.dim() != n * m.
BlockReport mixed_block_structure(const CovarianceMatrix& c, std::size_t n, std::size_t m);

/// Row-major CSV, one matrix row per line.
void write_matrix_csv(std::ostream& out, const CovarianceMatrix& c);
/// Distinct mode: "value,count"; binned mode: "lower,upper,count".
void write_histogram_csv(std::ostream& out, const Histogram& h);

}  // namespace bincorr
