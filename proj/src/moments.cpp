#include "bincorr/moments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "bincorr/csv.hpp"
#include "bincorr/error.hpp"

namespace bincorr {
namespace {

constexpr double kTol = Tolerances::structural;

// E[X_i X_k] for two sources driven by B through independent noise with
// P(noise = 0) = p and q.
double parallel_pair_moment(double p, double q) { return 0.5 * (p * q + (1.0 - p) * (1.0 - q)); }

// E[X_i X_k] for sources i < k on the same serial chain.
double serial_pair_moment(const ModelSpec& spec, std::size_t j, std::size_t i, std::size_t k) {
  double prod = 1.0;
  for (std::size_t l = i + 1; l <= k; ++l) prod *= 2.0 * spec.rho(l, j) - 1.0;
  return 0.25 * (1.0 + prod);
}

std::vector<double> linear_covariance(const ModelSpec& spec, std::size_t cap) {
  const std::size_t n = spec.n();
  if (n > cap || n >= 64) {
    throw CapExceeded("covariance_exact: linear model with " + std::to_string(n) +
                      " sources exceeds the enumeration cap of " + std::to_string(cap) +
                      "; use covariance_empirical");
  }
  const auto inv_rows = spec.inverse_row_masks();
  std::vector<double> mean(n, 0.0);
  std::vector<double> second(n * n, 0.0);
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << n); ++z) {
    double w = 1.0;
    for (std::size_t l = 0; l < n; ++l) w *= ((z >> l) & 1U) ? 1.0 - spec.rho(l) : spec.rho(l);
    if (w == 0.0) continue;
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::popcount(inv_rows[i] & z) & 1) x |= std::uint64_t{1} << i;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!((x >> i) & 1U)) continue;
      mean[i] += w;
      for (std::size_t k = i; k < n; ++k) {
        if ((x >> k) & 1U) second[i * n + k] += w;
      }
    }
  }
  std::vector<double> c(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i; k < n; ++k) {
      c[i * n + k] = c[k * n + i] = second[i * n + k] - mean[i] * mean[k];
    }
  }
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// CovarianceMatrix

CovarianceMatrix::CovarianceMatrix(std::size_t dim, std::vector<double> entries,
                                   std::optional<std::size_t> block_size)
    : dim_(dim), entries_(std::move(entries)), block_size_(block_size) {
  if (dim_ == 0 || entries_.size() != dim_ * dim_) {
    throw DimensionMismatch("CovarianceMatrix: " + std::to_string(entries_.size()) +
                            " entries for dimension " + std::to_string(dim_));
  }
  if (block_size_ && (*block_size_ == 0 || dim_ % *block_size_ != 0)) {
    throw DimensionMismatch("CovarianceMatrix: block size does not divide dimension");
  }
  auto& s = structure_;
  s.symmetric = true;
  s.toeplitz = true;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t k = 0; k < dim_; ++k) {
      const double v = (*this)(i, k);
      if (std::abs(v - (*this)(k, i)) > kTol) s.symmetric = false;
      if (i + 1 < dim_ && k + 1 < dim_ && std::abs(v - (*this)(i + 1, k + 1)) > kTol) {
        s.toeplitz = false;
      }
    }
  }
  if (block_size_) {
    s.block_toeplitz =
        mixed_block_structure(*this, *block_size_, dim_ / *block_size_).max_deviation <= kTol;
  }
}

std::vector<double> CovarianceMatrix::row(std::size_t i) const {
  const auto first = entries_.begin() + static_cast<std::ptrdiff_t>(i * dim_);
  return {first, first + static_cast<std::ptrdiff_t>(dim_)};
}

double CovarianceMatrix::max_abs_diff(const CovarianceMatrix& other) const {
  if (other.dim_ != dim_) throw DimensionMismatch("max_abs_diff: dimensions differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    worst = std::max(worst, std::abs(entries_[i] - other.entries_[i]));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Exact and empirical covariance

CovarianceMatrix covariance_exact(const ModelSpec& spec, std::size_t cap) {
  const std::size_t n = spec.n();
  const std::size_t dim = spec.total();
  if (spec.kind() == ModelKind::kLinear) {
    return CovarianceMatrix(dim, linear_covariance(spec, cap));
  }

  std::vector<double> c(dim * dim);
  switch (spec.kind()) {
    case ModelKind::kParallel:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
          c[i * n + k] = i == k ? 0.25 : parallel_pair_moment(spec.rho(i), spec.rho(k)) - 0.25;
        }
      }
      break;
    case ModelKind::kSerial:
    case ModelKind::kMixed: {
      // P(noise accumulated up to source l of chain j is 0).
      std::vector<double> reach(dim);
      for (std::size_t j = 0; j < spec.m(); ++j) {
        for (std::size_t l = 0; l < n; ++l) {
          reach[j * n + l] = cascade_flip_prob(spec.rho().subspan(j * n, l + 1));
        }
      }
      for (std::size_t a = 0; a < dim; ++a) {
        for (std::size_t b = a; b < dim; ++b) {
          const std::size_t ja = a / n, jb = b / n;
          double v = 0.25;
          if (a != b) {
            v = ja == jb ? serial_pair_moment(spec, ja, a % n, b % n) - 0.25
                         : parallel_pair_moment(reach[a], reach[b]) - 0.25;
          }
          c[a * dim + b] = c[b * dim + a] = v;
        }
      }
      break;
    }
    case ModelKind::kLinear:
      break;
  }
  std::optional<std::size_t> block;
  if (spec.kind() == ModelKind::kMixed) block = n;
  return CovarianceMatrix(dim, std::move(c), block);
}

CovarianceMatrix covariance_empirical(const ModelSpec& spec, std::size_t samples,
                                      std::uint64_t seed) {
  if (samples < 2) throw InvalidSpec("covariance_empirical: need at least 2 samples");
  const std::size_t dim = spec.total();
  std::vector<std::uint64_t> ones(dim, 0);
  std::vector<std::uint64_t> both(dim * dim, 0);

  const auto accumulate = [&](const auto& bit) {
    for (std::size_t i = 0; i < dim; ++i) {
      if (!bit(i)) continue;
      ++ones[i];
      for (std::size_t k = i; k < dim; ++k) {
        if (bit(k)) ++both[i * dim + k];
      }
    }
  };

  if (dim <= 64) {
    constexpr std::size_t kChunk = 1 << 16;
    for (std::size_t first = 0; first < samples; first += kChunk) {
      for (auto x : sample_masks(spec, seed, first, std::min(kChunk, samples - first))) {
        accumulate([x](std::size_t i) { return ((x >> i) & 1U) != 0; });
      }
    }
  } else {
    for (const auto& x : sample(spec, seed, samples)) {
      accumulate([&x](std::size_t i) { return x.get(i); });
    }
  }

  const double s = static_cast<double>(samples);
  std::vector<double> c(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t k = i; k < dim; ++k) {
      const double v = static_cast<double>(both[i * dim + k]) / s -
                       (static_cast<double>(ones[i]) / s) * (static_cast<double>(ones[k]) / s);
      c[i * dim + k] = c[k * dim + i] = v;
    }
  }
  std::optional<std::size_t> block;
  if (spec.kind() == ModelKind::kMixed) block = spec.n();
  return CovarianceMatrix(dim, std::move(c), block);
}

// ---------------------------------------------------------------------------
// Histogram and block structure

Histogram covariance_histogram(const CovarianceMatrix& c, std::size_t bins) {
  std::vector<double> values(c.entries().begin(), c.entries().end());
  std::sort(values.begin(), values.end());
  Histogram h;
  if (bins == 0) {
    h.distinct_values = true;
    for (double v : values) {
      if (!h.bins.empty() && v - h.bins.back().lower <= kTol) {
        ++h.bins.back().count;
      } else {
        h.bins.push_back({v, v, 1, v});
      }
    }
    return h;
  }

  h.distinct_values = false;
  const double lo = values.front();
  const double hi = values.back();
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double l = lo + width * static_cast<double>(b);
    const double u = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
    h.bins.push_back({l, u, 0, 0.5 * (l + u)});
  }
  for (double v : values) {
    std::size_t b = width > 0.0 ? static_cast<std::size_t>((v - lo) / width) : 0;
    h.bins[std::min(b, bins - 1)].count++;
  }
  return h;
}

BlockReport mixed_block_structure(const CovarianceMatrix& c, std::size_t n, std::size_t m) {
  if (n == 0 || m == 0 || c.dim() != n * m) {
    throw DimensionMismatch("mixed_block_structure: matrix dimension " + std::to_string(c.dim()) +
                            " does not equal n*m = " + std::to_string(n * m));
  }
  BlockReport report;
  for (std::size_t s = 0; s < m; ++s) {
    std::vector<double> block(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) block[i * n + k] = c(i, s * n + k);
    }
    report.blocks.push_back(std::move(block));
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const auto& ref = report.blocks[a > b ? a - b : b - a];
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
          const double expected = b >= a ? ref[i * n + k] : ref[k * n + i];
          report.max_deviation =
              std::max(report.max_deviation, std::abs(c(a * n + i, b * n + k) - expected));
        }
      }
    }
  }
  return report;
}

void write_matrix_csv(std::ostream& out, const CovarianceMatrix& c) {
  std::vector<std::string> fields(c.dim());
  for (std::size_t i = 0; i < c.dim(); ++i) {
    for (std::size_t k = 0; k < c.dim(); ++k) fields[k] = format_number(c(i, k));
    write_csv_row(out, fields);
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  if (h.distinct_values) {
    write_csv_row(out, {"value", "count"});
    for (const auto& b : h.bins) {
      write_csv_row(out, {format_number(b.value), std::to_string(b.count)});
    }
  } else {
    write_csv_row(out, {"lower", "upper", "count"});
    for (const auto& b : h.bins) {
      write_csv_row(out, {format_number(b.lower), format_number(b.upper), std::to_string(b.count)});
    }
  }
}

}  // namespace bincorr
