#include "bincorr/model.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <utility>

#include "bincorr/error.hpp"
#include "bincorr/rng.hpp"

namespace bincorr {
namespace {

constexpr std::size_t kMaskBits = 64;

bool in_unit_interval(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

double keep_prob(bool same, double rho) { return same ? rho : 1.0 - rho; }

bool parity(std::uint64_t w) { return (std::popcount(w) & 1) != 0; }

// P(chain j | B = b) for a serial chain whose sources sit at bits
// j*n, ..., j*n + n - 1.
template <class Bits>
double chain_given_b(const ModelSpec& spec, const Bits& bit, std::size_t j, bool b) {
  const std::size_t off = j * spec.n();
  double p = keep_prob(bit(off) == b, spec.rho(0, j));
  for (std::size_t l = 1; l < spec.n(); ++l) {
    p *= keep_prob(bit(off + l) == bit(off + l - 1), spec.rho(l, j));
  }
  return p;
}

template <class Bits>
double parallel_given_b(const ModelSpec& spec, const Bits& bit, bool b) {
  double p = 1.0;
  for (std::size_t l = 0; l < spec.n(); ++l) p *= keep_prob(bit(l) == b, spec.rho(l));
  return p;
}

template <class Bits>
double given_b(const ModelSpec& spec, const Bits& bit, bool b) {
  switch (spec.kind()) {
    case ModelKind::kParallel:
      return parallel_given_b(spec, bit, b);
    case ModelKind::kSerial:
    case ModelKind::kMixed: {
      double p = 1.0;
      for (std::size_t j = 0; j < spec.m(); ++j) p *= chain_given_b(spec, bit, j, b);
      return p;
    }
    case ModelKind::kLinear:
      break;
  }
  throw Unsupported("conditional_pmf: the linear model has no hidden common bit");
}

// `noise_zero(l)` reports whether (A x)_l == 0 for the linear model.
template <class Bits, class NoiseZero>
double pmf_impl(const ModelSpec& spec, const Bits& bit, const NoiseZero& noise_zero) {
  switch (spec.kind()) {
    case ModelKind::kParallel:
    case ModelKind::kMixed:
      return 0.5 * (given_b(spec, bit, false) + given_b(spec, bit, true));
    case ModelKind::kSerial: {
      double p = 0.5;
      for (std::size_t l = 1; l < spec.n(); ++l) {
        p *= keep_prob(bit(l) == bit(l - 1), spec.rho(l));
      }
      return p;
    }
    case ModelKind::kLinear: {
      double p = 1.0;
      for (std::size_t l = 0; l < spec.n(); ++l) p *= keep_prob(noise_zero(l), spec.rho(l));
      return p;
    }
  }
  return 0.0;
}

// Draws one realization, calling set(i, value) for every source i.
template <class Set>
void draw(const ModelSpec& spec, SplitMix64& rng, const Set& set) {
  const auto rho = spec.rho();
  switch (spec.kind()) {
    case ModelKind::kParallel: {
      const bool b = rng.fair_bit();
      for (std::size_t l = 0; l < spec.n(); ++l) set(l, b != rng.bit_with_zero_prob(rho[l]));
      return;
    }
    case ModelKind::kSerial:
    case ModelKind::kMixed: {
      const bool b = rng.fair_bit();
      for (std::size_t j = 0; j < spec.m(); ++j) {
        bool prev = b;
        for (std::size_t l = 0; l < spec.n(); ++l) {
          prev = prev != rng.bit_with_zero_prob(rho[j * spec.n() + l]);
          set(j * spec.n() + l, prev);
        }
      }
      return;
    }
    case ModelKind::kLinear:
      break;
  }
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::kParallel:
      return "parallel";
    case ModelKind::kSerial:
      return "serial";
    case ModelKind::kMixed:
      return "mixed";
    case ModelKind::kLinear:
      return "linear";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "parallel") return ModelKind::kParallel;
  if (name == "serial") return ModelKind::kSerial;
  if (name == "mixed") return ModelKind::kMixed;
  if (name == "linear") return ModelKind::kLinear;
  throw InvalidSpec("unknown model kind '" + std::string(name) +
                    "' (expected parallel, serial, mixed or linear)");
}

// ---------------------------------------------------------------------------
// ModelSpec

ModelSpec::ModelSpec(ModelKind kind, std::size_t n, std::size_t m, std::vector<double> rho)
    : kind_(kind), n_(n), m_(m), rho_(std::move(rho)) {
  if (n_ == 0 || m_ == 0) throw InvalidSpec(std::string(to_string(kind)) + ": no sources");
  if (rho_.size() != n_ * m_) {
    throw InvalidSpec(std::string(to_string(kind)) + ": expected " + std::to_string(n_ * m_) +
                      " parameters, got " + std::to_string(rho_.size()));
  }
}

void ModelSpec::validate_bsc_range() const {
  for (std::size_t i = 0; i < rho_.size(); ++i) {
    const double r = rho_[i];
    if (!std::isfinite(r) || r < 0.5 || r > 1.0) {
      throw InvalidSpec(std::string(to_string(kind_)) + ": rho[" + std::to_string(i) + "] = " +
                        std::to_string(r) + " outside [0.5, 1]");
    }
  }
}

ModelSpec ModelSpec::parallel(std::vector<double> rho) {
  const std::size_t n = rho.size();
  ModelSpec spec(ModelKind::kParallel, n, 1, std::move(rho));
  spec.validate_bsc_range();
  return spec;
}

ModelSpec ModelSpec::serial(std::vector<double> rho) {
  const std::size_t n = rho.size();
  ModelSpec spec(ModelKind::kSerial, n, 1, std::move(rho));
  spec.validate_bsc_range();
  return spec;
}

ModelSpec ModelSpec::serial_constant(std::size_t n, double rho, double first_rho) {
  std::vector<double> r(n, rho);
  if (n > 0) r[0] = first_rho;
  return serial(std::move(r));
}

ModelSpec ModelSpec::mixed(const std::vector<std::vector<double>>& chains) {
  if (chains.empty()) throw InvalidSpec("mixed: no chains");
  const std::size_t n = chains.front().size();
  std::vector<double> flat;
  flat.reserve(n * chains.size());
  for (std::size_t j = 0; j < chains.size(); ++j) {
    if (chains[j].size() != n) {
      throw InvalidSpec("mixed: chain " + std::to_string(j + 1) + " has " +
                        std::to_string(chains[j].size()) + " sources, expected " +
                        std::to_string(n));
    }
    flat.insert(flat.end(), chains[j].begin(), chains[j].end());
  }
  ModelSpec spec(ModelKind::kMixed, n, chains.size(), std::move(flat));
  spec.validate_bsc_range();
  return spec;
}

ModelSpec ModelSpec::linear(BitMatrix a, std::vector<double> rho) {
  const std::size_t n = rho.size();
  ModelSpec spec(ModelKind::kLinear, n, 1, std::move(rho));
  for (std::size_t i = 0; i < spec.rho_.size(); ++i) {
    if (!in_unit_interval(spec.rho_[i])) {
      throw InvalidSpec("linear: rho[" + std::to_string(i) + "] = " +
                        std::to_string(spec.rho_[i]) + " outside [0, 1]");
    }
  }
  if (!a.is_square() || a.rows() != spec.n_) {
    throw InvalidSpec("linear: A must be " + std::to_string(spec.n_) + "x" +
                      std::to_string(spec.n_) + ", got " + std::to_string(a.rows()) + "x" +
                      std::to_string(a.cols()));
  }
  auto inv = invert(a);
  if (!inv) throw InvalidSpec("linear: A is singular over GF(2)");
  spec.a_ = std::move(a);
  spec.a_inv_ = std::move(inv);

  if (spec.n_ <= kMaskBits) {
    for (std::size_t r = 0; r < spec.n_; ++r) {
      spec.a_rows_.push_back(spec.a_->row_mask(r));
      spec.a_inv_rows_.push_back(spec.a_inv_->row_mask(r));
    }
  }

  spec.uniform_marginals_.reset();
  if (spec.n_ <= kMarginalCheckCap) {
    // X = A^{-1} Z, enumerated over all noise vectors.
    std::vector<double> p_one(spec.n_, 0.0);
    for (std::uint64_t z = 0; z < (std::uint64_t{1} << spec.n_); ++z) {
      double w = 1.0;
      for (std::size_t l = 0; l < spec.n_; ++l) w *= keep_prob(((z >> l) & 1U) == 0, spec.rho_[l]);
      for (std::size_t i = 0; i < spec.n_; ++i) {
        if (parity(spec.a_inv_rows_[i] & z)) p_one[i] += w;
      }
    }
    bool uniform = true;
    for (double p : p_one) uniform = uniform && std::abs(p - 0.5) <= Tolerances::structural;
    spec.uniform_marginals_ = uniform;
  }
  return spec;
}

bool ModelSpec::operator==(const ModelSpec& other) const {
  return kind_ == other.kind_ && n_ == other.n_ && m_ == other.m_ && rho_ == other.rho_ &&
         a_ == other.a_;
}

// ---------------------------------------------------------------------------
// Probabilities

double cascade_flip_prob(std::span<const double> rhos) {
  if (rhos.empty()) throw InvalidSpec("cascade_flip_prob: empty channel sequence");
  double prod = 1.0;
  for (double r : rhos) {
    if (!in_unit_interval(r)) {
      throw InvalidSpec("cascade_flip_prob: rho = " + std::to_string(r) + " outside [0, 1]");
    }
    prod *= 2.0 * r - 1.0;
  }
  return 0.5 * (1.0 + prod);
}

double pmf(const ModelSpec& spec, const SourceRealization& x) {
  if (x.size() != spec.total()) {
    throw DimensionMismatch("pmf: realization has " + std::to_string(x.size()) +
                            " bits, model has " + std::to_string(spec.total()) + " sources");
  }
  const auto bit = [&x](std::size_t i) { return x.get(i); };
  if (spec.kind() == ModelKind::kLinear) {
    const auto z = matvec(*spec.matrix(), x);
    return pmf_impl(spec, bit, [&z](std::size_t l) { return !z.get(l); });
  }
  return pmf_impl(spec, bit, [](std::size_t) { return true; });
}

double pmf_mask(const ModelSpec& spec, std::uint64_t x) {
  if (spec.total() > kMaskBits) throw CapExceeded("pmf_mask: more than 64 sources");
  const auto bit = [x](std::size_t i) { return ((x >> i) & 1U) != 0; };
  const auto rows = spec.matrix_row_masks();
  return pmf_impl(spec, bit, [rows, x](std::size_t l) { return !parity(rows[l] & x); });
}

double conditional_pmf(const ModelSpec& spec, const SourceRealization& x, bool b) {
  if (spec.kind() == ModelKind::kLinear) {
    throw Unsupported("conditional_pmf: the linear model has no hidden common bit");
  }
  if (x.size() != spec.total()) {
    throw DimensionMismatch("conditional_pmf: realization has " + std::to_string(x.size()) +
                            " bits, model has " + std::to_string(spec.total()) + " sources");
  }
  return given_b(spec, [&x](std::size_t i) { return x.get(i); }, b);
}

std::vector<double> pmf_table(const ModelSpec& spec, std::size_t cap) {
  if (spec.total() > cap || spec.total() >= kMaskBits) {
    throw CapExceeded("enumeration of " + std::to_string(spec.total()) +
                      " sources exceeds the cap of " + std::to_string(cap) + " bits");
  }
  const std::uint64_t outcomes = std::uint64_t{1} << spec.total();
  std::vector<double> table(outcomes);
  for (std::uint64_t x = 0; x < outcomes; ++x) table[x] = pmf_mask(spec, x);
  return table;
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<SourceRealization> sample(const ModelSpec& spec, std::uint64_t seed,
                                      std::size_t count) {
  std::vector<SourceRealization> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    auto rng = substream(seed, k);
    if (spec.kind() == ModelKind::kLinear) {
      BitVector z(spec.n());
      for (std::size_t l = 0; l < spec.n(); ++l) z.set(l, rng.bit_with_zero_prob(spec.rho(l)));
      out.push_back(matvec(*spec.inverse(), z));
    } else {
      BitVector x(spec.total());
      draw(spec, rng, [&x](std::size_t i, bool v) { x.set(i, v); });
      out.push_back(std::move(x));
    }
  }
  return out;
}

std::vector<std::uint64_t> sample_masks(const ModelSpec& spec, std::uint64_t seed,
                                        std::uint64_t first_index, std::size_t count) {
  if (spec.total() > kMaskBits) throw CapExceeded("sample_masks: more than 64 sources");
  std::vector<std::uint64_t> out(count);
  const auto inv_rows = spec.inverse_row_masks();
  for (std::size_t k = 0; k < count; ++k) {
    auto rng = substream(seed, first_index + k);
    std::uint64_t x = 0;
    if (spec.kind() == ModelKind::kLinear) {
      std::uint64_t z = 0;
      for (std::size_t l = 0; l < spec.n(); ++l) {
        if (rng.bit_with_zero_prob(spec.rho(l))) z |= std::uint64_t{1} << l;
      }
      for (std::size_t i = 0; i < spec.n(); ++i) {
        if (parity(inv_rows[i] & z)) x |= std::uint64_t{1} << i;
      }
    } else {
      draw(spec, rng, [&x](std::size_t i, bool v) {
        if (v) x |= std::uint64_t{1} << i;
      });
    }
    out[k] = x;
  }
  return out;
}

}  // namespace bincorr
