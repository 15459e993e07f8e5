#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bincorr/model.hpp"
#include "bincorr/tolerances.hpp"

namespace bincorr {

/// Entropy in bits of a Bernoulli(p) variable; exactly 0 at p = 0 and p = 1.
/// Throws InvalidSpec when p is outside [0, 1].
double binary_entropy(double p);

/// -sum p log2 p over a probability table, skipping zero-mass entries.
/// Terms are combined by pairwise summation in a fixed order.
double entropy_of_table(std::span<const double> probabilities);

/// Joint entropy H(X) by enumerating every outcome. Throws CapExceeded when
/// spec.total() > cap.
double joint_entropy_exact(const ModelSpec& spec, std::size_t cap = kDefaultEnumerationCap);

/// Closed form for the serial (1 + sum_{l>=2} H_b(rho_l)) and linear
/// (sum_l H_b(rho_l)) models; std::nullopt for parallel and mixed.
std::optional<double> joint_entropy_closed(const ModelSpec& spec);

struct EntropyBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// lower = 1 + sum_{l>=2} H_b(rho_l), upper = 1 + sum_l H_b(rho_l).
/// Throws InvalidSpec for a non-parallel model.
EntropyBounds entropy_bounds_parallel(const ModelSpec& spec);
/// upper = 1 + sum_{j,l} H_b(rho_lj), lower = upper - H_b(rho_11).
/// Throws InvalidSpec for a non-mixed model.
EntropyBounds entropy_bounds_mixed(const ModelSpec& spec);

/// Finite-horizon average of H_b over the edges that shape the joint
/// distribution: every edge for parallel, mixed and linear models, edges
/// 2..N for the serial model (its first channel is inert). When those
/// parameters are all equal the result is H_b(rho) exactly. A one-source
/// serial model has rate 1.
double asymptotic_rate(const ModelSpec& spec);

struct EntropyReport {
  std::optional<double> exact;
  std::optional<double> closed_form;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  // Per-source rate from the best available joint entropy (exact, closed
  // form, else std::nullopt).
  std::optional<double> rate;
  double asymptotic_rate = 0.0;
  std::optional<double> epsilon;
};

EntropyReport entropy_report(const ModelSpec& spec, std::size_t cap = kDefaultEnumerationCap);

/// A family of models indexed by size, used for convergence sweeps. Edge l
/// (0-based) of every chain uses schedule[l % schedule.size()]; `first_rho`,
/// when set, overrides the first edge of every chain. Linear members use the
/// recursion matrix with the given lag coefficients (default: the
/// serial-equivalent matrix).
struct SweepTemplate {
  ModelKind kind = ModelKind::kSerial;
  std::vector<double> schedule{0.7};
  std::optional<double> first_rho;
  std::size_t n = 1;
  std::size_t m = 1;
  std::vector<bool> linear_taps{true};

  /// Serial templates keep the inert first edge at 1 unless told otherwise.
  static SweepTemplate constant(ModelKind kind, double rho, std::size_t m = 1);
  /// Derives a template from a model whose edges are constant (the serial
  /// first edge and the linear first noise bit may differ). Linear models
  /// must use a Toeplitz recursion matrix. Throws InvalidSpec otherwise.
  static SweepTemplate from_spec(const ModelSpec& spec);

  ModelSpec instantiate(std::size_t n, std::size_t m) const;
  /// Limit of the per-source entropy as the source count grows: the mean
  /// of H_b over one period of the schedule.
  double limit_rate() const;
};

enum class SweepAxis { kSources, kChains };

struct EpsilonRow {
  ModelKind kind = ModelKind::kSerial;
  double rho = 0.0;  // first schedule entry
  std::size_t n = 0;
  std::size_t m = 0;
  std::optional<double> epsilon;  // from exact or closed-form entropy
  double epsilon_lb = 0.0;
  double epsilon_ub = 0.0;
};

/// epsilon = H(X)/(N M) - limit_rate() for each size. `values` sets N
/// (kSources, with M = tmpl.m) or M (kChains, with N = tmpl.n). Parallel and
/// mixed rows carry the bound-derived envelope and an exact epsilon only
/// within the enumeration cap; serial and linear rows use the closed form
/// for all three columns.
std::vector<EpsilonRow> epsilon_sweep(const SweepTemplate& tmpl, SweepAxis axis,
                                      std::span<const std::size_t> values,
                                      std::size_t cap = kDefaultEnumerationCap);

/// Columns: model,rho,N,M,epsilon,epsilon_lb,epsilon_ub.
void write_epsilon_csv(std::ostream& out, std::span<const EpsilonRow> rows,
                       bool header = true);

}  // namespace bincorr
