#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "bincorr/entropy.hpp"
#include "bincorr/model.hpp"
#include "bincorr/tolerances.hpp"

namespace bincorr {

/// Set of source indices; bit i stands for source i (0-based, flattened
/// chain-major for mixed models).
using SourceSet = std::uint64_t;

std::vector<std::size_t> source_indices(SourceSet s);

/// sum_{l in S} lambda_l >= bound, with bound = r H(X(S) | X(S^c)).
struct RegionConstraint {
  SourceSet subset = 0;
  double bound = 0.0;
};

struct CharacteristicPoints {
  double lambda_bal = 0.0;
  double lambda_unb = 0.0;
  double lambda_lim = 0.0;
  double rate_r = 0.0;
};

/// H(X(S) | X(S^c)) = H(X) - H(X(S^c)) from the marginalized joint PMF.
/// Throws InvalidSpec for an empty or out-of-range set and CapExceeded above
/// the enumeration cap.
double subset_conditional_entropy(const ModelSpec& spec, SourceSet s,
                                  std::size_t cap = kDefaultEnumerationCap);

/// One constraint per non-empty subset, 2^N - 1 in total, sorted by subset
/// mask. Throws InvalidSpec when r <= 0 and CapExceeded when the source count
/// exceeds `cap`.
std::vector<RegionConstraint> region_constraints(const ModelSpec& spec, double r,
                                                 std::size_t cap = kDefaultRegionCap);

struct Membership {
  bool inside = true;
  std::vector<SourceSet> violated;  // ascending
};

/// Non-strict test of every constraint with Tolerances::region_slack.
Membership membership(std::span<const RegionConstraint> constraints,
                      std::span<const double> lambdas);
Membership membership(const ModelSpec& spec, double r, std::span<const double> lambdas,
                      std::size_t cap = kDefaultRegionCap);

/// lambda_bal = r H(X) / total, lambda_unb = r H(X_k | all others) with k the
/// last source unless `unbalanced_index` says otherwise, lambda_lim =
/// r asymptotic_rate(spec).
CharacteristicPoints characteristic_points(const ModelSpec& spec, double r,
                                           std::optional<std::size_t> unbalanced_index = {},
                                           std::size_t cap = kDefaultEnumerationCap);

struct ConvergenceRow {
  std::size_t n = 0;
  CharacteristicPoints points;
  double gap_bal = 0.0;  // |lambda_bal - lambda_lim|
  double gap_unb = 0.0;  // |lambda_unb - lambda_lim|
};

/// Characteristic points of tmpl.instantiate(N, tmpl.m) for each N, with
/// lambda_lim = r tmpl.limit_rate().
std::vector<ConvergenceRow> convergence_to_limit(const SweepTemplate& tmpl, double r,
                                                 std::span<const std::size_t> n_values,
                                                 std::size_t cap = kDefaultEnumerationCap);

/// {"r", "constraints": [{"subset": [1-based indices], "bound"}], "lambda_bal",
///  "lambda_unb", "lambda_lim"}
nlohmann::json region_to_json(double r, std::span<const RegionConstraint> constraints,
                              const CharacteristicPoints& points);
/// Columns: N,lambda_bal,lambda_unb,lambda_lim,gap_bal,gap_unb.
void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows);

}  // namespace bincorr
