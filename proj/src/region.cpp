#include "bincorr/region.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>

#include "bincorr/csv.hpp"
#include "bincorr/error.hpp"

namespace bincorr {
namespace {

SourceSet full_set(std::size_t total) {
  return total >= 64 ? ~SourceSet{0} : (SourceSet{1} << total) - 1;
}

// Marginal PMF of the sources in `keep`; entry index packs the kept bits in
// ascending source order.
std::vector<double> marginalize(std::span<const double> table, SourceSet keep) {
  const auto positions = source_indices(keep);
  std::vector<double> out(std::size_t{1} << positions.size(), 0.0);
  for (std::uint64_t x = 0; x < table.size(); ++x) {
    std::uint64_t idx = 0;
    for (std::size_t b = 0; b < positions.size(); ++b) idx |= ((x >> positions[b]) & 1U) << b;
    out[idx] += table[x];
  }
  return out;
}

// Sums out packed bit `bit` of a table over `width` bits.
std::vector<double> drop_bit(std::span<const double> table, std::size_t bit) {
  std::vector<double> out(table.size() / 2);
  const std::uint64_t low = (std::uint64_t{1} << bit) - 1;
  for (std::uint64_t x = 0; x < table.size(); ++x) {
    out[(x & low) | ((x >> (bit + 1)) << bit)] += table[x];
  }
  return out;
}

void require_rate(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw InvalidSpec("region: code rate r must be positive, got " + std::to_string(r));
  }
}

}  // namespace

std::vector<std::size_t> source_indices(SourceSet s) {
  std::vector<std::size_t> out;
  while (s != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(s)));
    s &= s - 1;
  }
  return out;
}

double subset_conditional_entropy(const ModelSpec& spec, SourceSet s, std::size_t cap) {
  if (s == 0) throw InvalidSpec("subset_conditional_entropy: empty subset");
  const SourceSet all = full_set(spec.total());
  if ((s & ~all) != 0) {
    throw InvalidSpec("subset_conditional_entropy: subset refers to sources beyond " +
                      std::to_string(spec.total()));
  }
  const auto table = pmf_table(spec, cap);
  const double joint = entropy_of_table(table);
  const SourceSet rest = all & ~s;
  const double rest_h = rest == 0 ? 0.0 : entropy_of_table(marginalize(table, rest));
  return std::max(0.0, joint - rest_h);
}

std::vector<RegionConstraint> region_constraints(const ModelSpec& spec, double r,
                                                 std::size_t cap) {
  require_rate(r);
  const std::size_t total = spec.total();
  if (total > cap) {
    throw CapExceeded("region_constraints: " + std::to_string(total) +
                      " sources exceed the region cap of " + std::to_string(cap));
  }
  const SourceSet all = full_set(total);

  // marginal_h[T] = H(X(T)). Depth-first over removal sequences in increasing
  // source order, so each subset is reached exactly once and only one table
  // per depth is alive.
  std::vector<double> marginal_h(std::size_t{1} << total, 0.0);
  std::function<void(const std::vector<double>&, SourceSet, std::size_t)> visit =
      [&](const std::vector<double>& table, SourceSet kept, std::size_t next) {
        marginal_h[kept] = entropy_of_table(table);
        for (std::size_t src = next; src < total; ++src) {
          const SourceSet below = kept & ((SourceSet{1} << src) - 1);
          visit(drop_bit(table, static_cast<std::size_t>(std::popcount(below))),
                kept & ~(SourceSet{1} << src), src + 1);
        }
      };
  visit(pmf_table(spec, cap), all, 0);
  marginal_h[0] = 0.0;

  std::vector<RegionConstraint> out;
  out.reserve(all);
  const double joint = marginal_h[all];
  for (SourceSet s = 1; s <= all; ++s) {
    out.push_back({s, r * std::max(0.0, joint - marginal_h[all & ~s])});
  }
  return out;
}

Membership membership(std::span<const RegionConstraint> constraints,
                      std::span<const double> lambdas) {
  for (double l : lambdas) {
    if (!(l >= 0.0)) throw InvalidSpec("membership: capacities must be non-negative");
  }
  Membership m;
  for (const auto& c : constraints) {
    const auto idx = source_indices(c.subset);
    if (!idx.empty() && idx.back() >= lambdas.size()) {
      throw DimensionMismatch("membership: " + std::to_string(lambdas.size()) +
                              " capacities for a constraint on source " +
                              std::to_string(idx.back() + 1));
    }
    double sum = 0.0;
    for (auto i : idx) sum += lambdas[i];
    if (sum < c.bound - Tolerances::region_slack) m.violated.push_back(c.subset);
  }
  std::sort(m.violated.begin(), m.violated.end());
  m.inside = m.violated.empty();
  return m;
}

Membership membership(const ModelSpec& spec, double r, std::span<const double> lambdas,
                      std::size_t cap) {
  if (lambdas.size() != spec.total()) {
    throw DimensionMismatch("membership: " + std::to_string(lambdas.size()) +
                            " capacities for " + std::to_string(spec.total()) + " sources");
  }
  const auto constraints = region_constraints(spec, r, cap);
  return membership(constraints, lambdas);
}

CharacteristicPoints characteristic_points(const ModelSpec& spec, double r,
                                           std::optional<std::size_t> unbalanced_index,
                                           std::size_t cap) {
  require_rate(r);
  const std::size_t total = spec.total();
  const std::size_t k = unbalanced_index.value_or(total - 1);
  if (k >= total) {
    throw InvalidSpec("characteristic_points: unbalanced index " + std::to_string(k + 1) +
                      " beyond " + std::to_string(total) + " sources");
  }
  const auto table = pmf_table(spec, cap);
  const double joint = entropy_of_table(table);
  const SourceSet others = full_set(total) & ~(SourceSet{1} << k);
  const double others_h = others == 0 ? 0.0 : entropy_of_table(marginalize(table, others));

  CharacteristicPoints p;
  p.rate_r = r;
  p.lambda_bal = r * joint / static_cast<double>(total);
  p.lambda_unb = r * std::max(0.0, joint - others_h);
  p.lambda_lim = r * asymptotic_rate(spec);
  return p;
}

std::vector<ConvergenceRow> convergence_to_limit(const SweepTemplate& tmpl, double r,
                                                 std::span<const std::size_t> n_values,
                                                 std::size_t cap) {
  require_rate(r);
  const double lim = r * tmpl.limit_rate();
  std::vector<ConvergenceRow> rows;
  for (std::size_t n : n_values) {
    const std::size_t m = tmpl.kind == ModelKind::kMixed ? tmpl.m : 1;
    ConvergenceRow row;
    row.n = n;
    row.points = characteristic_points(tmpl.instantiate(n, m), r, std::nullopt, cap);
    row.points.lambda_lim = lim;
    row.gap_bal = std::abs(row.points.lambda_bal - lim);
    row.gap_unb = std::abs(row.points.lambda_unb - lim);
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json region_to_json(double r, std::span<const RegionConstraint> constraints,
                              const CharacteristicPoints& points) {
  nlohmann::json doc;
  doc["r"] = r;
  auto list = nlohmann::json::array();
  for (const auto& c : constraints) {
    auto idx = source_indices(c.subset);
    for (auto& i : idx) ++i;
    list.push_back({{"subset", idx}, {"bound", c.bound}});
  }
  doc["constraints"] = std::move(list);
  doc["lambda_bal"] = points.lambda_bal;
  doc["lambda_unb"] = points.lambda_unb;
  doc["lambda_lim"] = points.lambda_lim;
  return doc;
}

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows) {
  write_csv_row(out, {"N", "lambda_bal", "lambda_unb", "lambda_lim", "gap_bal", "gap_unb"});
  for (const auto& row : rows) {
    write_csv_row(out, {std::to_string(row.n), format_number(row.points.lambda_bal),
                        format_number(row.points.lambda_unb),
                        format_number(row.points.lambda_lim), format_number(row.gap_bal),
                        format_number(row.gap_unb)});
  }
}

}  // namespace bincorr
