#include "bincorr/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "bincorr/csv.hpp"
#include "bincorr/error.hpp"

namespace bincorr {
namespace {

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

double pairwise_entropy(std::span<const double> p) {
  constexpr std::size_t kLeaf = 128;
  if (p.size() <= kLeaf) {
    double s = 0.0;
    for (double v : p) s += plogp(v);
    return s;
  }
  const std::size_t half = p.size() / 2;
  return pairwise_entropy(p.first(half)) + pairwise_entropy(p.subspan(half));
}

double sum_hb(std::span<const double> rho) {
  double s = 0.0;
  for (double r : rho) s += binary_entropy(r);
  return s;
}

// Parameters that shape the joint distribution (see asymptotic_rate).
std::span<const double> effective_edges(const ModelSpec& spec) {
  if (spec.kind() == ModelKind::kSerial) return spec.rho().subspan(1);
  return spec.rho();
}

}  // namespace

double binary_entropy(double p) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    throw InvalidSpec("binary_entropy: p = " + std::to_string(p) + " outside [0, 1]");
  }
  if (p == 0.0 || p == 1.0) return 0.0;
  return plogp(p) + plogp(1.0 - p);
}

double entropy_of_table(std::span<const double> probabilities) {
  return pairwise_entropy(probabilities);
}

double joint_entropy_exact(const ModelSpec& spec, std::size_t cap) {
  if (spec.total() > cap) {
    throw CapExceeded("joint_entropy_exact: " + std::to_string(spec.total()) +
                      " sources exceed the enumeration cap of " + std::to_string(cap) +
                      " bits; use joint_entropy_closed (serial, linear) or the entropy "
                      "bounds (parallel, mixed)");
  }
  const auto table = pmf_table(spec, cap);
  return entropy_of_table(table);
}

std::optional<double> joint_entropy_closed(const ModelSpec& spec) {
  switch (spec.kind()) {
    case ModelKind::kSerial:
      return 1.0 + sum_hb(spec.rho().subspan(1));
    case ModelKind::kLinear:
      return sum_hb(spec.rho());
    case ModelKind::kParallel:
    case ModelKind::kMixed:
      break;
  }
  return std::nullopt;
}

EntropyBounds entropy_bounds_parallel(const ModelSpec& spec) {
  if (spec.kind() != ModelKind::kParallel) {
    throw InvalidSpec("entropy_bounds_parallel: model is " + std::string(to_string(spec.kind())));
  }
  const double upper = 1.0 + sum_hb(spec.rho());
  return {1.0 + sum_hb(spec.rho().subspan(1)), upper};
}

EntropyBounds entropy_bounds_mixed(const ModelSpec& spec) {
  if (spec.kind() != ModelKind::kMixed) {
    throw InvalidSpec("entropy_bounds_mixed: model is " + std::string(to_string(spec.kind())));
  }
  const double upper = 1.0 + sum_hb(spec.rho());
  return {upper - binary_entropy(spec.rho(0, 0)), upper};
}

double asymptotic_rate(const ModelSpec& spec) {
  const auto edges = effective_edges(spec);
  if (edges.empty()) return 1.0;
  if (std::all_of(edges.begin(), edges.end(), [&](double r) { return r == edges.front(); })) {
    return binary_entropy(edges.front());
  }
  return sum_hb(edges) / static_cast<double>(edges.size());
}

EntropyReport entropy_report(const ModelSpec& spec, std::size_t cap) {
  EntropyReport r;
  if (spec.total() <= cap) r.exact = joint_entropy_exact(spec, cap);
  r.closed_form = joint_entropy_closed(spec);
  switch (spec.kind()) {
    case ModelKind::kParallel: {
      const auto b = entropy_bounds_parallel(spec);
      r.lower_bound = b.lower;
      r.upper_bound = b.upper;
      break;
    }
    case ModelKind::kMixed: {
      const auto b = entropy_bounds_mixed(spec);
      r.lower_bound = b.lower;
      r.upper_bound = b.upper;
      break;
    }
    case ModelKind::kSerial:
    case ModelKind::kLinear:
      r.lower_bound = r.upper_bound = *r.closed_form;
      break;
  }
  r.asymptotic_rate = asymptotic_rate(spec);
  if (const auto h = r.exact ? r.exact : r.closed_form) {
    r.rate = *h / static_cast<double>(spec.total());
    r.epsilon = *r.rate - r.asymptotic_rate;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Sweeps

SweepTemplate SweepTemplate::constant(ModelKind kind, double rho, std::size_t m) {
  SweepTemplate t;
  t.kind = kind;
  t.schedule = {rho};
  t.m = m;
  if (kind == ModelKind::kSerial) t.first_rho = 1.0;
  return t;
}

SweepTemplate SweepTemplate::from_spec(const ModelSpec& spec) {
  SweepTemplate t;
  t.kind = spec.kind();
  t.n = spec.n();
  t.m = spec.m();
  const auto rho = spec.rho();
  std::span<const double> rest = rho;
  if (spec.kind() == ModelKind::kSerial || spec.kind() == ModelKind::kLinear) {
    t.first_rho = rho[0];
    rest = rho.subspan(1);
  }
  const double common = rest.empty() ? rho[0] : rest.front();
  if (!std::all_of(rest.begin(), rest.end(), [&](double r) { return r == common; })) {
    throw InvalidSpec("sweep template: model parameters must be constant across edges");
  }
  t.schedule = {common};
  if (t.first_rho && *t.first_rho == common && spec.kind() == ModelKind::kLinear) {
    t.first_rho.reset();
  }
  if (spec.kind() == ModelKind::kLinear) {
    const auto& a = *spec.matrix();
    const std::size_t n = a.rows();
    std::size_t depth = 0;
    for (std::size_t lag = 1; lag < n; ++lag) {
      if (a.get(lag, 0)) depth = lag;
    }
    std::vector<bool> taps(depth);
    for (std::size_t lag = 1; lag <= depth; ++lag) taps[lag - 1] = a.get(lag, 0);
    if (depth == 0 || build_recursive_toeplitz(n, taps) != a) {
      throw InvalidSpec(
          "sweep template: linear model needs a lower-triangular Toeplitz recursion matrix "
          "with at least one tap");
    }
    t.linear_taps = std::move(taps);
  }
  return t;
}

ModelSpec SweepTemplate::instantiate(std::size_t n_sources, std::size_t chains) const {
  if (schedule.empty()) throw InvalidSpec("sweep template: empty schedule");
  std::vector<double> chain(n_sources);
  for (std::size_t l = 0; l < n_sources; ++l) chain[l] = schedule[l % schedule.size()];
  if (first_rho && n_sources > 0) chain[0] = *first_rho;
  switch (kind) {
    case ModelKind::kParallel:
      return ModelSpec::parallel(std::move(chain));
    case ModelKind::kSerial:
      return ModelSpec::serial(std::move(chain));
    case ModelKind::kMixed:
      return ModelSpec::mixed(std::vector<std::vector<double>>(chains, chain));
    case ModelKind::kLinear: {
      const std::size_t depth = std::min(linear_taps.size(), n_sources > 0 ? n_sources - 1 : 0);
      std::vector<bool> taps(linear_taps.begin(),
                             linear_taps.begin() + static_cast<std::ptrdiff_t>(depth));
      BitMatrix a = depth == 0 ? BitMatrix::identity(n_sources)
                               : build_recursive_toeplitz(n_sources, taps);
      return ModelSpec::linear(std::move(a), std::move(chain));
    }
  }
  throw InvalidSpec("sweep template: unknown kind");
}

double SweepTemplate::limit_rate() const {
  if (schedule.empty()) throw InvalidSpec("sweep template: empty schedule");
  if (std::all_of(schedule.begin(), schedule.end(),
                  [&](double r) { return r == schedule.front(); })) {
    return binary_entropy(schedule.front());
  }
  return sum_hb(schedule) / static_cast<double>(schedule.size());
}

std::vector<EpsilonRow> epsilon_sweep(const SweepTemplate& tmpl, SweepAxis axis,
                                      std::span<const std::size_t> values, std::size_t cap) {
  const double limit = tmpl.limit_rate();
  std::vector<EpsilonRow> rows;
  rows.reserve(values.size());
  for (std::size_t v : values) {
    const std::size_t n = axis == SweepAxis::kSources ? v : tmpl.n;
    const std::size_t m = tmpl.kind == ModelKind::kMixed
                              ? (axis == SweepAxis::kChains ? v : tmpl.m)
                              : 1;
    const ModelSpec spec = tmpl.instantiate(n, m);
    const double total = static_cast<double>(spec.total());

    EpsilonRow row;
    row.kind = tmpl.kind;
    row.rho = tmpl.schedule.front();
    row.n = n;
    row.m = m;
    // Entropy in excess of the limit, accumulated edge by edge so that a
    // constant schedule cancels exactly.
    const auto rho = spec.rho();
    double excess = 0.0;
    for (std::size_t e = 0; e < rho.size(); ++e) {
      if (spec.kind() == ModelKind::kSerial && e == 0) continue;
      excess += binary_entropy(rho[e]) - limit;
    }
    if (spec.kind() == ModelKind::kSerial) {
      row.epsilon = (1.0 - limit + excess) / total;
      row.epsilon_lb = row.epsilon_ub = *row.epsilon;
    } else if (spec.kind() == ModelKind::kLinear) {
      row.epsilon = excess / total;
      row.epsilon_lb = row.epsilon_ub = *row.epsilon;
    } else {
      row.epsilon_ub = (1.0 + excess) / total;
      row.epsilon_lb = (1.0 + excess - binary_entropy(rho[0])) / total;
      if (spec.total() <= cap) row.epsilon = joint_entropy_exact(spec, cap) / total - limit;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_epsilon_csv(std::ostream& out, std::span<const EpsilonRow> rows, bool header) {
  if (header) write_csv_row(out, {"model", "rho", "N", "M", "epsilon", "epsilon_lb", "epsilon_ub"});
  for (const auto& r : rows) {
    write_csv_row(out, {to_string(r.kind), format_number(r.rho), std::to_string(r.n),
                        std::to_string(r.m), format_number(r.epsilon), format_number(r.epsilon_lb),
                        format_number(r.epsilon_ub)});
  }
}

}  // namespace bincorr
