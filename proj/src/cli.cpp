#include "bincorr/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bincorr/csv.hpp"
#include "bincorr/entropy.hpp"
#include "bincorr/error.hpp"
#include "bincorr/gf2.hpp"
#include "bincorr/model.hpp"
#include "bincorr/model_json.hpp"
#include "bincorr/moments.hpp"
#include "bincorr/region.hpp"

namespace bincorr::cli {
namespace {

using nlohmann::json;

bool wants_json(const RunConfig& c, bool json_default = false) {
  if (c.format.empty()) return json_default;
  if (c.format == "json") return true;
  if (c.format == "csv") return false;
  throw InvalidSpec("unknown output format '" + c.format + "' (expected csv or json)");
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

json matrix_json(const CovarianceMatrix& c) {
  json rows = json::array();
  for (std::size_t i = 0; i < c.dim(); ++i) rows.push_back(c.row(i));
  return {{"dim", c.dim()},
          {"entries", rows},
          {"structure",
           {{"symmetric", c.structure().symmetric},
            {"toeplitz", c.structure().toeplitz},
            {"block_toeplitz", c.structure().block_toeplitz}}}};
}

json optional_json(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

// --- commands --------------------------------------------------------------

void cmd_pmf(const RunConfig& c, std::ostream& out) {
  const auto spec = read_model_file(c.model_file);
  std::vector<std::pair<std::string, double>> rows;
  if (!c.x.empty()) {
    BitVector x(1);
    try {
      x = BitVector::from_string(c.x);
    } catch (const std::invalid_argument& e) {
      throw InvalidSpec(std::string("--x: ") + e.what());
    }
    rows.emplace_back(x.to_string(), pmf(spec, x));
  } else {
    const auto table = pmf_table(spec, c.cap);
    for (std::uint64_t x = 0; x < table.size(); ++x) {
      rows.emplace_back(BitVector::from_mask(x, spec.total()).to_string(), table[x]);
    }
  }
  if (wants_json(c)) {
    json list = json::array();
    for (const auto& [x, p] : rows) list.push_back({{"x", x}, {"pmf", p}});
    out << list.dump(2) << '\n';
  } else {
    write_csv_row(out, {"x", "pmf"});
    for (const auto& [x, p] : rows) write_csv_row(out, {x, format_number(p)});
  }
}

void cmd_sample(const RunConfig& c, std::ostream& out) {
  const auto spec = read_model_file(c.model_file);
  if (c.samples == 0) throw InvalidSpec("--samples must be >= 1");
  const auto draws = sample(spec, c.seed, c.samples);
  if (wants_json(c)) {
    json list = json::array();
    for (const auto& x : draws) list.push_back(x.to_string());
    out << list.dump(2) << '\n';
  } else {
    write_csv_row(out, {"x"});
    for (const auto& x : draws) out << x.to_string() << '\n';
  }
}

void cmd_cov(const RunConfig& c, std::ostream& out) {
  const auto spec = read_model_file(c.model_file);
  const auto cov = c.empirical ? covariance_empirical(spec, c.samples, c.seed)
                               : covariance_exact(spec, c.cap);
  if (wants_json(c)) {
    out << matrix_json(cov).dump(2) << '\n';
  } else {
    write_matrix_csv(out, cov);
  }
}

void cmd_cov_hist(const RunConfig& c, std::ostream& out) {
  const auto spec = read_model_file(c.model_file);
  const auto cov = c.empirical ? covariance_empirical(spec, c.samples, c.seed)
                               : covariance_exact(spec, c.cap);
  const auto h = covariance_histogram(cov, c.bins);
  if (wants_json(c)) {
    json bins = json::array();
    for (const auto& b : h.bins) {
      bins.push_back({{"lower", b.lower}, {"upper", b.upper}, {"value", b.value}, {"count", b.count}});
    }
    out << json{{"distinct_values", h.distinct_values}, {"bins", bins}}.dump(2) << '\n';
  } else {
    write_histogram_csv(out, h);
  }
}

void cmd_entropy(const RunConfig& c, std::ostream& out) {
  const auto spec = read_model_file(c.model_file);
  const auto r = entropy_report(spec, c.cap);
  if (wants_json(c)) {
    out << json{{"exact", optional_json(r.exact)},
                {"closed_form", optional_json(r.closed_form)},
                {"lower_bound", r.lower_bound},
                {"upper_bound", r.upper_bound},
                {"rate", optional_json(r.rate)},
                {"asymptotic_rate", r.asymptotic_rate},
                {"epsilon", optional_json(r.epsilon)}}
                .dump(2)
        << '\n';
  } else {
    write_csv_row(out, {"exact", "closed_form", "lower_bound", "upper_bound", "rate",
                        "asymptotic_rate", "epsilon"});
    write_csv_row(out, {format_number(r.exact), format_number(r.closed_form),
                        format_number(r.lower_bound), format_number(r.upper_bound),
                        format_number(r.rate), format_number(r.asymptotic_rate),
                        format_number(r.epsilon)});
  }
}

void cmd_epsilon_sweep(const RunConfig& c, std::ostream& out) {
  const auto spec = read_model_file(c.model_file);
  const auto tmpl = SweepTemplate::from_spec(spec);
  if (c.n_values.empty() == c.m_values.empty()) {
    throw InvalidSpec("epsilon-sweep: give exactly one of --n or --m");
  }
  if (!c.m_values.empty() && spec.kind() != ModelKind::kMixed) {
    throw InvalidSpec("epsilon-sweep: --m applies to the mixed model only");
  }
  const auto axis = c.n_values.empty() ? SweepAxis::kChains : SweepAxis::kSources;
  const auto values = parse_count_list(c.n_values.empty() ? c.m_values : c.n_values);
  const auto rows = epsilon_sweep(tmpl, axis, values, c.cap);
  if (wants_json(c)) {
    json list = json::array();
    for (const auto& r : rows) {
      list.push_back({{"model", std::string(to_string(r.kind))},
                      {"rho", r.rho},
                      {"N", r.n},
                      {"M", r.m},
                      {"epsilon", optional_json(r.epsilon)},
                      {"epsilon_lb", r.epsilon_lb},
                      {"epsilon_ub", r.epsilon_ub}});
    }
    out << list.dump(2) << '\n';
  } else {
    write_epsilon_csv(out, rows);
  }
}

void cmd_region(const RunConfig& c, std::ostream& out) {
  const auto spec = read_model_file(c.model_file);
  if (!c.n_values.empty()) {
    const auto rows = convergence_to_limit(SweepTemplate::from_spec(spec), c.rate,
                                           parse_count_list(c.n_values), c.cap);
    if (wants_json(c)) {
      json list = json::array();
      for (const auto& r : rows) {
        list.push_back({{"N", r.n},
                        {"lambda_bal", r.points.lambda_bal},
                        {"lambda_unb", r.points.lambda_unb},
                        {"lambda_lim", r.points.lambda_lim},
                        {"gap_bal", r.gap_bal},
                        {"gap_unb", r.gap_unb}});
      }
      out << list.dump(2) << '\n';
    } else {
      write_convergence_csv(out, rows);
    }
    return;
  }

  std::optional<std::size_t> unb;
  if (c.unbalanced) {
    if (*c.unbalanced == 0) throw InvalidSpec("--unbalanced is 1-based");
    unb = *c.unbalanced - 1;
  }
  const auto constraints = region_constraints(spec, c.rate, std::min(c.cap, kDefaultRegionCap));
  const auto points = characteristic_points(spec, c.rate, unb, c.cap);
  if (wants_json(c, true)) {
    json doc = region_to_json(c.rate, constraints, points);
    if (!c.lambdas.empty()) {
      if (c.lambdas.size() != spec.total()) {
        throw InvalidSpec("--lambdas needs one capacity per source (" +
                          std::to_string(spec.total()) + ")");
      }
      const auto m = membership(constraints, c.lambdas);
      json violated = json::array();
      for (auto s : m.violated) {
        auto idx = source_indices(s);
        for (auto& i : idx) ++i;
        violated.push_back(idx);
      }
      doc["membership"] = {{"inside", m.inside}, {"violated", violated}};
    }
    out << doc.dump(2) << '\n';
  } else {
    write_csv_row(out, {"subset", "bound"});
    for (const auto& con : constraints) {
      std::string subset;
      for (auto i : source_indices(con.subset)) {
        if (!subset.empty()) subset += ' ';
        subset += std::to_string(i + 1);
      }
      write_csv_row(out, {subset, format_number(con.bound)});
    }
  }
}

std::string circulant_message(std::size_t n, std::size_t d) {
  const bool det = determinant(build_circulant(n, d));
  switch (circulant_rule(n, d)) {
    case CirculantVerdict::kSingularDividesN:
      return "singular: d divides N";
    case CirculantVerdict::kSingularEven:
      return "singular: d = 2";
    case CirculantVerdict::kInvertible:
      return "invertible: odd prime d does not divide N";
    case CirculantVerdict::kNotCovered:
      break;
  }
  return det ? "invertible: by elimination (d not prime)" : "singular: by elimination (d not prime)";
}

void cmd_gf2_check(const RunConfig& c, std::ostream& out) {
  const int modes = static_cast<int>(!c.circulant.empty()) + static_cast<int>(!c.recursive.empty()) +
                    static_cast<int>(!c.toeplitz.empty()) + static_cast<int>(!c.matrix.empty());
  if (modes != 1) {
    throw InvalidSpec("gf2-check: give exactly one of --circulant, --recursive, --toeplitz, --matrix");
  }
  if (!c.circulant.empty()) {
    out << circulant_message(c.circulant.at(0), c.circulant.at(1)) << '\n';
    return;
  }
  if (!c.toeplitz.empty()) {
    out << "nonsingular_fraction: "
        << format_number(toeplitz_nonsingular_fraction(c.toeplitz.at(0), c.toeplitz.at(1), c.seed))
        << '\n';
    return;
  }
  BitMatrix a(1, 1);
  try {
    if (!c.recursive.empty()) {
      const std::size_t n = c.recursive.at(0), depth = c.recursive.at(1);
      std::string taps = c.taps.empty() ? std::string(depth, '1') : c.taps;
      if (taps.size() != depth) throw InvalidSpec("--taps needs one bit per lag up to the depth");
      std::vector<bool> coeffs;
      for (char ch : taps) {
        if (ch != '0' && ch != '1') throw InvalidSpec("--taps must be a bit string");
        coeffs.push_back(ch == '1');
      }
      a = build_recursive_toeplitz(n, coeffs);
    } else {
      std::vector<std::string> rows;
      std::stringstream ss(c.matrix);
      for (std::string row; std::getline(ss, row, ',');) rows.push_back(row);
      a = BitMatrix::from_rows(std::span<const std::string>(rows));
    }
  } catch (const std::invalid_argument& e) {
    throw InvalidSpec(std::string("gf2-check: ") + e.what());
  }
  const auto inv = a.is_square() ? invert(a) : std::nullopt;
  out << "determinant: " << (determinant(a) ? 1 : 0) << '\n';
  if (inv) {
    out << "inverse:";
    for (const auto& row : inv->to_strings()) out << ' ' << row;
    out << '\n';
  } else {
    out << "singular\n";
  }
}

void cmd_figures(const RunConfig& c, std::ostream& out) {
  figure_suite(c.outdir);
  out << "wrote fig2a.csv fig2b.csv fig2c.csv fig3a.csv fig3b.csv fig4.csv fig5.csv to "
      << c.outdir << '\n';
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw IoError("cannot write '" + path.string() + "'");
}

}  // namespace

std::vector<std::size_t> parse_count_list(const std::string& text) {
  std::vector<std::size_t> out;
  const auto to_count = [&](const std::string& s) -> std::size_t {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size() || s.front() == '-') {
      throw InvalidSpec("bad count '" + s + "' in list '" + text + "'");
    }
    return static_cast<std::size_t>(v);
  };
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = to_count(text.substr(0, dots));
    const auto hi = to_count(text.substr(dots + 2));
    if (lo > hi) throw InvalidSpec("empty range '" + text + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(to_count(item));
  if (out.empty()) throw InvalidSpec("empty list");
  return out;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::ostringstream buf;
    const auto& cmd = config.command;
    if (cmd != "gf2-check" && cmd != "figures" && config.model_file.empty()) {
      throw InvalidSpec(cmd + ": --model is required");
    }
    if (cmd == "pmf") {
      cmd_pmf(config, buf);
    } else if (cmd == "sample") {
      cmd_sample(config, buf);
    } else if (cmd == "cov") {
      cmd_cov(config, buf);
    } else if (cmd == "cov-hist") {
      cmd_cov_hist(config, buf);
    } else if (cmd == "entropy") {
      cmd_entropy(config, buf);
    } else if (cmd == "epsilon-sweep") {
      cmd_epsilon_sweep(config, buf);
    } else if (cmd == "region") {
      cmd_region(config, buf);
    } else if (cmd == "gf2-check") {
      cmd_gf2_check(config, buf);
    } else if (cmd == "figures") {
      cmd_figures(config, buf);
    } else {
      throw InvalidSpec("unknown command '" + cmd + "'");
    }
    if (config.output.empty()) {
      out << buf.str();
    } else {
      write_file(config.output, buf.str());
    }
    return kExitOk;
  } catch (const InvalidSpec& e) {
    err << "error: invalid: " << one_line(e.what()) << '\n';
    return kExitInvalid;
  } catch (const DimensionMismatch& e) {
    err << "error: invalid: " << one_line(e.what()) << '\n';
    return kExitInvalid;
  } catch (const Unsupported& e) {
    err << "error: invalid: " << one_line(e.what()) << '\n';
    return kExitInvalid;
  } catch (const CapExceeded& e) {
    err << "error: cap: " << one_line(e.what()) << '\n';
    return kExitCap;
  } catch (const IoError& e) {
    err << "error: io: " << one_line(e.what()) << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: io: " << one_line(e.what()) << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: internal: " << one_line(e.what()) << '\n';
    return kExitFailure;
  }
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Binary correlated source models: statistics, entropy and achievable regions"};
  app.require_subcommand(1);

  const auto common = [&c](CLI::App* sub, bool needs_model) {
    auto* opt = sub->add_option("--model", c.model_file, "Model JSON file");
    if (needs_model) opt->required();
    sub->add_option("-o,--output", c.output, "Write to this file instead of stdout");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    sub->add_option("--cap", c.cap, "Exact-enumeration cap in bits")->capture_default_str();
  };

  auto* pmf_cmd = app.add_subcommand("pmf", "Joint PMF of one realization or of every outcome");
  common(pmf_cmd, true);
  pmf_cmd->add_option("--x", c.x, "Realization as a bit string");

  auto* sample_cmd = app.add_subcommand("sample", "Draw realizations");
  common(sample_cmd, true);
  sample_cmd->add_option("--samples", c.samples)->capture_default_str();

  auto* cov_cmd = app.add_subcommand("cov", "Covariance matrix");
  common(cov_cmd, true);
  cov_cmd->add_flag("--empirical", c.empirical, "Monte Carlo estimate instead of exact");
  cov_cmd->add_option("--samples", c.samples)->capture_default_str();

  auto* hist_cmd = app.add_subcommand("cov-hist", "Histogram of covariance entries");
  common(hist_cmd, true);
  hist_cmd->add_option("--bins", c.bins, "Equal-width bins (0: distinct values)");
  hist_cmd->add_flag("--empirical", c.empirical);
  hist_cmd->add_option("--samples", c.samples)->capture_default_str();

  auto* ent_cmd = app.add_subcommand("entropy", "Joint entropy, bounds and rates");
  common(ent_cmd, true);

  auto* eps_cmd = app.add_subcommand("epsilon-sweep", "Entropy-rate gap against source count");
  common(eps_cmd, true);
  eps_cmd->add_option("--n", c.n_values, "Sources per chain, e.g. 2..20 or 10,50");
  eps_cmd->add_option("--m", c.m_values, "Chains (mixed model), e.g. 1..10");

  auto* region_cmd = app.add_subcommand("region", "Achievable region for orthogonal access");
  common(region_cmd, true);
  region_cmd->add_option("--r", c.rate, "Code rate")->capture_default_str();
  region_cmd->add_option("--lambdas", c.lambdas, "Per-source capacities to test")->delimiter(',');
  region_cmd->add_option("--unbalanced", c.unbalanced, "1-based source for the unbalanced point");
  region_cmd->add_option("--convergence", c.n_values, "Characteristic points over N, e.g. 2..10");

  auto* gf2_cmd = app.add_subcommand("gf2-check", "GF(2) matrix checks");
  common(gf2_cmd, false);
  gf2_cmd->add_option("--circulant", c.circulant, "N d")->expected(2);
  gf2_cmd->add_option("--recursive", c.recursive, "N depth")->expected(2);
  gf2_cmd->add_option("--taps", c.taps, "Lag coefficients for --recursive, e.g. 101");
  gf2_cmd->add_option("--toeplitz", c.toeplitz, "N trials")->expected(2);
  gf2_cmd->add_option("--matrix", c.matrix, "Rows as bit strings, comma-separated");

  auto* fig_cmd = app.add_subcommand("figures", "Regenerate all figure CSVs");
  fig_cmd->add_option("--outdir", c.outdir)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return kExitInvalid;
  }
  c.command = app.get_subcommands().front()->get_name();
  return run(c, out, err);
}

// ---------------------------------------------------------------------------
// Figure data

void figure_suite(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  const std::vector<double> rhos{0.7, 0.95};
  constexpr std::size_t kSources = 5;

  const auto first_rows = [&](const std::string& name, auto make) {
    std::ostringstream s;
    write_csv_row(s, {"rho", "k", "covariance"});
    for (double rho : rhos) {
      const auto row = covariance_exact(make(rho)).row(0);
      for (std::size_t k = 0; k < row.size(); ++k) {
        write_csv_row(s, {format_number(rho), std::to_string(k + 1), format_number(row[k])});
      }
    }
    write_file(dir / name, s.str());
  };
  first_rows("fig2a.csv", [](double r) { return ModelSpec::parallel(std::vector<double>(kSources, r)); });
  first_rows("fig2b.csv", [](double r) { return ModelSpec::serial_constant(kSources, r); });
  first_rows("fig2c.csv", [](double r) {
    return ModelSpec::mixed(std::vector<std::vector<double>>(2, std::vector<double>(kSources, r)));
  });

  const auto histograms = [&](const std::string& name, auto make) {
    std::ostringstream s;
    write_csv_row(s, {"rho", "value", "count"});
    for (double rho : rhos) {
      for (const auto& b : covariance_histogram(covariance_exact(make(rho))).bins) {
        write_csv_row(s, {format_number(rho), format_number(b.value), std::to_string(b.count)});
      }
    }
    write_file(dir / name, s.str());
  };
  histograms("fig3a.csv", [](double r) { return ModelSpec::parallel(std::vector<double>(kSources, r)); });
  histograms("fig3b.csv", [](double r) { return ModelSpec::serial_constant(kSources, r); });

  std::vector<std::size_t> n_axis;
  for (std::size_t n = 2; n <= 50; ++n) n_axis.push_back(n);
  std::ostringstream fig4;
  write_csv_row(fig4, {"model", "rho", "N", "M", "epsilon", "epsilon_lb", "epsilon_ub"});
  for (double rho : rhos) {
    for (auto kind : {ModelKind::kParallel, ModelKind::kSerial, ModelKind::kMixed}) {
      auto t = SweepTemplate::constant(kind, rho, kind == ModelKind::kMixed ? 2 : 1);
      write_epsilon_csv(fig4, epsilon_sweep(t, SweepAxis::kSources, n_axis), false);
    }
    // Linear model in its serial-equivalent form.
    auto lin = SweepTemplate::constant(ModelKind::kLinear, rho);
    lin.first_rho = 0.5;
    write_epsilon_csv(fig4, epsilon_sweep(lin, SweepAxis::kSources, n_axis), false);
  }
  write_file(dir / "fig4.csv", fig4.str());

  std::vector<std::size_t> m_axis;
  for (std::size_t m = 1; m <= 20; ++m) m_axis.push_back(m);
  std::ostringstream fig5;
  write_csv_row(fig5, {"model", "rho", "N", "M", "epsilon", "epsilon_lb", "epsilon_ub"});
  for (double rho : rhos) {
    for (std::size_t n : {10, 50}) {
      auto t = SweepTemplate::constant(ModelKind::kMixed, rho);
      t.n = n;
      write_epsilon_csv(fig5, epsilon_sweep(t, SweepAxis::kChains, m_axis), false);
    }
  }
  write_file(dir / "fig5.csv", fig5.str());
}

}  // namespace bincorr::cli
