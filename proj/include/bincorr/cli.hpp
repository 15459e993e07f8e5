#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bincorr/tolerances.hpp"

namespace bincorr::cli {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitCap = 3;
inline constexpr int kExitIo = 4;

struct RunConfig {
  // pmf, sample, cov, cov-hist, entropy, epsilon-sweep, region, gf2-check,
  // figures
  std::string command;
  std::string model_file;
  std::string output;  // empty: standard output
  std::uint64_t seed = 1;
  std::size_t samples = 100000;
  std::string format;  // csv or json; empty picks the command default
  std::size_t cap = kDefaultEnumerationCap;

  std::string x;                 // pmf: one realization as a bit string
  bool empirical = false;        // cov
  std::size_t bins = 0;          // cov-hist: 0 = distinct values
  std::string n_values;          // epsilon-sweep / region --convergence
  std::string m_values;          // epsilon-sweep
  double rate = 1.0;             // region
  std::vector<double> lambdas;   // region membership test
  std::optional<std::size_t> unbalanced;  // region, 1-based
  std::vector<std::size_t> circulant;     // gf2-check: n d
  std::vector<std::size_t> recursive;     // gf2-check: n depth
  std::string taps;                       // gf2-check --recursive lag coefficients
  std::vector<std::size_t> toeplitz;      // gf2-check: n trials
  std::string matrix;                     // gf2-check: comma-separated rows
  std::string outdir = "figures";         // figures
};

/// Parses "a..b", "a,b,c" or a single count.
std::vector<std::size_t> parse_count_list(const std::string& text);

/// Executes one command. The result is written to `out` (or the configured
/// output file) only when the command succeeds; failures print one line
/// "error: <kind>: <message>" to `err` and return the matching exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name) and runs them.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// Writes the CSV data behind the covariance, histogram and convergence
/// figures into `dir`: fig2a.csv, fig2b.csv, fig2c.csv, fig3a.csv,
/// fig3b.csv, fig4.csv, fig5.csv.
void figure_suite(const std::filesystem::path& dir);

}  // namespace bincorr::cli
