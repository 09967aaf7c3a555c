#pragma once

// Expansion fits, growth rates, configuration, the result cache and report
// records shared by the command-line tool and the acceptance suite.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twistjones/numerics.hpp"
#include "twistjones/qjones.hpp"
#include "twistjones/saddle.hpp"

namespace twistjones {

inline constexpr const char* kVersion = "0.1.0";

// ---- configuration --------------------------------------------------------

struct Config {
  unsigned bits = 256;
  std::string cache_dir = ".twistjones-cache";
  unsigned workers = 1;
};

// Reads key=value lines (bits, cache_dir, workers; '#' starts a comment) from
// path when given, then applies TWISTJONES_BITS, TWISTJONES_CACHE_DIR and
// TWISTJONES_WORKERS from the environment. Unknown keys are a DomainError.
Config load_config(const std::optional<std::string>& path = std::nullopt);
Config parse_config(const std::string& text, Config base = {});
Config apply_env(Config base);

// ---- expansion fit ----------------------------------------------------------

struct LadderPoint {
  int N = 0;
  HPReal denom;
  HPComplex jones;
  HPComplex leading;
  HPComplex ratio;  // jones / leading
};

struct AsymptoticFit {
  int p = 6;
  RootSpec root_kind;  // M of the ladder; N of the first rung
  std::vector<int> Nlist;
  int d = 0;
  int auxiliary = 0;               // extra orders fitted and discarded
  std::vector<HPComplex> kappas;   // kappa_1 .. kappa_d
  std::vector<double> residuals;   // |r_N - 1 - sum_{i<=d} kappa_i x^i|
  double slope = 0.0;              // log-log slope of residuals vs denom
  double slope_error = 0.0;        // least-squares standard error
  double condition = 0.0;          // of the weighted Vandermonde matrix in x
  std::vector<LadderPoint> ladder;
  CriticalData critical;
};

// Jones values and leading terms over the ladder (workers threads).
// Each J_N is evaluated at max(bits, the color-dependent default) bits.
std::vector<LadderPoint> jones_ladder(int p, long M, const std::vector<int>& Nlist, const CriticalData& data,
                                     unsigned workers = 1, unsigned bits = 256);

// find_critical at the given precision with the sign branch calibrated on
// N = 100, 150; memoized per (p, bits).
const CriticalData& calibrated_critical(int p, unsigned bits = 256);

// Complex least squares of r_N against 1 + sum kappa_i x^i, x = 2 pi i/denom,
// with orders d+1 .. d+auxiliary also fitted so the reported residual
// measures the O(x^{d+1}) remainder. Rows are weighted by |x|^{-(k+1)},
// k = d + auxiliary. Needs |Nlist| >= d + 3.
// SolverError when the Vandermonde condition number exceeds 1e12.
AsymptoticFit fit_expansion(int p, long M, const std::vector<int>& Nlist, int d, unsigned workers = 1,
                            int auxiliary = 1, unsigned bits = 256);
AsymptoticFit fit_ladder(const std::vector<LadderPoint>& ladder, int d, int auxiliary = 1);

// Least-squares slope of log y against log x, with its standard error.
std::pair<double, double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---- growth rate ------------------------------------------------------------

struct GrowthRate {
  HPComplex limit;              // extrapolated lim (2 pi/denom) log J_N
  std::vector<HPComplex> terms;  // (2 pi/denom) log J_N on the sheet of N zeta
  std::vector<double> deviation;  // |Re term - 2 pi zeta_R|
  double real_error = 0.0;       // |Re limit - 2 pi zeta_R|
  double imag_error = 0.0;       // distance of Im limit to 2 pi Im zeta mod pi^2
};

// Removes the 3 pi log(denom)/denom of the denom^{3/2} prefactor, fits
// L + B/denom + C/denom^2 by least squares (at least 3 colors) and compares
// L with 2 pi zeta.
GrowthRate growth_rate(int p, long M, const std::vector<int>& Nlist, unsigned workers = 1, unsigned bits = 256);

// ---- reports and the cache -------------------------------------------------

struct CommandSpec {
  std::string command;  // jones, critical, predict, fit, fourier, volume
  int p = 6;
  std::vector<int> Nlist;
  long M = 0;  // 0 = infinity
  int d = 0;
  long m = 0, n = 0;
  double tol = 1e-10;
  unsigned bits = 256;

  // Canonical text of the inputs, versioned; the cache key hashes it.
  std::string canonical() const;
};

struct ReportRecord {
  std::string json;  // inputs / outputs / provenance / timestamp
  std::string csv;   // plot data; empty for commands without an N ladder
  bool cache_hit = false;
  bool invalidated = false;  // a stale entry with the same hash was replaced
};

std::uint64_t fnv1a(const std::string& text);

// Executes the command (or loads it from the cache in config.cache_dir) and
// persists the record. Entries live in a slot named by the hash of the inputs
// without bits; the stored key includes bits, so a precision change replaces
// the entry (invalidated = true). IoError on cache write failure.
ReportRecord run_report(const CommandSpec& spec, const Config& config);

// 40 significant digits.
std::string decimal(const HPReal& x, int digits = 40);

}  // namespace twistjones
