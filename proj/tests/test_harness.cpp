#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <unistd.h>

#include "twistjones/harness.hpp"

using namespace twistjones;
using hp::Complex;
using hp::Real;

namespace {

// Ladder whose ratios follow 1 + k1 x + k2 x^2 + k3 x^3 exactly.
std::vector<LadderPoint> synthetic_ladder(const std::vector<int>& Ns, std::complex<double> k1,
                                          std::complex<double> k2, std::complex<double> k3) {
  std::vector<LadderPoint> out;
  for (int N : Ns) {
    LadderPoint L;
    L.N = N;
    L.denom = Real(N + 0.5, 128);
    std::complex<double> x(0, 2 * M_PI / (N + 0.5));
    std::complex<double> r = 1.0 + k1 * x + k2 * x * x + k3 * x * x * x;
    L.ratio = Complex(r.real(), r.imag(), 128);
    L.jones = L.ratio;
    L.leading = Complex(1.0, 0.0, 128);
    out.push_back(L);
  }
  return out;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("twistjones-test-" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("config: key=value text and environment overrides") {
  Config c = parse_config("# defaults\nbits = 512\ncache_dir=/tmp/x  # trailing\n\nworkers=3\n");
  CHECK(c.bits == 512u);
  CHECK(c.cache_dir == "/tmp/x");
  CHECK(c.workers == 3u);
  CHECK_THROWS_AS(parse_config("colour=2"), DomainError);
  CHECK_THROWS_AS(parse_config("bits=12"), DomainError);
  CHECK_THROWS_AS(parse_config("workers"), DomainError);

  ::setenv("TWISTJONES_BITS", "384", 1);
  ::setenv("TWISTJONES_WORKERS", "2", 1);
  Config e = apply_env(c);
  CHECK(e.bits == 384u);
  CHECK(e.workers == 2u);
  CHECK(e.cache_dir == "/tmp/x");
  ::unsetenv("TWISTJONES_BITS");
  ::unsetenv("TWISTJONES_WORKERS");
}

TEST_CASE("fnv1a reference vectors") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("loglog slope of an exact power law") {
  auto [s, e] = loglog_slope({10, 20, 40, 80}, {1e-2, 2.5e-3, 6.25e-4, 1.5625e-4});
  CHECK(s == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(e < 1e-10);
}

TEST_CASE("fit recovers known coefficients") {
  std::complex<double> k1(-1.8, 0.05), k2(0.7, -1.2), k3(2.0, 0.3);
  auto ladder = synthetic_ladder({50, 100, 150, 200, 250}, k1, k2, k3);
  AsymptoticFit f = fit_ladder(ladder, 2, 1);
  REQUIRE(f.kappas.size() == 2u);
  CHECK(std::abs(f.kappas[0].to_cd() - k1) < 1e-9);
  CHECK(std::abs(f.kappas[1].to_cd() - k2) < 1e-7);
  CHECK(f.slope == doctest::Approx(-3.0).epsilon(0.02));

  AsymptoticFit f0 = fit_ladder(synthetic_ladder({50, 100, 200}, k1, 0, 0), 0, 1);
  CHECK(f0.kappas.empty());
  CHECK(f0.slope == doctest::Approx(-1.0).epsilon(0.01));

  CHECK_THROWS_AS(fit_ladder(synthetic_ladder({50, 100, 200}, k1, k2, k3), 1), DomainError);
  CHECK_THROWS_AS(fit_ladder(synthetic_ladder({1000, 1001, 1002, 1003, 1004, 1005, 1006}, k1, k2, k3), 2, 3), SolverError);
}

TEST_CASE("report: cache hit, bits invalidation and csv rows") {
  TempDir tmp;
  Config cfg;
  cfg.cache_dir = tmp.path.string();
  CommandSpec spec;
  spec.command = "volume";
  spec.p = 6;
  spec.bits = 128;
  ReportRecord a = run_report(spec, cfg);
  CHECK_FALSE(a.cache_hit);
  CHECK(a.json.find("3.58891391779189958919") != std::string::npos);
  ReportRecord b = run_report(spec, cfg);
  CHECK(b.cache_hit);
  CHECK(b.json == a.json);
  spec.bits = 192;
  ReportRecord c = run_report(spec, cfg);
  CHECK_FALSE(c.cache_hit);
  CHECK(c.invalidated);

  CommandSpec fit;
  fit.command = "fit";
  fit.p = 6;
  fit.M = 2;
  fit.Nlist = {20, 30, 40};
  fit.d = 0;
  ReportRecord r = run_report(fit, cfg);
  std::istringstream in(r.csv);
  std::string line;
  int rows = -1;  // header
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);

  cfg.cache_dir = "/proc/twistjones-no-such-dir";
  CHECK_THROWS_AS(run_report(spec, cfg), IoError);
}

TEST_CASE("report: deterministic value fields") {
  TempDir tmp;
  Config cfg;
  CommandSpec spec;
  spec.command = "jones";
  spec.Nlist = {7};
  spec.M = 3;
  cfg.cache_dir = (tmp.path / "a").string();
  std::string a = run_report(spec, cfg).json;
  cfg.cache_dir = (tmp.path / "b").string();
  std::string b = run_report(spec, cfg).json;
  auto outputs = [](const std::string& s) { return s.substr(s.find("\"outputs\""), s.find("\"provenance\"") - s.find("\"outputs\"")); };
  CHECK(outputs(a) == outputs(b));
  CHECK_THROWS_AS(run_report(CommandSpec{"bogus"}, cfg), DomainError);
}

TEST_CASE("growth rate approaches 2 pi zeta") {
  GrowthRate g = growth_rate(6, 2, {50, 100, 150, 200});
  CHECK(g.real_error < 1e-2);
  CHECK(g.imag_error < 1e-2);
  for (std::size_t i = 1; i < g.deviation.size(); ++i) CHECK(g.deviation[i] < g.deviation[i - 1]);
  CHECK_THROWS_AS(growth_rate(6, 2, {50, 100}), DomainError);
}
