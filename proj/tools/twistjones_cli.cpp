// twistjones: colored Jones values of twist knots, their asymptotic
// predictions, expansion fits, Fourier coefficients and volumes.
//
// Exit codes: 0 success, 1 I/O, 2 domain (including bad arguments),
// 3 accuracy, 4 solver.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "twistjones/harness.hpp"

using namespace twistjones;

namespace {

struct Options {
  std::optional<std::string> config;
  bool csv = false;
  int p = 6;
  int N = 0;
  std::vector<int> Nlist;
  std::string M = "inf";
  int d = 0;
  long m = 0, n = 0;
  double tol = 1e-10;
  unsigned bits = 0;  // 0: from the configuration
  std::string out;
  std::string report_command = "fit";
};

long parse_M(const std::string& text) { return RootSpec::parse(1, text).M; }

int emit(const ReportRecord& r, bool csv) {
  if (csv) {
    if (r.csv.empty()) throw DomainError("this command has no CSV plot data");
    std::cout << r.csv;
  } else {
    std::cout << r.json << '\n';
  }
  if (r.invalidated) std::cerr << "note: stale cache entry replaced\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Colored Jones asymptotics of twist knots"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "key=value file (bits, cache_dir, workers)");
  app.add_flag("--csv", o.csv, "print CSV plot data instead of JSON");

  auto common = [&](CLI::App* s) {
    s->add_option("--p", o.p, "twist parameter");
    s->add_option("--bits", o.bits, "working precision (default from config)");
  };
  auto* jones_cmd = app.add_subcommand("jones", "exact J_N at the root e^{2 pi i/(N+1/M)}");
  common(jones_cmd);
  jones_cmd->add_option("--N", o.N, "color")->required();
  jones_cmd->add_option("--M", o.M, "M or inf");

  auto* critical_cmd = app.add_subcommand("critical", "critical point, zeta and omega");
  common(critical_cmd);

  auto* predict_cmd = app.add_subcommand("predict", "leading asymptotics with kappa_1 when d >= 1");
  common(predict_cmd);
  predict_cmd->add_option("--N", o.N, "color")->required();
  predict_cmd->add_option("--M", o.M, "M or inf");
  predict_cmd->add_option("--d", o.d, "order");

  auto* fit_cmd = app.add_subcommand("fit", "fit kappa_1..kappa_d over an N ladder");
  common(fit_cmd);
  fit_cmd->add_option("--M", o.M, "M or inf");
  fit_cmd->add_option("--N", o.Nlist, "ascending colors n1,n2,...")->delimiter(',')->required();
  fit_cmd->add_option("--d", o.d, "order");

  auto* fourier_cmd = app.add_subcommand("fourier", "Fourier coefficient h_hat(m,n) and h_tilde(m,n)");
  common(fourier_cmd);
  fourier_cmd->add_option("--N", o.N, "color")->required();
  fourier_cmd->add_option("--M", o.M, "M or inf");
  fourier_cmd->add_option("--m", o.m, "first frequency");
  fourier_cmd->add_option("--n", o.n, "second frequency");
  fourier_cmd->add_option("--tol", o.tol, "relative quadrature tolerance");

  auto* volume_cmd = app.add_subcommand("volume", "volume and Chern-Simons invariant from zeta");
  common(volume_cmd);

  auto* report_cmd = app.add_subcommand("report", "write a JSON record and its CSV next to it");
  common(report_cmd);
  report_cmd->add_option("--out", o.out, "output path of the JSON record")->required();
  report_cmd->add_option("--command", o.report_command, "command to record (default fit)");
  report_cmd->add_option("--M", o.M, "M or inf");
  report_cmd->add_option("--N", o.Nlist, "colors")->delimiter(',');
  report_cmd->add_option("--d", o.d, "order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Config cfg = load_config(o.config);
    CLI::App* sub = app.get_subcommands().front();
    CommandSpec spec;
    spec.command = sub->get_name();
    spec.p = o.p;
    spec.M = parse_M(o.M);
    spec.d = o.d;
    spec.m = o.m;
    spec.n = o.n;
    spec.tol = o.tol;
    spec.bits = o.bits ? o.bits : cfg.bits;
    if (spec.command == "jones" || spec.command == "predict" || spec.command == "fourier") spec.Nlist = {o.N};
    if (spec.command == "fit") spec.Nlist = o.Nlist;
    if (spec.command == "critical" || spec.command == "volume") spec.M = 0;

    if (spec.command != "report") return emit(run_report(spec, cfg), o.csv);

    spec.command = o.report_command;
    if (spec.command == "fit") {
      spec.Nlist = o.Nlist.empty() ? std::vector<int>{50, 100, 150, 200} : o.Nlist;
      if (o.M == "inf" && !sub->count("--M")) spec.M = 2;
      if (!sub->count("--d")) spec.d = 1;
    } else {
      spec.Nlist = o.Nlist;
    }
    ReportRecord r = run_report(spec, cfg);
    std::filesystem::path out(o.out);
    std::ofstream jo(out);
    if (!jo || !(jo << r.json << '\n')) throw IoError("cannot write " + out.string());
    std::cout << out.string() << '\n';
    if (!r.csv.empty()) {
      std::filesystem::path csv = out;
      csv.replace_extension(".csv");
      std::ofstream co(csv);
      if (!co || !(co << r.csv)) throw IoError("cannot write " + csv.string());
      std::cout << csv.string() << '\n';
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
