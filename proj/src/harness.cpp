#include "twistjones/harness.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "twistjones/fourier.hpp"

namespace twistjones {

namespace {

using cld = std::complex<long double>;
using CMatrix = Eigen::Matrix<cld, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<cld, Eigen::Dynamic, 1>;
using json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

unsigned parse_unsigned(const std::string& key, const std::string& value, unsigned lo) {
  try {
    std::size_t used = 0;
    long v = std::stol(value, &used);
    if (used != value.size() || v < static_cast<long>(lo)) throw std::invalid_argument(value);
    return static_cast<unsigned>(v);
  } catch (const std::exception&) {
    throw DomainError("config: " + key + " must be an integer >= " + std::to_string(lo) + ", got '" + value + "'");
  }
}

void set_key(Config& c, const std::string& key, const std::string& value) {
  if (key == "bits")
    c.bits = parse_unsigned(key, value, 64);
  else if (key == "cache_dir")
    c.cache_dir = value;
  else if (key == "workers")
    c.workers = parse_unsigned(key, value, 1);
  else
    throw DomainError("config: unknown key '" + key + "'");
}

// Least squares with the condition number of A from its singular values.
std::pair<CVector, double> solve_ls(const CMatrix& A, const CVector& b) {
  Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cond = sv(sv.size() - 1) > 0 ? static_cast<double>(sv(0) / sv(sv.size() - 1)) : INFINITY;
  return {svd.solve(b), cond};
}

std::string m_text(long M) { return M == 0 ? "inf" : std::to_string(M); }

json cjson(const HPComplex& z) { return {{"re", decimal(z.re)}, {"im", decimal(z.im)}}; }

std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

int single_color(const CommandSpec& spec) {
  if (spec.Nlist.size() != 1) throw DomainError(spec.command + ": expects exactly one color N");
  return spec.Nlist.front();
}

std::string ladder_csv(const std::vector<LadderPoint>& ladder, const std::vector<double>& residuals) {
  std::ostringstream os;
  os << "N,denom,jones_re,jones_im,prediction_re,prediction_im,ratio_re,ratio_im,residual\n";
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const LadderPoint& L = ladder[i];
    os << L.N << ',' << decimal(L.denom, 20) << ',' << decimal(L.jones.re, 20) << ',' << decimal(L.jones.im, 20)
       << ',' << decimal(L.leading.re, 20) << ',' << decimal(L.leading.im, 20) << ',' << decimal(L.ratio.re, 20)
       << ',' << decimal(L.ratio.im, 20) << ',';
    if (i < residuals.size()) os << std::setprecision(17) << residuals[i];
    os << '\n';
  }
  return os.str();
}

json critical_json(const CriticalData& d) {
  return {{"t0", cjson(d.t0)},
          {"s0", cjson(d.s0)},
          {"x0", cjson(d.x0)},
          {"y0", cjson(d.y0)},
          {"zeta", cjson(d.zeta)},
          {"omega", cjson(d.omega)},
          {"omega_hessian", cjson(d.omega_hessian)},
          {"omega_H", cjson(d.omega_H)},
          {"omega_discrepancy", d.omega_discrepancy},
          {"hess_det", cjson(d.hess_det)},
          {"H", cjson(d.Hval)},
          {"newton_residual", d.newton_residual},
          {"iterations", d.iterations},
          {"sign_branch", d.sign_branch},
          {"in_region", d.in_region},
          {"extra_basins", d.extra_basins}};
}

// outputs and csv of one command
std::pair<json, std::string> execute(const CommandSpec& spec, const Config& config) {
  const std::string& c = spec.command;
  const unsigned bits = spec.bits;
  json out;
  std::string csv;
  if (c == "jones") {
    int N = single_color(spec);
    RootSpec root(N, spec.M);
    PrecisionContext ctx(std::max(bits, PrecisionContext::for_color(N).bits));
    JonesResult r = jones_checked(TwistParam{spec.p}, root, ctx);
    out = {{"jones", cjson(r.value)}, {"rel_error", r.rel_error}, {"bits", r.bits}};
  } else if (c == "critical") {
    out = critical_json(calibrated_critical(spec.p, bits));
    out["experimental"] = spec.p < 6;
  } else if (c == "predict") {
    int N = single_color(spec);
    const CriticalData& d = calibrated_critical(spec.p, bits);
    AsymptoticPrediction pr = predict(spec.p, RootSpec(N, spec.M), d, spec.d);
    std::vector<HPComplex> kappas;
    if (spec.d >= 1) kappas.push_back(kappa1_via_saddle(spec.p, d, spec.M));
    out = {{"leading", cjson(pr.leading)}, {"x", cjson(pr.x)}, {"value", cjson(pr.value(kappas))}};
    json k = json::array();
    for (const auto& z : kappas) k.push_back(cjson(z));
    out["kappas"] = k;
    out["symbolic_orders"] = std::max(0, spec.d - 1);
  } else if (c == "fit") {
    AsymptoticFit f = fit_expansion(spec.p, spec.M, spec.Nlist, spec.d, config.workers, 1, bits);
    json k = json::array();
    for (const auto& z : f.kappas) k.push_back(cjson(z));
    out["kappas"] = k;
    if (spec.d >= 1) out["kappa1_saddle"] = cjson(kappa1_via_saddle(spec.p, f.critical, spec.M));
    out["residuals"] = f.residuals;
    out["slope"] = f.slope;
    out["slope_error"] = f.slope_error;
    out["condition"] = f.condition;
    out["auxiliary_orders"] = f.auxiliary;
    csv = ladder_csv(f.ladder, f.residuals);
  } else if (c == "fourier") {
    int N = single_color(spec);
    RootSpec root(N, spec.M);
    QuadratureOptions opts{spec.tol, 4, config.workers};
    if (!root.infinite()) {
      FourierCoeff h = h_hat(spec.m, spec.n, spec.p, root, BumpSpec{}, opts);
      out["h_hat"] = cjson(h.value);
      out["quad_error"] = h.quad_error;
      out["grid"] = h.grid;
    }
    if (spec.n >= 0) {
      FourierCoeff h = h_tilde(spec.m, spec.n, spec.p, root, BumpSpec{}, opts);
      out["h_tilde"] = cjson(h.value);
      out["h_tilde_quad_error"] = h.quad_error;
      out["grid"] = h.grid;
    }
    out["bump_eps"] = BumpSpec{}.eps;
  } else if (c == "volume") {
    CriticalData d = find_critical(spec.p, PrecisionContext(bits));
    VolumeCS v = volume_cs(d);
    out = {{"volume", decimal(v.volume)}, {"cs", decimal(v.cs)}, {"zeta", cjson(d.zeta)}};
  } else {
    throw DomainError("unknown command '" + c + "'");
  }
  return {out, csv};
}

}  // namespace

// ---- configuration --------------------------------------------------------

Config parse_config(const std::string& text, Config base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config line " + std::to_string(lineno) + ": expected key=value");
    set_key(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

Config apply_env(Config base) {
  for (const char* key : {"bits", "cache_dir", "workers"}) {
    std::string name = "TWISTJONES_" + std::string(key);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::toupper(ch); });
    if (const char* v = std::getenv(name.c_str())) set_key(base, key, v);
  }
  return base;
}

Config load_config(const std::optional<std::string>& path) {
  Config c;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw DomainError("config: cannot read " + *path);
    std::stringstream buf;
    buf << in.rdbuf();
    c = parse_config(buf.str(), c);
  }
  return apply_env(c);
}

// ---- expansion fit ----------------------------------------------------------

const CriticalData& calibrated_critical(int p, unsigned bits) {
  static std::mutex mu;
  static std::map<std::pair<int, unsigned>, CriticalData> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto it = memo.find({p, bits});
  if (it != memo.end()) return it->second;
  PrecisionContext ctx(bits);
  CriticalData d = calibrate_sign_branch(find_critical(p, ctx), p, {100, 150}, ctx);
  return memo.emplace(std::pair{p, bits}, std::move(d)).first->second;
}

std::vector<LadderPoint> jones_ladder(int p, long M, const std::vector<int>& Nlist, const CriticalData& data,
                                     unsigned workers, unsigned bits) {
  std::vector<LadderPoint> out(Nlist.size());
  std::vector<std::exception_ptr> errors(Nlist.size());
  auto run = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < Nlist.size(); i += stride) {
      try {
        int N = Nlist[i];
        RootSpec root(N, M);
        PrecisionContext ctx(std::max(bits, PrecisionContext::for_color(N).bits));
        LadderPoint& L = out[i];
        L.N = N;
        L.denom = root.denom(ctx.working());
        L.jones = jones(TwistParam{p}, root, ctx);
        L.leading = predict(p, root, data).leading;
        L.ratio = L.jones / L.leading;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t nw = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(Nlist.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < nw; ++w) pool.emplace_back(run, w, nw);
  run(0, nw);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::pair<double, double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DomainError("loglog_slope: need at least two matching points");
  double mx = 0, my = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw DomainError("loglog_slope: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  double slope = sxy / sxx;
  if (n == 2) return {slope, 0.0};
  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = ly[i] - my - slope * (lx[i] - mx);
    ssr += r * r;
  }
  return {slope, std::sqrt(ssr / (n - 2) / sxx)};
}

AsymptoticFit fit_ladder(const std::vector<LadderPoint>& ladder, int d, int auxiliary) {
  if (d < 0 || auxiliary < 0) throw DomainError("fit: order and auxiliary orders must be non-negative");
  const int n = static_cast<int>(ladder.size());
  if (n < d + 3) throw DomainError("fit: need |Nlist| >= d + 3");
  if (d + auxiliary > n - 1) throw DomainError("fit: too many orders for the ladder");
  for (int i = 1; i < n; ++i)
    if (ladder[i].N <= ladder[i - 1].N) throw DomainError("fit: Nlist must be ascending");

  AsymptoticFit fit;
  fit.d = d;
  fit.auxiliary = auxiliary;
  fit.ladder = ladder;
  const int k = d + auxiliary;
  std::vector<cld> x(n), b(n);
  for (int i = 0; i < n; ++i) {
    fit.Nlist.push_back(ladder[i].N);
    x[i] = cld(0, 2 * 3.141592653589793238462643383279502884L / ladder[i].denom.to_long_double());
    b[i] = ladder[i].ratio.to_cld() - 1.0L;
  }
  std::vector<cld> kappa(k);
  if (k > 0) {
    // rows scaled by |x|^{-(k+1)}, the size of the omitted term, so that
    // small colors with larger remainders do not dominate
    CMatrix A(n, k);
    CVector rhs(n);
    for (int i = 0; i < n; ++i) {
      long double w = std::pow(std::abs(x[i]), -(k + 1));
      cld pw = x[i];
      for (int j = 0; j < k; ++j, pw *= x[i]) A(i, j) = w * pw;
      rhs(i) = w * b[i];
    }
    auto [sol, cond] = solve_ls(A, rhs);
    fit.condition = cond;
    if (!(cond <= 1e12))
      throw SolverError("fit: Vandermonde condition " + std::to_string(cond) + " exceeds 1e12; use a wider Nlist");
    for (int j = 0; j < k; ++j) kappa[j] = sol(j);
  } else {
    fit.condition = 1.0;
  }
  std::vector<double> denoms;
  for (int i = 0; i < n; ++i) {
    cld model = 0, pw = x[i];
    for (int j = 0; j < d; ++j, pw *= x[i]) model += kappa[j] * pw;
    fit.residuals.push_back(static_cast<double>(std::abs(b[i] - model)));
    denoms.push_back(ladder[i].denom.to_double());
  }
  for (int j = 0; j < d; ++j) fit.kappas.push_back(from_cld(kappa[j]));
  std::tie(fit.slope, fit.slope_error) = loglog_slope(denoms, fit.residuals);
  return fit;
}

AsymptoticFit fit_expansion(int p, long M, const std::vector<int>& Nlist, int d, unsigned workers, int auxiliary,
                            unsigned bits) {
  if (static_cast<int>(Nlist.size()) < d + 3) throw DomainError("fit: need |Nlist| >= d + 3");
  const CriticalData& data = calibrated_critical(p, bits);
  AsymptoticFit fit = fit_ladder(jones_ladder(p, M, Nlist, data, workers, bits), d, auxiliary);
  fit.p = p;
  fit.root_kind = RootSpec(Nlist.front(), M);
  fit.critical = data;
  return fit;
}

// ---- growth rate ------------------------------------------------------------

GrowthRate growth_rate(int p, long M, const std::vector<int>& Nlist, unsigned workers, unsigned bits) {
  if (Nlist.size() < 3) throw DomainError("growth_rate: need at least three colors");
  const CriticalData& data = calibrated_critical(p, bits);
  std::vector<LadderPoint> ladder = jones_ladder(p, M, Nlist, data, workers, bits);
  const hp::Bits wb = data.zeta.bits();
  const HPReal pi = HPReal::pi(wb);
  GrowthRate out;
  const std::size_t n = ladder.size();
  CMatrix A(n, 3);
  CVector rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const LadderPoint& L = ladder[i];
    HPReal g = L.denom.rounded(wb);
    // log J_N on the sheet of the leading term: denom zeta + log prefactor + log ratio
    HPComplex gz = data.zeta * g;
    HPComplex logJ = gz + principal_log(L.leading / hp::exp(gz)) + principal_log(L.ratio);
    HPComplex a = logJ * (pi * 2L / g);
    out.terms.push_back(a);
    out.deviation.push_back(std::fabs((a.re - data.zetaR * pi * 2L).to_double()));
    // the prefactor grows like denom^{3/2}: remove 3 pi log(denom)/denom, fit the rest
    long double gd = g.to_long_double();
    A(i, 0) = 1;
    A(i, 1) = 1 / gd;
    A(i, 2) = 1 / (gd * gd);
    rhs(i) = a.to_cld() - 3 * 3.141592653589793238462643383279502884L * std::log(gd) / gd;
  }
  CVector sol = solve_ls(A, rhs).first;
  out.limit = from_cld(sol(0));
  out.real_error = std::fabs((out.limit.re - data.zetaR * pi * 2L).to_double());
  const double pi2 = M_PI * M_PI;
  double dim = (out.limit.im - data.zeta.im * pi * 2L).to_double();
  out.imag_error = std::fabs(dim - pi2 * std::round(dim / pi2));
  return out;
}

// ---- reports and the cache -------------------------------------------------

std::string CommandSpec::canonical() const {
  std::ostringstream os;
  os << "twistjones/" << kVersion << ";command=" << command << ";p=" << p << ";N=";
  for (std::size_t i = 0; i < Nlist.size(); ++i) os << (i ? "," : "") << Nlist[i];
  os << ";M=" << m_text(M) << ";d=" << d << ";m=" << m << ";n=" << n << ";tol=" << std::setprecision(17) << tol
     << ";bits=" << bits;
  return os.str();
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ReportRecord run_report(const CommandSpec& spec, const Config& config) {
  static std::mutex writer;
  namespace fs = std::filesystem;
  const std::string key = spec.canonical();
  CommandSpec slot_spec = spec;
  slot_spec.bits = 0;
  const fs::path dir(config.cache_dir);
  const fs::path base = dir / hex64(fnv1a(slot_spec.canonical()));
  const fs::path json_path = fs::path(base).concat(".json"), csv_path = fs::path(base).concat(".csv");

  ReportRecord rec;
  {
    std::lock_guard<std::mutex> lock(writer);
    std::ifstream in(json_path);
    if (in) {
      json stored = json::parse(in, nullptr, false);
      if (!stored.is_discarded() && stored.contains("provenance") &&
          stored["provenance"].value("key", "") == key) {
        rec.json = stored.dump(2);
        std::ifstream cin(csv_path);
        if (cin) {
          std::stringstream buf;
          buf << cin.rdbuf();
          rec.csv = buf.str();
        }
        rec.cache_hit = true;
        return rec;
      }
      rec.invalidated = true;
    }
  }

  auto [outputs, csv] = execute(spec, config);
  json record;
  record["inputs"] = {{"command", spec.command}, {"p", spec.p},     {"N", spec.Nlist}, {"M", m_text(spec.M)},
                      {"d", spec.d},             {"m", spec.m},     {"n", spec.n},     {"tol", spec.tol},
                      {"bits", spec.bits}};
  record["outputs"] = outputs;
  record["provenance"] = {{"version", kVersion},
                          {"key", key},
                          {"hash", hex64(fnv1a(key))},
                          {"decimal_digits", 40},
                          {"workers", config.workers},
                          {"fit_condition_limit", 1e12}};
  if (rec.invalidated) record["provenance"]["notice"] = "stale cache entry replaced";
  record["timestamp"] = timestamp();
  rec.json = record.dump(2);
  rec.csv = csv;

  std::lock_guard<std::mutex> lock(writer);
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream jo(json_path), co;
  if (!csv.empty()) co.open(csv_path);
  if (!jo || (!csv.empty() && !co)) throw IoError("cache: cannot write under " + dir.string());
  jo << rec.json << '\n';
  if (!csv.empty()) co << csv;
  if (!jo.flush() || (!csv.empty() && !co.flush())) throw IoError("cache: write failed under " + dir.string());
  return rec;
}

std::string decimal(const HPReal& x, int digits) { return x.to_string(digits); }

}  // namespace twistjones
