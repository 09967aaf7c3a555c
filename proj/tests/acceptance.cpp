// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned here.
// Exit status is non-zero when a criterion fails that is not listed in
// kKnownFailures; known failures still print FAIL, with their reason.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "exact_oracle.hpp"
#include "twistjones/fourier.hpp"
#include "twistjones/harness.hpp"
#include "twistjones/potential.hpp"
#include "twistjones/saddle.hpp"
#include "twistjones/special.hpp"

using namespace twistjones;
using hp::Complex;
using hp::Real;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double loglog(const std::vector<double>& x, const std::vector<double>& y) { return loglog_slope(x, y).first; }

// 1. exact cyclotomic oracle, N <= 6
Outcome exactness_gate() {
  const unsigned bits = 256;
  const double tol = std::ldexp(1.0, -static_cast<int>(bits) + 24);
  double worst = 0;
  PrecisionContext ctx(bits);
  for (int p = -2; p <= 8; ++p)
    for (int N = 1; N <= 6; ++N) {
      oracle::Laurent P = oracle::jones_polynomial(p, N);
      for (long M : {2L, 3L, 7L, 0L}) {
        RootSpec root(N, M);
        worst = std::max(worst, relative_distance(jones(TwistParam{p}, root, ctx), oracle::evaluate(P, root, 2 * bits)));
      }
    }
  return {worst < tol, "max rel " + fmt(worst) + " vs 2^-232 = " + fmt(tol)};
}

// 2. Pochhammer branches, the three closed identities, li2 inversion
Outcome dilog_identities() {
  const double tol = 1e-25;
  PrecisionContext ctx(256);
  const hp::Bits b = ctx.working();
  double w21 = 0, w22 = 0, winv = 0;
  for (long M : {2L, 5L}) {
    RootSpec root(30, M);
    auto ev = shared_phi_evaluator<hp::Real>(root, b);
    Real g = root.denom(b);
    auto poch = pochhammer_table(root, 2 * root.N, ctx);
    Complex base = (*ev)(Complex(Real(0.5, b) / g));
    Complex extra = log_one_minus_unit(Complex(Real(-1.0, b) / M));
    for (int n = 0; n <= 2 * root.N; ++n) {
      Complex arg(Real(2.0 * n + 1, b) / (g * 2L));
      Complex e = n <= root.N ? hp::exp(base - (*ev)(arg)) : hp::exp(base - (*ev)(arg - Real(1.0, b)) + extra);
      w21 = std::max(w21, relative_distance(e, poch.entries[n]));
    }
  }
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> re(0.02, 0.98), im(-0.3, 0.3);
  for (long M : {2L, 5L}) {
    RootSpec root(10, M);
    Real g = root.denom(b), pi = Real::pi(b);
    Complex ipi(Real::zero(b), pi), one(Real(1.0, b));
    for (int i = 0; i < 20; ++i) {
      Complex t(Real(re(rng), b), Real(im(rng), b));
      Complex lhs = phi(t, root, {}, ctx).value + phi(one - t, root, {}, ctx).value;
      Complex rhs = ipi * 2L * ((t * t - t + Real(1.0, b) / 6L) * (-g / 2L) + Complex(Real(1.0, b) / (g * 24L)));
      w22 = std::max(w22, hp::abs(lhs - rhs).to_double());
    }
    Complex t0(Real(0.5, b) / g);
    Complex common = Complex(Real::zero(b), -g * pi / 12L) + ipi / 4L - ipi / (g * 12L);
    w22 = std::max(w22, hp::abs(phi(t0, root, {}, ctx).value - (common + Complex(hp::log(g) / 2L))).to_double());
    w22 = std::max(w22, hp::abs(phi(one - t0, root, {}, ctx).value - (common - Complex(hp::log(g) / 2L))).to_double());
  }
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  Real pi = Real::pi(b);
  for (int i = 0; i < 40; ++i) {
    Complex z(Real(u(rng), b), Real(u(rng), b));
    Complex lg = principal_log(-z);
    Complex lhs = li2(Complex(Real(1.0, b)) / z) + li2(z) + Complex(pi * pi / 6L) + lg * lg / 2L;
    winv = std::max(winv, hp::abs(lhs).to_double());
  }
  return {w21 < tol && w22 < tol && winv < tol,
          "Pochhammer " + fmt(w21) + ", identities " + fmt(w22) + ", inversion " + fmt(winv)};
}

// 3. dilogarithm asymptotics remainder rate
Outcome dilog_rate() {
  PrecisionContext ctx(128);
  const hp::Bits b = ctx.working();
  Complex t(Real(0.3, b), Real(0.1, b));
  Complex x = unit_exponential(t), ipi(Real::zero(b), Real::pi(b));
  std::vector<double> gs, rs;
  for (int N : {25, 50, 100}) {
    RootSpec root(N, 2);
    Real g = root.denom(b);
    Complex approx = li2(x) * g / (ipi * 2L) - ipi * x / (Complex(Real(1.0, b)) - x) / (g * 12L);
    gs.push_back(g.to_double());
    rs.push_back(hp::abs(phi(t, root, {}, ctx).value - approx).to_double());
  }
  double slope = loglog(gs, rs);
  return {std::fabs(slope + 3) <= 0.4, "slope " + fmt(slope) + " (target -3 +- 0.4)"};
}

// 4. envelope containment and the bound on terms off D'_0
Outcome region_envelope(double zetaR) {
  const int n = 400;
  const double threshold = kEnvelopeThreshold / (2 * M_PI);
  int above = 0, outside = 0;
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) {
      double t = static_cast<double>(i) / n, s = static_cast<double>(j) / n;
      if (!RegionSpec::D().contains(t, s) || envelope(t, s) <= threshold) continue;
      ++above;
      if (!RegionSpec::D0prime().contains(t, s)) ++outside;
    }
  RootSpec root(20, 2);
  PrecisionContext ctx(256);
  const double g = root.denom(64).to_double();
  const double log_bound = g * (zetaR - 0.01);
  int checked = 0, violations = 0;
  double worst = -INFINITY;
  for (int k = 0; k < root.N; ++k)
    for (int l = 0; l <= k; ++l) {
      if (RegionSpec::D0prime().contains((k + 0.5) / g, (l + 0.5) / g)) continue;
      ++checked;
      double lg = hp::log(hp::abs(closed_form_term(TwistParam{6}, root, GridPoint{k, l}, ctx))).to_double();
      worst = std::max(worst, lg - log_bound);
      if (lg > log_bound) ++violations;
    }
  return {above > 0 && outside == 0 && violations == 0,
          std::to_string(outside) + " of " + std::to_string(above) + " grid points outside D'_0; " +
              std::to_string(violations) + " of " + std::to_string(checked) +
              " terms above the bound (max log excess " + fmt(worst) + ")"};
}

// 5. vanishing of h_hat(m,-1) and the reflection symmetry
Outcome big_cancellation() {
  const double tol = 1e-10;
  QuadratureOptions opts{tol, 4, 0};
  double worst_zero = 0, worst_sym = 0;
  for (long M : {2L, 3L}) {
    RootSpec root(12, M);
    const Real pi = Real::pi(64);
    for (long m = -4; m <= 4; ++m)
      worst_zero = std::max(worst_zero, hp::abs(h_hat(m, -1, 6, root, {}, opts).value).to_double());
    for (long m = -3; m <= 3; ++m)
      for (long n = 0; n <= 3; ++n) {
        Complex a = h_hat(m, -n - 2, 6, root, {}, opts).value;
        Complex bb = h_hat(m, n, 6, root, {}, opts).value;
        Complex phase = hp::expi(pi * 2L * (n + 1) / M);
        worst_sym = std::max(worst_sym, relative_distance(a, -(phase * bb)));
      }
    clear_fourier_cache();
  }
  return {worst_zero < 10 * tol && worst_sym < 1e-8,
          "max |h(m,-1)| " + fmt(worst_zero) + " (< 1e-9), symmetry " + fmt(worst_sym) + " (< 1e-8)"};
}

// 6. Poisson reconstruction against J_N
Outcome poisson(double zetaR) {
  RootSpec root(12, 2);
  QuadratureOptions opts{1e-10, 4, 0};
  std::vector<double> dev;
  double plateau = 0;
  for (int K : {2, 4, 8}) {
    Reconstruction r = poisson_reconstruct(6, root, K, {}, opts);
    dev.push_back(r.deviation);
    plateau = std::exp(root.denom(64).to_double() * (zetaR - 0.01)) / hp::abs(r.jones).to_double();
  }
  clear_fourier_cache();
  bool below = dev.back() < plateau;
  bool decreasing = dev[1] < dev[0] && dev[2] < dev[1];
  return {below && decreasing, "deviation K=2,4,8: " + fmt(dev[0]) + ", " + fmt(dev[1]) + ", " + fmt(dev[2]) +
                                   "; plateau " + fmt(plateau) + (below ? " (below)" : " (above)") +
                                   (decreasing ? ", decreasing" : ", not decreasing")};
}

// 7. critical point stability, omega forms, derivatives by differences
Outcome saddle_suite(const CriticalData& d) {
  PrecisionContext ctx(256);
  const hp::Bits b = 256;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  double spread = 0;
  for (int i = 0; i < 10; ++i) {
    Complex t = d.t0 + Complex(u(rng), u(rng), b), s = d.s0 + Complex(u(rng), u(rng), b);
    CriticalData c = newton_critical(6, t, s, ctx);
    spread = std::max({spread, hp::abs(c.t0 - d.t0).to_double(), hp::abs(c.s0 - d.s0).to_double()});
  }
  const Real h(1e-12, b);
  double fd = 0;
  std::vector<std::pair<Complex, Complex>> pts = {{d.t0, d.s0}};
  std::uniform_real_distribution<double> tr(0.6, 0.85), sr(0.4, 0.6), im(-0.1, 0.1);
  while (pts.size() < 7) {
    double t = tr(rng), s = sr(rng);
    if (RegionSpec::D0prime().contains(t, s)) pts.push_back({Complex(t, im(rng), b), Complex(s, im(rng), b)});
  }
  for (const auto& [t, s] : pts) {
    auto g = grad_V(6, t, s);
    Complex ft = (V_limit(6, t + h, s) - V_limit(6, t - h, s)) / (h * 2L);
    Complex fs = (V_limit(6, t, s + h) - V_limit(6, t, s - h)) / (h * 2L);
    // the gradient vanishes at the critical point: compare on a unit scale
    auto gap = [](const Complex& a, const Complex& e) {
      return (hp::abs(a - e) / hp::max(hp::abs(e), Real(1, a.re.bits()))).to_double();
    };
    fd = std::max({fd, gap(g[0], ft), gap(g[1], fs)});
    HessianData hd = hessian_and_H(6, t, s);
    auto tp = grad_V(6, t + h, s), tm = grad_V(6, t - h, s), sp = grad_V(6, t, s + h), sm = grad_V(6, t, s - h);
    for (int j = 0; j < 2; ++j) {
      fd = std::max(fd, relative_distance(hd.hess[0][j], (tp[j] - tm[j]) / (h * 2L)));
      fd = std::max(fd, relative_distance(hd.hess[1][j], (sp[j] - sm[j]) / (h * 2L)));
    }
  }
  return {spread < 1e-20 && d.omega_discrepancy < 1e-25 && fd < 1e-6,
          "seed spread " + fmt(spread) + ", omega forms " + fmt(d.omega_discrepancy) + ", differences " + fmt(fd)};
}

// 8. volume and Chern-Simons invariant against stored oracle values
// (tools/volume_oracle.py: SnapPy 3.3.2 high-precision gluing equations of
// the (1,-p) filling of the Whitehead link, mirrored to the chirality of the
// tabulated 5_2 at p = 2).
Outcome volume_check() {
  struct Row {
    int p;
    const char* volume;
    const char* cs;
  };
  const Row rows[] = {
      {6, "3.5889139177918995891985106559984915798", "0.75426871357482070586152071135628701661"},
      {7, "3.6095391745447702554818529583037093911", "1.0072770606690447096495338136421132245"},
      {8, "3.6226844082105565956661962883954123681", "1.1952458605692360842231474910665909888"},
  };
  double worst = 0;
  for (const Row& r : rows) {
    VolumeCS v = volume_cs(find_critical(r.p));
    worst = std::max(worst, std::fabs((v.volume - Real(r.volume, 256)).to_double()));
    worst = std::max(worst, std::fabs((v.cs - Real(r.cs, 256)).to_double()));
  }
  return {worst < 1e-6, "max difference " + fmt(worst) + " over p = 6, 7, 8"};
}

// 9. expansion fit at p = 6, M = 2
Outcome expansion_fit() {
  const std::vector<int> Ns{50, 100, 150, 200};
  AsymptoticFit f0 = fit_expansion(6, 2, Ns, 0);
  AsymptoticFit f1 = fit_expansion(6, 2, Ns, 1);
  Complex k1 = kappa1_via_saddle(6, f1.critical, 2);
  double rel = relative_distance(f1.kappas[0], k1);
  bool ok0 = std::fabs(f0.slope + 1) <= 0.3 && f0.ladder.back().ratio.re.to_double() > 0.99;
  bool ok1 = std::fabs(f1.slope + 2) <= 0.3;
  bool okk = rel < 5e-3 * 2;  // two significant digits
  return {ok0 && ok1 && okk, "d=0 slope " + fmt(f0.slope) + " +- " + fmt(f0.slope_error) + (ok0 ? "" : " (off)") +
                                 "; d=1 slope " + fmt(f1.slope) + " +- " + fmt(f1.slope_error) + (ok1 ? "" : " (off)") +
                                 "; kappa1 rel " + fmt(rel) + (okk ? "" : " (off)")};
}

// 10. large M against M = infinity, and the ratio test
Outcome infinity_bridge(const CriticalData& d) {
  const int N = 50;
  PrecisionContext ctx = PrecisionContext::for_color(N);
  Complex Jinf = jones(TwistParam{6}, RootSpec::infinity(N), ctx);
  std::vector<double> Ms, diffs;
  for (long M : {10L, 100L, 1000L}) {
    Ms.push_back(static_cast<double>(M));
    diffs.push_back(hp::abs(jones(TwistParam{6}, RootSpec(N, M), ctx) - Jinf).to_double());
  }
  double expo = -loglog(Ms, diffs);
  std::vector<double> err;
  for (int n : {100, 200}) {
    RootSpec root = RootSpec::infinity(n);
    Complex J = jones(TwistParam{6}, root, PrecisionContext::for_color(n));
    err.push_back(hp::abs(J / predict(6, root, d).leading - Complex(Real(1.0, 256))).to_double());
  }
  bool ok = std::fabs(expo - 1) <= 0.2 && err[0] < 0.2 && err[1] < err[0];
  return {ok, "1/M exponent " + fmt(expo) + "; ratio error N=100 " + fmt(err[0]) + ", N=200 " + fmt(err[1])};
}

// Criteria that fail for reasons recorded in the README.
const std::map<int, std::string> kKnownFailures = {
    {6, "bump transitions of width 0.01 carry Fourier mass out to |m| ~ 1/(denom eps), so the truncation error is not "
        "monotone for K <= 8"},
    {9, "J_N at N = 50 carries an exponentially decaying contribution besides the power series, which bends the d = 1 "
        "residual slope"},
};

}  // namespace

int main(int argc, char** argv) {
  // optional arguments: criterion numbers to run (default: all)
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const CriticalData& crit = calibrated_critical(6, 256);
  const double zetaR = crit.zetaR.to_double();
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"exactness gate", exactness_gate},
      {"quantum dilogarithm identities", dilog_identities},
      {"dilogarithm remainder rate", dilog_rate},
      {"region and envelope", [&] { return region_envelope(zetaR); }},
      {"big cancellation", big_cancellation},
      {"Poisson reconstruction", [&] { return poisson(zetaR); }},
      {"saddle suite", [&] { return saddle_suite(crit); }},
      {"volume and Chern-Simons", volume_check},
      {"expansion fit", expansion_fit},
      {"M to infinity bridge", [&] { return infinity_bridge(crit); }},
  };
  int unexpected = 0, passed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto known = kKnownFailures.find(id);
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << criteria[i].first << ": " << o.detail << " ["
              << fmt(secs) << " s]";
    if (!o.pass && known != kKnownFailures.end()) std::cout << "\n      known failure: " << known->second;
    std::cout << std::endl;
    if (o.pass)
      ++passed;
    else if (known == kKnownFailures.end())
      ++unexpected;
  }
  std::cout << passed << "/" << (only.empty() ? criteria.size() : only.size()) << " criteria pass";
  if (unexpected) std::cout << ", " << unexpected << " unexpected failure(s)";
  std::cout << std::endl;
  return unexpected ? 1 : 0;
}
