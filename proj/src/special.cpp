#include "twistjones/special.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <type_traits>

namespace twistjones {

namespace {

using hp::Bits;

HPReal pow2(long e, Bits bits) { return hp::ldexp(HPReal(1.0, bits), e); }

HPComplex li2_series(const HPComplex& z) {
  Bits bits = z.bits();
  HPReal eps = pow2(-static_cast<long>(bits) - 4, bits);
  HPComplex term = z, sum = z;
  for (long n = 2;; ++n) {
    term = term * z;
    HPComplex add = term / static_cast<double>(n * n);
    sum += add;
    if (hp::abs(add) <= eps * hp::abs(sum)) break;
    if (n > 40L * static_cast<long>(bits)) throw AccuracyError("li2 power series did not converge");
  }
  return sum;
}

// c[n] = B_n / (n+1)!, nonzero for n = 0, 1 and even n. Built once per
// precision with enough terms for |w| <= 1.8.
const std::vector<HPReal>& bernoulli_coefficients(Bits bits) {
  static std::mutex mu;
  static std::map<Bits, std::vector<HPReal>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& c = cache[bits];
  if (!c.empty()) return c;
  std::size_t count = static_cast<std::size_t>(bits) + 32;
  c.push_back(HPReal(1.0, bits));
  c.push_back(HPReal(-0.25, bits));
  HPReal two_pi = HPReal::pi(bits) * 2L;
  for (std::size_t n = 2; n < count; ++n) {
    if (n % 2) {
      c.push_back(HPReal::zero(bits));
      continue;
    }
    unsigned long k = n / 2;
    HPReal v = hp::zeta_ui(n, bits) * 2L / (hp::pow(two_pi, static_cast<long>(n)) * static_cast<long>(n + 1));
    c.push_back(k % 2 ? v : -v);
  }
  return c;
}

// sum_n B_n w^{n+1}/(n+1)! with w = -log(1-z), valid for |w| < 2 pi.
HPComplex li2_bernoulli(const HPComplex& z) {
  Bits bits = z.bits();
  HPComplex w = -principal_log(HPComplex(HPReal(1.0, bits)) - z);
  HPReal eps = pow2(-static_cast<long>(bits) - 4, bits);
  HPComplex w2 = w * w;
  HPComplex sum = w + w2 * HPReal(-0.25, bits);
  HPComplex pw = w;  // w^{n+1} for even n
  const auto& c = bernoulli_coefficients(bits);
  for (std::size_t n = 2;; n += 2) {
    if (n >= c.size()) throw AccuracyError("li2 Bernoulli series did not converge");
    pw = pw * w2;
    HPComplex add = pw * c[n];
    sum += add;
    if (hp::abs(add) <= eps * hp::abs(sum)) break;
  }
  return sum;
}

HPComplex li2_unit_disk(const HPComplex& z) {
  Bits bits = z.bits();
  HPReal half(0.5, bits);
  if (hp::abs(z) <= half) return li2_series(z);
  HPComplex omz = HPComplex(HPReal(1.0, bits)) - z;
  if (hp::abs(omz) <= half) {
    HPReal pi = HPReal::pi(bits);
    if (omz.is_zero()) return HPComplex(pi * pi / 6L);
    return HPComplex(pi * pi / 6L) - principal_log(z) * principal_log(omz) - li2_series(omz);
  }
  return li2_bernoulli(z);
}

// Clausen coefficients zeta(2k)/((2 pi)^{2k} k (2k+1)).
const std::vector<double>& clausen_coefficients() {
  static const std::vector<double> c = [] {
    std::vector<double> v;
    for (int k = 1; k <= 40; ++k) {
      double zeta = std::riemann_zeta(2.0 * k);
      v.push_back(zeta / (std::pow(2.0 * M_PI, 2.0 * k) * k * (2.0 * k + 1.0)));
    }
    return v;
  }();
  return c;
}

double clausen2(double theta) {
  // 0 <= theta <= pi
  if (theta == 0.0) return 0.0;
  const auto& c = clausen_coefficients();
  double t2 = theta * theta, p = theta, s = theta - theta * std::log(theta);
  for (double ck : c) {
    p *= t2;
    double add = ck * p;
    s += add;
    if (std::abs(add) < 1e-18 * std::abs(s)) break;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Legendre over a list of initial panels. The integrand maps a
// real abscissa to a fixed-length vector of complex values; a panel is
// accepted when every component of the n-point and (n-8)-point rules agree.

constexpr int kHighOrder = 48;
constexpr int kLowOrder = 40;

struct AcceptedPanel {
  HPReal a, b;
};

struct AdaptiveOutcome {
  std::vector<HPComplex> value;
  HPReal error;
  int nodes = 0;
  bool converged = true;
  std::vector<AcceptedPanel> panels;
};

template <class F>
AdaptiveOutcome adaptive_gauss(F&& f, std::size_t components, const std::vector<HPReal>& breaks,
                               const HPReal& tol, Bits bits) {
  const GaussRule& hi = gauss_legendre(kHighOrder, bits);
  const GaussRule& lo = gauss_legendre(kLowOrder, bits);
  AdaptiveOutcome out;
  out.error = HPReal::zero(bits);
  for (std::size_t c = 0; c < components; ++c) out.value.emplace_back(HPReal::zero(bits));
  HPReal length = breaks.back() - breaks.front();

  struct Item {
    HPReal a, b;
    int depth;
  };
  std::vector<Item> stack;
  for (std::size_t i = breaks.size() - 1; i > 0; --i) stack.push_back({breaks[i - 1], breaks[i], 0});

  auto apply = [&](const GaussRule& rule, const HPReal& a, const HPReal& b) {
    HPReal mid = (a + b) / 2L, half = (b - a) / 2L;
    std::vector<HPComplex> acc(components, HPComplex(HPReal::zero(bits)));
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      std::vector<HPComplex> v = f(mid + half * rule.x[i]);
      for (std::size_t c = 0; c < components; ++c) acc[c] += v[c] * rule.w[i];
    }
    for (auto& x : acc) x = x * half;
    out.nodes += static_cast<int>(rule.x.size());
    return acc;
  };

  const HPReal floor_share = HPReal(1.0 / 256.0, bits);
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    auto qh = apply(hi, it.a, it.b);
    auto ql = apply(lo, it.a, it.b);
    HPReal err = HPReal::zero(bits);
    for (std::size_t c = 0; c < components; ++c) err = hp::max(err, hp::abs(qh[c] - ql[c]));
    HPReal share = hp::max((it.b - it.a) / length, floor_share);
    if (err <= tol * share || it.depth >= 48) {
      if (!(err <= tol * share)) out.converged = false;
      for (std::size_t c = 0; c < components; ++c) out.value[c] += qh[c];
      out.error = out.error + err;
      out.panels.push_back({it.a, it.b});
      continue;
    }
    HPReal mid = (it.a + it.b) / 2L;
    stack.push_back({mid, it.b, it.depth + 1});
    stack.push_back({it.a, mid, it.depth + 1});
  }
  return out;
}

std::vector<HPReal> uniform_breaks(const HPReal& a, const HPReal& b, int panels) {
  std::vector<HPReal> br;
  for (int i = 0; i <= panels; ++i) br.push_back(a + (b - a) * static_cast<long>(i) / static_cast<long>(panels));
  return br;
}

// Tail bound exponent: beyond X the rays contribute below 2^{-target} * scale.
double ray_cutoff(double kappa, double g, double target_bits, double scale, bool derivative) {
  double X = 4.0;
  for (int it = 0; it < 30; ++it) {
    double denom = kappa * (1.0 - std::exp(-2.0 * X / g)) * (derivative ? 1.0 : X);
    double next = (target_bits * std::log(2.0) + std::log(std::max(scale, 1.0)) + std::log(8.0 / denom)) / kappa;
    next = std::max(next, 2.0);
    if (std::abs(next - X) < 1e-6) break;
    X = next;
  }
  return X;
}

double tail_estimate(double kappa, double g, double X, bool derivative) {
  double denom = kappa * (1.0 - std::exp(-2.0 * X / g)) * (derivative ? 1.0 : X);
  return 8.0 * std::exp(-kappa * X) / denom;
}

PhiValue phi_impl(const HPComplex& t, const RootSpec& root, const ContourSpec& contour,
                  const PrecisionContext& ctx, bool derivative) {
  Bits bits = ctx.working();
  HPReal re = t.re;
  if (!(re.sign() > 0 && re < HPReal(1.0, bits)))
    throw DomainError("phi: need 0 < Re t < 1, got Re t = " + re.to_string(12));
  if (contour.panels < 1) throw DomainError("phi: panels must be positive");
  HPReal g = root.denom(bits);
  HPComplex a = t.rounded(bits) * 2L - HPReal(1.0, bits);
  double gd = g.to_double();
  double kappa = 1.0 + 1.0 / gd - std::abs(a.re.to_double());
  if (kappa <= 0) throw DomainError("phi: integrand does not decay");
  double scale = std::max(1.0, gd);
  double X = contour.X > 0 ? contour.X : ray_cutoff(kappa, gd, ctx.bits + 10.0, scale, derivative);
  HPReal tol = pow2(-static_cast<long>(ctx.bits) - 4, bits) * scale;

  // rays: value sinh(a y)/(2 y sinh y sinh(y/g)); derivative cosh(a y)/(sinh y sinh(y/g))
  auto ray = [&](const HPReal& y) {
    HPComplex ay = a * y;
    HPReal den = hp::sinh(y) * hp::sinh(y / g);
    if (derivative) return std::vector<HPComplex>{hp::cosh(ay) / den};
    return std::vector<HPComplex>{hp::sinh(ay) / (den * y * 2L)};
  };
  // arc, theta in [0, pi]: value -i e^{az}/(4 sinh z sinh(z/g)); derivative -i z e^{az}/(2 ...)
  auto arc = [&](const HPReal& theta) {
    HPComplex z = hp::expi(theta);
    HPComplex v = hp::exp(a * z) / (hp::sinh(z) * hp::sinh(z / g));
    v = derivative ? v * z / 2L : v / 4L;
    return std::vector<HPComplex>{HPComplex(v.im, -v.re)};
  };

  auto rays = adaptive_gauss(ray, 1, uniform_breaks(HPReal(1.0, bits), HPReal(X, bits), contour.panels), tol, bits);
  auto arcs = adaptive_gauss(arc, 1, uniform_breaks(HPReal::zero(bits), HPReal::pi(bits), 8), tol, bits);

  PhiValue out;
  out.value = (rays.value[0] + arcs.value[0]).rounded(ctx.bits);
  double tail = tail_estimate(kappa, gd, X, derivative);
  out.error = (rays.error + arcs.error).to_double() + tail;
  out.nodes = rays.nodes + arcs.nodes;
  if (!rays.converged || !arcs.converged || tail > std::ldexp(scale, -static_cast<int>(ctx.bits) / 2))
    throw AccuracyError("phi quadrature did not converge", out.error);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

HPComplex li2(const HPComplex& z, CutSide side) {
  Bits bits = z.bits();
  if (z.is_zero()) return HPComplex(HPReal::zero(bits));
  HPReal one(1.0, bits);
  HPReal pi = HPReal::pi(bits);
  bool near_cut = z.re > one && hp::abs(z.im) <= pow2(-static_cast<long>(bits) / 2, bits);
  if (near_cut) {
    if (side == CutSide::None)
      throw BranchError("li2: argument on the branch cut (1, inf) needs a side");
    // Inversion with log(-z) continued from the requested side.
    HPReal theta = hp::atan2(z.im, z.re);
    HPReal arg = side == CutSide::Above ? theta - pi : theta + pi;
    HPComplex lg(hp::log(hp::abs(z)), arg);
    return -li2_unit_disk(HPComplex(one) / z) - HPComplex(pi * pi / 6L) - lg * lg / 2L;
  }
  if (z.im.is_zero() && z.re == one) return HPComplex(pi * pi / 6L);
  if (hp::norm(z) > one) {
    HPComplex lg = principal_log(-z);
    return -li2_unit_disk(HPComplex(one) / z) - HPComplex(pi * pi / 6L) - lg * lg / 2L;
  }
  return li2_unit_disk(z);
}

HPReal lobachevsky(const HPReal& t) {
  Bits bits = t.bits();
  HPReal r = t - hp::floor(t);
  HPReal twice = r * 2L;
  if (r.is_zero() || twice == HPReal(1.0, bits)) return HPReal::zero(bits);
  HPComplex z = unit_exponential(HPComplex(r, HPReal::zero(bits)));
  return li2(z).im / (HPReal::pi(bits) * 2L);
}

double lobachevsky_fast(double t) {
  double r = t - std::floor(t);
  double theta = 2.0 * M_PI * r;
  // Lambda(t) = Cl2(2 pi t) / (2 pi)
  if (theta <= M_PI) return clausen2(theta) / (2.0 * M_PI);
  return -clausen2(2.0 * M_PI - theta) / (2.0 * M_PI);
}

HPComplex log_one_minus_unit(const HPComplex& u) {
  // 1 - e^{2 pi i u} = -2i e^{pi i u} sin(pi u), free of cancellation near u = 0.
  Bits bits = u.bits();
  HPComplex piu = u * HPReal::pi(bits);
  HPComplex v = hp::times_i(hp::exp(hp::times_i(piu)) * hp::sin(piu)) * -2L;
  return principal_log(v);
}

const GaussRule& gauss_legendre(int n, Bits bits) {
  static std::mutex mu;
  static std::map<std::pair<int, Bits>, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, bits}];
  if (slot) return *slot;
  auto rule = std::make_unique<GaussRule>();
  rule->x.resize(n);
  rule->w.resize(n);
  HPReal eps = pow2(-static_cast<long>(bits) + 4, bits);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    HPReal x(std::cos(M_PI * (i + 0.75) / (n + 0.5)), bits);
    HPReal dp(0.0, bits);
    for (int iter = 0; iter < 100; ++iter) {
      HPReal p0(1.0, bits), p1 = x;
      for (int k = 2; k <= n; ++k) {
        HPReal p2 = (x * p1 * static_cast<long>(2 * k - 1) - p0 * static_cast<long>(k - 1)) / static_cast<long>(k);
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      dp = (x * p1 - p0) * static_cast<long>(n) / (x * x - 1.0);
      HPReal dx = p1 / dp;
      x = x - dx;
      if (hp::abs(dx) <= eps) {
        if (iter > 0) break;
      }
    }
    HPReal w = HPReal(2.0, bits) / ((HPReal(1.0, bits) - x * x) * dp * dp);
    rule->x[i] = -x;
    rule->x[n - 1 - i] = x;
    rule->w[i] = w;
    rule->w[n - 1 - i] = w;
  }
  if (n % 2) rule->x[n / 2] = HPReal::zero(bits);
  slot = std::move(rule);
  return *slot;
}

PhiValue phi(const HPComplex& t, const RootSpec& root, const ContourSpec& contour,
             const PrecisionContext& ctx) {
  return phi_impl(t, root, contour, ctx, false);
}

PhiValue phi_prime(const HPComplex& t, const RootSpec& root, const ContourSpec& contour,
                   const PrecisionContext& ctx) {
  return phi_impl(t, root, contour, ctx, true);
}

// ---------------------------------------------------------------------------

namespace {

template <class R>
typename Field<R>::Complex to_field(const HPComplex& z) {
  return Field<R>::make(Field<R>::of(z.re), Field<R>::of(z.im));
}

inline long double to_double_like(long double x) { return x; }
inline long double to_double_like(const HPReal& x) { return x.to_long_double(); }

}  // namespace

template <class R>
PhiEvaluator<R>::PhiEvaluator(const RootSpec& root, Bits bits, double max_imag) : root_(root) {
  constexpr bool extended = std::is_same_v<R, long double>;
  const Bits build = extended ? 128 : bits;
  const long target = extended ? 68 : static_cast<long>(bits) - 16;
  if (max_imag < 0) throw DomainError("max_imag must be non-negative");

  HPReal g = root.denom(build);
  double gd = g.to_double();
  double scale = std::max(1.0, gd);
  HPReal tol = pow2(-target, build) * scale;
  double X = ray_cutoff(1.0, gd, static_cast<double>(target), scale, true);

  // Arguments a = 2t - 1 the node set must serve: |Re a| <= 1/g, |Im a| <= 2 max_imag.
  HPReal ra = HPReal(1.0, build) / g;
  HPReal ia(2.0 * max_imag, build);
  std::vector<HPComplex> probes = {HPComplex(ra, HPReal::zero(build)), HPComplex(-ra, HPReal::zero(build)),
                                   HPComplex(ra, ia), HPComplex(-ra, -ia), HPComplex(HPReal::zero(build), ia)};

  auto ray = [&](const HPReal& y) {
    HPReal den = hp::sinh(y) * hp::sinh(y / g);
    std::vector<HPComplex> v;
    for (const auto& a : probes) v.push_back(hp::sinh(a * y) / (den * y * 2L));
    v.push_back(hp::cosh(probes[0] * y) / den);
    v.push_back(hp::cosh(probes[2] * y) / den);
    return v;
  };
  auto arc = [&](const HPReal& theta) {
    HPComplex z = hp::expi(theta);
    HPComplex base = HPComplex(HPReal(1.0, build)) / (hp::sinh(z) * hp::sinh(z / g));
    std::vector<HPComplex> v;
    for (const auto& a : probes) v.push_back(hp::exp(a * z) * base / 4L);
    v.push_back(hp::exp(probes[0] * z) * base * z / 2L);
    v.push_back(hp::exp(probes[2] * z) * base * z / 2L);
    return v;
  };

  auto rays = adaptive_gauss(ray, probes.size() + 2, uniform_breaks(HPReal(1.0, build), HPReal(X, build), 64), tol, build);
  auto arcs = adaptive_gauss(arc, probes.size() + 2, uniform_breaks(HPReal::zero(build), HPReal::pi(build), 8), tol, build);
  if (!rays.converged || !arcs.converged)
    throw AccuracyError("phi evaluator: node construction did not converge", (rays.error + arcs.error).to_double());

  const GaussRule& rule = gauss_legendre(kHighOrder, build);
  for (const auto& pnl : rays.panels) {
    HPReal mid = (pnl.a + pnl.b) / 2L, half = (pnl.b - pnl.a) / 2L;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      HPReal y = mid + half * rule.x[i];
      HPReal w = rule.w[i] * half;
      HPReal den = hp::sinh(y) * hp::sinh(y / g);
      ray_y_.push_back(Field<R>::of(y));
      ray_b_.push_back(Field<R>::of(w / (den * y * 2L)));
      ray_bd_.push_back(Field<R>::of(w / den));
    }
  }
  for (const auto& pnl : arcs.panels) {
    HPReal mid = (pnl.a + pnl.b) / 2L, half = (pnl.b - pnl.a) / 2L;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      HPReal theta = mid + half * rule.x[i];
      HPReal w = rule.w[i] * half;
      HPComplex z = hp::expi(theta);
      HPComplex base = HPComplex(HPReal::zero(build), -w) / (hp::sinh(z) * hp::sinh(z / g));  // -i w / (...)
      arc_z_.push_back(to_field<R>(z));
      arc_a_.push_back(to_field<R>(base / 4L));
      arc_ad_.push_back(to_field<R>(base * z / 2L));
    }
  }
  g_ = Field<R>::of(g);
  if constexpr (extended) {
    pi_ = Field<R>::pi(g_);
  } else {
    pi_ = HPReal::pi(build);
  }
}

template <class R>
long PhiEvaluator<R>::shift_steps(const Complex& t) const {
  long double re = to_double_like(Field<R>::re(t));
  long double g = to_double_like(g_);
  // The integral converges for -1/(2 denom) < Re t < 1 + 1/(2 denom).
  if (!(re > -0.5L / g && re < 1 + 0.5L / g)) throw DomainError("phi: Re t outside the strip of convergence");
  return std::lround((0.5L - re) * g);
}

template <class R>
typename PhiEvaluator<R>::Complex PhiEvaluator<R>::log1m(const Complex& u) const {
  using std::exp;
  using std::log;
  using std::sin;
  Complex piu = u * pi_;
  Complex v = Field<R>::i_times(exp(Field<R>::i_times(piu)) * sin(piu)) * Real(-2.0);
  return log(v);
}

template <class R>
typename PhiEvaluator<R>::Complex PhiEvaluator<R>::central(const Complex& t) const {
  using std::exp;
  Complex a = t * Real(2.0) - Real(1.0);
  Complex sum = Field<R>::make(Real(0.0) * g_, Real(0.0) * g_);
  for (std::size_t j = 0; j < ray_y_.size(); ++j) {
    Complex e = exp(a * ray_y_[j]);
    Complex sh = (e - Real(1.0) / e) * Real(0.5);
    sum += sh * ray_b_[j];
  }
  for (std::size_t k = 0; k < arc_z_.size(); ++k) sum += arc_a_[k] * exp(a * arc_z_[k]);
  return sum;
}

template <class R>
typename PhiEvaluator<R>::Complex PhiEvaluator<R>::central_derivative(const Complex& t) const {
  using std::exp;
  Complex a = t * Real(2.0) - Real(1.0);
  Complex sum = Field<R>::make(Real(0.0) * g_, Real(0.0) * g_);
  for (std::size_t j = 0; j < ray_y_.size(); ++j) {
    Complex e = exp(a * ray_y_[j]);
    Complex ch = (e + Real(1.0) / e) * Real(0.5);
    sum += ch * ray_bd_[j];
  }
  for (std::size_t k = 0; k < arc_z_.size(); ++k) sum += arc_ad_[k] * exp(a * arc_z_[k]);
  return sum;
}

template <class R>
typename PhiEvaluator<R>::Complex PhiEvaluator<R>::operator()(const Complex& t) const {
  long j = shift_steps(t);
  Complex inv_g = Field<R>::make(Real(1.0) / g_, Real(0.0) * g_);
  Complex val = central(t + inv_g * Real(static_cast<double>(j)));
  for (long i = 0; i < j; ++i) val += log1m(t + inv_g * Real(i + 0.5));
  for (long i = j; i < 0; ++i) val -= log1m(t + inv_g * Real(i + 0.5));
  return val;
}

template <class R>
typename PhiEvaluator<R>::Complex PhiEvaluator<R>::derivative(const Complex& t) const {
  using std::exp;
  long j = shift_steps(t);
  Complex inv_g = Field<R>::make(Real(1.0) / g_, Real(0.0) * g_);
  Complex val = central_derivative(t + inv_g * Real(static_cast<double>(j)));
  // d/du log(1 - e^{2 pi i u}) = -2 pi i e^{2 pi i u} / (1 - e^{2 pi i u})
  auto dlog = [&](const Complex& u) {
    Complex e = exp(Field<R>::i_times(u * (pi_ * Real(2.0))));
    return Field<R>::i_times(e / (Real(1.0) - e)) * (pi_ * Real(-2.0));
  };
  for (long i = 0; i < j; ++i) val += dlog(t + inv_g * Real(i + 0.5));
  for (long i = j; i < 0; ++i) val -= dlog(t + inv_g * Real(i + 0.5));
  return val;
}

template class PhiEvaluator<long double>;
template class PhiEvaluator<hp::Real>;

template <class R>
std::shared_ptr<const PhiEvaluator<R>> shared_phi_evaluator(const RootSpec& root, Bits bits) {
  static std::mutex mu;
  static std::map<std::tuple<int, long, Bits>, std::shared_ptr<const PhiEvaluator<R>>> cache;
  if constexpr (std::is_same_v<R, long double>) bits = 0;
  auto key = std::make_tuple(root.N, root.M, bits);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto ev = std::make_shared<const PhiEvaluator<R>>(root, bits);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, ev).first->second;
}

template std::shared_ptr<const PhiEvaluator<long double>> shared_phi_evaluator(const RootSpec&, Bits);
template std::shared_ptr<const PhiEvaluator<hp::Real>> shared_phi_evaluator(const RootSpec&, Bits);

}  // namespace twistjones
