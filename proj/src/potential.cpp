#include "twistjones/potential.hpp"

#include <cmath>

namespace twistjones {

namespace {

using hp::Bits;

Bits bits_of(const HPComplex& t, const HPComplex& s) { return std::max(t.bits(), s.bits()); }

HPComplex li2_unit(const HPComplex& u) { return li2(unit_exponential(u)); }

// 1/(1/e - 1) = e/(1 - e) for e = e^{2 pi i u}.
HPComplex geometric_ratio(const HPComplex& u) {
  HPComplex e = unit_exponential(u);
  return e / (HPReal(1.0, e.bits()) - e);
}

// d^k/du^k of F(u) = Li2(e^{2 pi i u}) / (2 pi i) for 1 <= k <= 4, through
// r = e/(1-e), e = e^{2 pi i u}, using r' = 2 pi i r(1+r).
HPComplex F_derivative(const HPComplex& u, int k) {
  if (k == 1) return -log_one_minus_unit(u);
  Bits bits = u.bits();
  HPComplex D(HPReal::zero(bits), HPReal::pi(bits) * 2L);
  HPComplex r = geometric_ratio(u);
  HPReal one(1.0, bits);
  switch (k) {
    case 2: return D * r;
    case 3: return D * D * r * (r + one);
    case 4: return D * D * D * r * (r + one) * (r * 2L + one);
    default: throw DomainError("F_derivative: order must be 1..4");
  }
}

long double to_ld(long double x) { return x; }
long double to_ld(const HPReal& x) { return x.to_long_double(); }

bool in_range(double x, double lo, double hi, bool open) { return open ? (x > lo && x < hi) : (x >= lo && x <= hi); }

}  // namespace

bool RegionSpec::contains(double t, double s) const {
  if (name == RegionName::D)
    return in_range(t, 0, 1, true) && in_range(s, 0, 1, true) && in_range(t - s, 0, 1, true);
  double e = name == RegionName::DepsPrime ? eps : 0.0;
  return in_range(t - s, 0.02 + e, 0.7 - e, false) && in_range(t + s, 1.02 + e, 1.7 - e, false) &&
         in_range(s, 0.2 + e, 0.8 - e, false) && in_range(t, 0.5 + e, 0.909 - e, false);
}

bool RegionSpec::contains(const HPComplex& t, const HPComplex& s) const {
  if (std::fabs(t.im.to_double()) > 1.0 || std::fabs(s.im.to_double()) > 1.0) return false;
  return contains(t.re.to_double(), s.re.to_double());
}

std::string RegionSpec::label() const {
  switch (name) {
    case RegionName::D: return "D";
    case RegionName::D0prime: return "D0prime";
    case RegionName::DepsPrime: return "DepsPrime(" + std::to_string(eps) + ")";
  }
  return "?";
}

HPComplex V_limit(int p, const HPComplex& t, const HPComplex& s, LatticeIndex idx) {
  Bits bits = bits_of(t, s);
  HPReal pi = HPReal::pi(bits);
  HPComplex poly = s * s * static_cast<long>(2 * p + 1) - s * static_cast<long>(2 * p + 3 + 2 * idx.n) -
                   t * static_cast<long>(2 + 2 * idx.m);
  HPComplex dilogs = li2_unit(t + s) + li2_unit(t - s) - li2_unit(t) * 3L + HPComplex(pi * pi / 6L);
  // (1/(2 pi i)) z = -i z / (2 pi)
  return hp::times_i(poly * pi) - hp::times_i(dilogs) / (pi * 2L);
}

PotentialValue potential_value(int p, const HPComplex& t, const HPComplex& s, LatticeIndex idx) {
  return {V_limit(p, t, s, idx), t, s, p, idx};
}

std::array<HPComplex, 2> grad_V(int p, const HPComplex& t, const HPComplex& s, LatticeIndex idx) {
  Bits bits = bits_of(t, s);
  HPReal pi = HPReal::pi(bits);
  HPComplex Lt = log_one_minus_unit(t), Lp = log_one_minus_unit(t + s), Lm = log_one_minus_unit(t - s);
  HPComplex ipi(HPReal::zero(bits), pi);
  HPComplex dt = Lt * 3L - Lp - Lm - ipi * static_cast<long>(2 + 2 * idx.m);
  HPComplex ds = ipi * s * static_cast<long>(4 * p + 2) - ipi * static_cast<long>(2 * p + 3 + 2 * idx.n) - Lp + Lm;
  return {dt, ds};
}

HPComplex V_partial(int p, const HPComplex& t, const HPComplex& s, int dt, int ds, LatticeIndex idx) {
  if (dt < 0 || ds < 0 || dt + ds > 4) throw DomainError("V_partial: order must be at most 4");
  const int k = dt + ds;
  if (k == 0) return V_limit(p, t, s, idx);
  if (k == 1) return grad_V(p, t, s, idx)[dt == 1 ? 0 : 1];
  Bits bits = bits_of(t, s);
  HPComplex v = F_derivative(t + s, k);
  v = ds % 2 ? v - F_derivative(t - s, k) : v + F_derivative(t - s, k);
  if (ds == 0) v = v - F_derivative(t, k) * 3L;
  if (dt == 0 && ds == 2) v = v + HPComplex(HPReal::zero(bits), HPReal::pi(bits) * static_cast<long>(4 * p + 2));
  return v;
}

HPComplex V1_partial(const HPComplex& t, const HPComplex& s, int dt, int ds) {
  // V1 = 2 pi i t - (L(t+s) + L(t-s))/2 = 2 pi i t + (F'(t+s) + F'(t-s))/2
  if (dt < 0 || ds < 0 || dt + ds > 2) throw DomainError("V1_partial: order must be at most 2");
  Bits bits = bits_of(t, s);
  const int k = dt + ds + 1;
  HPComplex v = F_derivative(t + s, k);
  v = ds % 2 ? v - F_derivative(t - s, k) : v + F_derivative(t - s, k);
  v = v / 2L;
  HPComplex two_pi_i(HPReal::zero(bits), HPReal::pi(bits) * 2L);
  if (dt == 0 && ds == 0) v = v + two_pi_i * t;
  if (dt == 1 && ds == 0) v = v + two_pi_i;
  return v;
}

HPComplex V_correction(int order, int p, const HPComplex& t, const HPComplex& s, long M) {
  if (order == 1) return V1_partial(t, s, 0, 0);
  if (order != 2) throw DomainError("V_correction: order must be 1 or 2");
  // -pi i (6p+4)/12 - pi i/M^2 + (F''(t+s) + F''(t-s))/12 + (1/8 - 1/M^2) F''(t)
  Bits bits = bits_of(t, s);
  HPReal pi = HPReal::pi(bits);
  HPReal inv_m2 = M == 0 ? HPReal::zero(bits) : HPReal(1.0, bits) / (HPReal(static_cast<double>(M), bits) * HPReal(static_cast<double>(M), bits));
  HPComplex v(HPReal::zero(bits), -(pi * static_cast<long>(6 * p + 4) / 12L) - pi * inv_m2);
  v = v + (F_derivative(t + s, 2) + F_derivative(t - s, 2)) / 12L;
  v = v + F_derivative(t, 2) * (HPReal(0.125, bits) - inv_m2);
  return v;
}

HPComplex H_function(int p, const HPComplex& x, const HPComplex& y) {
  HPReal one(1.0, bits_of(x, y));
  HPComplex A = HPComplex(one) / x - one;
  HPComplex B = HPComplex(one) / (x * y) - one;
  HPComplex C = y / x - one;
  long q = 2 * p + 1;
  return (HPComplex(one) / A * -3L + HPComplex(one) / B + HPComplex(one) / C) * q - HPComplex(one) / (A * B) * 3L -
         HPComplex(one) / (A * C) * 3L + HPComplex(one) / (B * C) * 4L;
}

HessianData hessian_and_H(int p, const HPComplex& t, const HPComplex& s) {
  Bits bits = bits_of(t, s);
  HPReal pi = HPReal::pi(bits);
  HPComplex a = geometric_ratio(t), b = geometric_ratio(t + s), c = geometric_ratio(t - s);
  HPComplex two_pi_i(HPReal::zero(bits), pi * 2L);
  HessianData out;
  out.hess[0][0] = two_pi_i * (b + c - a * 3L);
  out.hess[0][1] = two_pi_i * (b - c);
  out.hess[1][0] = out.hess[0][1];
  out.hess[1][1] = two_pi_i * (b + c + HPReal(static_cast<double>(2 * p + 1), bits));
  out.det = out.hess[0][0] * out.hess[1][1] - out.hess[0][1] * out.hess[1][0];
  out.H = H_function(p, unit_exponential(t), unit_exponential(s));
  if (hp::abs(out.det) < hp::ldexp(HPReal(1.0, bits), -static_cast<long>(bits) / 2))
    throw DegeneracyError("hessian: singular at the given point");
  return out;
}

double envelope(double t, double s) {
  return lobachevsky_fast(t + s) + lobachevsky_fast(t - s) - 3.0 * lobachevsky_fast(t);
}

double envelope(double t, double s, const RootSpec& root) {
  double g = static_cast<double>(root.num()) / static_cast<double>(root.den());
  double v = lobachevsky_fast(t + s - 1.0 + 0.5 / g) + lobachevsky_fast(t - s + 0.5 / g);
  if (root.infinite()) return v - 3.0 * lobachevsky_fast(t);
  double h = 1.0 / (static_cast<double>(root.M) * g);
  return v - lobachevsky_fast(t - h) - lobachevsky_fast(t) - lobachevsky_fast(t + h);
}

// ---------------------------------------------------------------------------

template <class R>
FinitePotential<R>::FinitePotential(int p, const RootSpec& root, Bits bits)
    : p_(p), root_(root), bits_(bits), phi_(shared_phi_evaluator<R>(root, bits)) {
  const Real& g = phi_->denom();
  bits_ = Field<R>::bits(g);
  pi_ = Field<R>::pi(g);
  inv_g_ = lit(1.0) / g;
  inv_mg_ = lit(0.0);
  Real c = lit(static_cast<double>(6 * p + 4));
  if (!root.infinite()) {
    Real m = lit(static_cast<double>(root.M));
    inv_mg_ = inv_g_ / m;
    c = c + lit(12.0) / (m * m);
  }
  Real re_part = -(c / (lit(12.0) * g * g)) - lit(1.0) / lit(12.0);
  constant_ = Field<R>::make(lit(0.0), pi_ * re_part);
}

template <class R>
void FinitePotential<R>::check_branch(const Complex& t, const Complex& s) const {
  long double tr = to_ld(Field<R>::re(t)), sr = to_ld(Field<R>::re(s));
  if (!(tr > 0 && tr < 1 && tr - sr > 0 && tr - sr < 1 && tr + sr > 1 && tr + sr < 2))
    throw BranchError("V_finite: need 0 < Re t < 1, 0 < Re(t-s) < 1, 1 < Re(t+s) < 2");
}

template <class R>
typename FinitePotential<R>::Complex FinitePotential<R>::operator()(const Complex& t, const Complex& s,
                                                                   LatticeIndex idx) const {
  check_branch(t, s);
  const PhiEvaluator<R>& phi = *phi_;
  Real half_g = inv_g_ / lit(2.0);
  Complex phis = phi(t + s + half_g - lit(1.0)) + phi(t - s + half_g);
  if (root_.infinite()) {
    phis -= phi(t) * lit(3.0);
  } else {
    phis -= phi(t) + phi(t - inv_mg_) + phi(t + inv_mg_);
  }
  Complex poly = s * s * lit(2.0 * p_ + 1) - s * lit(2.0 * p_ + 3 + 2.0 * idx.n) +
                 t * (inv_g_ * lit(2.0) - lit(2.0 + 2.0 * idx.m));
  return Field<R>::i_times(poly * pi_) + constant_ + phis * inv_g_;
}

template class FinitePotential<long double>;
template class FinitePotential<hp::Real>;

HPComplex V_finite(int p, const HPComplex& t, const HPComplex& s, const RootSpec& root,
                   const PrecisionContext& ctx, LatticeIndex idx) {
  FinitePotential<hp::Real> V(p, root, ctx.working());
  return V(t, s, idx);
}

}  // namespace twistjones
