#include "twistjones/numerics.hpp"

#include <climits>
#include <cmath>
#include <ostream>
#include <utility>

namespace twistjones {

void PrecisionContext::validate() const {
  if (bits < 64) throw DomainError("precision below 64 bits: " + std::to_string(bits));
  if (guard_bits < 32) throw DomainError("guard bits below 32: " + std::to_string(guard_bits));
}

PrecisionContext PrecisionContext::for_color(int N, unsigned guard_bits) {
  if (N < 1) throw DomainError("color must be positive, got " + std::to_string(N));
  unsigned bits = 256;
  if (N > 100) bits += static_cast<unsigned>(std::ceil(1.5 * N));
  return PrecisionContext(bits, guard_bits);
}

namespace hp {

namespace {

thread_local Bits tl_default_bits = 320;

inline void require_finite(mpfr_srcptr x, const char* where) {
  if (!mpfr_number_p(x)) throw DomainError(std::string("non-finite result in ") + where);
}

inline bool moved_from(mpfr_srcptr x) { return x->_mpfr_d == nullptr; }

template <class F>
Real binary(const Real& a, const Real& b, F f, const char* where) {
  Real r = Real::zero(std::max(a.bits(), b.bits()));
  f(r.get(), a.get(), b.get(), MPFR_RNDN);
  require_finite(r.get(), where);
  return r;
}

template <class F>
Real unary(const Real& a, F f, const char* where) {
  Real r = Real::zero(a.bits());
  f(r.get(), a.get(), MPFR_RNDN);
  require_finite(r.get(), where);
  return r;
}

}  // namespace

Bits default_bits() { return tl_default_bits; }

PrecisionScope::PrecisionScope(Bits bits) : saved_(tl_default_bits) {
  if (bits < MPFR_PREC_MIN) throw DomainError("invalid precision");
  tl_default_bits = bits;
}

PrecisionScope::~PrecisionScope() { tl_default_bits = saved_; }

Real::Real() {
  mpfr_init2(v_, tl_default_bits);
  mpfr_set_zero(v_, 1);
}

Real::Real(double v) : Real(v, tl_default_bits) {}
Real::Real(int v) : Real(static_cast<long>(v)) {}

Real::Real(long v) {
  mpfr_init2(v_, tl_default_bits);
  mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(double v, Bits bits) {
  mpfr_init2(v_, bits);
  mpfr_set_d(v_, v, MPFR_RNDN);
  check("construction from double");
}

Real::Real(const std::string& decimal, Bits bits) {
  mpfr_init2(v_, bits);
  if (mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0) {
    mpfr_clear(v_);
    throw DomainError("cannot parse number: " + decimal);
  }
}

Real Real::zero(Bits bits) {
  Real r(0.0, bits);
  return r;
}

Real Real::pi(Bits bits) {
  Real r = zero(bits);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

Real Real::ln2(Bits bits) {
  Real r = zero(bits);
  mpfr_const_log2(r.v_, MPFR_RNDN);
  return r;
}

Real::Real(const Real& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept {
  v_[0] = o.v_[0];
  o.v_[0]._mpfr_d = nullptr;
}

Real& Real::operator=(const Real& o) {
  if (this == &o) return *this;
  if (moved_from(v_)) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
  } else if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
  }
  mpfr_set(v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator=(Real&& o) noexcept {
  std::swap(v_[0], o.v_[0]);
  return *this;
}

Real::~Real() {
  if (!moved_from(v_)) mpfr_clear(v_);
}

Real& Real::set_bits(Bits bits) {
  mpfr_prec_round(v_, bits, MPFR_RNDN);
  return *this;
}

Real Real::rounded(Bits bits) const {
  Real r = zero(bits);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

long Real::exponent() const {
  if (mpfr_zero_p(v_)) return LONG_MIN / 4;
  return mpfr_get_exp(v_);
}

std::string Real::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", std::max(digits - 1, 0), v_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

void Real::check(const char* where) const { require_finite(v_, where); }

Real& Real::operator+=(const Real& o) { return *this = *this + o; }
Real& Real::operator-=(const Real& o) { return *this = *this - o; }
Real& Real::operator*=(const Real& o) { return *this = *this * o; }
Real& Real::operator/=(const Real& o) { return *this = *this / o; }

Real Real::operator-() const { return unary(*this, mpfr_neg, "negation"); }

Real operator+(const Real& a, const Real& b) { return binary(a, b, mpfr_add, "addition"); }
Real operator-(const Real& a, const Real& b) { return binary(a, b, mpfr_sub, "subtraction"); }
Real operator*(const Real& a, const Real& b) { return binary(a, b, mpfr_mul, "multiplication"); }

Real operator/(const Real& a, const Real& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  return binary(a, b, mpfr_div, "division");
}

#define TJ_REAL_DOUBLE_OP(op, fn)                          \
  Real operator op(const Real& a, double b) {              \
    Real r = Real::zero(a.bits());                         \
    fn(r.get(), a.get(), b, MPFR_RNDN);                    \
    require_finite(r.get(), #op);                          \
    return r;                                              \
  }

TJ_REAL_DOUBLE_OP(+, mpfr_add_d)
TJ_REAL_DOUBLE_OP(-, mpfr_sub_d)
TJ_REAL_DOUBLE_OP(*, mpfr_mul_d)
#undef TJ_REAL_DOUBLE_OP

Real operator/(const Real& a, double b) {
  if (b == 0.0) throw DomainError("division by zero");
  Real r = Real::zero(a.bits());
  mpfr_div_d(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}

Real operator+(double a, const Real& b) { return b + a; }
Real operator*(double a, const Real& b) { return b * a; }

Real operator-(double a, const Real& b) {
  Real r = Real::zero(b.bits());
  mpfr_d_sub(r.get(), a, b.get(), MPFR_RNDN);
  require_finite(r.get(), "subtraction");
  return r;
}

Real operator/(double a, const Real& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  Real r = Real::zero(b.bits());
  mpfr_d_div(r.get(), a, b.get(), MPFR_RNDN);
  require_finite(r.get(), "division");
  return r;
}

Real operator*(const Real& a, long b) {
  Real r = Real::zero(a.bits());
  mpfr_mul_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}
Real operator*(long a, const Real& b) { return b * a; }
Real operator*(const Real& a, int b) { return a * static_cast<long>(b); }
Real operator*(int a, const Real& b) { return b * static_cast<long>(a); }

Real operator/(const Real& a, long b) {
  if (b == 0) throw DomainError("division by zero");
  Real r = Real::zero(a.bits());
  mpfr_div_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, int b) { return a / static_cast<long>(b); }

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }
bool operator!=(const Real& a, const Real& b) { return !(a == b); }

Real abs(const Real& x) { return unary(x, mpfr_abs, "abs"); }

Real sqrt(const Real& x) {
  if (x.sign() < 0) throw DomainError("square root of negative real");
  return unary(x, mpfr_sqrt, "sqrt");
}

Real exp(const Real& x) { return unary(x, mpfr_exp, "exp"); }
Real expm1(const Real& x) { return unary(x, mpfr_expm1, "expm1"); }

Real log(const Real& x) {
  if (x.sign() <= 0) throw DomainError("logarithm of non-positive real");
  return unary(x, mpfr_log, "log");
}

Real log1p(const Real& x) { return unary(x, mpfr_log1p, "log1p"); }
Real sin(const Real& x) { return unary(x, mpfr_sin, "sin"); }
Real cos(const Real& x) { return unary(x, mpfr_cos, "cos"); }

void sin_cos(const Real& x, Real& s, Real& c) {
  s = Real::zero(x.bits());
  c = Real::zero(x.bits());
  mpfr_sin_cos(s.get(), c.get(), x.get(), MPFR_RNDN);
}

Real tan(const Real& x) { return unary(x, mpfr_tan, "tan"); }
Real sinh(const Real& x) { return unary(x, mpfr_sinh, "sinh"); }
Real cosh(const Real& x) { return unary(x, mpfr_cosh, "cosh"); }
Real atan2(const Real& y, const Real& x) { return binary(y, x, mpfr_atan2, "atan2"); }
Real hypot(const Real& x, const Real& y) { return binary(x, y, mpfr_hypot, "hypot"); }

Real floor(const Real& x) {
  Real r = Real::zero(x.bits());
  mpfr_floor(r.get(), x.get());
  return r;
}

Real round(const Real& x) {
  Real r = Real::zero(x.bits());
  mpfr_round(r.get(), x.get());
  return r;
}

Real pow(const Real& x, long n) {
  Real r = Real::zero(x.bits());
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  require_finite(r.get(), "pow");
  return r;
}

Real ldexp(const Real& x, long e) {
  Real r = Real::zero(x.bits());
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

Real zeta_ui(unsigned long n, Bits bits) {
  if (n < 2) throw DomainError("zeta pole at 1");
  Real r = Real::zero(bits);
  mpfr_zeta_ui(r.get(), n, MPFR_RNDN);
  return r;
}

std::ostream& operator<<(std::ostream& os, const Real& x) {
  auto digits = static_cast<int>(os.precision());
  return os << x.to_string(digits > 0 ? digits : 17);
}

Complex& Complex::set_bits(Bits bits) {
  re.set_bits(bits);
  im.set_bits(bits);
  return *this;
}

Complex Complex::rounded(Bits bits) const { return Complex(re.rounded(bits), im.rounded(bits)); }

Complex& Complex::operator+=(const Complex& o) { return *this = *this + o; }
Complex& Complex::operator-=(const Complex& o) { return *this = *this - o; }
Complex& Complex::operator*=(const Complex& o) { return *this = *this * o; }
Complex& Complex::operator/=(const Complex& o) { return *this = *this / o; }

Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }

Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

Complex operator/(const Complex& a, const Complex& b) {
  if (b.is_zero()) throw DomainError("complex division by zero");
  Real d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

Complex operator*(const Complex& a, const Real& b) { return {a.re * b, a.im * b}; }
Complex operator*(const Real& a, const Complex& b) { return b * a; }
Complex operator/(const Complex& a, const Real& b) { return {a.re / b, a.im / b}; }
Complex operator+(const Complex& a, const Real& b) { return {a.re + b, a.im}; }
Complex operator-(const Complex& a, const Real& b) { return {a.re - b, a.im}; }
Complex operator+(const Real& a, const Complex& b) { return {a + b.re, b.im}; }
Complex operator-(const Real& a, const Complex& b) { return {a - b.re, -b.im}; }
Complex operator*(const Complex& a, double b) { return {a.re * b, a.im * b}; }
Complex operator*(double a, const Complex& b) { return b * a; }
Complex operator/(const Complex& a, double b) { return {a.re / b, a.im / b}; }
Complex operator+(const Complex& a, double b) { return {a.re + b, a.im}; }
Complex operator-(const Complex& a, double b) { return {a.re - b, a.im}; }
Complex operator-(double a, const Complex& b) { return {a - b.re, -b.im}; }
Complex operator+(double a, const Complex& b) { return b + a; }

Complex conj(const Complex& z) { return {z.re, -z.im}; }
Real abs(const Complex& z) { return hypot(z.re, z.im); }
Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }

Real arg(const Complex& z) {
  if (z.is_zero()) throw DomainError("argument of zero");
  // Signed zero in the imaginary part must not flip the branch to -pi.
  if (z.im.is_zero()) return z.re.sign() < 0 ? Real::pi(z.bits()) : Real::zero(z.bits());
  return atan2(z.im, z.re);
}

Complex exp(const Complex& z) {
  Real m = exp(z.re);
  Real s, c;
  sin_cos(z.im, s, c);
  return {m * c, m * s};
}

Complex times_i(const Complex& z) { return {-z.im, z.re}; }

Complex log(const Complex& z) {
  if (z.is_zero()) throw DomainError("logarithm of zero");
  return {log(abs(z)), arg(z)};
}

Complex sqrt(const Complex& z) {
  Bits b = z.bits();
  if (z.is_zero()) return Complex(Real::zero(b), Real::zero(b));
  Real r = abs(z);
  if (z.re.sign() >= 0) {
    Real w = sqrt((r + z.re) / 2L);
    return {w, z.im / (w * 2L)};
  }
  Real w = sqrt((r - z.re) / 2L);
  Real re = abs(z.im) / (w * 2L);
  return {re, z.im.sign() < 0 ? -w : w};
}

Complex sin(const Complex& z) {
  Real s, c;
  sin_cos(z.re, s, c);
  return {s * cosh(z.im), c * sinh(z.im)};
}

Complex cos(const Complex& z) {
  Real s, c;
  sin_cos(z.re, s, c);
  return {c * cosh(z.im), -(s * sinh(z.im))};
}

Complex sinh(const Complex& z) {
  Real s, c;
  sin_cos(z.im, s, c);
  return {sinh(z.re) * c, cosh(z.re) * s};
}

Complex cosh(const Complex& z) {
  Real s, c;
  sin_cos(z.im, s, c);
  return {cosh(z.re) * c, sinh(z.re) * s};
}

Complex pow(const Complex& z, const Real& a) { return exp(log(z) * a); }

Complex pow(const Complex& z, long n) {
  Bits b = z.bits();
  Complex result(Real(1.0, b), Real::zero(b));
  Complex base = z;
  unsigned long k = n < 0 ? static_cast<unsigned long>(-(n + 1)) + 1UL : static_cast<unsigned long>(n);
  while (k) {
    if (k & 1UL) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return n < 0 ? Complex(Real(1.0, b)) / result : result;
}

Complex expi(const Real& theta) {
  Real s, c;
  sin_cos(theta, s, c);
  return {c, s};
}

std::ostream& operator<<(std::ostream& os, const Complex& z) {
  os << z.re << (z.im.sign() < 0 ? " - " : " + ") << abs(z.im) << "i";
  return os;
}

Accumulator::Accumulator(Bits bits)
    : sr_(Real::zero(bits)), cr_(Real::zero(bits)), si_(Real::zero(bits)), ci_(Real::zero(bits)) {}

void Accumulator::step(Real& s, Real& c, const Real& x) {
  Real t = s + x;
  if (abs(s) >= abs(x)) {
    c += (s - t) + x;
  } else {
    c += (x - t) + s;
  }
  s = std::move(t);
}

void Accumulator::add(const Complex& z) {
  step(sr_, cr_, z.re);
  step(si_, ci_, z.im);
}

Complex Accumulator::sum() const { return {sr_ + cr_, si_ + ci_}; }

}  // namespace hp

HPComplex principal_log(const HPComplex& z) { return hp::log(z); }

HPComplex from_cld(const std::complex<long double>& z) {
  HPReal re = HPReal::zero(64), im = HPReal::zero(64);
  mpfr_set_ld(re.get(), z.real(), MPFR_RNDN);
  mpfr_set_ld(im.get(), z.imag(), MPFR_RNDN);
  return {re, im};
}

HPComplex unit_exponential(const HPComplex& t) {
  hp::Bits b = t.bits();
  // Reduce the real part mod 1 before multiplying by 2 pi.
  HPReal frac = t.re - hp::round(t.re);
  HPReal two_pi = HPReal::pi(b) * 2L;
  HPReal mod = hp::exp(-(two_pi * t.im));
  return hp::expi(two_pi * frac) * mod;
}

HPComplex principal_sqrt(const HPComplex& z) {
  if (z.is_zero()) throw DomainError("principal square root of zero");
  return hp::sqrt(z);
}

double relative_distance(const HPComplex& a, const HPComplex& b) {
  HPReal diff = hp::abs(a - b);
  HPReal scale = hp::max(hp::abs(a), hp::abs(b));
  if (scale.is_zero()) return diff.to_double();
  return (diff / scale).to_double();
}

}  // namespace twistjones
