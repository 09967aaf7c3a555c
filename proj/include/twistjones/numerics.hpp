#pragma once

// Arbitrary-precision real/complex scalars on top of MPFR.
//
// Every Real owns its precision. Binary operations produce a result at the
// larger of the two operand precisions; doubles and integers are converted at
// the precision of the Real they are combined with. Non-finite results are
// never returned: they raise DomainError.

#include <mpfr.h>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "twistjones/errors.hpp"

namespace twistjones {

struct PrecisionContext {
  unsigned bits = 256;
  unsigned guard_bits = 64;

  PrecisionContext() = default;
  PrecisionContext(unsigned b, unsigned g = 64) : bits(b), guard_bits(g) { validate(); }

  unsigned working() const { return bits + guard_bits; }
  void validate() const;

  // 256 bits up to N = 100, then 256 + ceil(1.5 N).
  static PrecisionContext for_color(int N, unsigned guard_bits = 64);
  PrecisionContext doubled() const { return PrecisionContext(2 * bits, guard_bits); }
};

namespace hp {

using Bits = mpfr_prec_t;

Bits default_bits();

// Sets the thread-local precision used by default-constructed Reals.
class PrecisionScope {
public:
  explicit PrecisionScope(Bits bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
  Bits saved_;
};

class Real {
public:
  Real();
  Real(double v);  // NOLINT: implicit so literals mix with Reals
  Real(int v);     // NOLINT
  Real(long v);    // NOLINT
  Real(double v, Bits bits);
  Real(const std::string& decimal, Bits bits);
  static Real zero(Bits bits);
  static Real pi(Bits bits);
  static Real ln2(Bits bits);

  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  ~Real();

  Bits bits() const { return mpfr_get_prec(v_); }
  // Re-rounds in place to a new precision.
  Real& set_bits(Bits bits);
  Real rounded(Bits bits) const;

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  // Binary exponent e with 0.5 <= |x| / 2^e < 1; very negative for zero.
  long exponent() const;
  std::string to_string(int digits) const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  Real operator-() const;

private:
  void check(const char* where) const;
  mpfr_t v_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator+(const Real& a, double b);
Real operator-(const Real& a, double b);
Real operator*(const Real& a, double b);
Real operator/(const Real& a, double b);
Real operator+(double a, const Real& b);
Real operator-(double a, const Real& b);
Real operator*(double a, const Real& b);
Real operator/(double a, const Real& b);
Real operator*(const Real& a, long b);
Real operator*(long a, const Real& b);
Real operator*(const Real& a, int b);
Real operator*(int a, const Real& b);
Real operator/(const Real& a, long b);
Real operator/(const Real& a, int b);

bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);
bool operator!=(const Real& a, const Real& b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real expm1(const Real& x);
Real log(const Real& x);
Real log1p(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
void sin_cos(const Real& x, Real& s, Real& c);
Real tan(const Real& x);
Real sinh(const Real& x);
Real cosh(const Real& x);
Real atan2(const Real& y, const Real& x);
Real hypot(const Real& x, const Real& y);
Real floor(const Real& x);
Real round(const Real& x);
Real pow(const Real& x, long n);
Real ldexp(const Real& x, long e);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
// Riemann zeta at a positive integer.
Real zeta_ui(unsigned long n, Bits bits);

std::ostream& operator<<(std::ostream& os, const Real& x);

class Complex {
public:
  Real re;
  Real im;

  Complex() = default;
  Complex(Real r) : re(std::move(r)), im(Real::zero(re.bits())) {}  // NOLINT
  Complex(double r) : Complex(Real(r)) {}                            // NOLINT
  Complex(int r) : Complex(Real(r)) {}                               // NOLINT
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(double r, double i, Bits bits) : re(r, bits), im(i, bits) {}
  static Complex i(Bits bits) { return Complex(Real::zero(bits), Real(1.0, bits)); }

  Bits bits() const { return std::max(re.bits(), im.bits()); }
  Complex& set_bits(Bits bits);
  Complex rounded(Bits bits) const;
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  std::complex<double> to_cd() const { return {re.to_double(), im.to_double()}; }
  std::complex<long double> to_cld() const { return {re.to_long_double(), im.to_long_double()}; }

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex operator-() const { return Complex(-re, -im); }
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);
Complex operator+(const Complex& a, const Real& b);
Complex operator-(const Complex& a, const Real& b);
Complex operator+(const Real& a, const Complex& b);
Complex operator-(const Real& a, const Complex& b);
Complex operator*(const Complex& a, double b);
Complex operator*(double a, const Complex& b);
Complex operator/(const Complex& a, double b);
Complex operator+(const Complex& a, double b);
Complex operator-(const Complex& a, double b);
Complex operator-(double a, const Complex& b);
Complex operator+(double a, const Complex& b);

Complex conj(const Complex& z);
Real abs(const Complex& z);
Real norm(const Complex& z);
Real arg(const Complex& z);
Complex exp(const Complex& z);
// Multiplies by i.
Complex times_i(const Complex& z);
Complex log(const Complex& z);
Complex sqrt(const Complex& z);
Complex sin(const Complex& z);
Complex cos(const Complex& z);
Complex sinh(const Complex& z);
Complex cosh(const Complex& z);
// z^a on the principal branch, z != 0.
Complex pow(const Complex& z, const Real& a);
Complex pow(const Complex& z, long n);
// e^{i theta} for real theta.
Complex expi(const Real& theta);

std::ostream& operator<<(std::ostream& os, const Complex& z);

// Neumaier-compensated complex accumulator.
class Accumulator {
public:
  explicit Accumulator(Bits bits);
  void add(const Complex& z);
  Complex sum() const;

private:
  Real sr_, cr_, si_, ci_;
  static void step(Real& s, Real& c, const Real& x);
};

}  // namespace hp

using HPReal = hp::Real;
using HPComplex = hp::Complex;

// log z with Im in (-pi, pi]; zero input is a domain error.
HPComplex principal_log(const HPComplex& z);
// Exact conversion of an extended-precision value (64-bit mantissa).
HPComplex from_cld(const std::complex<long double>& z);
// e^{2 pi i t}.
HPComplex unit_exponential(const HPComplex& t);
// Square root with Re >= 0, and Im > 0 when Re == 0.
HPComplex principal_sqrt(const HPComplex& z);

// Largest |a-b| / max(|a|,|b|) style relative distance (absolute when both tiny).
double relative_distance(const HPComplex& a, const HPComplex& b);

// Scalar field traits shared by code that runs in both extended (long
// double) and arbitrary precision.
template <class R>
struct Field;

template <>
struct Field<long double> {
  using Real = long double;
  using Complex = std::complex<long double>;
  static Real pi(const Real&) { return 3.141592653589793238462643383279502884L; }
  static Real of(double v, hp::Bits) { return static_cast<long double>(v); }
  static Real of(const hp::Real& v) { return v.to_long_double(); }
  static hp::Bits bits(const Real&) { return 64; }
  static Complex i_times(const Complex& z) { return {-z.imag(), z.real()}; }
  static Complex make(const Real& r, const Real& i) { return {r, i}; }
  static Real re(const Complex& z) { return z.real(); }
  static Real im(const Complex& z) { return z.imag(); }
};

template <>
struct Field<hp::Real> {
  using Real = hp::Real;
  using Complex = hp::Complex;
  static Real pi(const Real& like) { return Real::pi(like.bits()); }
  static Real of(double v, hp::Bits b) { return Real(v, b); }
  static Real of(const hp::Real& v) { return v; }
  static hp::Bits bits(const Real& x) { return x.bits(); }
  static Complex i_times(const Complex& z) { return hp::times_i(z); }
  static Complex make(const Real& r, const Real& i) { return {r, i}; }
  static const Real& re(const Complex& z) { return z.re; }
  static const Real& im(const Complex& z) { return z.im; }
};

}  // namespace twistjones
