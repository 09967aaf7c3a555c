#pragma once

// Dilogarithm, Lobachevsky function and the quantum dilogarithm
//
//   phi(t) = int_gamma e^{(2t-1)x} dx / (4 x sinh x sinh(x/denom)),
//
// gamma = (-inf,-1] + upper unit semicircle + [1,inf), for 0 < Re t < 1.

#include <complex>
#include <memory>
#include <vector>

#include "twistjones/numerics.hpp"
#include "twistjones/qjones.hpp"

namespace twistjones {

// Side from which a point on the cut (1, inf) is approached.
enum class CutSide { None, Above, Below };

// Li2 on C \ [1, inf). Points on or within 2^{-bits/2} of the cut need a side.
HPComplex li2(const HPComplex& z, CutSide side = CutSide::None);

// Lambda(t) = Im Li2(e^{2 pi i t}) / (2 pi); odd, period 1.
HPReal lobachevsky(const HPReal& t);
// Double-precision Lambda via the Clausen series, for grid scans.
double lobachevsky_fast(double t);

// log(1 - e^{2 pi i u}), principal branch.
HPComplex log_one_minus_unit(const HPComplex& u);

struct ContourSpec {
  double X = 0.0;   // ray truncation; 0 picks it from the tail bound
  int panels = 64;  // initial subdivisions of each ray
};

struct PhiValue {
  HPComplex value;
  double error = 0.0;  // quadrature error estimate (absolute)
  int nodes = 0;
};

// Direct adaptive quadrature of the contour integral.
PhiValue phi(const HPComplex& t, const RootSpec& root, const ContourSpec& contour,
             const PrecisionContext& ctx);
// Same integral with the t-differentiated integrand (extra factor 2x).
PhiValue phi_prime(const HPComplex& t, const RootSpec& root, const ContourSpec& contour,
                   const PrecisionContext& ctx);

// Gauss-Legendre nodes and weights on [-1, 1] (cached per (n, bits)).
struct GaussRule {
  std::vector<HPReal> x;
  std::vector<HPReal> w;
};
const GaussRule& gauss_legendre(int n, hp::Bits bits);

// Fast evaluator of phi for many arguments at one root.
//
// The functional equation phi(u - 1/(2 denom)) - phi(u + 1/(2 denom)) =
// log(1 - e^{2 pi i u}) moves Re t into [1/2 - 1/(2 denom), 1/2 + 1/(2 denom)],
// where the integrand decays at least like e^{-|x|}; there a fixed node set
// with precomputed weights serves every argument.
template <class R>
class PhiEvaluator {
public:
  using Real = typename Field<R>::Real;
  using Complex = typename Field<R>::Complex;

  // max_imag bounds |Im t| of the arguments the node set is validated for.
  PhiEvaluator(const RootSpec& root, hp::Bits bits, double max_imag = 0.25);

  Complex operator()(const Complex& t) const;
  Complex derivative(const Complex& t) const;
  // phi restricted to the central band (no shifting).
  Complex central(const Complex& t) const;
  Complex central_derivative(const Complex& t) const;

  const Real& denom() const { return g_; }
  std::size_t node_count() const { return ray_y_.size() + arc_z_.size(); }

private:
  long shift_steps(const Complex& t) const;
  Complex log1m(const Complex& u) const;

  RootSpec root_;
  Real g_;
  Real pi_;
  std::vector<Real> ray_y_, ray_b_, ray_bd_;  // phi_rays = sum b sinh(a y)
  std::vector<Complex> arc_z_, arc_a_, arc_ad_;
};

extern template class PhiEvaluator<long double>;
extern template class PhiEvaluator<hp::Real>;

// Process-wide cache of evaluators keyed on (N, M, bits).
template <class R>
std::shared_ptr<const PhiEvaluator<R>> shared_phi_evaluator(const RootSpec& root, hp::Bits bits);

}  // namespace twistjones
