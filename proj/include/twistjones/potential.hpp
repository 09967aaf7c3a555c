#pragma once

// Potential functions of the twist knots.
//
//   V(p,t,s;m,n) = pi i((2p+1)s^2 - (2p+3+2n)s - (2+2m)t)
//                + (Li2(e^{2 pi i(t+s)}) + Li2(e^{2 pi i(t-s)}) - 3 Li2(e^{2 pi i t}) + pi^2/6) / (2 pi i)
//
// and its finite-N counterpart built from the quantum dilogarithm phi, whose
// exponential e^{denom V_N} reproduces the summands of the Jones sum.

#include <array>
#include <memory>
#include <string>

#include "twistjones/numerics.hpp"
#include "twistjones/qjones.hpp"
#include "twistjones/special.hpp"

namespace twistjones {

struct LatticeIndex {
  long m = 0;
  long n = 0;
};

enum class RegionName { D, D0prime, DepsPrime };

struct RegionSpec {
  RegionName name = RegionName::D;
  double eps = 0.0;

  static RegionSpec D() { return {RegionName::D, 0.0}; }
  static RegionSpec D0prime() { return {RegionName::D0prime, 0.0}; }
  static RegionSpec DepsPrime(double eps) { return {RegionName::DepsPrime, eps}; }

  // Closed bounds for the primed regions, open bounds for D.
  bool contains(double t, double s) const;
  // Complex points: real parts in the region, imaginary parts at most 1.
  bool contains(const HPComplex& t, const HPComplex& s) const;
  std::string label() const;
};

// Threshold of the envelope containment lemma: v > 3.509 / (2 pi) implies D'_0.
inline constexpr double kEnvelopeThreshold = 3.509;

struct PotentialValue {
  HPComplex value;
  HPComplex t, s;
  int p = 0;
  LatticeIndex lattice;
};

HPComplex V_limit(int p, const HPComplex& t, const HPComplex& s, LatticeIndex idx = {});
PotentialValue potential_value(int p, const HPComplex& t, const HPComplex& s, LatticeIndex idx = {});

// Finite-N potential V_{N,1/M} (V_{N,0} at M = infinity), shifted by
// -2 pi i (m t + n s). Defined for 0 < Re t < 1, 0 < Re(t-s) < 1, 1 < Re(t+s) < 2.
HPComplex V_finite(int p, const HPComplex& t, const HPComplex& s, const RootSpec& root,
                   const PrecisionContext& ctx, LatticeIndex idx = {});

// Reusable V_{N,1/M} at a fixed (p, root), in extended or arbitrary precision.
template <class R>
class FinitePotential {
public:
  using Real = typename Field<R>::Real;
  using Complex = typename Field<R>::Complex;

  FinitePotential(int p, const RootSpec& root, hp::Bits bits);

  Complex operator()(const Complex& t, const Complex& s, LatticeIndex idx = {}) const;
  // Throws BranchError when (Re t, Re s) is off the stated branch.
  void check_branch(const Complex& t, const Complex& s) const;

  const Real& denom() const { return phi_->denom(); }
  const PhiEvaluator<R>& phi() const { return *phi_; }
  // pi i (-(6p+4+12/M^2)/(12 denom^2) - 1/12), the additive constant
  const Complex& constant() const { return constant_; }
  const RootSpec& root() const { return root_; }
  int p() const { return p_; }

private:
  Real lit(double v) const { return Field<R>::of(v, bits_); }

  int p_;
  RootSpec root_;
  hp::Bits bits_;
  std::shared_ptr<const PhiEvaluator<R>> phi_;
  Real pi_, inv_g_, inv_mg_;
  Complex constant_;  // pi i (-(6p+4+12/M^2)/(12 denom^2) - 1/12)
};

extern template class FinitePotential<long double>;
extern template class FinitePotential<hp::Real>;

// (dV/dt, dV/ds) of V(p,t,s;m,n).
std::array<HPComplex, 2> grad_V(int p, const HPComplex& t, const HPComplex& s, LatticeIndex idx = {});

// Partial derivative d^dt/dt d^ds/ds of V(p,t,s;m,n), any order dt + ds <= 4.
HPComplex V_partial(int p, const HPComplex& t, const HPComplex& s, int dt, int ds, LatticeIndex idx = {});

// Terms of V_{N,1/M} = V + V1/denom + V2/denom^2 + O(denom^-3); order is 1 or 2,
// M = 0 for M = infinity. Derivatives of V1 are available up to order 2.
HPComplex V_correction(int order, int p, const HPComplex& t, const HPComplex& s, long M);
HPComplex V1_partial(const HPComplex& t, const HPComplex& s, int dt, int ds);

struct HessianData {
  std::array<std::array<HPComplex, 2>, 2> hess;
  HPComplex det;  // equals -4 pi^2 H
  HPComplex H;
};

// Analytic Hessian of V and H(p, x, y); DegeneracyError when |det| < 2^{-bits/2}.
HessianData hessian_and_H(int p, const HPComplex& t, const HPComplex& s);

// H(p,x,y) as a rational function of x = e^{2 pi i t}, y = e^{2 pi i s}.
HPComplex H_function(int p, const HPComplex& x, const HPComplex& y);

// v(t,s) = Lambda(t+s) + Lambda(t-s) - 3 Lambda(t).
double envelope(double t, double s);
// v_{N,1/M}(t,s) with the half-step and 1/(M denom) shifted arguments.
double envelope(double t, double s, const RootSpec& root);

}  // namespace twistjones
