#pragma once

// Critical point of V(p,.,.), the constants zeta(p) and omega(p), and the
// leading asymptotics of J_N with its first correction from the formal
// saddle-point expansion.

#include <array>
#include <string>
#include <vector>

#include "twistjones/numerics.hpp"
#include "twistjones/potential.hpp"
#include "twistjones/qjones.hpp"

namespace twistjones {

struct CriticalData {
  HPComplex t0, s0;
  HPComplex x0, y0;  // e^{2 pi i t0}, e^{2 pi i s0}
  HPComplex zeta;
  HPReal zetaR;
  HPComplex omega;        // sign_branch * omega_hessian
  HPComplex omega_hessian;  // sin(2 pi s0) x0 / ((1-x0)^{3/2} sqrt(det Hess))
  HPComplex omega_H;        // (y0 - 1/y0) x0 / (-4 pi (1-x0)^{3/2} sqrt(H))
  double omega_discrepancy = 0.0;
  HPComplex hess_det;
  HPComplex Hval;
  double newton_residual = 0.0;
  int iterations = 0;
  int sign_branch = 1;
  bool in_region = false;  // (Re t0, Re s0) in D'_0
  int extra_basins = 0;    // distinct critical points met by the uniqueness sweep
  std::string trace;
};

// Damped Newton on grad V from the best seed of a 40x40 grid over D'_0,
// followed by a uniqueness sweep. SolverError after 200 iterations.
CriticalData find_critical(int p, const PrecisionContext& ctx = PrecisionContext());
// Newton from an explicit seed; no sweep, no zeta/omega.
CriticalData newton_critical(int p, const HPComplex& t, const HPComplex& s, const PrecisionContext& ctx,
                             int max_iterations = 200);

// Fills zeta, zetaR, hess_det, Hval and both omega forms (AccuracyError when
// they disagree by more than 1e-20).
CriticalData zeta_omega(CriticalData data, int p);

struct AsymptoticPrediction {
  int p = 6;
  RootSpec root;
  int d = 0;
  HPComplex leading;
  HPComplex x;  // 2 pi i / denom

  // leading * (1 + sum_i kappas[i-1] x^i), truncated at order d.
  HPComplex value(const std::vector<HPComplex>& kappas = {}) const;
};

AsymptoticPrediction predict(int p, const RootSpec& root, const CriticalData& data, int d = 0);

// Picks the square-root branch so that J_N / prediction tends to +1, from
// the colored Jones values at the given colors (M = infinity).
CriticalData calibrate_sign_branch(CriticalData data, int p, const std::vector<int>& Ns,
                                   const PrecisionContext& ctx);

// Local data of int a(z) e^{n S(z)} dz at a critical point of S:
// S2, S3, S4 derivative tensors of S, first and second derivatives of log a,
// and a constant c0 added to the 1/n coefficient.
struct SaddleJet {
  std::array<std::array<HPComplex, 2>, 2> S2;
  std::array<std::array<std::array<HPComplex, 2>, 2>, 2> S3;
  std::array<std::array<std::array<std::array<HPComplex, 2>, 2>, 2>, 2> S4;
  std::array<HPComplex, 2> log_a1;
  std::array<std::array<HPComplex, 2>, 2> log_a2;
  HPComplex c0;

  static SaddleJet zero(hp::Bits bits);
};

// c1 in int a e^{n S} = (leading) (1 + c1/n + O(n^-2)).
HPComplex first_correction(const SaddleJet& jet);

// kappa_1(p, 1/M) of the expansion in 2 pi i/denom (M = 0 for infinity).
HPComplex kappa1_via_saddle(int p, const CriticalData& data, long M);

struct VolumeCS {
  HPReal volume;
  HPReal cs;  // Im(2 pi zeta) reduced into [-pi^2/2, pi^2/2)
};
VolumeCS volume_cs(const CriticalData& data);

}  // namespace twistjones
