#pragma once

// Poisson-summation side: the bump function, the Fourier coefficients
//
//   h_hat(m,n) = (-1)^{m+n+p} e^{pi i(1/M - 1/4)} denom^{3/2} / sin(pi/(M denom))
//                * int psi(t,s) sin(2 pi s) e^{denom V_N(p,t,s;m,n)} dt ds
//
// their reduced form on S = {n >= 0}, and reconstruction of J_N from them.

#include <array>
#include <vector>

#include "twistjones/numerics.hpp"
#include "twistjones/qjones.hpp"

namespace twistjones {

struct BumpSpec {
  double eps = 0.01;  // transition width; psi = 1 on D'_eps, 0 outside D'_0
};

// Smooth partition profile built from the e^{-1/x} mollifier.
double bump(double t, double s, const BumpSpec& spec = {});

struct FourierCoeff {
  long m = 0, n = 0;
  HPComplex value;
  double quad_error = 0.0;       // difference of the last two dyadic levels
  std::array<int, 2> grid{0, 0};  // nodes per direction of the accepted level
};

// Quadrature controls: relative tolerance against the integral of |integrand|,
// the number of dyadic refinements and the worker threads for grid sampling.
struct QuadratureOptions {
  double tol = 1e-10;
  int max_levels = 4;
  unsigned workers = 0;  // 0: hardware concurrency
};

// int_{D'_0} psi sin(2 pi s) e^{denom V_N(p,t,s;m,n)} dt ds, tensor trapezoid
// in (u, v) = (t - s, t + s). AccuracyError when the levels do not settle.
FourierCoeff fourier_integral(long m, long n, int p, const RootSpec& root, const BumpSpec& spec = {},
                              const QuadratureOptions& opts = {});

// Finite M only.
FourierCoeff h_hat(long m, long n, int p, const RootSpec& root, const BumpSpec& spec = {},
                   const QuadratureOptions& opts = {});

// (1 - e^{2 pi i(n+1)/M}) h_hat for finite M; the limiting coefficient
// (-1)^{m+n+p+1} 2 e^{pi i/4} (n+1) N^{5/2} int psi sin(2 pi s) e^{N V_{N,0}} at M = infinity.
FourierCoeff h_tilde(long m, long n, int p, const RootSpec& root, const BumpSpec& spec = {},
                     const QuadratureOptions& opts = {});

struct Reconstruction {
  HPComplex value;   // sum of h_tilde over |m| <= K, 0 <= n <= K
  HPComplex jones;   // exact J_N at the same root
  double deviation;  // |value - jones| / |jones|
  int K = 0;
  std::vector<FourierCoeff> terms;
};

Reconstruction poisson_reconstruct(int p, const RootSpec& root, int K, const BumpSpec& spec = {},
                                   const QuadratureOptions& opts = {});

// Drops the sampled grids kept between calls.
void clear_fourier_cache();

}  // namespace twistjones
