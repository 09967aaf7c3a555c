#include <doctest.h>

#include <cmath>

#include "twistjones/fourier.hpp"
#include "twistjones/potential.hpp"

using namespace twistjones;
using hp::Complex;
using hp::Real;

namespace {

// sum over the lattice of psi((k+1/2)/denom, (l+1/2)/denom) g(k,l): what the
// Fourier sum reconstructs exactly.
Complex bumped_lattice_sum(int p, const RootSpec& root, const BumpSpec& spec) {
  PrecisionContext ctx(128);
  double g = root.denom(64).to_double();
  Complex sum(0.0, 0.0, ctx.working());
  for (int k = 0; k < root.N; ++k)
    for (int l = 0; l <= k; ++l) {
      double w = bump((k + 0.5) / g, (l + 0.5) / g, spec);
      if (w != 0.0) sum += grid_term(TwistParam{p}, root, GridPoint{k, l}, ctx) * Real(w, ctx.working());
    }
  return sum;
}

const BumpSpec kSmooth{0.05};
const QuadratureOptions kFast{1e-8, 4, 0};

}  // namespace

TEST_CASE("bump profile") {
  CHECK(bump(0.7, 0.5) == 1.0);
  CHECK(bump(0.49, 0.5) == 0.0);
  CHECK(bump(0.95, 0.5) == 0.0);
  CHECK_THROWS_AS(bump(0.7, 0.5, BumpSpec{0.0}), DomainError);
  // across the s >= 0.2 face at t = 0.86: 0 at the face, 1 past eps, monotone between
  double prev = 0.0;
  for (int i = 1; i < 10; ++i) {
    double v = bump(0.86, 0.2 + 0.001 * i);
    CHECK(v > prev);
    CHECK(v < 1.0);
    prev = v;
  }
  CHECK(bump(0.86, 0.2) == 0.0);
  CHECK(bump(0.86, 0.2105) == 1.0);
  CHECK(std::fabs(bump(0.86, 0.205) - 0.5) < 1e-12);
  for (double s : {0.21, 0.3, 0.43, 0.5})
    for (double t : {0.52, 0.7, 0.9}) CHECK(bump(t, s) == bump(t, 1.0 - s));
}

TEST_CASE("Poisson identity: Fourier sum equals the bumped lattice sum") {
  RootSpec root(12, 3);
  Complex want = bumped_lattice_sum(6, root, kSmooth);
  Reconstruction r = poisson_reconstruct(6, root, 8, kSmooth, kFast);
  CHECK(relative_distance(r.value, want) < 2e-4);
  CHECK(r.terms.size() == 17u * 9u);
}

TEST_CASE("Fourier coefficients: cancellation and the reflection symmetry") {
  RootSpec root(12, 2);
  for (long m : {-2L, 0L, 3L}) {
    FourierCoeff z = h_hat(m, -1, 6, root, kSmooth, kFast);
    CHECK(hp::abs(z.value).to_double() < 1e-8);
  }
  Real pi = Real::pi(64);
  for (auto [m, n] : {std::pair{0L, 0L}, {1L, 1L}, {-2L, 3L}}) {
    Complex a = h_hat(m, -n - 2, 6, root, kSmooth, kFast).value;
    Complex b = h_hat(m, n, 6, root, kSmooth, kFast).value;
    Complex phase = hp::expi(pi * 2L * (n + 1) / 2L);
    INFO("m=" << m << " n=" << n);
    CHECK(relative_distance(a, -(phase * b)) < 1e-8);
  }
}

TEST_CASE("h_tilde: finite-M definition and the M limit") {
  RootSpec root(12, 3);
  FourierCoeff hat = h_hat(1, 1, 6, root, kSmooth, kFast);
  FourierCoeff til = h_tilde(1, 1, 6, root, kSmooth, kFast);
  Complex f = Complex(1.0, 0.0, 64) - hp::expi(Real::pi(64) * 4L / 3L);
  CHECK(relative_distance(til.value, f * hat.value) < 1e-15);

  Complex lim = h_tilde(1, 0, 6, RootSpec::infinity(10), kSmooth, kFast).value;
  double d500 = hp::abs(h_tilde(1, 0, 6, RootSpec(10, 500), kSmooth, kFast).value - lim).to_double();
  double d5000 = hp::abs(h_tilde(1, 0, 6, RootSpec(10, 5000), kSmooth, kFast).value - lim).to_double();
  CHECK(d500 / hp::abs(lim).to_double() < 0.1);
  CHECK(d500 / d5000 == doctest::Approx(10.0).epsilon(0.1));
}

TEST_CASE("h_tilde: decay over lattice shells") {
  RootSpec root(12, 3);
  auto shell = [&](int K) {
    double s = 0;
    for (long m = -K; m <= K; ++m)
      for (long n = 0; n <= K; ++n)
        if (std::max(std::labs(m), n) == K) s += hp::abs(h_tilde(m, n, 6, root, kSmooth, kFast).value).to_double();
    return s;
  };
  double s2 = shell(2), s4 = shell(4), s6 = shell(6);
  CHECK(s4 < s2);
  CHECK(s6 < s4);
}

TEST_CASE("Fourier: errors") {
  CHECK_THROWS_AS(h_hat(0, 0, 6, RootSpec::infinity(10)), DomainError);
  CHECK_THROWS_AS(h_tilde(0, -1, 6, RootSpec(10, 2)), DomainError);
  CHECK_THROWS_AS(poisson_reconstruct(6, RootSpec(10, 2), -1), DomainError);
  CHECK_THROWS_AS(fourier_integral(0, 0, 6, RootSpec(10, 2), kSmooth, QuadratureOptions{1e-30, 1, 0}), AccuracyError);
}
