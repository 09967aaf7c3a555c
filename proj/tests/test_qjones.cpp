#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "exact_oracle.hpp"
#include "twistjones/qjones.hpp"

using namespace twistjones;
using namespace twistjones::oracle;

namespace {

double rel(const HPComplex& a, const HPComplex& b) { return relative_distance(a, b); }

// Laurent polynomial in q (not q^{1/4}) from a list of (exponent, coefficient).
bool same_in_q(const Laurent& P, const std::vector<std::pair<long, long>>& terms) {
  Laurent Q = Laurent::zero();
  for (auto [e, a] : terms) Q = Q + Laurent::monomial(4 * e, a);
  if (P.lo != Q.lo || P.c.size() != Q.c.size()) return false;
  return P.c == Q.c;
}

}  // namespace

TEST_CASE("root spec parsing and validation") {
  CHECK(RootSpec::parse(10, "inf").infinite());
  CHECK(RootSpec::parse(10, "3").M == 3);
  CHECK_THROWS_AS(RootSpec(10, 1), DomainError);
  CHECK_THROWS_AS(RootSpec(0, 2), DomainError);
  CHECK_THROWS_AS(RootSpec::parse(10, "x"), DomainError);
  RootSpec r(5, 2);
  CHECK(r.num() == 11);
  CHECK(r.den() == 2);
}

TEST_CASE("bracket and unit roots") {
  PrecisionContext ctx(256);
  // M = infinity: {N} vanishes exactly.
  CHECK(bracket(7, RootSpec::infinity(7), ctx).is_zero());
  CHECK_FALSE(bracket(7, RootSpec(7, 2), ctx).is_zero());
  // {1} at q = e^{2 pi i/4} is 2i sin(pi/4) = i sqrt 2.
  HPComplex b = bracket(1, RootSpec::infinity(4), ctx);
  CHECK(std::fabs(b.re.to_double()) < 1e-70);
  CHECK(std::fabs(b.im.to_double() - std::sqrt(2.0)) < 1e-15);
  CHECK(unit_root(3, 12, 256).re.is_zero());
  auto pt = pochhammer_table(RootSpec::infinity(5), 6, ctx);
  CHECK(pt.vanishing);
  CHECK(pt.entries[5].is_zero());
}

TEST_CASE("exact oracle identifies the knots of small twist") {
  // Normalized Jones polynomials at N = 2 (q = t): 4_1 and the trefoil pair.
  Laurent fig8 = jones_polynomial(-1, 2);
  CHECK(same_in_q(fig8, {{-2, 1}, {-1, -1}, {0, 1}, {1, -1}, {2, 1}}));
  Laurent tre = jones_polynomial(1, 2);
  bool left = same_in_q(tre, {{-4, -1}, {-3, 1}, {-1, 1}});
  bool right = same_in_q(tre, {{4, -1}, {3, 1}, {1, 1}});
  CHECK((left || right));
}

TEST_CASE("jones matches the exact polynomial oracle") {
  PrecisionContext ctx(256);
  for (int p : {-1, 1, 2, 6}) {
    for (int N : {2, 3, 5, 7}) {
      Laurent P = jones_polynomial(p, N);
      for (long M : {0L, 2L, 3L, 7L}) {
        RootSpec root(N, M);
        HPComplex want = evaluate(P, root, 400);
        HPComplex got = jones(TwistParam{p}, root, ctx);
        INFO("p=" << p << " N=" << N << " M=" << root.m_label());
        CHECK(rel(got, want) < 1e-70);
      }
    }
  }
}

TEST_CASE("figure-eight at e^{2 pi i/N} equals the Kashaev sum") {
  PrecisionContext ctx(256);
  for (int N : {3, 10, 25}) {
    // sum_k prod_{j<=k} |1 - q^j|^2
    hp::Bits bits = 320;
    HPReal pi = HPReal::pi(bits);
    HPReal total = HPReal::zero(bits), prod(1.0, bits);
    for (int k = 0; k < N; ++k) {
      if (k > 0) {
        HPReal s = hp::sin(pi * static_cast<long>(k) / static_cast<long>(N)) * 2L;
        prod = prod * s * s;
      }
      total = total + prod;
    }
    HPComplex got = jones(TwistParam{-1}, RootSpec::infinity(N), ctx);
    INFO("N=" << N);
    CHECK(rel(got, HPComplex(total)) < 1e-60);
  }
}

TEST_CASE("M = infinity is the limit of large M") {
  PrecisionContext ctx(256);
  RootSpec inf = RootSpec::infinity(12);
  HPComplex J = jones(TwistParam{6}, inf, ctx);
  double d1 = rel(jones(TwistParam{6}, RootSpec(12, 1000), ctx), J);
  double d2 = rel(jones(TwistParam{6}, RootSpec(12, 2000), ctx), J);
  CHECK(d1 < 0.05);
  CHECK(d2 / d1 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("raw, closed-form and potential summands agree") {
  PrecisionContext ctx(256);
  RootSpec root(9, 2);
  TwistParam tp{6};
  hp::Accumulator acc(ctx.working());
  for (int k = 0; k < root.N; ++k) {
    for (int l = 0; l <= k; ++l) {
      HPComplex raw = habiro_term(tp, root, {k, l}, ctx);
      acc.add(raw);
      CHECK(rel(closed_form_term(tp, root, {k, l}, ctx), raw) < 1e-70);
      // The branch needs t - s > 0, so the diagonal k = l is excluded.
      if (k + l + 1 > root.N && k > l) {
        INFO("k=" << k << " l=" << l);
        CHECK(rel(grid_term(tp, root, {k, l}, ctx), raw) < 1e-50);
      } else {
        CHECK_THROWS_AS(grid_term(tp, root, {k, l}, ctx), BranchError);
      }
    }
  }
  CHECK(rel(acc.sum(), jones(tp, root, ctx)) < 1e-70);
  CHECK_THROWS_AS(habiro_term(tp, RootSpec::infinity(9), {8, 0}, ctx), DomainError);
  CHECK_THROWS_AS(grid_term(tp, RootSpec::infinity(9), {8, 4}, ctx), BranchError);
}

TEST_CASE("doubling check reports agreement") {
  auto r = jones_checked(TwistParam{6}, RootSpec::infinity(20), PrecisionContext(256));
  CHECK(r.rel_error < 1e-60);
  CHECK(r.bits == 256);
}
