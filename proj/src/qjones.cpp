#include "twistjones/qjones.hpp"

#include <cmath>
#include <unordered_map>

#include "twistjones/potential.hpp"

namespace twistjones {

namespace {

long long floor_mod(long long a, long long b) {
  long long r = a % b;
  return r < 0 ? r + b : r;
}

// 2 sin(pi n/denom) = 2 sin(2 pi (n den)/(2 num)), exact reduction first.
HPReal bracket_real(long n, const RootSpec& root, hp::Bits bits) {
  long long P = 2 * root.num();
  long long a = floor_mod(static_cast<long long>(n) * root.den(), P);
  if (a == 0 || 2 * a == P) return HPReal::zero(bits);
  return unit_root(a, P, bits).im * 2L;
}

HPReal cos_pi_over(long n, const RootSpec& root, hp::Bits bits) {
  long long P = 2 * root.num();
  long long a = floor_mod(static_cast<long long>(n) * root.den(), P);
  return unit_root(a, P, bits).re;
}

// Cache of e^{2 pi i a/P} keyed on the reduced numerator.
class UnitRoots {
public:
  UnitRoots(long long P, hp::Bits bits) : P_(P), bits_(bits) {}
  const HPComplex& operator()(long long a) {
    a = floor_mod(a, P_);
    auto it = cache_.find(a);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(a, unit_root(a, P_, bits_)).first->second;
  }

private:
  long long P_;
  hp::Bits bits_;
  std::unordered_map<long long, HPComplex> cache_;
};

void check_args(const RootSpec& root) {
  if (root.N < 1) throw DomainError("N must be >= 1");
}

}  // namespace

RootSpec::RootSpec(int n, long m) : N(n), M(m) {
  if (n < 1) throw DomainError("N must be >= 1, got " + std::to_string(n));
  if (m == 1) throw DomainError("M = 1 is not a valid root parameter");
  if (m < 0) throw DomainError("M must be >= 2 or infinity");
}

RootSpec RootSpec::parse(int n, const std::string& m) {
  if (m == "inf" || m == "INF" || m == "infinity" || m == "INFINITY") return infinity(n);
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(m, &pos);
  } catch (const std::exception&) {
    throw DomainError("invalid M: " + m);
  }
  if (pos != m.size()) throw DomainError("invalid M: " + m);
  if (v == 0) throw DomainError("M = 0 is not valid; use 'inf'");
  return RootSpec(n, v);
}

HPReal RootSpec::denom(hp::Bits bits) const {
  return HPReal(static_cast<double>(num()), bits) / static_cast<long>(den());
}

HPComplex RootSpec::xi(hp::Bits bits) const { return quarter_power(4, bits); }
HPComplex RootSpec::half_root(hp::Bits bits) const { return quarter_power(2, bits); }

HPComplex RootSpec::quarter_power(long long j, hp::Bits bits) const {
  // q^{j/4} = e^{2 pi i j den/(4 num)}
  long long P = 4 * num();
  return unit_root(floor_mod(j, P) * den(), P, bits);
}

HPComplex unit_root(long long a, long long b, hp::Bits bits) {
  if (b <= 0) throw DomainError("unit_root needs a positive modulus");
  a = floor_mod(a, b);
  // Exact values at the quarter points keep zeros exactly zero.
  if (a == 0) return HPComplex(HPReal(1.0, bits), HPReal::zero(bits));
  if (2 * a == b) return HPComplex(HPReal(-1.0, bits), HPReal::zero(bits));
  if (4 * a == b) return HPComplex(HPReal::zero(bits), HPReal(1.0, bits));
  if (4 * a == 3 * b) return HPComplex(HPReal::zero(bits), HPReal(-1.0, bits));
  HPReal theta = HPReal::pi(bits) * 2L * static_cast<long>(a) / static_cast<long>(b);
  return hp::expi(theta);
}

HPComplex bracket(long n, const RootSpec& root, const PrecisionContext& ctx) {
  hp::Bits bits = ctx.working();
  return HPComplex(HPReal::zero(bits), bracket_real(n, root, bits));
}

PochhammerTable pochhammer_table(const RootSpec& root, int nmax, const PrecisionContext& ctx) {
  check_args(root);
  if (nmax < 0 || nmax > 2 * root.N) throw DomainError("pochhammer_table needs 0 <= nmax <= 2N");
  hp::Bits bits = ctx.working();
  PochhammerTable t;
  t.entries.reserve(nmax + 1);
  t.entries.emplace_back(HPReal(1.0, bits));
  for (int n = 1; n <= nmax; ++n) {
    HPComplex factor = HPComplex(HPReal(1.0, bits)) - root.quarter_power(4LL * n, bits);
    t.entries.push_back(t.entries.back() * factor);
    if (t.entries.back().is_zero()) t.vanishing = true;
  }
  return t;
}

HPComplex jones(const TwistParam& tp, const RootSpec& root, const PrecisionContext& ctx) {
  check_args(root);
  const int N = root.N;
  const long p = tp.p;
  const hp::Bits bits = ctx.working();
  const bool inf = root.infinite();
  const long long num = root.num();
  const long long den = root.den();
  const long long P = 4 * num;  // phases are e^{2 pi i a/P}
  UnitRoots phase(P, bits);

  // b[n] = {n}/i; bp[n] is b[n] with the vanishing {N} replaced by 1.
  std::vector<HPReal> b(2 * N + 1), bp(2 * N + 1);
  for (int n = 0; n <= 2 * N; ++n) {
    b[n] = bracket_real(n, root, bits);
    bp[n] = (inf && n == N) ? HPReal(1.0, bits) : b[n];
  }
  // fact[n] = prod_{j<=n} bp[j]
  std::vector<HPReal> fact(2 * N + 1);
  fact[0] = HPReal(1.0, bits);
  for (int n = 1; n <= 2 * N; ++n) fact[n] = fact[n - 1] * bp[n];

  // Log-derivatives d/dtau log{n} = pi n cot(pi n tau) at tau = 1/N, only
  // needed for the pole terms of the M = infinity limit.
  std::vector<HPReal> S;
  std::vector<HPReal> c;
  if (inf) {
    HPReal pi = HPReal::pi(bits);
    c.assign(2 * N + 1, HPReal::zero(bits));
    S.assign(2 * N + 1, HPReal::zero(bits));
    for (int n = 1; n < 2 * N; ++n) {
      if (n == N) continue;
      c[n] = pi * static_cast<long>(n) * cos_pi_over(n, root, bits) * 2L / b[n];
    }
    for (int n = 1; n <= 2 * N; ++n) S[n] = S[n - 1] + c[n];
  }

  hp::Accumulator acc(bits);
  hp::Accumulator residue(bits);
  HPReal residue_scale = HPReal::zero(bits);
  HPReal Pk(1.0, bits);         // prod_{i<=k} b[N+i] b[N-i]
  HPReal PD = HPReal::zero(bits);  // its log-derivative

  for (int k = 0; k < N; ++k) {
    if (k > 0) {
      Pk = Pk * b[N + k] * b[N - k];
      if (inf) PD = PD + c[N + k] + c[N - k];
    }
    // A = fact[k] Pk / (fact[k+l+1] fact[k-l]) * bp[2l+1], advanced in l.
    HPReal A = fact[k] * Pk / (fact[k + 1] * fact[k]);
    for (int l = 0; l <= k; ++l) {
      if (l > 0) A = A * b[k - l + 1] / bp[k + l + 1];
      HPReal Al = A * bp[2 * l + 1];
      long long e4 = static_cast<long long>(k) * (k + 3) + 4LL * p * l * (l + 1);
      long long base = e4 * den + 2 * num * l;  // q^{e4/4} (-1)^l
      bool pole = inf && k + l + 1 >= N;
      if (!pole) {
        acc.add(phase(base + num * k) * Al);  // i^k from the brackets
        continue;
      }
      if (2 * l + 1 == N) {
        // Numerator and denominator vanish together: the ratio is regular.
        acc.add(phase(base + num * k) * Al);
        continue;
      }
      HPComplex F = phase(base + num * (k + 1)) * Al;
      residue.add(F);
      residue_scale = residue_scale + hp::abs(F);
      HPReal D = S[k] + c[2 * l + 1] + PD - S[k + l + 1] - S[k - l];
      HPReal twopiN = HPReal::pi(bits) * 2L * static_cast<long>(N);
      HPComplex slope(HPReal(static_cast<double>(-e4), bits) / (4L * N), D / twopiN);
      acc.add(F * slope);
    }
  }
  if (inf && !residue_scale.is_zero()) {
    // The pole residues cancel exactly; a visible remainder means the
    // working precision was exhausted.
    double rel = (hp::abs(residue.sum()) / residue_scale).to_double();
    if (rel > std::ldexp(1.0, -static_cast<int>(ctx.bits) / 2))
      throw PrecisionError("pole residues fail to cancel at " + std::to_string(bits) + " bits",
                           2 * ctx.bits);
  }
  return acc.sum().rounded(ctx.bits);
}

JonesResult jones_checked(const TwistParam& p, const RootSpec& root, const PrecisionContext& ctx) {
  HPComplex lo = jones(p, root, ctx);
  PrecisionContext hi_ctx = ctx.doubled();
  HPComplex hi = jones(p, root, hi_ctx);
  double rel = relative_distance(lo, hi);
  double limit = std::ldexp(1.0, -static_cast<int>(ctx.bits) + 16);
  if (rel > limit)
    throw PrecisionError("jones: precision doubling disagrees (rel " + std::to_string(rel) + ")",
                         2 * ctx.bits);
  return {lo, rel, ctx.bits};
}

HPComplex habiro_term(const TwistParam& tp, const RootSpec& root, const GridPoint& pt,
                      const PrecisionContext& ctx) {
  check_args(root);
  const int N = root.N, k = pt.k, l = pt.l;
  if (k < 0 || k >= N || l < 0 || l > k) throw DomainError("grid point out of range");
  hp::Bits bits = ctx.working();
  if (root.infinite() && k + l + 1 >= N) throw DomainError("raw summand has a pole at M = infinity");
  HPReal A(1.0, bits);
  for (int j = 1; j <= k; ++j) A = A * bracket_real(j, root, bits);
  A = A * bracket_real(2 * l + 1, root, bits);
  for (int i = 1; i <= k; ++i) A = A * bracket_real(N + i, root, bits) * bracket_real(N - i, root, bits);
  for (int j = 1; j <= k + l + 1; ++j) A = A / bracket_real(j, root, bits);
  for (int j = 1; j <= k - l; ++j) A = A / bracket_real(j, root, bits);
  long long e4 = static_cast<long long>(k) * (k + 3) + 4LL * tp.p * l * (l + 1);
  long long a = e4 * root.den() + 2 * root.num() * l + root.num() * k;
  return (unit_root(a, 4 * root.num(), bits) * A).rounded(ctx.bits);
}

HPComplex closed_form_term(const TwistParam& tp, const RootSpec& root, const GridPoint& pt,
                           const PrecisionContext& ctx) {
  check_args(root);
  const int N = root.N, k = pt.k, l = pt.l;
  if (k < 0 || k >= N || l < 0 || l > k) throw DomainError("grid point out of range");
  if (root.infinite()) throw DomainError("closed form divides by {N} = 0 at M = infinity");
  hp::Bits bits = ctx.working();
  auto br = [&](long n) { return bracket(n, root, ctx); };
  auto fact = [&](int n) {
    HPComplex f(HPReal(1.0, bits));
    for (int j = 1; j <= n; ++j) f = f * br(j);
    return f;
  };
  long long e4 = static_cast<long long>(k) * (k + 3) + 4LL * tp.p * l * (l + 1);
  HPComplex mono = root.quarter_power(e4, bits);
  if (l % 2) mono = -mono;
  HPComplex v = mono * br(2 * l + 1) / br(N) * fact(k) * fact(N + k) /
                (fact(k + l + 1) * fact(k - l) * fact(N - k - 1));
  return v.rounded(ctx.bits);
}

HPComplex grid_term(const TwistParam& tp, const RootSpec& root, const GridPoint& pt,
                    const PrecisionContext& ctx) {
  check_args(root);
  const int N = root.N, k = pt.k, l = pt.l;
  if (k < 0 || k >= N || l < 0 || l > k) throw DomainError("grid point out of range");
  if (root.infinite()) throw BranchError("grid_term: the {N}-denominator form degenerates at M = infinity");
  if (k + l + 1 <= N) throw BranchError("grid_term: only the branch k+l+1 > N is implemented");
  hp::Bits bits = ctx.working();
  HPReal d = root.denom(bits);
  HPComplex t(HPReal(k + 0.5, bits) / d, HPReal::zero(bits));
  HPComplex s(HPReal(l + 0.5, bits) / d, HPReal::zero(bits));
  HPComplex V = V_finite(tp.p, t, s, root, ctx);
  // (-1)^p e^{pi i (1/M - 1/4)} / sqrt(denom) * sin(pi(2l+1)/denom) / sin(pi/(M denom))
  HPComplex pre = unit_root(1, 2 * root.den(), bits) * unit_root(-1, 8, bits);
  if (tp.p % 2 != 0) pre = -pre;
  HPReal ratio = bracket_real(2 * l + 1, root, bits) /
                 (unit_root(1, 2 * root.num(), bits).im * 2L) / hp::sqrt(d);
  return (pre * ratio * hp::exp(V * d)).rounded(ctx.bits);
}

}  // namespace twistjones
