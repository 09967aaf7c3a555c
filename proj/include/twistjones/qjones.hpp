#pragma once

// Colored Jones polynomial of the twist knots K_p at the roots of unity
// e^{2 pi i/(N + 1/M)} and e^{2 pi i/N}, by the Habiro-Masbaum double sum
//
//   J_N = sum_{k<N} sum_{l<=k} (-1)^l q^{k(k+3)/4 + p l(l+1)} {k}! {2l+1}
//                / ({k+l+1}! {k-l}!) prod_{i=1}^k {N+i}{N-i},
//
// with {n} = q^{n/2} - q^{-n/2}.

#include <string>
#include <vector>

#include "twistjones/numerics.hpp"

namespace twistjones {

// Evaluation point. M == 0 encodes M = infinity (the Kashaev point).
struct RootSpec {
  int N = 1;
  long M = 0;

  RootSpec() = default;
  RootSpec(int n, long m);
  static RootSpec infinity(int n) { return RootSpec(n, 0); }
  static RootSpec parse(int n, const std::string& m);

  bool infinite() const { return M == 0; }
  // denom = N + 1/M = num/den as an exact rational.
  long long num() const { return infinite() ? N : static_cast<long long>(N) * M + 1; }
  long long den() const { return infinite() ? 1 : M; }
  HPReal denom(hp::Bits bits) const;
  // q = xi = e^{2 pi i/denom}, and the half root e^{pi i/denom}.
  HPComplex xi(hp::Bits bits) const;
  HPComplex half_root(hp::Bits bits) const;
  // q^{j/4}: integer powers of the fixed quarter root e^{pi i/(2 denom)}.
  HPComplex quarter_power(long long j, hp::Bits bits) const;
  std::string m_label() const { return infinite() ? "inf" : std::to_string(M); }
};

struct TwistParam {
  int p = 6;
  bool experimental() const { return p < 6; }
};

struct GridPoint {
  int k = 0;
  int l = 0;
};

// e^{2 pi i a/b} with the integer fraction reduced before any rounding.
HPComplex unit_root(long long a, long long b, hp::Bits bits);

HPComplex bracket(long n, const RootSpec& root, const PrecisionContext& ctx);

struct PochhammerTable {
  std::vector<HPComplex> entries;  // entries[n] = (xi)_n
  bool vanishing = false;          // set when an entry is exactly zero (M = inf, n >= N)
};

PochhammerTable pochhammer_table(const RootSpec& root, int nmax, const PrecisionContext& ctx);

// Direct double sum. At M = infinity the terms with k+l+1 >= N carry the
// removable pole {N} = 0; they are summed as the exact limit of the
// finite-M expression (derivative in 1/denom of the pole residues).
HPComplex jones(const TwistParam& p, const RootSpec& root, const PrecisionContext& ctx);

struct JonesResult {
  HPComplex value;
  double rel_error = 0.0;  // from the doubling check
  unsigned bits = 0;
};

// jones() at ctx.bits and 2 ctx.bits; throws PrecisionError when they
// disagree by more than 2^{-bits+16}.
JonesResult jones_checked(const TwistParam& p, const RootSpec& root, const PrecisionContext& ctx);

// Single raw summand of the double sum (finite M only).
HPComplex habiro_term(const TwistParam& p, const RootSpec& root, const GridPoint& pt,
                      const PrecisionContext& ctx);

// Summand in the closed form
//   (-1)^l q^{k(k+3)/4 + p l(l+1)} {2l+1}/{N} {k}!{N+k}!/({k+l+1}!{k-l}!{N-k-1}!),
// equal to habiro_term at finite M.
HPComplex closed_form_term(const TwistParam& p, const RootSpec& root, const GridPoint& pt,
                           const PrecisionContext& ctx);

// g_{N,1/M}(k,l) through the quantum-dilogarithm potential V_{N,1/M}.
// Only defined on the branch k+l+1 > N with M finite (BranchError otherwise).
HPComplex grid_term(const TwistParam& p, const RootSpec& root, const GridPoint& pt,
                    const PrecisionContext& ctx);

}  // namespace twistjones
