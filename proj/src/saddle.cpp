#include "twistjones/saddle.hpp"

#include <cmath>
#include <sstream>

namespace twistjones {

namespace {

using hp::Bits;
using Mat2 = std::array<std::array<HPComplex, 2>, 2>;

double grad_norm(const std::array<HPComplex, 2>& g) {
  return std::hypot(hp::abs(g[0]).to_double(), hp::abs(g[1]).to_double());
}

Mat2 inverse(const Mat2& A) {
  HPComplex det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
  if (det.is_zero()) throw DegeneracyError("singular 2x2 matrix");
  return {{{A[1][1] / det, -A[0][1] / det}, {-A[1][0] / det, A[0][0] / det}}};
}

Mat2 hessian(int p, const HPComplex& t, const HPComplex& s) {
  Mat2 H;
  H[0][0] = V_partial(p, t, s, 2, 0);
  H[0][1] = V_partial(p, t, s, 1, 1);
  H[1][0] = H[0][1];
  H[1][1] = V_partial(p, t, s, 0, 2);
  return H;
}

// Index tuple -> (dt, ds) counts.
int count_s(std::initializer_list<int> idx) {
  int n = 0;
  for (int i : idx) n += i;
  return n;
}

}  // namespace

CriticalData newton_critical(int p, const HPComplex& t_seed, const HPComplex& s_seed, const PrecisionContext& ctx,
                             int max_iterations) {
  Bits bits = ctx.working();
  HPComplex t = t_seed.rounded(bits), s = s_seed.rounded(bits);
  const double tol = std::ldexp(1.0, -static_cast<int>(ctx.bits) / 2);
  std::ostringstream trace;
  auto g = grad_V(p, t, s);
  double r = grad_norm(g);
  int it = 0;
  int polish = 0;
  for (; it < max_iterations; ++it) {
    trace << it << ": |grad|=" << r << "\n";
    if (r < tol && ++polish > 1) break;
    Mat2 J = hessian(p, t, s);
    Mat2 Ji = inverse(J);
    HPComplex dt = -(Ji[0][0] * g[0] + Ji[0][1] * g[1]);
    HPComplex ds = -(Ji[1][0] * g[0] + Ji[1][1] * g[1]);
    // Damping: halve the step until the gradient decreases.
    HPReal lambda(1.0, bits);
    bool accepted = false;
    for (int h = 0; h < 60; ++h) {
      HPComplex tn = t + dt * lambda, sn = s + ds * lambda;
      try {
        auto gn = grad_V(p, tn, sn);
        double rn = grad_norm(gn);
        if (rn < r || (r < tol && rn <= r)) {
          t = tn;
          s = sn;
          g = gn;
          r = rn;
          accepted = true;
          break;
        }
      } catch (const DomainError&) {
        // stepped onto a branch cut; shorten
      }
      lambda = lambda / 2L;
    }
    if (!accepted) {
      if (r < tol) break;
      throw SolverError("newton: line search failed at |grad| = " + std::to_string(r), trace.str());
    }
  }
  if (r >= tol) throw SolverError("newton: no convergence after " + std::to_string(max_iterations) + " iterations", trace.str());
  CriticalData out;
  out.t0 = t;
  out.s0 = s;
  out.x0 = unit_exponential(t);
  out.y0 = unit_exponential(s);
  out.newton_residual = r;
  out.iterations = it;
  out.in_region = RegionSpec::D0prime().contains(t, s);
  out.trace = trace.str();
  return out;
}

CriticalData find_critical(int p, const PrecisionContext& ctx) {
  if (p < 2) throw DomainError("find_critical: twist parameter must be at least 2");
  const RegionSpec box = RegionSpec::D0prime();
  const Bits seed_bits = 64;
  const int n = 40;
  double best = INFINITY, bt = 0.7, bs = 0.5;
  std::vector<std::pair<double, double>> sweep;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double t = 0.5 + (0.909 - 0.5) * (i + 0.5) / n;
      double s = 0.2 + (0.8 - 0.2) * (j + 0.5) / n;
      if (!box.contains(t, s)) continue;
      if (i % 8 == 4 && j % 8 == 4) sweep.emplace_back(t, s);
      double r = grad_norm(grad_V(p, HPComplex(t, 0.0, seed_bits), HPComplex(s, 0.0, seed_bits)));
      if (r < best) {
        best = r;
        bt = t;
        bs = s;
      }
    }
  }
  CriticalData data = newton_critical(p, HPComplex(bt, 0.0, ctx.working()), HPComplex(bs, 0.0, ctx.working()), ctx);

  // Uniqueness sweep at reduced precision from a coarse subset of seeds.
  PrecisionContext low(128);
  std::vector<std::pair<HPComplex, HPComplex>> found;
  for (auto [t, s] : sweep) {
    try {
      CriticalData c = newton_critical(p, HPComplex(t, 0.0, low.working()), HPComplex(s, 0.0, low.working()), low, 60);
      if (!c.in_region) continue;
      bool known = hp::abs(c.t0 - data.t0).to_double() + hp::abs(c.s0 - data.s0).to_double() < 1e-8;
      for (const auto& f : found)
        known = known || hp::abs(c.t0 - f.first).to_double() + hp::abs(c.s0 - f.second).to_double() < 1e-8;
      if (!known) found.emplace_back(c.t0, c.s0);
    } catch (const Error&) {
      // seeds that do not converge say nothing about uniqueness
    }
  }
  data.extra_basins = static_cast<int>(found.size());
  return zeta_omega(std::move(data), p);
}

CriticalData zeta_omega(CriticalData d, int p) {
  Bits bits = d.t0.bits();
  HPReal pi = HPReal::pi(bits);
  HPReal one(1.0, bits);
  d.zeta = V_limit(p, d.t0, d.s0);
  d.zetaR = d.zeta.re;
  HessianData hd = hessian_and_H(p, d.t0, d.s0);
  d.hess_det = hd.det;
  d.Hval = hd.H;
  HPComplex sqrtH = principal_sqrt(hd.H);
  // det = -4 pi^2 H, and sqrt(det) is taken as 2 pi i sqrt(H).
  HPComplex sqrt_det = HPComplex(HPReal::zero(bits), pi * 2L) * sqrtH;
  HPComplex one_minus_x = HPComplex(one) - d.x0;
  HPComplex pow32 = one_minus_x * principal_sqrt(one_minus_x);
  HPComplex sin2pis = hp::sin(d.s0 * (pi * 2L));
  d.omega_hessian = sin2pis * d.x0 / (pow32 * sqrt_det);
  d.omega_H = (d.y0 - HPComplex(one) / d.y0) * d.x0 / (pow32 * sqrtH * (pi * -4L));
  d.omega_discrepancy = relative_distance(d.omega_hessian, d.omega_H);
  if (d.omega_discrepancy > 1e-20)
    throw AccuracyError("omega: the Hessian and H forms disagree", d.omega_discrepancy);
  d.omega = d.sign_branch > 0 ? d.omega_hessian : -d.omega_hessian;
  return d;
}

HPComplex AsymptoticPrediction::value(const std::vector<HPComplex>& kappas) const {
  HPComplex series(HPReal(1.0, leading.bits()));
  HPComplex xi = x;
  for (std::size_t i = 0; i < kappas.size() && static_cast<int>(i) < d; ++i) {
    series = series + kappas[i] * xi;
    xi = xi * x;
  }
  return leading * series;
}

AsymptoticPrediction predict(int p, const RootSpec& root, const CriticalData& data, int d) {
  if (d < 0) throw DomainError("predict: order must be non-negative");
  Bits bits = data.zeta.bits();
  HPReal pi = HPReal::pi(bits);
  HPReal g = root.denom(bits);
  AsymptoticPrediction out;
  out.p = p;
  out.root = root;
  out.d = d;
  out.x = HPComplex(HPReal::zero(bits), pi * 2L / g);
  HPComplex core = data.omega * hp::exp(data.zeta * g) * (pi * 4L);
  if (p % 2 != 0) core = -core;
  if (root.infinite()) {
    // (-1)^p 4 pi e^{pi i/4} N^{3/2} omega e^{N zeta}
    out.leading = core * unit_root(1, 8, bits) * (g * hp::sqrt(g));
  } else {
    // (-1)^p 4 pi e^{pi i(1/4 + 2/M)} denom^{1/2} sin(pi/M)/sin(pi/(M denom)) omega e^{denom zeta}
    HPReal M(static_cast<double>(root.M), bits);
    HPComplex phase = hp::expi(pi * (HPReal(0.25, bits) + HPReal(2.0, bits) / M));
    HPReal ratio = hp::sin(pi / M) / hp::sin(pi / (M * g));
    out.leading = core * phase * (hp::sqrt(g) * ratio);
  }
  return out;
}

CriticalData calibrate_sign_branch(CriticalData data, int p, const std::vector<int>& Ns, const PrecisionContext& ctx) {
  if (Ns.empty()) throw DomainError("calibrate_sign_branch: need at least one color");
  data.sign_branch = 1;
  data = zeta_omega(std::move(data), p);
  double votes = 0;
  for (int N : Ns) {
    RootSpec root = RootSpec::infinity(N);
    HPComplex J = jones(TwistParam{p}, root, PrecisionContext::for_color(N));
    HPComplex r = J / predict(p, root, data, 0).leading;
    double re = r.re.to_double();
    if (std::fabs(std::fabs(re) - 1.0) > 0.5 || std::fabs(r.im.to_double()) > 0.5)
      throw SolverError("sign branch: J_N/prediction = " + r.re.to_string(6) + " + " + r.im.to_string(6) +
                        "i is not near +-1 at N=" + std::to_string(N));
    votes += re;
  }
  data.sign_branch = votes > 0 ? 1 : -1;
  (void)ctx;
  return zeta_omega(std::move(data), p);
}

SaddleJet SaddleJet::zero(Bits bits) {
  SaddleJet j;
  HPComplex z(HPReal::zero(bits));
  for (int a = 0; a < 2; ++a) {
    j.log_a1[a] = z;
    for (int b = 0; b < 2; ++b) {
      j.S2[a][b] = z;
      j.log_a2[a][b] = z;
      for (int c = 0; c < 2; ++c) {
        j.S3[a][b][c] = z;
        for (int e = 0; e < 2; ++e) j.S4[a][b][c][e] = z;
      }
    }
  }
  j.c0 = z;
  return j;
}

HPComplex first_correction(const SaddleJet& J) {
  // Wick expansion with propagator G = (-S2)^{-1}:
  //   c1 = c0 + (1/2) G_ij (a_ij/a) + (1/2) G_ij G_kl (a_i/a) S_jkl + (1/8) G_ij G_kl S_ijkl
  //      + (1/8) G_ij G_kl G_mn S_ijk S_lmn + (1/12) G_il G_jm G_kn S_ijk S_lmn
  Mat2 minus;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) minus[a][b] = -J.S2[a][b];
  Mat2 G = inverse(minus);
  HPComplex c = J.c0;
  HPComplex t1 = J.c0 * 0L, t2 = t1, t3 = t1, t4 = t1, t5 = t1;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      HPComplex aij = J.log_a2[i][j] + J.log_a1[i] * J.log_a1[j];
      t1 += G[i][j] * aij;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          t2 += G[i][j] * G[k][l] * J.log_a1[i] * J.S3[j][k][l];
          t3 += G[i][j] * G[k][l] * J.S4[i][j][k][l];
          for (int m = 0; m < 2; ++m)
            for (int n = 0; n < 2; ++n) {
              t4 += G[i][j] * G[k][l] * G[m][n] * J.S3[i][j][k] * J.S3[l][m][n];
              t5 += G[i][l] * G[j][m] * G[k][n] * J.S3[i][j][k] * J.S3[l][m][n];
            }
        }
    }
  return c + t1 / 2L + t2 / 2L + t3 / 8L + t4 / 8L + t5 / 12L;
}

HPComplex kappa1_via_saddle(int p, const CriticalData& data, long M) {
  const HPComplex& t = data.t0;
  const HPComplex& s = data.s0;
  Bits bits = t.bits();
  HPReal pi = HPReal::pi(bits);
  SaddleJet J = SaddleJet::zero(bits);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      int ns = count_s({i, j});
      J.S2[i][j] = V_partial(p, t, s, 2 - ns, ns);
      for (int k = 0; k < 2; ++k) {
        int n3 = ns + k;
        J.S3[i][j][k] = V_partial(p, t, s, 3 - n3, n3);
        for (int l = 0; l < 2; ++l) J.S4[i][j][k][l] = V_partial(p, t, s, 4 - n3 - l, n3 + l);
      }
    }
  // Amplitude a = sin(2 pi s) e^{V1}; V2 enters as a constant at first order.
  HPComplex arg = s * (pi * 2L);
  HPComplex cot = hp::cos(arg) / hp::sin(arg);
  HPComplex sin2 = hp::sin(arg) * hp::sin(arg);
  J.log_a1[0] = V1_partial(t, s, 1, 0);
  J.log_a1[1] = V1_partial(t, s, 0, 1) + cot * (pi * 2L);
  J.log_a2[0][0] = V1_partial(t, s, 2, 0);
  J.log_a2[0][1] = J.log_a2[1][0] = V1_partial(t, s, 1, 1);
  J.log_a2[1][1] = V1_partial(t, s, 0, 2) - HPComplex(pi * pi * 4L) / sin2;
  J.c0 = V_correction(2, p, t, s, M);
  HPComplex c1 = first_correction(J);
  return c1 / HPComplex(HPReal::zero(bits), pi * 2L);
}

VolumeCS volume_cs(const CriticalData& data) {
  Bits bits = data.zeta.bits();
  HPReal pi = HPReal::pi(bits);
  HPReal pi2 = pi * pi;
  HPReal im = data.zeta.im * pi * 2L;
  // reduce into [-pi^2/2, pi^2/2)
  HPReal k = hp::floor(im / pi2 + 0.5);
  return {data.zeta.re * pi * 2L, im - k * pi2};
}

}  // namespace twistjones
