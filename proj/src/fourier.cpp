#include "twistjones/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <tuple>

#include "twistjones/potential.hpp"

namespace twistjones {

namespace {

using cld = std::complex<long double>;
const long double kPi = 3.141592653589793238462643383279502884L;

// D'_0 in (u, v - 1) is the square [kLo, kLo + kWidth]^2 cut by the t and s bounds.
constexpr long double kLo = 0.02L, kWidth = 0.68L;
constexpr int kMinLevel = 8, kMaxLevel = 12;

double smoothstep(double y) {
  if (y <= 0) return 0.0;
  if (y >= 1) return 1.0;
  double a = std::exp(-1.0 / y), b = std::exp(-1.0 / (1.0 - y));
  return a / (a + b);
}

double window(double x, double lo, double hi, double eps) {
  return smoothstep((x - lo) / eps) * smoothstep((hi - x) / eps);
}

struct Grid {
  int intervals = 0;
  long double h = 0;
  std::vector<long double> nodes;  // u_i, and v_j - 1
  std::vector<std::complex<double>> f;
  long double scale = 0;  // trapezoid sum of |integrand|
};

using GridKey = std::tuple<int, int, long, double, int>;

std::mutex cache_mutex;
std::map<GridKey, std::shared_ptr<const Grid>> cache;
std::deque<GridKey> cache_order;
constexpr std::size_t kCacheEntries = 6;

unsigned resolve_workers(unsigned w) {
  if (w) return w;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

std::shared_ptr<const Grid> build_grid(int p, const RootSpec& root, const BumpSpec& spec, int level,
                                       unsigned workers) {
  FinitePotential<long double> V(p, root, 0);
  const PhiEvaluator<long double>& phi = V.phi();
  const long double g = V.denom();
  const cld c0 = V.constant();
  auto grid = std::make_shared<Grid>();
  const int n = 1 << level;
  grid->intervals = n;
  grid->h = kWidth / n;
  grid->nodes.resize(n + 1);
  for (int i = 0; i <= n; ++i) grid->nodes[i] = kLo + i * grid->h;

  // phi(t + s + 1/(2g) - 1) and phi(t - s + 1/(2g)) live on the node grid,
  // the three t-terms on the half-step grid t_k = 1/2 + kLo + k h/2.
  std::vector<cld> B(n + 1), T(2 * n + 1);
  for (int i = 0; i <= n; ++i) B[i] = phi(cld(grid->nodes[i] + 0.5L / g, 0));
  const long double shift = root.infinite() ? 0.0L : 1.0L / (root.M * g);
  for (int k = 0; k <= 2 * n; ++k) {
    long double t = 0.5L + kLo + k * grid->h / 2;
    if (t < 0.5L || t > 0.909L) continue;  // psi vanishes there
    T[k] = root.infinite() ? 3.0L * phi(cld(t, 0))
                           : phi(cld(t, 0)) + phi(cld(t - shift, 0)) + phi(cld(t + shift, 0));
  }

  grid->f.assign(static_cast<std::size_t>(n + 1) * (n + 1), {});
  auto fill_rows = [&](int first, int stride) {
    for (int i = first; i <= n; i += stride) {
      for (int j = 0; j <= n; ++j) {
        long double t = 0.5L + kLo + (i + j) * grid->h / 2;
        long double s = 0.5L + (j - i) * grid->h / 2;
        double w = bump(static_cast<double>(t), static_cast<double>(s), spec);
        if (w == 0.0) continue;
        long double poly = (2 * p + 1) * s * s - (2 * p + 3) * s + (2 / g - 2) * t;
        cld v = cld(0, kPi * poly) + c0 + (B[i] + B[j] - T[i + j]) / g;
        cld val = static_cast<long double>(w) * std::sin(2 * kPi * s) * std::exp(g * v);
        grid->f[static_cast<std::size_t>(i) * (n + 1) + j] = std::complex<double>(val);
      }
    }
  };
  unsigned nw = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(n + 1));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < nw; ++w) pool.emplace_back(fill_rows, static_cast<int>(w), static_cast<int>(nw));
  fill_rows(0, static_cast<int>(nw));
  for (auto& th : pool) th.join();

  long double sc = 0;
  for (const auto& z : grid->f) sc += std::abs(z);
  grid->scale = sc * grid->h * grid->h / 2;
  return grid;
}

std::shared_ptr<const Grid> sampled_grid(int p, const RootSpec& root, const BumpSpec& spec, int level,
                                         unsigned workers) {
  GridKey key{p, root.N, root.M, spec.eps, level};
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto grid = build_grid(p, root, spec, level, workers);
  std::lock_guard<std::mutex> lock(cache_mutex);
  if (cache.emplace(key, grid).second) {
    cache_order.push_back(key);
    if (cache_order.size() > kCacheEntries) {
      cache.erase(cache_order.front());
      cache_order.pop_front();
    }
  }
  return grid;
}

// (1/2) h^2 sum f_ij e^{-pi i g((m-n) u_i + (m+n) v_j)}
cld integrate(const Grid& grid, long m, long n, long double g) {
  const int N = grid.intervals;
  std::vector<cld> a(N + 1), b(N + 1);
  for (int i = 0; i <= N; ++i) {
    a[i] = std::polar(1.0L, -kPi * g * (m - n) * grid.nodes[i]);
    b[i] = std::polar(1.0L, -kPi * g * (m + n) * (grid.nodes[i] + 1));
  }
  cld sum = 0;
  for (int i = 0; i <= N; ++i) {
    cld row = 0;
    const std::complex<double>* f = &grid.f[static_cast<std::size_t>(i) * (N + 1)];
    for (int j = 0; j <= N; ++j) row += cld(f[j]) * b[j];
    sum += a[i] * row;
  }
  return sum * (grid.h * grid.h / 2);
}

}  // namespace

double bump(double t, double s, const BumpSpec& spec) {
  if (!(spec.eps > 0)) throw DomainError("bump: eps must be positive");
  return window(t - s, 0.02, 0.7, spec.eps) * window(t + s - 1.0, 0.02, 0.7, spec.eps) *
         window(s, 0.2, 0.8, spec.eps) * window(t, 0.5, 0.909, spec.eps);
}

FourierCoeff fourier_integral(long m, long n, int p, const RootSpec& root, const BumpSpec& spec,
                              const QuadratureOptions& opts) {
  if (!(opts.tol > 0)) throw DomainError("fourier: tol must be positive");
  const long double g = root.denom(64).to_long_double();
  // resolution grows with the oscillation frequency denom (2 + |m| + |n|)
  double points = 8.0 * static_cast<double>(kWidth) * static_cast<double>(g) * (2 + std::labs(m) + std::labs(n));
  int level = std::max(kMinLevel, static_cast<int>(std::ceil(std::log2(points))));
  if (level > kMaxLevel + 1) throw DomainError("fourier: frequency too high for the quadrature grid");
  level = std::min(level, kMaxLevel - 1);
  cld prev = integrate(*sampled_grid(p, root, spec, level, opts.workers), m, n, g);
  double err = INFINITY;
  const int last = std::min(kMaxLevel, level + opts.max_levels);
  for (int L = level + 1; L <= last; ++L) {
    auto grid = sampled_grid(p, root, spec, L, opts.workers);
    cld cur = integrate(*grid, m, n, g);
    err = static_cast<double>(std::abs(cur - prev));
    if (err <= opts.tol * static_cast<double>(grid->scale)) {
      FourierCoeff out;
      out.m = m;
      out.n = n;
      out.value = from_cld(cur);
      out.quad_error = err;
      out.grid = {grid->intervals + 1, grid->intervals + 1};
      return out;
    }
    prev = cur;
  }
  throw AccuracyError("fourier: quadrature did not settle; last levels differ by " + std::to_string(err), err);
}

FourierCoeff h_hat(long m, long n, int p, const RootSpec& root, const BumpSpec& spec, const QuadratureOptions& opts) {
  if (root.infinite()) throw DomainError("h_hat: M must be finite; use h_tilde at M = infinity");
  FourierCoeff c = fourier_integral(m, n, p, root, spec, opts);
  const long double g = root.denom(64).to_long_double();
  const long double M = static_cast<long double>(root.M);
  long double sign = ((m + n + p) % 2 == 0) ? 1.0L : -1.0L;
  cld pre = sign * std::polar(1.0L, kPi * (1 / M - 0.25L)) * std::pow(g, 1.5L) / std::sin(kPi / (M * g));
  c.value = from_cld(pre * c.value.to_cld());
  c.quad_error *= static_cast<double>(std::abs(pre));
  return c;
}

FourierCoeff h_tilde(long m, long n, int p, const RootSpec& root, const BumpSpec& spec, const QuadratureOptions& opts) {
  if (n < 0) throw DomainError("h_tilde: defined on n >= 0");
  if (!root.infinite()) {
    FourierCoeff c = h_hat(m, n, p, root, spec, opts);
    cld f = 1.0L - std::polar(1.0L, 2 * kPi * (n + 1) / static_cast<long double>(root.M));
    c.value = from_cld(f * c.value.to_cld());
    c.quad_error *= static_cast<double>(std::abs(f));
    return c;
  }
  FourierCoeff c = fourier_integral(m, n, p, root, spec, opts);
  const long double N = root.N;
  long double sign = ((m + n + p + 1) % 2 == 0) ? 1.0L : -1.0L;
  cld pre = sign * 2.0L * std::polar(1.0L, kPi / 4) * static_cast<long double>(n + 1) * std::pow(N, 2.5L);
  c.value = from_cld(pre * c.value.to_cld());
  c.quad_error *= static_cast<double>(std::abs(pre));
  return c;
}

Reconstruction poisson_reconstruct(int p, const RootSpec& root, int K, const BumpSpec& spec,
                                   const QuadratureOptions& opts) {
  if (K < 0) throw DomainError("poisson_reconstruct: K must be non-negative");
  Reconstruction out;
  out.K = K;
  cld sum = 0;
  for (long m = -K; m <= K; ++m)
    for (long n = 0; n <= K; ++n) {
      out.terms.push_back(h_tilde(m, n, p, root, spec, opts));
      sum += out.terms.back().value.to_cld();
    }
  out.value = from_cld(sum);
  out.jones = jones(TwistParam{p}, root, PrecisionContext::for_color(root.N));
  out.deviation = relative_distance(out.value, out.jones);
  return out;
}

void clear_fourier_cache() {
  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.clear();
  cache_order.clear();
}

}  // namespace twistjones
