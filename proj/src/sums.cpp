#include "stripelab/sums.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "stripelab/quad.hpp"

namespace stripelab {

namespace {

// Tail of sum_{n>N} n^{-s}, Euler-Maclaurin through the N^{-s-7} correction.
// Relative error ~ s^9 N^{-9} of the tail itself, which is far below
// long-double noise for every (s, N) pair we feed it (N >= 64).
long double em_zeta_tail(long double s, long double N) {
  long double iN = 1.0L / N;
  long double Npow = std::pow(N, -s);  // N^{-s}
  long double t = N * Npow / (s - 1.0L);
  t -= 0.5L * Npow;
  t += s * Npow * iN / 12.0L;
  t -= s * (s + 1) * (s + 2) * Npow * iN * iN * iN / 720.0L;
  t += s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * Npow * iN * iN * iN * iN * iN / 30240.0L;
  t -= s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * (s + 5) * (s + 6) * Npow *
       std::pow(iN, 7.0L) / 1209600.0L;
  return t;
}

// sum_{m>M} (x^2+m^2)^{-q/2} via the binomial expansion in (x/m)^2; needs
// M >= 16x so the series converges geometrically (ratio <= (q/2+k)/256).
long double transverse_tail(long double x, long double q, long double M) {
  long double b = 1.0L;  // binom(-q/2, k)
  long double x2k = 1.0L;
  long double acc = 0.0L;
  for (int k = 0; k <= 20; ++k) {
    long double term = b * x2k * em_zeta_tail(q + 2.0L * k, M);
    acc += term;
    b *= (-q / 2.0L - k) / (k + 1.0L);
    x2k *= x * x;
    if (std::fabs(term) < 1e-30L * std::fabs(acc)) break;
  }
  return acc;
}

long double kappa_closed_ld(long double p, int d) {
  // pi^{(d-1)/2} * Gamma((p-d+1)/2) / Gamma(p/2)
  long double lg = 0.5L * (d - 1) * std::log((long double)M_PI) +
                   std::lgamma((p - d + 1.0L) / 2.0L) - std::lgamma(p / 2.0L);
  return std::exp(lg);
}

// v for real row offset x; d says which lattice the potential lives on
// (transverse dimension d-1). Exact to long-double noise.
long double potential_real_ld(long double x, double p, int d) {
  if (x >= 48.0L) {
    // remainder to the smooth power law is ~e^{-2 pi x}, below any float
    return kappa_closed_ld(p, d) * std::pow(x, (long double)(d - 1) - p);
  }
  if (d == 2) {
    long double N = std::max(64.0L, std::ceil(16.0L * x));
    long double acc = std::pow(x, (long double)-p);
    long double s2 = 0.0L;
    for (long double n = 1.0L; n <= N; n += 1.0L)
      s2 += std::pow(x * x + n * n, -0.5L * p);
    return acc + 2.0L * (s2 + transverse_tail(x, p, N));
  }
  // d == 3: rows of the 2D transverse lattice, each row a 1D potential
  long double M = std::max(64.0L, std::ceil(16.0L * x));
  long double acc = potential_real_ld(x, p, 2);
  long double s2 = 0.0L;
  for (long double m = 1.0L; m <= M; m += 1.0L)
    s2 += potential_real_ld(std::sqrt(x * x + m * m), p, 2);
  // rows beyond M: v2(rho) = kappa2 rho^{1-p} to below noise since rho > 48
  s2 += kappa_closed_ld(p, 2) * transverse_tail(x, p - 1.0L, M);
  return acc + 2.0L * s2;
}

struct Key {
  double p;
  int d;
  bool operator<(const Key& o) const { return std::tie(p, d) < std::tie(o.p, o.d); }
};

std::mutex cache_mutex;
std::map<Key, Certified> jc_cache;
std::map<Key, Certified> sp_cache;
std::map<std::tuple<double, int, int>, Certified> facing_cache;

void check_pd(double p, int d) {
  require(d == 2 || d == 3, "dimension must be 2 or 3");
  require(p > 2.0 * d, "decay exponent must satisfy p > 2d");
}

}  // namespace

namespace detail {
long double potential_ld(int x, double p, int d) {
  return potential_real_ld((long double)x, p, d);
}
}  // namespace detail

double pair_kernel(std::int64_t squared_distance, double p) {
  require(squared_distance >= 1, "pair_kernel: zero distance");
  return std::pow((double)squared_distance, -0.5 * p);
}

double kappa_closed_form(double p, int d) {
  require(p > d - 1, "kappa: integrability needs p > d-1");
  return (double)kappa_closed_ld(p, d);
}

Certified kappa_p(double p, int d, double tol) {
  require(d == 2 || d == 3, "dimension must be 2 or 3");
  require(p > d - 1, "kappa: integrability needs p > d-1");
  // below p = d the substituted integrand is endpoint-singular; the closed
  // form still covers that range, quadrature does not need to
  require(p >= d, "kappa quadrature: needs p >= d");
  require(tol > 0, "tol must be positive");
  // y = tan(theta) maps the infinite integral to [0, pi/2):
  //   d=2: 2*int cos^{p-2}                 d=3: 2*pi*int sin cos^{p-3}
  double val;
  if (d == 2) {
    val = 2.0 * adaptive_simpson(
                    [p](double th) { return std::pow(std::cos(th), p - 2.0); }, 0.0,
                    M_PI_2, tol * 0.25);
  } else {
    val = 2.0 * M_PI *
          adaptive_simpson(
              [p](double th) { return std::sin(th) * std::pow(std::cos(th), p - 3.0); },
              0.0, M_PI_2, tol * 0.25);
  }
  Certified out;
  out.value = val;
  out.tail.direct_radius = M_PI_2;
  out.tail.tail_estimate = tol;
  out.tail.direction = TailBound::Side::TwoSided;
  return out;
}

double potential_smooth_part(int x, double p, int d) {
  require(x >= 1, "potential: x must be >= 1");
  return (double)(kappa_closed_ld(p, d) * std::pow((long double)x, (long double)(d - 1) - p));
}

long double potential_remainder(int x, double p, int d) {
  require(x >= 1, "potential: x must be >= 1");
  if (x >= 48) return 0.0L;  // below representable relative to v
  return detail::potential_ld(x, p, d) -
         kappa_closed_ld(p, d) * std::pow((long double)x, (long double)(d - 1) - p);
}

Certified effective_1d_potential(int x, double p, int d, double tol) {
  check_pd(p, d);
  require(x >= 1, "potential: x must be >= 1");
  require(tol > 0, "tol must be positive");
  long double v = detail::potential_ld(x, p, d);
  Certified out;
  out.value = (double)v;
  out.tail.direct_radius = std::max(64.0, 16.0 * x);
  // internal evaluation is exact to long-double noise; certificate covers the
  // double rounding plus a generous safety factor
  out.tail.tail_estimate = 1e-16 * std::fabs(out.value) + 1e-300;
  out.tail.direction = TailBound::Side::TwoSided;
  return out;
}

Certified critical_coupling(double p, int d, double tol) {
  check_pd(p, d);
  require(tol > 0, "tol must be positive");
  {
    std::lock_guard<std::mutex> lk(cache_mutex);
    auto it = jc_cache.find({p, d});
    if (it != jc_cache.end()) return it->second;
  }
  // J_c = sum_{x>=1} x v(x). Split at X0: direct rows below, smooth power-law
  // rows above via zeta (the exponential remainder R is below noise there).
  const int X0 = 12;
  long double direct = 0.0L;
  for (int x = 1; x <= X0; ++x) direct += (long double)x * detail::potential_ld(x, p, d);
  long double s = (long double)p - d;  // exponent of x^{d-p} rows, s > d >= 2
  long double ztail = std::riemann_zetal(s);
  for (int x = 1; x <= X0; ++x) ztail -= std::pow((long double)x, -s);
  long double value = direct + kappa_closed_ld(p, d) * ztail;
  // R-tail beyond X0: |R(x)| ~ e^{-2 pi x}; bound by a short geometric series
  long double r0 = std::fabs(potential_remainder(X0, p, d));
  Certified out;
  out.value = (double)value;
  out.tail.direct_radius = X0;
  out.tail.tail_estimate = (double)(4.0L * X0 * r0) + 5e-18 * std::fabs((double)value);
  out.tail.direction = TailBound::Side::TwoSided;
  std::lock_guard<std::mutex> lk(cache_mutex);
  jc_cache.insert({{p, d}, out});
  return out;
}

Certified lattice_sum(double p, int d, double tol) {
  check_pd(p, d);
  require(tol > 0, "tol must be positive");
  {
    std::lock_guard<std::mutex> lk(cache_mutex);
    auto it = sp_cache.find({p, d});
    if (it != sp_cache.end()) return it->second;
  }
  // S = sum_{n != 0} |n|^{-p} over Z^d, peeled one axis at a time:
  // S_d = S_{d-1} + 2 sum_{x>=1} v_d(x), with S_1 = 2 zeta(p).
  const int X0 = 12;
  long double value = 2.0L * std::riemann_zetal((long double)p);
  double slack = 0.0;
  for (int dim = 2; dim <= d; ++dim) {
    long double direct = 0.0L;
    for (int x = 1; x <= X0; ++x) direct += detail::potential_ld(x, p, dim);
    long double s = (long double)p - (dim - 1);
    long double ztail = std::riemann_zetal(s);
    for (int x = 1; x <= X0; ++x) ztail -= std::pow((long double)x, -s);
    value += 2.0L * (direct + kappa_closed_ld(p, dim) * ztail);
    slack += (double)(8.0L * std::fabs(potential_remainder(X0, p, dim)));
  }
  Certified out;
  out.value = (double)value;
  out.tail.direct_radius = X0;
  out.tail.tail_estimate = slack + 5e-18 * std::fabs(out.value);
  out.tail.direction = TailBound::Side::TwoSided;
  std::lock_guard<std::mutex> lk(cache_mutex);
  sp_cache.insert({{p, d}, out});
  return out;
}

Certified facing_bond_sum(int t, double p, int d, double tol) {
  check_pd(p, d);
  require(t >= 1 || t == kInfiniteDistance, "facing_bond_sum: bad distance");
  require(tol > 0, "tol must be positive");
  if (t == kInfiniteDistance) {
    Certified jc = critical_coupling(p, d, tol);
    jc.value *= 2.0;
    jc.tail.tail_estimate *= 2.0;
    return jc;
  }
  {
    std::lock_guard<std::mutex> lk(cache_mutex);
    auto it = facing_cache.find({p, d, t});
    if (it != facing_cache.end()) return it->second;
  }
  // M(t) = 2 [ sum_{x<=t} x v(x) + t sum_{x>t} v(x) ]
  const int X0 = std::max(t, 12);
  long double direct = 0.0L;
  for (int x = 1; x <= X0; ++x)
    direct += (long double)std::min(x, t) * detail::potential_ld(x, p, d);
  long double s = (long double)p - (d - 1);  // rows beyond X0 weighted by t
  long double ztail = std::riemann_zetal(s);
  for (int x = 1; x <= X0; ++x) ztail -= std::pow((long double)x, -s);
  long double value = 2.0L * (direct + (long double)t * kappa_closed_ld(p, d) * ztail);
  Certified out;
  out.value = (double)value;
  out.tail.direct_radius = X0;
  out.tail.tail_estimate =
      (double)(8.0L * t * std::fabs(potential_remainder(std::min(X0, 47), p, d))) +
      5e-18 * std::fabs(out.value);
  out.tail.direction = TailBound::Side::TwoSided;
  std::lock_guard<std::mutex> lk(cache_mutex);
  facing_cache.insert({{p, d, t}, out});
  return out;
}

double comparison_constant(double p, int d) {
  check_pd(p, d);
  // v_2(x) <= x^{-p} + 2 int_0^inf (x^2+t^2)^{-p/2} dt <= (1 + kappa) x^{1-p};
  // one more transverse axis multiplies in the (p-1)-row constant.
  double k1 = kappa_closed_form(p, 2);
  if (d == 2) return 1.0 + k1;
  return 1.0 + 2.0 * k1 + k1 * kappa_closed_form(p - 1.0, 2);
}

ModelParams ModelParams::create(double J, double p, int d, double tol) {
  check_pd(p, d);
  require(tol > 0, "tol must be positive");
  ModelParams m;
  m.J = J;
  m.p = p;
  m.d = d;
  m.jc = critical_coupling(p, d, tol).value;
  m.tau = 2.0 * (J - m.jc);
  return m;
}

ModelParams ModelParams::from_tau(double tau, double p, int d, double tol) {
  check_pd(p, d);
  require(tol > 0, "tol must be positive");
  ModelParams m;
  m.p = p;
  m.d = d;
  m.jc = critical_coupling(p, d, tol).value;
  m.tau = tau;
  m.J = m.jc + 0.5 * tau;
  return m;
}

}  // namespace stripelab
