#include "stripelab/stripes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "stripelab/accum.hpp"
#include "stripelab/sums.hpp"

namespace stripelab {

namespace {

std::mutex strip_mutex;
std::map<std::pair<int, double>, Certified> jbar_cache;

void check_strip(int ell, double p) {
  require(ell >= 1, "strip height must be >= 1");
  require(p > 4.0, "strip sums need p > 4");
}

// distance from r to the nearest multiple of 2h
long fold_distance(long r, long h) {
  long m = r % (2 * h);
  return std::min(m, 2 * h - m);
}

// open-line strip kernel, exact to long-double rounding; the pair of columns
// at offset x sees (ell - |j|) transverse pairs at row offset j
long double phi_open_ld(long long x, int ell, double p) {
  long double x2 = (long double)x * (long double)x;
  long double acc = (long double)ell * std::pow(x2, -0.5L * (long double)p);
  for (int j = 1; j < ell; ++j)
    acc += 2.0L * (long double)(ell - j) *
           std::pow(x2 + (long double)j * (long double)j, -0.5L * (long double)p);
  return acc / ell;
}

// slop of the stored tau against the exact 2(J - J_c), per unit 1/h
double tau_slop(const ModelParams& params, double tol) {
  return 4e-16 + 2.0 * critical_coupling(params.p, params.d, tol).tail.tail_estimate;
}

// integral over (0,inf) of u^s (1 - tanh u), through the alternating zeta
// series: Gamma(s+1) (1 - 2^{-s}) zeta(s+1) / 2^s
Certified tanh_tail_integral(double s) {
  require(s > 0, "tanh tail integral needs s > 0");
  Certified out;
  long double z = std::riemann_zetal((long double)s + 1.0L);
  out.value = (double)(std::tgammal((long double)s + 1.0L) *
                       (1.0L - std::pow(2.0L, -(long double)s)) * z /
                       std::pow(2.0L, (long double)s));
  out.tail.tail_estimate = 5e-16 * out.value;
  out.tail.direction = TailBound::Side::TwoSided;
  return out;
}

}  // namespace

Certified stripe_energy(int h, const ModelParams& params, double tol) {
  require(h >= 1, "stripe width must be >= 1");
  require(tol > 0, "tol must be positive");
  const double p = params.p;
  const int d = params.d;
  // window from the comparison bound: (2/h) sum_{r>R} r v(r) <= (2/h) C R^{-e}/e
  const double C = comparison_constant(p, d);
  const double e = p - d - 1.0;
  const double target = std::max(0.25 * tol, 1e-18);
  // the summand vanishes for r <= h, so a window short of h just leaves the
  // direct sum empty; the tail bound covers everything past R either way
  long R = (long)std::ceil(std::pow(2.0 * C / (h * e * target), 1.0 / e));
  R = std::max(R, (long)64);
  Kahan acc;
  const long split = std::min(R, (long)47);
  for (long r = h + 1; r <= split; ++r)
    acc.add((long double)(r - fold_distance(r, h)) * detail::potential_ld((int)r, p, d));
  // beyond the exponential remainder the potential is its smooth power law
  const long double kappa = (long double)kappa_closed_form(p, d);
  for (long r = std::max((long)(h + 1), (long)48); r <= R; ++r)
    acc.add((long double)(r - fold_distance(r, h)) * kappa *
            std::pow((long double)r, (long double)(d - 1) - (long double)p));
  Certified out;
  out.value = (double)(params.tau / h + 2.0L * acc.value() / h);
  out.tail.direct_radius = (double)R;
  out.tail.tail_estimate = 2.0 * C * std::pow((double)R, -e) / (e * h) +
                           tau_slop(params, tol) / h + 1e-17 * std::fabs(out.value);
  out.tail.direction = TailBound::Side::TwoSided;
  return out;
}

Certified stripe_asymptotic_constant(double p, int d, double tol) {
  require(d == 2 || d == 3, "dimension must be 2 or 3");
  require(p > 2.0 * d, "decay exponent must satisfy p > 2d");
  require(tol > 0, "tol must be positive");
  Certified kap = kappa_p(p, d, 0.1 * tol);
  Certified tanh_part = tanh_tail_integral(p - d - 2.0);
  const double f = std::pow(2.0, p - d) / std::tgamma(p - d + 1.0);
  Certified out;
  out.value = f * kap.value * tanh_part.value;
  out.tail.direct_radius = std::max(kap.tail.direct_radius, tanh_part.tail.direct_radius);
  out.tail.tail_estimate =
      f * (kap.tail.tail_estimate * (tanh_part.value + tanh_part.tail.tail_estimate) +
           std::fabs(kap.value) * tanh_part.tail.tail_estimate);
  out.tail.direction = TailBound::Side::TwoSided;
  return out;
}

double predicted_stripe_width(const ModelParams& params, double a_dp) {
  require(params.tau < 0, "striped regime needs tau < 0");
  require(a_dp > 0, "asymptotic constant must be positive");
  const double q = params.p - params.d;
  return std::pow(q * a_dp / -params.tau, 1.0 / (q - 1.0));
}

double predicted_stripe_energy(const ModelParams& params, double a_dp) {
  require(params.tau < 0, "striped regime needs tau < 0");
  require(a_dp > 0, "asymptotic constant must be positive");
  const double q = params.p - params.d;
  return -(q - 1.0) * std::pow(std::pow(q, q) * a_dp, -1.0 / (q - 1.0)) *
         std::pow(-params.tau, q / (q - 1.0));
}

StripeOptimum optimal_stripe(const ModelParams& params, int h_max, double tol) {
  require(h_max >= 1, "h_max must be >= 1");
  const int kHardCap = 1 << 15;
  StripeOptimum out;
  int lo = 1;
  while (true) {
    const int n = h_max - lo + 1;
    std::vector<std::pair<int, Certified>> chunk((size_t)n);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i)
      chunk[(size_t)i] = {lo + i, stripe_energy(lo + i, params, tol)};
    out.curve.insert(out.curve.end(), chunk.begin(), chunk.end());
    const size_t m = out.curve.size();
    // below the transition a descending right edge means the minimum lies
    // further out; above it the curve is positive everywhere and the uniform
    // state wins no matter how far we look
    if (params.tau < 0.0 && m >= 2 && h_max < kHardCap &&
        out.curve[m - 1].second.value < out.curve[m - 2].second.value) {
      lo = h_max + 1;
      h_max = std::min(2 * h_max, kHardCap);
      continue;
    }
    break;
  }
  int best = 0;
  double best_e = 0.0;
  for (const auto& [h, es] : out.curve)
    if (best == 0 || es.value < best_e) {
      best = h;
      best_e = es.value;
    }
  if (best_e >= 0.0) {
    out.homogeneous = true;  // covers tau >= 0, where every period costs energy
  } else {
    out.width = best;
    out.energy = best_e;
  }
  return out;
}

Certified strip_kernel(int x, int ell, int half_length, double p, double tol) {
  check_strip(ell, p);
  require(half_length >= 0, "half_length must be >= 0");
  require(tol > 0, "tol must be positive");
  Certified out;
  if (half_length == kOpenLine) {
    require(x != 0, "strip kernel pole at x = 0");
    out.value = (double)phi_open_ld(x, ell, p);
    out.tail.direct_radius = ell;
    out.tail.tail_estimate = 1e-17 * out.value;
    out.tail.direction = TailBound::Side::TwoSided;
    return out;
  }
  const long period = 2L * half_length;
  long r = x % period;
  if (r < 0) r += period;
  require(r != 0, "strip kernel pole at an image of x = 0");
  const double C = comparison_constant(p, 2);
  const double target = std::max(1e-16, tol);
  Kahan acc;
  acc.add(phi_open_ld(r, ell, p));
  double tail;
  long q = 0;
  do {
    ++q;
    acc.add(phi_open_ld(r + q * period, ell, p));
    acc.add(phi_open_ld(r - q * period, ell, p));
    // all remaining images sit at distance >= D, spaced by the period
    const double D = (double)(period * q + 1);
    tail = 2.0 * C * std::pow(D, 1.0 - p) * (1.0 + D / ((p - 2.0) * period));
  } while (tail > target && q < 4096);
  out.value = (double)acc.value();
  out.tail.direct_radius = (double)(period * q);
  out.tail.tail_estimate = tail + 1e-17 * out.value;
  out.tail.direction = TailBound::Side::Lower;
  return out;
}

Certified strip_critical_coupling(int ell, double p, double tol) {
  check_strip(ell, p);
  require(tol > 0, "tol must be positive");
  {
    std::lock_guard<std::mutex> lk(strip_mutex);
    auto it = jbar_cache.find({ell, p});
    if (it != jbar_cache.end()) return it->second;
  }
  const double C = comparison_constant(p, 2);
  const double target = std::max(1e-15, 1e-3 * tol);
  // sum_{r>R} r phi_ell(r) <= C R^{3-p}/(p-3) since phi_ell <= v
  long R = (long)std::ceil(std::pow(C / ((p - 3.0) * target), 1.0 / (p - 3.0)));
  R = std::max(R, (long)64);
  Kahan acc;
  for (long r = 1; r <= R; ++r) acc.add((long double)r * phi_open_ld(r, ell, p));
  Certified out;
  out.value = (double)acc.value();
  out.tail.direct_radius = (double)R;
  out.tail.tail_estimate = target + 1e-17 * out.value;
  out.tail.direction = TailBound::Side::Lower;
  std::lock_guard<std::mutex> lk(strip_mutex);
  jbar_cache.insert({{ell, p}, out});
  return out;
}

Certified block_energy(int h, int ell, const ModelParams& params, double tol) {
  require(params.d == 2, "block energies live in the planar strip");
  check_strip(ell, params.p);
  require(h >= 1, "block width must be >= 1");
  require(tol > 0, "tol must be positive");
  const double p = params.p;
  Certified jbar = strip_critical_coupling(ell, p, tol);
  const double C = comparison_constant(p, 2);
  const double target = std::max(0.25 * tol, 1e-16);
  long R = (long)std::ceil(std::pow(2.0 * C / ((p - 3.0) * h * target), 1.0 / (p - 3.0)));
  R = std::max(R, (long)64);
  Kahan acc;
  for (long r = h + 1; r <= R; ++r)
    acc.add((long double)(r - fold_distance(r, h)) * phi_open_ld(r, ell, p));
  Certified out;
  out.value = (double)(2.0L * ((long double)params.J - jbar.value) / h +
                       2.0L * acc.value() / h);
  out.tail.direct_radius = (double)R;
  out.tail.tail_estimate = 2.0 * C * std::pow((double)R, 3.0 - p) / ((p - 3.0) * h) +
                           2.0 * jbar.tail.tail_estimate / h +
                           1e-17 * std::fabs(out.value);
  out.tail.direction = TailBound::Side::TwoSided;
  return out;
}

Certified corner_correction(int h, int ell, double p, double tol) {
  check_strip(ell, p);
  require(h >= 1 && h <= ell, "corner correction needs 1 <= h <= ell");
  require(tol > 0, "tol must be positive");
  // A = -8 sum_{a>=1} min(a,h) T(a) with the transverse sum taken exactly:
  //   T(a) = ell (v(a) - a^{-p})/2 - sum_{b<ell} (ell-b) (a^2+b^2)^{-p/2}
  const double target = std::max(0.1 * tol, 1e-14);
  const double c1 = 1.0 / (p - 2.0) + 0.4;  // T(a) <= c1 a^{2-p} for p > 4
  long A = (long)std::ceil(std::pow(8.0 * h * c1 / ((p - 3.0) * target), 1.0 / (p - 3.0)));
  A = std::max(A, (long)(2 * ell));
  Kahan acc;
  for (long a = 1; a <= A; ++a) {
    long double t =
        0.5L * (long double)ell *
        (detail::potential_ld((int)a, p, 2) - std::pow((long double)a, -(long double)p));
    for (int b = 1; b < ell; ++b)
      t -= (long double)(ell - b) *
           std::pow((long double)(a * a) + (long double)b * b, -0.5L * (long double)p);
    acc.add((long double)std::min(a, (long)h) * t);
  }
  Certified out;
  out.value = (double)(-8.0L * acc.value());
  out.tail.direct_radius = (double)A;
  out.tail.tail_estimate = target + 1e-16 * std::fabs(out.value);
  out.tail.direction = TailBound::Side::Upper;  // dropped terms only deepen it
  return out;
}

CornerConstant corner_constant(double p, int h_base, int ell_factor, double tol) {
  require(h_base >= 1, "h_base must be >= 1");
  require(ell_factor >= 1, "ell_factor must be >= 1");
  CornerConstant out;
  for (int k = 0; k < 4; ++k) {
    const int h = h_base << k;
    out.table.emplace_back(h, corner_correction(h, ell_factor * h, p, tol).value);
  }
  // A(h) + kappa ~ c h^{4-p} once ell tracks h, so one Richardson step per
  // doubling cancels the leading power
  const double w = std::pow(2.0, p - 4.0);
  std::vector<double> extr;
  for (size_t k = 0; k + 1 < out.table.size(); ++k)
    extr.push_back((w * out.table[k + 1].second - out.table[k].second) / (w - 1.0));
  out.value = -extr.back();
  out.stability = std::fabs(extr.back() - extr[extr.size() - 2]) /
                  std::fabs(extr.back());
  std::vector<std::pair<double, double>> xy;
  for (const auto& [h, a] : out.table) xy.emplace_back((double)h, a + out.value);
  out.decay_exponent = fit_power_law_exponent(xy);
  return out;
}

Certified ring_energy(const BlockProfile& profile, int ell,
                      const ModelParams& params, double tol) {
  require(params.d == 2, "ring energies live in the planar strip");
  check_strip(ell, params.p);
  require(!profile.widths.empty(), "ring profile has no blocks");
  for (int w : profile.widths) require(w >= 1, "block width must be >= 1");
  Certified out;
  out.tail.direction = TailBound::Side::TwoSided;
  if (profile.widths.size() == 1) return out;  // uniform ring
  require(profile.widths.size() % 2 == 0,
          "alternating blocks close around a ring only in even number");
  long n = 0;
  for (int w : profile.widths) n += w;
  require(n % 2 == 0, "ring circumference must be even");
  std::vector<int> spin((size_t)n);
  {
    long pos = 0;
    int sign = 1;
    for (int w : profile.widths) {
      for (int i = 0; i < w; ++i) spin[(size_t)pos++] = sign;
      sign = -sign;
    }
  }
  long unlike_nn = 0;
  for (long x = 0; x < n; ++x)
    if (spin[(size_t)x] != spin[(size_t)((x + 1) % n)]) ++unlike_nn;
  Kahan acc;
  acc.add(2.0L * (long double)params.J * (long double)unlike_nn);
  double tail = 0.0;
  for (long sep = 1; sep < n; ++sep) {
    Certified phi = strip_kernel((int)sep, ell, (int)(n / 2), params.p,
                                 tol / (double)(n * n));
    long deficit = 0;  // sum over x of (s_x s_{x+sep} - 1), unwrapped pairs
    for (long x = 0; x + sep < n; ++x)
      if (spin[(size_t)x] != spin[(size_t)(x + sep)]) deficit -= 2;
    acc.add((long double)phi.value * (long double)deficit);
    tail += phi.tail.tail_estimate * (double)(-deficit);
  }
  out.value = (double)acc.value();
  out.tail.direct_radius = (double)n;
  out.tail.tail_estimate = tail + 1e-15 * std::fabs(out.value);
  return out;
}

BoundReport chessboard_check(const BlockProfile& profile, int ell,
                             const ModelParams& params, double tol) {
  Certified lhs = ring_energy(profile, ell, params, tol);
  BoundReport r;
  r.bound_name = "ring-chessboard";
  r.lhs = lhs.value;
  Kahan rhs;
  double rhs_tail = 0.0;
  if (profile.widths.size() > 1) {
    for (int w : profile.widths) {
      Certified eb = block_energy(w, ell, params, tol);
      // fold the certificate downward so the reported rhs is a true bound
      rhs.add((long double)w * (eb.value - eb.tail.tail_estimate));
      rhs_tail += w * eb.tail.tail_estimate;
    }
  }
  r.rhs = (double)rhs.value();
  r.slack = lhs.tail.tail_estimate + rhs_tail;
  r.pass = lhs.value + lhs.tail.tail_estimate >= r.rhs;
  return r;
}

Certified stripe_set_energy(const std::vector<int>& widths, int ell,
                            const ModelParams& params, double tol) {
  require(params.d == 2, "stripe sets live in the planar strip");
  check_strip(ell, params.p);
  Certified out;
  out.tail.direction = TailBound::Side::TwoSided;
  if (widths.empty()) return out;
  require(widths.size() % 2 == 1, "widths alternate and are flipped at both ends");
  for (int w : widths) require(w >= 1, "stripe width must be >= 1");
  const double p = params.p;
  std::vector<long> flipped_start;
  long span = 0;
  for (size_t i = 0; i < widths.size(); ++i) {
    if (i % 2 == 0) flipped_start.push_back(span);
    span += widths[i];
  }
  std::vector<long double> phi((size_t)span, 0.0L);
  for (long x = 1; x < span; ++x) phi[(size_t)x] = phi_open_ld(x, ell, p);
  Kahan acc;
  double tail = 0.0;
  for (size_t i = 0; i < widths.size(); i += 2) {
    Certified m = facing_bond_sum(widths[i], p, 2, tol);
    acc.add(4.0L * (long double)params.J * ell);
    acc.add(-2.0L * (long double)ell * m.value);
    tail += 2.0 * ell * m.tail.tail_estimate;
  }
  for (size_t i = 0; i < flipped_start.size(); ++i)
    for (size_t j = i + 1; j < flipped_start.size(); ++j) {
      const int hi = widths[2 * i];
      const int hj = widths[2 * j];
      Kahan pair_sum;
      for (int a = 0; a < hi; ++a)
        for (int b = 0; b < hj; ++b)
          pair_sum.add(phi[(size_t)(flipped_start[j] + b - flipped_start[i] - a)]);
      acc.add(4.0L * (long double)ell * pair_sum.value());
    }
  out.value = (double)acc.value();
  out.tail.direct_radius = (double)span;
  out.tail.tail_estimate = tail + 1e-15 * std::fabs(out.value);
  return out;
}

BoundReport localized_stripe_bound(const std::vector<int>& widths, int ell,
                                   const ModelParams& params,
                                   double bound_constant, double tol) {
  Certified eq = stripe_set_energy(widths, ell, params, tol);
  const double p = params.p;
  BoundReport r;
  r.bound_name = "stripe-localization";
  r.lhs = eq.value;
  Kahan rhs;
  double rhs_tail = 0.0;
  for (int w : widths) {
    Certified es = stripe_energy(w, params, tol);
    rhs.add((long double)ell * w * (es.value - es.tail.tail_estimate));
    rhs_tail += ell * w * es.tail.tail_estimate;
  }
  long double penalty = std::pow((long double)ell, 4.0L - (long double)p);
  for (int w : widths) penalty += std::pow((long double)w, 4.0L - (long double)p);
  rhs.add((long double)params.tau * ell);
  rhs.add(-(long double)bound_constant * penalty);
  r.rhs = (double)rhs.value();
  r.slack = eq.tail.tail_estimate + rhs_tail;
  long total = 0;
  for (int w : widths) total += w;
  if (total > ell) {
    r.applicable = false;
    r.pass = false;
    return r;
  }
  r.pass = eq.value + eq.tail.tail_estimate >= r.rhs;
  return r;
}

double fit_stripe_bound_constant(const std::vector<StripeSet>& battery,
                                 const ModelParams& params, double tol) {
  double c = 0.0;
  for (const StripeSet& q : battery) {
    Certified eq = stripe_set_energy(q.widths, q.ell, params, tol);
    long double lower = (long double)params.tau * q.ell;
    long double penalty = std::pow((long double)q.ell, 4.0L - (long double)params.p);
    for (int w : q.widths) {
      lower += (long double)q.ell * w * stripe_energy(w, params, tol).value;
      penalty += std::pow((long double)w, 4.0L - (long double)params.p);
    }
    c = std::max(c, (double)((lower - eq.value) / penalty));
  }
  return c;
}

double fit_power_law_exponent(const std::vector<std::pair<double, double>>& xy) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const auto& [x, y] : xy) {
    if (!(x > 0.0) || y == 0.0) continue;
    const double lx = std::log(x);
    const double ly = std::log(std::fabs(y));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  require(n >= 2, "slope fit needs at least two usable points");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace stripelab
