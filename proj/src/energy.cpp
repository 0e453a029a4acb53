#include "stripelab/energy.hpp"

#include <omp.h>

#include <cmath>
#include <vector>

#include "stripelab/accum.hpp"
#include "stripelab/sums.hpp"

namespace stripelab {

namespace {

int popcount_axes(unsigned axes, int dim) {
  int c = 0;
  for (int k = 0; k < dim; ++k)
    if (axes & (1u << k)) ++c;
  return c;
}

// Dropped-image bound for one kernel entry: every omitted image vector n has
// |n|_inf = m > N, so the image site sits at distance >= Lmin*(m-1)+1, and a
// shell at m holds (2m+1)^a - (2m-1)^a vectors.
double image_tail_bound(int N, int a, int lmin, double p) {
  if (a == 0) return 0.0;
  long double acc = 0.0L;
  int M = 2 * N + 64;
  long double last = 0.0L;
  for (int m = N + 1; m <= M; ++m) {
    long double shell = std::pow((long double)(2 * m + 1), a) -
                        std::pow((long double)(2 * m - 1), a);
    long double z = (long double)lmin * (m - 1) + 1;
    last = shell * std::pow(z, (long double)-p);
    acc += last;
  }
  // geometric-style remainder: terms decay faster than m^{a-1-p}
  acc += last * (long double)M / (p - a) * 2.0L;
  return (double)acc;
}

}  // namespace

PeriodicKernel::PeriodicKernel(const BoxGeometry& g, unsigned axes, double p,
                               double per_entry_tail_target) {
  dim_ = g.dim();
  require(axes < (1u << dim_), "PeriodicKernel: axis out of range");
  int a = popcount_axes(axes, dim_);
  int lmin = 0;
  for (int k = 0; k < dim_; ++k) {
    length_[k] = g.dims[(size_t)k];
    wrap_[k] = (axes & (1u << k)) != 0;
    span_[k] = wrap_[k] ? length_[k] : 2 * length_[k] - 1;
    shift_[k] = wrap_[k] ? 0 : length_[k] - 1;
    if (wrap_[k]) lmin = lmin == 0 ? length_[k] : std::min(lmin, length_[k]);
  }

  int N = 0;
  if (a > 0) {
    N = 4;
    while (N < 64 && image_tail_bound(N, a, lmin, p) > per_entry_tail_target) N *= 2;
    tail_ = image_tail_bound(N, a, lmin, p);
  }
  image_radius_ = N;

  int64_t entries = (int64_t)span_[0] * span_[1] * span_[2];
  table_.assign((size_t)entries, 0.0);
  int n0 = wrap_[0] ? N : 0, n1 = wrap_[1] ? N : 0, n2 = wrap_[2] ? N : 0;
#pragma omp parallel for schedule(static)
  for (int64_t e = 0; e < entries; ++e) {
    int64_t rest = e;
    int delta[3];
    for (int k = 0; k < 3; ++k) {
      delta[k] = (int)(rest % span_[k]) - shift_[k];
      rest /= span_[k];
    }
    Kahan acc;
    for (int i2 = -n2; i2 <= n2; ++i2)
      for (int i1 = -n1; i1 <= n1; ++i1)
        for (int i0 = -n0; i0 <= n0; ++i0) {
          int64_t z0 = delta[0] + (int64_t)i0 * length_[0];
          int64_t z1 = delta[1] + (int64_t)i1 * length_[1];
          int64_t z2 = delta[2] + (int64_t)i2 * length_[2];
          int64_t r2 = z0 * z0 + z1 * z1 + z2 * z2;
          if (r2 == 0) continue;  // a site never interacts with itself
          acc.add(pair_kernel(r2, p));
        }
    table_[(size_t)e] = (double)acc.value();
  }
}

double PeriodicKernel::at(const Site& a, const Site& b) const {
  int64_t idx = 0, stride = 1;
  for (int k = 0; k < 3; ++k) {
    int delta = a[(size_t)k] - b[(size_t)k];
    if (wrap_[k]) {
      delta %= length_[k];
      if (delta < 0) delta += length_[k];
    } else {
      delta += shift_[k];
    }
    idx += stride * delta;
    stride *= span_[k];
  }
  return table_[(size_t)idx];
}

namespace {

struct EnergyPieces {
  long double nn_interior = 0.0L;
  long double lr_interior = 0.0L;
  long double nn_cross = 0.0L;
  long double lr_cross = 0.0L;
  double tail = 0.0;
};

// Sums f(i) over i < n with one compensated accumulator per thread, merged in
// thread order; identical results for a fixed thread count.
template <class F>
long double parallel_sum(int64_t n, F&& f) {
  int threads = omp_get_max_threads();
  std::vector<Kahan> part((size_t)threads);
#pragma omp parallel num_threads(threads)
  {
    Kahan& acc = part[(size_t)omp_get_thread_num()];
#pragma omp for schedule(static)
    for (int64_t i = 0; i < n; ++i) acc.add(f(i));
  }
  Kahan total;
  for (const Kahan& k : part) total.add(k.value());
  return total.value();
}

EnergyPieces evaluate(const SpinConfiguration& config, const ModelParams& params,
                      double tol, bool want_interior, bool want_boundary) {
  config.validate(params.d);
  const BoxGeometry& g = config.geometry;
  const int64_t volume = g.volume();
  const int d = g.dim();
  const double J = params.J, p = params.p;

  const auto* periodic = std::get_if<Periodic>(&config.bc);
  const auto* explicit_ext = std::get_if<ExplicitExterior>(&config.bc);
  const int8_t exterior_sign = std::holds_alternative<AllMinus>(config.bc) ? -1 : 1;

  EnergyPieces out;
  if (periodic && !want_interior) return out;  // no exterior, boundary is zero

  std::vector<int64_t> minus, plus, differing;
  for (int64_t i = 0; i < volume; ++i) {
    (config.spin(i) < 0 ? minus : plus).push_back(i);
    if (config.spin(i) != exterior_sign) differing.push_back(i);
  }

  double entry_target = 0.0;
  if (periodic) {
    int64_t opposite_pairs = (int64_t)minus.size() * (int64_t)plus.size();
    entry_target = tol / 10.0 / (double)(2 * std::max<int64_t>(opposite_pairs, 1));
  }
  PeriodicKernel kernel(g, periodic ? periodic->axes : 0u, p, entry_target);

  // nearest-neighbor bonds and crossings
  if (want_interior || want_boundary) {
    Kahan nn_in, nn_cross;
    for (int64_t i = 0; i < volume; ++i) {
      Site x = g.site_at(i);
      int8_t sx = config.spin(i);
      for (int k = 0; k < d; ++k) {
        Site up = x;
        up[(size_t)k] += 1;
        if (g.contains(up)) {
          if (want_interior && config.spin(up) != sx) nn_in.add(2.0L * J);
          continue;
        }
        if (periodic) {
          if ((periodic->axes & (1u << k)) && g.dims[(size_t)k] >= 2) {
            Site wrapped = x;
            wrapped[(size_t)k] = g.origin[(size_t)k];
            if (want_interior && config.spin(wrapped) != sx) nn_in.add(2.0L * J);
          }
          continue;  // open axis: no exterior
        }
        // uniform exterior sign here; explicit minus sites are corrected below
        if (want_boundary && exterior_sign != sx) nn_cross.add(2.0L * J);
      }
      if (!periodic && want_boundary && exterior_sign != sx) {
        for (int k = 0; k < d; ++k) {
          Site down = x;
          down[(size_t)k] -= 1;
          if (!g.contains(down)) nn_cross.add(2.0L * J);
        }
      }
    }
    out.nn_interior = nn_in.value();
    out.nn_cross = nn_cross.value();
  }

  // long-range pairs inside the box: only opposite-sign pairs contribute
  if (want_interior) {
    std::vector<Site> plus_sites(plus.size());
    for (size_t j = 0; j < plus.size(); ++j) plus_sites[j] = g.site_at(plus[j]);
    out.lr_interior = -2.0L * parallel_sum((int64_t)minus.size(), [&](int64_t mi) {
      Site x = g.site_at(minus[(size_t)mi]);
      Kahan row;
      for (const Site& y : plus_sites) row.add(kernel.at(x, y));
      return row.value();
    });
    if (periodic)
      out.tail += 2.0 * (double)minus.size() * (double)plus.size() *
                  kernel.per_entry_tail();
  }

  // interactions with the exterior
  if (!periodic && want_boundary) {
    Certified sp = lattice_sum(p, d, tol);
    out.lr_cross = -2.0L * parallel_sum((int64_t)differing.size(), [&](int64_t di) {
      Site x = g.site_at(differing[(size_t)di]);
      Kahan inside;
      for (int64_t j = 0; j < volume; ++j) {
        if (j == differing[(size_t)di]) continue;
        inside.add(kernel.at(x, g.site_at(j)));
      }
      return (long double)sp.value - inside.value();
    });
    out.tail += 2.0 * (double)differing.size() * sp.tail.tail_estimate;

    if (explicit_ext) {
      Kahan fix_lr, fix_nn;
      for (const Site& y : explicit_ext->minus_sites) {
        for (int64_t i = 0; i < volume; ++i) {
          Site x = g.site_at(i);
          fix_lr.add(-2.0L * config.spin(i) *
                     pair_kernel(squared_distance(x, y), p));
          if (squared_distance(x, y) == 1) fix_nn.add(2.0L * J * config.spin(i));
        }
      }
      out.lr_cross += fix_lr.value();
      out.nn_cross += fix_nn.value();
    }
  }

  // rounding slack on top of the structural certificates
  out.tail += 1e-16 * (double)volume;
  return out;
}

Certified package(const EnergyPieces& pieces) {
  Certified out;
  out.value = (double)(pieces.nn_interior + pieces.lr_interior + pieces.nn_cross +
                       pieces.lr_cross);
  out.tail.direct_radius = 0.0;
  out.tail.tail_estimate = pieces.tail;
  out.tail.direction = TailBound::Side::TwoSided;
  return out;
}

}  // namespace

Certified total_energy(const SpinConfiguration& config, const ModelParams& params,
                       double tol) {
  require(tol > 0, "total_energy: tol must be positive");
  return package(evaluate(config, params, tol, true, true));
}

Certified interior_energy(const SpinConfiguration& config, const ModelParams& params,
                          double tol) {
  require(tol > 0, "interior_energy: tol must be positive");
  return package(evaluate(config, params, tol, true, false));
}

Certified boundary_term(const SpinConfiguration& config, const ModelParams& params,
                        double tol) {
  require(tol > 0, "boundary_term: tol must be positive");
  return package(evaluate(config, params, tol, false, true));
}

}  // namespace stripelab
