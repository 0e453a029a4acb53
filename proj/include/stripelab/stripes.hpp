#pragma once

// Periodic stripe phases: per-site energies of period-2h patterns with
// certified truncation tails, the integer optimal-width search, the kernels
// and block energies of a height-ell strip, corner corrections with their
// Richardson extrapolation, ring energies against the chessboard lower bound,
// and the localized stripe-set estimate.

#include <utility>
#include <vector>

#include "stripelab/decomposition.hpp"
#include "stripelab/params.hpp"

namespace stripelab {

// Per-site energy of the period-2h striped state,
//   e_s(h) = tau/h + (2/h) sum_{r>h} (r - t_h(r)) v(r),
// where t_h(r) is the distance from r to the nearest multiple of 2h. The
// summand is nonnegative, so the truncated tail errs low; the certificate
// also absorbs the double rounding of tau.
Certified stripe_energy(int h, const ModelParams& params, double tol = 1e-12);

// Leading coefficient of e_s(h) - tau/h ~ A/h^{p-d}, assembled from the
// certified kappa quadrature and the tanh tail integral.
Certified stripe_asymptotic_constant(double p, int d, double tol = kDefaultTol);

// Continuum minimizer of tau/h + A/h^{p-d} and its value; both need tau < 0.
double predicted_stripe_width(const ModelParams& params, double a_dp);
double predicted_stripe_energy(const ModelParams& params, double a_dp);

struct StripeOptimum {
  bool homogeneous = false;  // no period beats the uniform state
  int width = 0;
  double energy = 0.0;
  std::vector<std::pair<int, Certified>> curve;  // every (h, e_s(h)) evaluated
};

// Integer argmin of e_s over [1, h_max], with h_max doubled as long as the
// right edge of the curve still descends. Ties resolve to the smaller width.
// Widths are evaluated in parallel.
StripeOptimum optimal_stripe(const ModelParams& params, int h_max,
                             double tol = 1e-12);

// Column pair kernel of the height-ell strip, averaged over one column:
//   phi_ell(x) = (1/ell) sum_q sum_{m,n=1..ell} ((x+2qL)^2+(m-n)^2)^{-p/2}
// with image shifts over q for a ring of circumference 2L. half_length =
// kOpenLine drops the images; that kernel is a finite sum, exact to rounding.
// x may be any integer off the image poles (x != 0 mod 2L).
inline constexpr int kOpenLine = 0;
Certified strip_kernel(int x, int ell, int half_length, double p,
                       double tol = kDefaultTol);

// Strip analogue of the critical coupling, sum_{r>=1} r phi_ell(r) on the
// open line. Cached per (ell, p).
Certified strip_critical_coupling(int ell, double p, double tol = kDefaultTol);

// Per-column energy of the period-2h block pattern in the height-ell strip:
//   ebar_ell(h) = 2(J - Jbar_c(ell))/h + (2/h) sum_{r>h} (r - t_h(r)) phi_ell(r).
// Planar models only.
Certified block_energy(int h, int ell, const ModelParams& params,
                       double tol = 1e-12);

// Corner correction of an h-by-ell rectangle of flipped spins relative to a
// full-height stripe of the same width:
//   A_ell(h) = -8 sum_{a,b>=1} min(a,h) min(b,ell) (a^2+b^2)^{-p/2},
// defined for h <= ell. The transverse sum folds through the exact column
// potential, so only the in-row window truncates; the dropped terms are
// negative and the report errs high.
Certified corner_correction(int h, int ell, double p, double tol = kDefaultTol);

struct CornerConstant {
  double value = 0.0;           // extrapolated -lim A_ell(h), positive
  double stability = 0.0;       // relative step between the last extrapolants
  double decay_exponent = 0.0;  // fitted log-log slope of |A + value|
  std::vector<std::pair<int, double>> table;  // (h, A_{ell_factor h}(h))
};

// Richardson extrapolation of the corner correction along h = h_base * 2^k,
// k = 0..3, with ell = ell_factor * h held proportional.
CornerConstant corner_constant(double p, int h_base, int ell_factor,
                               double tol = kDefaultTol);

struct BlockProfile {
  std::vector<int> widths;  // alternating blocks around the ring
};

// Energy per height row, relative to uniform, of the alternating block
// profile on a ring of circumference sum(widths), interacting through the
// image-summed strip kernel. A single block is the uniform ring, energy zero;
// otherwise the block count and the circumference must both be even.
Certified ring_energy(const BlockProfile& profile, int ell,
                      const ModelParams& params, double tol = kDefaultTol);

// Chessboard estimate: ring energy >= sum_i h_i ebar_ell(h_i). Equal widths
// dividing the ring give equality up to the certificates.
BoundReport chessboard_check(const BlockProfile& profile, int ell,
                             const ModelParams& params, double tol = kDefaultTol);

// Energy of a finite stripe set in the height-ell strip: widths alternate
// flipped, unflipped, ..., flipped (odd count, flipped at both ends). Each
// flipped stripe pays its facing-bond sum against a uniform exterior; pairs
// of flipped stripes restore the overcounted repulsion through the open-line
// kernel. An empty set has energy zero.
Certified stripe_set_energy(const std::vector<int>& widths, int ell,
                            const ModelParams& params, double tol = kDefaultTol);

// Localization estimate for a stripe set confined to a length-ell window
// (sum of widths <= ell, otherwise reported not applicable):
//   E >= ell sum_i h_i e_s(h_i) + tau ell - C (sum_i h_i^{4-p} + ell^{4-p}).
BoundReport localized_stripe_bound(const std::vector<int>& widths, int ell,
                                   const ModelParams& params,
                                   double bound_constant, double tol = 1e-12);

struct StripeSet {
  std::vector<int> widths;
  int ell = 1;
};

// Smallest constant that closes the localization estimate over a battery.
double fit_stripe_bound_constant(const std::vector<StripeSet>& battery,
                                 const ModelParams& params, double tol = 1e-12);

// Least-squares slope of log|y| against log x, the decay-rate estimator
// behind the extrapolation reports.
double fit_power_law_exponent(const std::vector<std::pair<double, double>>& xy);

}  // namespace stripelab
