#pragma once

// Certified scalar lattice sums: the pair kernel, the effective 1D potential
// v(x) with its smooth/remainder split, the critical coupling, the whole-
// lattice sum S_p, and the per-bond min{|n1|,t}/|n|^p sums the self-energy
// bounds are built from. Every truncation carries a TailBound.

#include <cstdint>

#include "stripelab/params.hpp"

namespace stripelab {

// |x-y|^{-p} from the squared distance; rejects squared_distance = 0.
double pair_kernel(std::int64_t squared_distance, double p);

// kappa_p = integral over R^{d-1} of (1+|y|^2)^{-p/2}, by adaptive quadrature
// on the tan substitution (compact domain). Needs p > d-1.
Certified kappa_p(double p, int d, double tol = kDefaultTol);

// Closed form for the same constant via lgamma; used as the smooth-part
// coefficient and cross-checked against the quadrature in the tests.
double kappa_closed_form(double p, int d);

// v(x) = sum over n in Z^{d-1} of (x^2+|n|^2)^{-p/2}, certified.
Certified effective_1d_potential(int x, double p, int d, double tol = kDefaultTol);

// The smooth part V(x) = kappa_p * x^{d-1-p}; remainder R = v - V decays
// exponentially, evaluated in extended precision.
double potential_smooth_part(int x, double p, int d);
long double potential_remainder(int x, double p, int d);

// J_c = sum over half-space y1 > 0 of y1/|y|^p = sum_{x>=1} x*v(x).
Certified critical_coupling(double p, int d, double tol = kDefaultTol);

// S_p = sum over nonzero n in Z^d of |n|^{-p}.
Certified lattice_sum(double p, int d, double tol = kDefaultTol);

// M(t) = sum over nonzero n in Z^d of min{|n1|, t}/|n|^p = 2*sum_x min(x,t) v(x).
// Monotone increasing in t with M(inf) = 2*J_c; pass t = kInfiniteDistance
// for the limit. Values are cached per (p, d).
inline constexpr int kInfiniteDistance = -1;
Certified facing_bond_sum(int t, double p, int d, double tol = kDefaultTol);

// C_d(p) with v(x) <= C_d(p) * x^{d-1-p} for all x >= 1 (used by tail bounds).
double comparison_constant(double p, int d);

namespace detail {
// v(x) in extended precision without certificate plumbing; tails resolved to
// below long-double noise. The workhorse behind the public certified version
// and the stripe-energy accumulations that need ~1e-18 absolute resolution.
long double potential_ld(int x, double p, int d);
}  // namespace detail

}  // namespace stripelab
