#pragma once

#include <stdexcept>
#include <string>

namespace stripelab {

inline constexpr double kDefaultTol = 1e-10;

// Bookkeeping for every truncated infinite sum: how far we summed directly,
// a rigorous bound on what we dropped, and which side the truncation errs on.
struct TailBound {
  enum class Side { Lower, Upper, TwoSided };
  double direct_radius = 0.0;
  double tail_estimate = 0.0;  // >= 0 always
  Side direction = Side::TwoSided;
};

struct Certified {
  double value = 0.0;
  TailBound tail;
};

// Model instance: couplings (J, p, d) plus the derived critical coupling and
// tau = 2(J - jc). Construct through create()/from_tau() so the invariants
// (p > 2d, d in {2,3}, tau consistent with J) hold by construction.
struct ModelParams {
  double J = 0.0;
  double p = 0.0;
  int d = 2;
  double jc = 0.0;
  double tau = 0.0;

  static ModelParams create(double J, double p, int d, double tol = kDefaultTol);
  static ModelParams from_tau(double tau, double p, int d, double tol = kDefaultTol);
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace stripelab
