#pragma once

// Droplet representation of the energy: the exact contour + self-energy +
// interaction split of the Hamiltonian, the facing-distance lower bounds on
// self-energies, and the localized per-box energies that the small-box erase
// arguments run on.

#include <iosfwd>
#include <string>
#include <vector>

#include "stripelab/geometry.hpp"
#include "stripelab/lattice.hpp"
#include "stripelab/params.hpp"

namespace stripelab {

// One certified inequality check, asserting lhs >= rhs. Every truncation is
// folded so that pass == false certifies a genuine violation: the reported
// rhs never exceeds the exact rhs, and pass compares against lhs plus its
// own certified slack. `slack` is the total absorbed truncation, reported
// for transparency; applicable == false means the preconditions of the
// inequality were not met and no claim is made either way.
struct BoundReport {
  std::string bound_name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;
  bool applicable = true;

  double margin() const { return lhs - rhs; }
};

// CSV batch export: header plus one row per report with columns
// bound_name, instance_id, lhs, rhs, margin, pass.
void write_bound_reports(std::ostream& out,
                         const std::vector<std::pair<std::string, BoundReport>>& rows);

struct EnergyBreakdown {
  std::vector<Droplet> droplets;  // the decomposition's droplet order
  double contour_term = 0.0;      // 2J times the total boundary size

  std::vector<Certified> self_energies;  // one U per droplet, always < 0

  struct PairTerm {
    int a = 0, b = 0;  // droplet indices, a < b
    double w = 0.0;    // pair interaction, >= 0, exact finite sum
  };
  std::vector<PairTerm> interactions;  // every unordered droplet pair

  Certified total;  // contour_term + sum of U + sum of W
};

// Self-energy U = -2 sum over x in the droplet, y outside, of |x-y|^{-p},
// evaluated as -2(|droplet| S - 2 sum over inside pairs) with S the certified
// whole-lattice sum. Throws on an empty droplet.
Certified self_energy(const Droplet& droplet, const ModelParams& params,
                      double tol = kDefaultTol);

// Pair interaction W = 4 sum over x in a, y in b of |x-y|^{-p}, an exact
// finite sum. Throws if the droplets share a site.
double interaction(const Droplet& a, const Droplet& b, const ModelParams& params);

// Exact droplet decomposition of the Hamiltonian under all-plus boundary
// conditions (anything else throws): total reproduces total_energy up to the
// certified tails on both sides.
EnergyBreakdown decompose(const SpinConfiguration& config, const ModelParams& params,
                          double tol = kDefaultTol);

// Facing-distance lower bound on the self-energy:
//   U >= -sum over boundary elements of M(d_b)
//        + 2^{1-p/2} (corner count) + 4 sum over shadowed pairs of |x-y|^{-p}
// where M(t) is the certified min{|n_axis|, t} lattice sum and d_b the facing
// distance. In d = 3 the corner count is the sectional one and the shadowed
// pairs use the three cyclic path orders. All-plus only.
BoundReport self_energy_lower_bound(const Droplet& droplet,
                                    const SpinConfiguration& config,
                                    const ModelParams& params,
                                    double tol = kDefaultTol);

// Crude form U >= -2 Jc |Gamma(droplet)|, the facing bound with every d_b
// relaxed to infinity and the positive corrections dropped.
BoundReport crude_lower_bound(const Droplet& droplet,
                              const SpinConfiguration& config,
                              const ModelParams& params,
                              double tol = kDefaultTol);

// Localized energies on the box partition of side box_side:
//   E_Q = sum over bubbles in Q of (2J |Gbar| + U_Q) + pairwise W inside Q,
// with U_Q built from the localized facing distance (M(infinity) when the
// facing partner leaves the bubble) and the bubble's own corner credit.
// report certifies the global lower bound H >= sum over Q of E_Q.
struct LocalizedEnergy {
  Localization partition;
  std::vector<double> box_energies;  // per box id, truncation folded downward
  double slack = 0.0;
  BoundReport report;
};
LocalizedEnergy localized_energy(const SpinConfiguration& config, int box_side,
                                 const ModelParams& params, double tol = kDefaultTol);

// Erasability of one corner-carrying bubble: 2J |Gbar| + U_Q >= 0. Applicable
// when the bubble has at least one corner and the box side is below the
// smallness threshold (|tau| l < 2^{1-p/2}/4 in d = 2, l sqrt(|tau|) <
// 2^{-1/2-p/4} in d = 3); otherwise the report carries the computed local
// energy but makes no claim.
BoundReport corner_positivity_check(const Bubble& bubble, const Droplet& parent,
                                    const SpinConfiguration& config,
                                    const ModelParams& params, int box_side);

}  // namespace stripelab
