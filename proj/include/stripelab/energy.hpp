#pragma once

#include "stripelab/lattice.hpp"
#include "stripelab/params.hpp"

namespace stripelab {

// Image-summed pair kernel for boxes with periodic axes. Entries are indexed
// by coordinate difference (reduced modulo the box along periodic axes) and
// share one per-entry truncation tail. The zero difference sums images only,
// so looking up a pair of distinct images of the same site is well defined;
// never look up a site against itself.
class PeriodicKernel {
 public:
  PeriodicKernel(const BoxGeometry& g, unsigned axes, double p,
                 double per_entry_tail_target);

  double at(const Site& a, const Site& b) const;
  double per_entry_tail() const { return tail_; }
  int image_radius() const { return image_radius_; }

 private:
  std::vector<double> table_;
  int span_[3] = {1, 1, 1};
  int shift_[3] = {0, 0, 0};
  int length_[3] = {1, 1, 1};
  bool wrap_[3] = {false, false, false};
  int dim_ = 0;
  double tail_ = 0.0;
  int image_radius_ = 0;
};

// Finite-volume Hamiltonian with the agreement normalization: every pair
// enters through (sigma sigma' - 1), so homogeneous agreement costs nothing.
// Interior part: nearest-neighbor bonds inside the box (including wrap bonds
// on periodic axes) plus long-range pairs inside the box. Boundary part:
// every interaction between an interior and an exterior site, the
// nearest-neighbor coupling across the faces included; identically zero for
// periodic boundaries, where there is no exterior.
Certified total_energy(const SpinConfiguration& config, const ModelParams& params,
                       double tol = kDefaultTol);
Certified interior_energy(const SpinConfiguration& config, const ModelParams& params,
                          double tol = kDefaultTol);
Certified boundary_term(const SpinConfiguration& config, const ModelParams& params,
                        double tol = kDefaultTol);

}  // namespace stripelab
