#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "stripelab/params.hpp"

namespace stripelab {

// Absolute lattice coordinates. Components past the model dimension stay zero
// so sites compare uniformly in d = 2 and d = 3.
using Site = std::array<int, 3>;

inline int64_t squared_distance(const Site& a, const Site& b) {
  int64_t s = 0;
  for (int k = 0; k < 3; ++k) {
    int64_t delta = (int64_t)a[k] - b[k];
    s += delta * delta;
  }
  return s;
}

struct BoxGeometry {
  std::vector<int> dims;    // side lengths, one per dimension
  std::vector<int> origin;  // absolute coordinates of the lower corner

  BoxGeometry() = default;
  explicit BoxGeometry(std::vector<int> dims_, std::vector<int> origin_ = {});

  int dim() const { return (int)dims.size(); }
  int64_t volume() const;
  bool contains(const Site& absolute) const;
  // First axis runs fastest.
  int64_t index_of(const Site& absolute) const;
  Site site_at(int64_t index) const;
};

// Exterior fixed to +1 everywhere.
struct AllPlus {};
// Exterior fixed to -1 everywhere.
struct AllMinus {};
// Wrapped along the axes whose bits are set; the remaining axes are open,
// with no exterior interaction on those sides at all.
struct Periodic {
  unsigned axes = 0;
};
// All-plus exterior except a finite list of explicitly minus sites.
struct ExplicitExterior {
  std::vector<Site> minus_sites;
};

using BoundaryCondition = std::variant<AllPlus, AllMinus, Periodic, ExplicitExterior>;

struct StripeProfile {
  std::vector<int> widths;
  int axis = 0;
};

struct SpinConfiguration {
  BoxGeometry geometry;
  std::vector<int8_t> spins;  // +1 or -1, geometry.volume() entries
  BoundaryCondition bc;

  int8_t spin(int64_t index) const { return spins[(size_t)index]; }
  int8_t spin(const Site& absolute) const {
    return spins[(size_t)geometry.index_of(absolute)];
  }
  // Spin the boundary condition assigns to an exterior site. Only meaningful
  // for AllPlus / AllMinus / ExplicitExterior; throws for Periodic.
  int8_t exterior_spin(const Site& absolute) const;
  // Throws std::invalid_argument describing the first violated invariant.
  void validate(int expected_dim) const;
};

SpinConfiguration make_filled(const BoxGeometry& g, int8_t sign,
                              BoundaryCondition bc = AllPlus{});
SpinConfiguration make_striped(const BoxGeometry& g, const StripeProfile& profile,
                               int8_t first_sign, BoundaryCondition bc = AllPlus{});
SpinConfiguration random_configuration(const BoxGeometry& g, const BoundaryCondition& bc,
                                       uint64_t seed, double minus_density);

// Plain-text exchange format: header "d w h [l] bc", then one row of +/- per
// line (d = 3 stacks the planes along the last axis). The origin is not part
// of the format; serializing normalizes it to zero. ExplicitExterior has no
// header token and is rejected.
std::string serialize(const SpinConfiguration& config);
SpinConfiguration parse_configuration(const std::string& text);

}  // namespace stripelab
