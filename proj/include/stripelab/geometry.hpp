#pragma once

#include <utility>
#include <vector>

#include "stripelab/lattice.hpp"

namespace stripelab {

// One face of the interface between a minus region and its plus complement:
// a dual bond in d = 2, a plaquette in d = 3. minus_site is always inside the
// box; plus_site is the geometric neighbor minus_site +/- e_axis and is kept
// unwrapped, so it can land outside the box (reduce modulo the box before
// looking anything up on a periodic axis).
struct ContourElement {
  Site minus_site{};
  Site plus_site{};
  int axis = 0;  // normal direction
};

struct Contour {
  std::vector<ContourElement> elements;
  // d = 2 only: dual vertices (a, b), meaning the point (a+1/2, b+1/2), where
  // four elements meet. Every such vertex is resolved the same way: the two
  // diagonally touching minus squares each keep their own rounded corner and
  // lose the contact through the vertex.
  std::vector<Site> chopped_vertices;
};

struct Droplet {
  std::vector<Site> sites;  // sorted
  std::vector<ContourElement> boundary;
};

// A droplet clipped to one localization box: the sites of one connected
// component of droplet-intersect-box, together with the boundary elements
// whose minus side lies in that component.
struct Bubble {
  int box_id = 0;
  int droplet_index = 0;
  std::vector<Site> sites;
  std::vector<ContourElement> boundary;
  int bulk_corners = 0;      // turning points away from the box corners
  int boundary_corners = 0;  // open endpoints on the box face, see localize()
  int corner_count() const { return bulk_corners + boundary_corners; }
};

struct Localization {
  int box_side = 0;
  std::array<int, 3> grid{1, 1, 1};  // boxes per axis, trailing entries 1
  std::vector<std::vector<Bubble>> boxes;
};

// Interface of the minus region under AllPlus or Periodic boundary conditions
// (anything else throws: open interfaces through the box walls are out of
// scope). Deterministic element order.
Contour extract_contour(const SpinConfiguration& config);

// Maximal nearest-neighbor components of the minus sites. Diagonal contact
// does not connect: the chop at a four-valent vertex severs it, so the two
// squares of a diagonal pair come out as distinct droplets. Boundary elements
// are distributed by their minus side; every contour element lands in exactly
// one droplet.
std::vector<Droplet> split_droplets(const SpinConfiguration& config);

// d = 2 only. Joins the elements of `elements` (typically a whole contour or
// one droplet's boundary) into closed polygons, each a cyclic index sequence
// traversed with the minus side on the left. At a four-valent vertex the walk
// continues along the element sharing the current minus square, which is the
// chop resolution above.
std::vector<std::vector<int>> trace_polygons(const std::vector<ContourElement>& elements,
                                             const SpinConfiguration& config);

// d = 2: number of right-angle turns of the droplet's polygons. A four-valent
// vertex contributes one turn per rounded corner, hence two when both minus
// squares belong to this droplet (the pinched-ring case) and one otherwise.
// d = 3: ordered pairs of orthogonal boundary plaquettes sharing a unit edge
// (a single cube scores 24: two ordered pairs on each of its twelve edges).
int corner_count(const Droplet& droplet, const SpinConfiguration& config);

// Slice-wise corner count: for every unit edge of the dual grid, apply the
// two-dimensional turn rule to the four sites around it in the transverse
// plane, and sum over the three edge directions (a single cube scores 12).
// Agrees with corner_count in d = 2. This is the count the interface-energy
// inequalities in energy_decomposition are stated with.
int sectional_corner_count(const Droplet& droplet, const SpinConfiguration& config);

// Run length of droplet sites starting at b.minus_site and walking away from
// b.plus_site, i.e. the distance to the boundary element facing b through the
// droplet. Finite under AllPlus and Periodic (the walk would wrap into
// b.plus_site at the latest). Throws if b's minus side is not in the droplet.
int facing_distance(const ContourElement& b, const Droplet& droplet,
                    const SpinConfiguration& config);

// Marker for a localized facing walk that leaves the bubble.
inline constexpr int kFacingUnbounded = -1;

// facing_distance if the element facing b belongs to the same bubble (its
// minus side sits in bubble.sites), kFacingUnbounded otherwise.
int localized_facing_distance(const ContourElement& b, const Droplet& droplet,
                              const Bubble& bubble, const SpinConfiguration& config);

// Unordered pairs {x, y} of droplet sites with |x-y| <= radius_cap such that
// every canonical staircase path from x to y crosses the droplet boundary at
// least twice. Canonical paths take one straight segment per axis, in the
// orders hv and vh (d = 2) or the three cyclic axis orders (d = 3).
std::vector<std::pair<Site, Site>> shadowed_pairs(const Droplet& droplet, int radius_cap,
                                                  const SpinConfiguration& config);

// #{(x, y): x in droplet, y not in droplet, y - x = +n or -n}. Throws for
// n = 0.
long boundary_pair_count(const Droplet& droplet, const Site& n,
                         const SpinConfiguration& config);

// Partition of the box into cubes of side box_side anchored at the origin
// corner (the last box per axis is clipped when the side does not divide the
// box), with every droplet cut into per-box bubbles. Corner bookkeeping per
// bubble:
//   - bulk corner: a turn of the bubble's boundary run at a dual vertex not
//     sitting exactly at a corner of the box;
//   - boundary corner: an endpoint v of an open boundary run such that v is
//     not at a corner of the box and the run's element at v lies inside the
//     box face.
// In d = 3 both notions are applied slice by slice per edge direction, which
// makes the total consistent with sectional_corner_count.
Localization localize(const SpinConfiguration& config, int box_side);

}  // namespace stripelab
