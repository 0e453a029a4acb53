#pragma once

#include <functional>
#include <vector>

#include "stripelab/lattice.hpp"

namespace stripelab {

// Enumerates fixed polyominoes (translations identified, rotations and
// reflections distinct) by Redelmeier's untried-set recursion. `visit` fires
// exactly once per polyomino of every size from 1 to max_cells. Cells arrive
// in discovery order; the shape always contains the origin, every cell has
// y > 0 or (y == 0 and x >= 0), and the third coordinate is zero.
void enumerate_polyominoes(int max_cells,
                           const std::function<void(const std::vector<Site>&)>& visit);

// Number of fixed polyominoes with exactly `cells` cells.
long long count_polyominoes(int cells);

}  // namespace stripelab
