#include "stripelab/polyomino.hpp"

#include <cstdint>
#include <stdexcept>
#include <unordered_set>

namespace stripelab {

namespace {

// Cells live in the half plane y > 0 plus the ray y == 0, x >= 0, so the
// origin is the (y, x)-lexicographic minimum of every shape and no two
// translates are generated twice.
bool in_half_plane(int x, int y) { return y > 0 || (y == 0 && x >= 0); }

uint64_t pack(int x, int y) {
  return ((uint64_t)(uint32_t)x << 32) | (uint32_t)y;
}

struct Enumerator {
  int max_cells;
  const std::function<void(const std::vector<Site>&)>& visit;
  std::vector<Site> current;
  // every cell that was ever placed on an untried list along the current
  // call chain; popped cells stay in it, which is what forbids duplicates
  std::unordered_set<uint64_t> seen;

  Enumerator(int max_cells_, const std::function<void(const std::vector<Site>&)>& visit_)
      : max_cells(max_cells_), visit(visit_) {}

  void grow(std::vector<Site> untried) {
    while (!untried.empty()) {
      Site c = untried.back();
      untried.pop_back();
      current.push_back(c);
      visit(current);
      if ((int)current.size() < max_cells) {
        std::vector<Site> extended = untried;
        std::vector<uint64_t> added;
        const int dx[4] = {1, -1, 0, 0};
        const int dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int x = c[0] + dx[k], y = c[1] + dy[k];
          if (!in_half_plane(x, y)) continue;
          uint64_t key = pack(x, y);
          if (!seen.insert(key).second) continue;
          extended.push_back({x, y, 0});
          added.push_back(key);
        }
        grow(std::move(extended));
        for (uint64_t key : added) seen.erase(key);
      }
      current.pop_back();
    }
  }
};

}  // namespace

void enumerate_polyominoes(int max_cells,
                           const std::function<void(const std::vector<Site>&)>& visit) {
  if (max_cells < 1) throw std::invalid_argument("max_cells must be at least 1");
  Enumerator e(max_cells, visit);
  e.seen.insert(pack(0, 0));
  e.grow({Site{0, 0, 0}});
}

long long count_polyominoes(int cells) {
  long long n = 0;
  enumerate_polyominoes(cells, [&](const std::vector<Site>& shape) {
    if ((int)shape.size() == cells) ++n;
  });
  return n;
}

}  // namespace stripelab
