#include "stripelab/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <variant>

namespace stripelab {

namespace {

struct SiteHash {
  size_t operator()(const Site& s) const {
    uint64_t h = 0x9e3779b97f4a7c15ull;
    for (int k = 0; k < 3; ++k)
      h = (h ^ (uint64_t)(uint32_t)s[(size_t)k]) * 0x100000001b3ull;
    return (size_t)h;
  }
};
using SiteSet = std::unordered_set<Site, SiteHash>;

struct KeyHash {
  size_t operator()(const std::array<int, 4>& a) const {
    uint64_t h = 0xcbf29ce484222325ull;
    for (int v : a) h = (h ^ (uint64_t)(uint32_t)v) * 0x100000001b3ull;
    return (size_t)h;
  }
};

unsigned wrap_axes_of(const SpinConfiguration& config) {
  if (const auto* pr = std::get_if<Periodic>(&config.bc)) return pr->axes;
  return 0;
}

int wrap_coord(const BoxGeometry& g, int axis, int c) {
  int L = g.dims[(size_t)axis];
  int r = (c - g.origin[(size_t)axis]) % L;
  if (r < 0) r += L;
  return g.origin[(size_t)axis] + r;
}

Site canonical_site(const BoxGeometry& g, unsigned wrap, Site s) {
  for (int k = 0; k < g.dim(); ++k)
    if (wrap & (1u << k)) s[(size_t)k] = wrap_coord(g, k, s[(size_t)k]);
  return s;
}

// exterior counts as plus: open sides of a partially periodic box included
int sign_at(const SpinConfiguration& config, unsigned wrap, const Site& s) {
  Site c = canonical_site(config.geometry, wrap, s);
  if (config.geometry.contains(c)) return config.spin(c);
  return 1;
}

void require_closed_exterior(const SpinConfiguration& config) {
  if (!std::holds_alternative<AllPlus>(config.bc) &&
      !std::holds_alternative<Periodic>(config.bc))
    throw std::invalid_argument(
        "contour extraction needs an all-plus or periodic exterior");
}

// ---- planar polygon walk, shared between d = 2 and the d = 3 slices ----

struct Plane {
  std::array<int, 2> origin{}, length{};
  std::array<bool, 2> wrap{};

  int canon1(int axis, int c) const {
    if (!wrap[(size_t)axis]) return c;
    int r = (c - origin[(size_t)axis]) % length[(size_t)axis];
    if (r < 0) r += length[(size_t)axis];
    return origin[(size_t)axis] + r;
  }
  std::array<int, 2> canonical(std::array<int, 2> v) const {
    return {canon1(0, v[0]), canon1(1, v[1])};
  }
};

struct PlaneBond {
  std::array<int, 2> minus{};
  int axis = 0;  // normal
  int sign = 1;  // plus side sits at minus + sign * e_axis
};

// Dual endpoints of the bond, walked with the minus side on the left. Vertex
// (a, b) names the dual point (a + 1/2, b + 1/2).
std::pair<std::array<int, 2>, std::array<int, 2>> bond_span(const PlaneBond& b) {
  int mx = b.minus[0], my = b.minus[1];
  if (b.axis == 0) {
    int c = b.sign > 0 ? mx : mx - 1;
    if (b.sign > 0) return {{c, my - 1}, {c, my}};  // plus right: walk up
    return {{c, my}, {c, my - 1}};                  // plus left: walk down
  }
  int r = b.sign > 0 ? my : my - 1;
  if (b.sign > 0) return {{mx, r}, {mx - 1, r}};  // plus above: walk west
  return {{mx - 1, r}, {mx, r}};                  // plus below: walk east
}

uint64_t pack2(const std::array<int, 2>& v) {
  return ((uint64_t)(uint32_t)v[0] << 32) | (uint32_t)v[1];
}

std::vector<std::vector<int>> trace_plane_polygons(const std::vector<PlaneBond>& bonds,
                                                   const Plane& plane) {
  size_t n = bonds.size();
  std::vector<std::array<int, 2>> vstart(n), vend(n);
  std::unordered_map<uint64_t, std::vector<int>> by_start;
  for (size_t i = 0; i < n; ++i) {
    auto [s, e] = bond_span(bonds[i]);
    vstart[i] = plane.canonical(s);
    vend[i] = plane.canonical(e);
    by_start[pack2(vstart[i])].push_back((int)i);
  }
  std::vector<char> used(n, 0);
  std::vector<std::vector<int>> polygons;
  for (size_t i0 = 0; i0 < n; ++i0) {
    if (used[i0]) continue;
    std::vector<int> poly;
    int cur = (int)i0;
    while (true) {
      used[(size_t)cur] = 1;
      poly.push_back(cur);
      auto it = by_start.find(pack2(vend[(size_t)cur]));
      if (it == by_start.end()) throw std::logic_error("contour walk ran open");
      int next = -1;
      if (it->second.size() == 1) {
        next = it->second[0];
      } else {
        // four-valent vertex: stay on the current minus square, which is the
        // chop that disconnects the two diagonal minus squares
        for (int cand : it->second)
          if (bonds[(size_t)cand].minus == bonds[(size_t)cur].minus) next = cand;
        if (next < 0) throw std::logic_error("four-valent vertex without partner");
      }
      if (next == (int)i0) break;
      if (used[(size_t)next]) throw std::logic_error("contour walk revisits a bond");
      cur = next;
    }
    polygons.push_back(std::move(poly));
  }
  return polygons;
}

PlaneBond project_bond(const ContourElement& e, int u, int v) {
  PlaneBond b;
  b.minus = {e.minus_site[(size_t)u], e.minus_site[(size_t)v]};
  b.axis = e.axis == u ? 0 : 1;
  int a = e.axis;
  b.sign = e.plus_site[(size_t)a] - e.minus_site[(size_t)a];
  return b;
}

Plane plane_of(const SpinConfiguration& config, unsigned wrap, int u, int v) {
  const BoxGeometry& g = config.geometry;
  Plane pl;
  pl.origin = {g.origin[(size_t)u], g.origin[(size_t)v]};
  pl.length = {g.dims[(size_t)u], g.dims[(size_t)v]};
  pl.wrap = {(wrap & (1u << u)) != 0, (wrap & (1u << v)) != 0};
  return pl;
}

// two-dimensional turn rule at one dual vertex, from the four surrounding
// memberships: lone site or lone hole turn once, a diagonal pair turns twice
// (both rounded corners belong to the member squares), anything else is flat
int turns_at(bool sw, bool se, bool nw, bool ne) {
  int k = (int)sw + (int)se + (int)nw + (int)ne;
  if (k == 1 || k == 3) return 1;
  if (k == 2 && sw == ne) return 2;
  return 0;
}

}  // namespace

Contour extract_contour(const SpinConfiguration& config) {
  require_closed_exterior(config);
  const BoxGeometry& g = config.geometry;
  unsigned wrap = wrap_axes_of(config);
  Contour out;
  for (int64_t i = 0; i < g.volume(); ++i) {
    if (config.spin(i) >= 0) continue;
    Site m = g.site_at(i);
    for (int axis = 0; axis < g.dim(); ++axis)
      for (int sgn = -1; sgn <= 1; sgn += 2) {
        Site q = m;
        q[(size_t)axis] += sgn;
        if (sign_at(config, wrap, q) > 0) out.elements.push_back({m, q, axis});
      }
  }
  if (g.dim() == 2) {
    SiteSet visited;
    for (int64_t i = 0; i < g.volume(); ++i) {
      if (config.spin(i) >= 0) continue;
      Site m = g.site_at(i);
      for (int dx = -1; dx <= 0; ++dx)
        for (int dy = -1; dy <= 0; ++dy) {
          Site v = canonical_site(g, wrap, {m[0] + dx, m[1] + dy, 0});
          if (!visited.insert(v).second) continue;
          bool sw = sign_at(config, wrap, {v[0], v[1], 0}) < 0;
          bool se = sign_at(config, wrap, {v[0] + 1, v[1], 0}) < 0;
          bool nw = sign_at(config, wrap, {v[0], v[1] + 1, 0}) < 0;
          bool ne = sign_at(config, wrap, {v[0] + 1, v[1] + 1, 0}) < 0;
          if ((sw && ne && !se && !nw) || (se && nw && !sw && !ne))
            out.chopped_vertices.push_back(v);
        }
    }
    std::sort(out.chopped_vertices.begin(), out.chopped_vertices.end());
  }
  return out;
}

std::vector<Droplet> split_droplets(const SpinConfiguration& config) {
  require_closed_exterior(config);
  const BoxGeometry& g = config.geometry;
  unsigned wrap = wrap_axes_of(config);
  std::vector<int> label((size_t)g.volume(), -1);
  std::vector<Droplet> out;
  std::vector<int64_t> stack;
  for (int64_t i = 0; i < g.volume(); ++i) {
    if (config.spin(i) >= 0 || label[(size_t)i] >= 0) continue;
    int id = (int)out.size();
    out.emplace_back();
    label[(size_t)i] = id;
    stack.assign(1, i);
    while (!stack.empty()) {
      int64_t u = stack.back();
      stack.pop_back();
      Site su = g.site_at(u);
      out[(size_t)id].sites.push_back(su);
      for (int axis = 0; axis < g.dim(); ++axis)
        for (int sgn = -1; sgn <= 1; sgn += 2) {
          Site v = su;
          v[(size_t)axis] += sgn;
          v = canonical_site(g, wrap, v);
          if (!g.contains(v)) continue;
          int64_t j = g.index_of(v);
          if (config.spin(j) >= 0 || label[(size_t)j] >= 0) continue;
          label[(size_t)j] = id;
          stack.push_back(j);
        }
    }
    std::sort(out[(size_t)id].sites.begin(), out[(size_t)id].sites.end());
  }
  Contour contour = extract_contour(config);
  for (const ContourElement& e : contour.elements)
    out[(size_t)label[(size_t)g.index_of(e.minus_site)]].boundary.push_back(e);
  return out;
}

std::vector<std::vector<int>> trace_polygons(const std::vector<ContourElement>& elements,
                                             const SpinConfiguration& config) {
  if (config.geometry.dim() != 2)
    throw std::invalid_argument("polygon tracing is a d = 2 operation");
  unsigned wrap = wrap_axes_of(config);
  std::vector<PlaneBond> bonds;
  bonds.reserve(elements.size());
  for (const ContourElement& e : elements) bonds.push_back(project_bond(e, 0, 1));
  return trace_plane_polygons(bonds, plane_of(config, wrap, 0, 1));
}

int corner_count(const Droplet& droplet, const SpinConfiguration& config) {
  const BoxGeometry& g = config.geometry;
  unsigned wrap = wrap_axes_of(config);
  SiteSet in_d(droplet.sites.begin(), droplet.sites.end());
  auto member = [&](Site s) { return in_d.count(canonical_site(g, wrap, s)) != 0; };
  if (g.dim() == 2) {
    int corners = 0;
    SiteSet visited;
    for (const Site& m : droplet.sites)
      for (int dx = -1; dx <= 0; ++dx)
        for (int dy = -1; dy <= 0; ++dy) {
          Site v = canonical_site(g, wrap, {m[0] + dx, m[1] + dy, 0});
          if (!visited.insert(v).second) continue;
          corners += turns_at(member({v[0], v[1], 0}), member({v[0] + 1, v[1], 0}),
                              member({v[0], v[1] + 1, 0}), member({v[0] + 1, v[1] + 1, 0}));
        }
    return corners;
  }
  // d = 3: group boundary plaquettes by shared unit edge, then count ordered
  // orthogonal pairs on each edge
  std::unordered_map<std::array<int, 4>, std::array<int, 3>, KeyHash> edges;
  for (const ContourElement& e : droplet.boundary) {
    int i = e.axis;
    int u = -1, v = -1;
    for (int k = 0; k < 3; ++k)
      if (k != i) (u < 0 ? u : v) = k;
    // plane coordinate c means the plane at c + 1/2
    int ci = std::min(e.minus_site[(size_t)i], e.plus_site[(size_t)i]);
    for (int t = 0; t < 2; ++t) {
      int dir = t == 0 ? u : v;     // edge direction
      int other = t == 0 ? v : u;   // transverse plane axis
      for (int off = -1; off <= 0; ++off) {
        std::array<int, 4> key{};
        key[0] = dir;
        std::array<int, 3> coord{};
        coord[(size_t)i] = ci;
        coord[(size_t)other] = e.minus_site[(size_t)other] + off;
        coord[(size_t)dir] = e.minus_site[(size_t)dir];
        for (int k = 0; k < 3; ++k) {
          if (wrap & (1u << k)) coord[(size_t)k] = wrap_coord(g, k, coord[(size_t)k]);
          key[(size_t)(1 + k)] = coord[(size_t)k];
        }
        edges[key][(size_t)i] += 1;
      }
    }
  }
  long corners = 0;
  for (const auto& [key, cnt] : edges) {
    int a = -1, b = -1;
    for (int k = 0; k < 3; ++k)
      if (k != key[0]) (a < 0 ? a : b) = k;
    corners += 2L * cnt[(size_t)a] * cnt[(size_t)b];
  }
  return (int)corners;
}

int sectional_corner_count(const Droplet& droplet, const SpinConfiguration& config) {
  const BoxGeometry& g = config.geometry;
  if (g.dim() == 2) return corner_count(droplet, config);
  unsigned wrap = wrap_axes_of(config);
  SiteSet in_d(droplet.sites.begin(), droplet.sites.end());
  auto member = [&](Site s) { return in_d.count(canonical_site(g, wrap, s)) != 0; };
  int corners = 0;
  std::unordered_set<std::array<int, 4>, KeyHash> visited;
  for (const Site& m : droplet.sites)
    for (int dir = 0; dir < 3; ++dir) {
      int u = -1, v = -1;
      for (int k = 0; k < 3; ++k)
        if (k != dir) (u < 0 ? u : v) = k;
      for (int du = -1; du <= 0; ++du)
        for (int dv = -1; dv <= 0; ++dv) {
          std::array<int, 3> coord{};
          coord[(size_t)dir] = m[(size_t)dir];
          coord[(size_t)u] = m[(size_t)u] + du;
          coord[(size_t)v] = m[(size_t)v] + dv;
          for (int k = 0; k < 3; ++k)
            if (wrap & (1u << k)) coord[(size_t)k] = wrap_coord(g, k, coord[(size_t)k]);
          std::array<int, 4> key{dir, coord[0], coord[1], coord[2]};
          if (!visited.insert(key).second) continue;
          auto site_at = [&](int su, int sv) {
            Site s{};
            s[(size_t)dir] = coord[(size_t)dir];
            s[(size_t)u] = coord[(size_t)u] + su;
            s[(size_t)v] = coord[(size_t)v] + sv;
            return s;
          };
          corners += turns_at(member(site_at(0, 0)), member(site_at(1, 0)),
                              member(site_at(0, 1)), member(site_at(1, 1)));
        }
    }
  return corners;
}

int facing_distance(const ContourElement& b, const Droplet& droplet,
                    const SpinConfiguration& config) {
  const BoxGeometry& g = config.geometry;
  unsigned wrap = wrap_axes_of(config);
  SiteSet in_d(droplet.sites.begin(), droplet.sites.end());
  if (!in_d.count(b.minus_site))
    throw std::invalid_argument("element is not on this droplet's boundary");
  Site step{};
  for (int k = 0; k < 3; ++k)
    step[(size_t)k] = b.minus_site[(size_t)k] - b.plus_site[(size_t)k];
  Site z = b.minus_site;
  int count = 0;
  while (in_d.count(canonical_site(g, wrap, z))) {
    ++count;
    for (int k = 0; k < 3; ++k) z[(size_t)k] += step[(size_t)k];
    if (count > (int)g.volume()) throw std::logic_error("facing walk does not terminate");
  }
  return count;
}

int localized_facing_distance(const ContourElement& b, const Droplet& droplet,
                              const Bubble& bubble, const SpinConfiguration& config) {
  int d_b = facing_distance(b, droplet, config);
  Site far_site = b.minus_site;
  for (int k = 0; k < 3; ++k)
    far_site[(size_t)k] +=
        (d_b - 1) * (b.minus_site[(size_t)k] - b.plus_site[(size_t)k]);
  far_site = canonical_site(config.geometry, wrap_axes_of(config), far_site);
  // the element facing b has its minus side at the far end of the run
  for (const Site& s : bubble.sites)
    if (s == far_site) return d_b;
  return kFacingUnbounded;
}

std::vector<std::pair<Site, Site>> shadowed_pairs(const Droplet& droplet, int radius_cap,
                                                  const SpinConfiguration& config) {
  if (radius_cap < 1) throw std::invalid_argument("radius_cap must be at least 1");
  const BoxGeometry& g = config.geometry;
  unsigned wrap = wrap_axes_of(config);
  // crossing test against the element set itself: the dual bond between s and
  // s + e_axis, keyed by its lower site
  std::unordered_set<std::array<int, 4>, KeyHash> cut;
  for (const ContourElement& e : droplet.boundary) {
    Site low = e.minus_site;
    if (e.plus_site[(size_t)e.axis] < e.minus_site[(size_t)e.axis]) low = e.plus_site;
    low = canonical_site(g, wrap, low);
    cut.insert({low[0], low[1], low[2], e.axis});
  }
  auto crosses = [&](const Site& from, int axis, int sgn) {
    Site low = from;
    if (sgn < 0) low[(size_t)axis] -= 1;
    low = canonical_site(g, wrap, low);
    return cut.count({low[0], low[1], low[2], axis}) != 0;
  };
  std::vector<std::vector<int>> orders;
  if (g.dim() == 2)
    orders = {{0, 1}, {1, 0}};
  else
    orders = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  std::vector<std::pair<Site, Site>> out;
  int64_t cap2 = (int64_t)radius_cap * radius_cap;
  for (size_t a = 0; a < droplet.sites.size(); ++a)
    for (size_t b = a + 1; b < droplet.sites.size(); ++b) {
      const Site& x = droplet.sites[a];
      const Site& y = droplet.sites[b];
      if (squared_distance(x, y) > cap2) continue;
      bool all_cross_twice = true;
      for (const auto& order : orders) {
        int cross = 0;
        Site pos = x;
        for (int axis : order)
          while (pos[(size_t)axis] != y[(size_t)axis]) {
            int sgn = y[(size_t)axis] > pos[(size_t)axis] ? 1 : -1;
            cross += crosses(pos, axis, sgn) ? 1 : 0;
            pos[(size_t)axis] += sgn;
          }
        if (cross < 2) {
          all_cross_twice = false;
          break;
        }
      }
      if (all_cross_twice) out.emplace_back(x, y);
    }
  return out;
}

long boundary_pair_count(const Droplet& droplet, const Site& n,
                         const SpinConfiguration& config) {
  if (n == Site{0, 0, 0}) throw std::invalid_argument("n must be nonzero");
  const BoxGeometry& g = config.geometry;
  unsigned wrap = wrap_axes_of(config);
  SiteSet in_d(droplet.sites.begin(), droplet.sites.end());
  long count = 0;
  for (const Site& x : droplet.sites)
    for (int sgn = -1; sgn <= 1; sgn += 2) {
      Site y = x;
      for (int k = 0; k < 3; ++k) y[(size_t)k] += sgn * n[(size_t)k];
      if (!in_d.count(canonical_site(g, wrap, y))) ++count;
    }
  return count;
}

namespace {

// cross-section [lo, hi] of a bubble's box along two plane axes
struct RunBox {
  std::array<int, 2> lo{}, hi{};
};

// Corner bookkeeping for one polygon whose bonds are labeled by bubble.
// A maximal run of one label is an open piece of that bubble's boundary; a
// label change is a cut. Turns inside a run count unless the vertex sits
// exactly at a corner of the box (those are the only losses the counting
// estimate tolerates); a run endpoint counts when it is not at a box corner
// and its element lies inside the box face.
void accumulate_plane_corners(const std::vector<PlaneBond>& poly,
                              const std::vector<int>& label,
                              const std::vector<RunBox>& rbox, const Plane& plane,
                              std::vector<int>& bulk, std::vector<int>& bdry) {
  size_t n = poly.size();
  std::vector<std::array<int, 2>> vstart(n), vend(n);
  for (size_t i = 0; i < n; ++i) {
    auto [s, e] = bond_span(poly[i]);
    vstart[i] = plane.canonical(s);
    vend[i] = plane.canonical(e);
  }
  auto at_box_corner = [&](const std::array<int, 2>& v, const RunBox& rb) {
    for (int k = 0; k < 2; ++k)
      if (v[(size_t)k] != plane.canon1(k, rb.lo[(size_t)k] - 1) &&
          v[(size_t)k] != rb.hi[(size_t)k])
        return false;
    return true;
  };
  auto on_face = [&](size_t i, const RunBox& rb) {
    int a = poly[i].axis;
    int c = vstart[i][(size_t)a];
    return c == plane.canon1(a, rb.lo[(size_t)a] - 1) || c == rb.hi[(size_t)a];
  };

  bool uniform = true;
  for (size_t i = 1; i < n; ++i)
    if (label[i] != label[0]) uniform = false;
  if (uniform) {
    const RunBox& rb = rbox[(size_t)label[0]];
    for (size_t i = 0; i < n; ++i) {
      size_t j = (i + 1) % n;
      if (poly[i].axis != poly[j].axis && !at_box_corner(vend[i], rb))
        ++bulk[(size_t)label[0]];
    }
    return;
  }
  size_t anchor = 0;
  while (label[(anchor + n - 1) % n] == label[anchor]) ++anchor;
  size_t i = anchor, processed = 0;
  while (processed < n) {
    size_t len = 1;
    while (len < n && label[(i + len) % n] == label[i]) ++len;
    int lb = label[i];
    const RunBox& rb = rbox[(size_t)lb];
    for (size_t t = 0; t + 1 < len; ++t) {
      size_t a = (i + t) % n, b = (i + t + 1) % n;
      if (poly[a].axis != poly[b].axis && !at_box_corner(vend[a], rb))
        ++bulk[(size_t)lb];
    }
    size_t last = (i + len - 1) % n;
    if (!at_box_corner(vstart[i], rb) && on_face(i, rb)) ++bdry[(size_t)lb];
    if (!at_box_corner(vend[last], rb) && on_face(last, rb)) ++bdry[(size_t)lb];
    processed += len;
    i = (i + len) % n;
  }
}

}  // namespace

Localization localize(const SpinConfiguration& config, int box_side) {
  if (box_side < 1) throw std::invalid_argument("box_side must be at least 1");
  const BoxGeometry& g = config.geometry;
  unsigned wrap = wrap_axes_of(config);
  int d = g.dim();
  Localization out;
  out.box_side = box_side;
  for (int k = 0; k < d; ++k)
    out.grid[(size_t)k] = (g.dims[(size_t)k] + box_side - 1) / box_side;
  int nboxes = out.grid[0] * out.grid[1] * out.grid[2];
  out.boxes.assign((size_t)nboxes, {});

  auto box_id_of = [&](const Site& s) {
    std::array<int, 3> b{0, 0, 0};
    for (int k = 0; k < d; ++k)
      b[(size_t)k] = (s[(size_t)k] - g.origin[(size_t)k]) / box_side;
    return b[0] + out.grid[0] * (b[1] + out.grid[1] * b[2]);
  };
  auto box_range = [&](int id, int axis) {
    std::array<int, 3> b{id % out.grid[0], (id / out.grid[0]) % out.grid[1],
                         id / (out.grid[0] * out.grid[1])};
    int lo = g.origin[(size_t)axis] + b[(size_t)axis] * box_side;
    int hi = std::min(lo + box_side - 1, g.origin[(size_t)axis] + g.dims[(size_t)axis] - 1);
    return std::array<int, 2>{lo, hi};
  };

  std::vector<Droplet> droplets = split_droplets(config);
  for (size_t di = 0; di < droplets.size(); ++di) {
    const Droplet& droplet = droplets[di];
    SiteSet in_droplet(droplet.sites.begin(), droplet.sites.end());
    std::unordered_map<Site, int, SiteHash> comp;
    std::vector<Bubble> local;
    for (const Site& seed : droplet.sites) {
      if (comp.count(seed)) continue;
      int id = (int)local.size();
      local.emplace_back();
      local[(size_t)id].box_id = box_id_of(seed);
      local[(size_t)id].droplet_index = (int)di;
      std::vector<Site> stack{seed};
      comp[seed] = id;
      while (!stack.empty()) {
        Site u = stack.back();
        stack.pop_back();
        local[(size_t)id].sites.push_back(u);
        for (int axis = 0; axis < d; ++axis)
          for (int sgn = -1; sgn <= 1; sgn += 2) {
            Site v = u;
            v[(size_t)axis] += sgn;
            v = canonical_site(g, wrap, v);
            if (!in_droplet.count(v) || comp.count(v)) continue;
            if (box_id_of(v) != local[(size_t)id].box_id) continue;
            comp[v] = id;
            stack.push_back(v);
          }
      }
      std::sort(local[(size_t)id].sites.begin(), local[(size_t)id].sites.end());
    }
    for (const ContourElement& e : droplet.boundary)
      local[(size_t)comp[e.minus_site]].boundary.push_back(e);

    std::vector<int> bulk(local.size(), 0), bdry(local.size(), 0);
    std::vector<RunBox> rbox(local.size());

    if (d == 2) {
      for (size_t lb = 0; lb < local.size(); ++lb)
        rbox[lb] = {{box_range(local[lb].box_id, 0)[0], box_range(local[lb].box_id, 1)[0]},
                    {box_range(local[lb].box_id, 0)[1], box_range(local[lb].box_id, 1)[1]}};
      std::vector<PlaneBond> bonds;
      std::vector<int> labels;
      bonds.reserve(droplet.boundary.size());
      for (const ContourElement& e : droplet.boundary) {
        bonds.push_back(project_bond(e, 0, 1));
        labels.push_back(comp[e.minus_site]);
      }
      Plane pl = plane_of(config, wrap, 0, 1);
      for (const auto& poly : trace_plane_polygons(bonds, pl)) {
        std::vector<PlaneBond> pb;
        std::vector<int> plab;
        for (int idx : poly) {
          pb.push_back(bonds[(size_t)idx]);
          plab.push_back(labels[(size_t)idx]);
        }
        accumulate_plane_corners(pb, plab, rbox, pl, bulk, bdry);
      }
    } else {
      // slice per edge direction; each run of corner edges parallel to `dir`
      // shows up as turns of the cross-section polygons at its levels
      for (int dir = 0; dir < 3; ++dir) {
        int u = -1, v = -1;
        for (int k = 0; k < 3; ++k)
          if (k != dir) (u < 0 ? u : v) = k;
        for (size_t lb = 0; lb < local.size(); ++lb)
          rbox[lb] = {{box_range(local[lb].box_id, u)[0], box_range(local[lb].box_id, v)[0]},
                      {box_range(local[lb].box_id, u)[1], box_range(local[lb].box_id, v)[1]}};
        std::unordered_map<int, std::vector<size_t>> by_level;
        for (size_t ei = 0; ei < droplet.boundary.size(); ++ei)
          if (droplet.boundary[ei].axis != dir)
            by_level[droplet.boundary[ei].minus_site[(size_t)dir]].push_back(ei);
        Plane pl = plane_of(config, wrap, u, v);
        for (const auto& [level, ids] : by_level) {
          std::vector<PlaneBond> bonds;
          std::vector<int> labels;
          bonds.reserve(ids.size());
          for (size_t ei : ids) {
            bonds.push_back(project_bond(droplet.boundary[ei], u, v));
            labels.push_back(comp[droplet.boundary[ei].minus_site]);
          }
          for (const auto& poly : trace_plane_polygons(bonds, pl)) {
            std::vector<PlaneBond> pb;
            std::vector<int> plab;
            for (int idx : poly) {
              pb.push_back(bonds[(size_t)idx]);
              plab.push_back(labels[(size_t)idx]);
            }
            accumulate_plane_corners(pb, plab, rbox, pl, bulk, bdry);
          }
        }
      }
    }

    for (size_t lb = 0; lb < local.size(); ++lb) {
      local[lb].bulk_corners = bulk[lb];
      local[lb].boundary_corners = bdry[lb];
      out.boxes[(size_t)local[lb].box_id].push_back(std::move(local[lb]));
    }
  }
  return out;
}

}  // namespace stripelab
