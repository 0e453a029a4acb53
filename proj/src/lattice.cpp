#include "stripelab/lattice.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace stripelab {

BoxGeometry::BoxGeometry(std::vector<int> dims_, std::vector<int> origin_)
    : dims(std::move(dims_)), origin(std::move(origin_)) {
  require(!dims.empty() && dims.size() <= 3, "BoxGeometry: need 1 to 3 dims");
  for (int s : dims) require(s >= 1, "BoxGeometry: side lengths must be >= 1");
  if (origin.empty()) origin.assign(dims.size(), 0);
  require(origin.size() == dims.size(), "BoxGeometry: origin/dims size mismatch");
}

int64_t BoxGeometry::volume() const {
  int64_t v = 1;
  for (int s : dims) v *= s;
  return v;
}

bool BoxGeometry::contains(const Site& absolute) const {
  for (int k = 0; k < dim(); ++k) {
    int local = absolute[(size_t)k] - origin[(size_t)k];
    if (local < 0 || local >= dims[(size_t)k]) return false;
  }
  for (int k = dim(); k < 3; ++k)
    if (absolute[(size_t)k] != 0) return false;
  return true;
}

int64_t BoxGeometry::index_of(const Site& absolute) const {
  int64_t idx = 0, stride = 1;
  for (int k = 0; k < dim(); ++k) {
    idx += stride * (absolute[(size_t)k] - origin[(size_t)k]);
    stride *= dims[(size_t)k];
  }
  return idx;
}

Site BoxGeometry::site_at(int64_t index) const {
  Site s{0, 0, 0};
  for (int k = 0; k < dim(); ++k) {
    s[(size_t)k] = origin[(size_t)k] + (int)(index % dims[(size_t)k]);
    index /= dims[(size_t)k];
  }
  return s;
}

int8_t SpinConfiguration::exterior_spin(const Site& absolute) const {
  if (std::holds_alternative<AllPlus>(bc)) return 1;
  if (std::holds_alternative<AllMinus>(bc)) return -1;
  if (const auto* ee = std::get_if<ExplicitExterior>(&bc)) {
    for (const Site& m : ee->minus_sites)
      if (m == absolute) return -1;
    return 1;
  }
  throw std::invalid_argument("exterior_spin: periodic boundaries have no exterior");
}

void SpinConfiguration::validate(int expected_dim) const {
  require(geometry.dim() == expected_dim, "configuration dimension mismatch");
  require((int64_t)spins.size() == geometry.volume(),
          "spin array length must equal box volume");
  for (int8_t s : spins)
    require(s == 1 || s == -1, "spins must be +1 or -1");
  if (const auto* per = std::get_if<Periodic>(&bc))
    require(per->axes < (1u << geometry.dim()), "periodic axis out of range");
  if (const auto* ee = std::get_if<ExplicitExterior>(&bc))
    for (const Site& m : ee->minus_sites)
      require(!geometry.contains(m), "explicit exterior site lies inside the box");
}

SpinConfiguration make_filled(const BoxGeometry& g, int8_t sign, BoundaryCondition bc) {
  require(sign == 1 || sign == -1, "make_filled: sign must be +1 or -1");
  SpinConfiguration c;
  c.geometry = g;
  c.spins.assign((size_t)g.volume(), sign);
  c.bc = std::move(bc);
  return c;
}

SpinConfiguration make_striped(const BoxGeometry& g, const StripeProfile& profile,
                               int8_t first_sign, BoundaryCondition bc) {
  require(first_sign == 1 || first_sign == -1, "make_striped: sign must be +1 or -1");
  require(profile.axis >= 0 && profile.axis < g.dim(), "make_striped: bad axis");
  int total = 0;
  for (int w : profile.widths) {
    require(w >= 1, "make_striped: widths must be >= 1");
    total += w;
  }
  require(total == g.dims[(size_t)profile.axis],
          "make_striped: widths must sum to the side length along the axis");

  // block index per layer along the stripe axis
  std::vector<int8_t> layer_sign((size_t)total);
  int at = 0, block = 0;
  for (int w : profile.widths) {
    int8_t s = (block % 2 == 0) ? first_sign : (int8_t)-first_sign;
    for (int i = 0; i < w; ++i) layer_sign[(size_t)(at + i)] = s;
    at += w;
    ++block;
  }

  SpinConfiguration c = make_filled(g, 1, std::move(bc));
  for (int64_t i = 0; i < g.volume(); ++i) {
    Site s = g.site_at(i);
    int layer = s[(size_t)profile.axis] - g.origin[(size_t)profile.axis];
    c.spins[(size_t)i] = layer_sign[(size_t)layer];
  }
  return c;
}

SpinConfiguration random_configuration(const BoxGeometry& g, const BoundaryCondition& bc,
                                       uint64_t seed, double minus_density) {
  require(minus_density >= 0.0 && minus_density <= 1.0,
          "random_configuration: density must lie in [0, 1]");
  SpinConfiguration c = make_filled(g, 1, bc);
  std::mt19937_64 rng(seed);
  for (auto& s : c.spins) {
    // top 53 bits as a uniform double in [0, 1); avoids distribution objects
    // whose draws are not pinned down by the standard
    double u = (double)(rng() >> 11) * 0x1p-53;
    s = u < minus_density ? (int8_t)-1 : (int8_t)1;
  }
  return c;
}

namespace {

std::string bc_token(const BoundaryCondition& bc) {
  if (std::holds_alternative<AllPlus>(bc)) return "+";
  if (std::holds_alternative<AllMinus>(bc)) return "-";
  if (const auto* per = std::get_if<Periodic>(&bc)) {
    std::string t = "p";
    for (int k = 0; k < 3; ++k)
      if (per->axes & (1u << k)) t += (char)('0' + k);
    return t;
  }
  throw std::invalid_argument("serialize: explicit exteriors have no header token");
}

BoundaryCondition bc_from_token(const std::string& t, int d) {
  if (t == "+") return AllPlus{};
  if (t == "-") return AllMinus{};
  if (!t.empty() && t[0] == 'p') {
    Periodic per;
    for (size_t i = 1; i < t.size(); ++i) {
      require(t[i] >= '0' && t[i] < (char)('0' + d), "parse: bad periodic axis");
      per.axes |= 1u << (t[i] - '0');
    }
    return per;
  }
  throw std::invalid_argument("parse: unknown boundary token '" + t + "'");
}

}  // namespace

std::string serialize(const SpinConfiguration& config) {
  const BoxGeometry& g = config.geometry;
  config.validate(g.dim());
  std::ostringstream out;
  out << g.dim();
  for (int s : g.dims) out << ' ' << s;
  out << ' ' << bc_token(config.bc) << '\n';
  int w = g.dims[0];
  int64_t rows = g.volume() / w;
  for (int64_t r = 0; r < rows; ++r) {
    for (int i = 0; i < w; ++i)
      out << (config.spins[(size_t)(r * w + i)] > 0 ? '+' : '-');
    out << '\n';
  }
  return out.str();
}

SpinConfiguration parse_configuration(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  require((bool)std::getline(in, header), "parse: empty input");
  std::istringstream hs(header);
  int d = 0;
  require((bool)(hs >> d) && d >= 1 && d <= 3, "parse: bad dimension");
  std::vector<int> dims((size_t)d);
  for (int k = 0; k < d; ++k)
    require((bool)(hs >> dims[(size_t)k]) && dims[(size_t)k] >= 1,
            "parse: bad side length");
  std::string token;
  require((bool)(hs >> token), "parse: missing boundary token");

  SpinConfiguration c;
  c.geometry = BoxGeometry(dims);
  c.bc = bc_from_token(token, d);
  c.spins.reserve((size_t)c.geometry.volume());
  int w = dims[0];
  int64_t rows = c.geometry.volume() / w;
  std::string line;
  for (int64_t r = 0; r < rows; ++r) {
    require((bool)std::getline(in, line), "parse: missing row");
    require((int64_t)line.size() == w, "parse: row width mismatch");
    for (char ch : line) {
      require(ch == '+' || ch == '-', "parse: rows must be + or -");
      c.spins.push_back(ch == '+' ? (int8_t)1 : (int8_t)-1);
    }
  }
  c.validate(d);
  return c;
}

}  // namespace stripelab
