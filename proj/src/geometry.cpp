#include "ucl/geometry.hpp"

#include <sstream>

namespace ucl {

Int rat_floor(const Rational& r) {
  Int q = rat_num(r) / rat_den(r);  // truncates toward zero
  if (rat_num(r) < 0 && q * rat_den(r) != rat_num(r)) --q;
  return q;
}

Int pow2(unsigned e) {
  Int one = 1;
  return one << e;
}

Rational pow2_inv(unsigned e) { return Rational(Int(1), pow2(e)); }

Rational rat_parse(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den <= 0) throw std::invalid_argument("rat_parse: denominator must be positive");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("rat_parse: malformed rational '" + s + "'");
  }
}

std::string rat_str(const Rational& r) {
  std::ostringstream os;
  os << rat_num(r);
  if (!is_integer(r)) os << "/" << rat_den(r);
  return os.str();
}

std::string rat_decimal(const Rational& r, int digits) {
  const bool neg = r < 0;
  Rational a = neg ? Rational(-r) : r;
  Int scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Int scaled = rat_num(a) * scale / rat_den(a);
  Int whole = scaled / scale;
  Int frac = scaled % scale;
  std::ostringstream os;
  if (neg && (whole != 0 || frac != 0)) os << '-';
  os << whole;
  if (digits > 0) {
    std::string f = frac.str();
    os << '.' << std::string(static_cast<std::size_t>(digits) - f.size(), '0') << f;
  }
  return os.str();
}

Point to_point(const LatticePoint& p) {
  Point out;
  out.reserve(p.size());
  for (auto c : p) out.emplace_back(c);
  return out;
}

namespace {
void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}
}  // namespace

Rational linf_dist(const Point& p, const Point& q) {
  require_same_dim(p.size(), q.size(), "linf_dist");
  Rational best = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    Rational d = p[j] >= q[j] ? p[j] - q[j] : q[j] - p[j];
    if (d > best) best = d;
  }
  return best;
}

Box make_box(std::vector<Rational> lo, std::vector<Rational> hi) {
  require_same_dim(lo.size(), hi.size(), "make_box");
  for (std::size_t j = 0; j < lo.size(); ++j)
    if (lo[j] > hi[j]) throw std::invalid_argument("make_box: lo > hi");
  return Box{std::move(lo), std::move(hi)};
}

Box box_of_point(const Point& p) { return Box{p, p}; }

Box box_extend(const Box& b, const Point& p) {
  require_same_dim(b.dim(), p.size(), "box_extend");
  Box out = b;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] < out.lo[j]) out.lo[j] = p[j];
    if (p[j] > out.hi[j]) out.hi[j] = p[j];
  }
  return out;
}

bool box_contains(const Box& b, const Point& p) {
  require_same_dim(b.dim(), p.size(), "box_contains");
  for (std::size_t j = 0; j < p.size(); ++j)
    if (p[j] < b.lo[j] || p[j] > b.hi[j]) return false;
  return true;
}

Rational dist_to_boundary(const Box& b, const Point& p) {
  if (!box_contains(b, p)) throw std::invalid_argument("dist_to_boundary: point outside box");
  Rational best = p[0] - b.lo[0];
  for (std::size_t j = 0; j < p.size(); ++j) {
    Rational below = p[j] - b.lo[j];
    Rational above = b.hi[j] - p[j];
    if (below < best) best = below;
    if (above < best) best = above;
  }
  return best;
}

bool is_unit_cube(const Box& b) {
  for (std::size_t j = 0; j < b.dim(); ++j)
    if (b.extent(j) != 1) return false;
  return true;
}

Box unit_cube_at(const Point& lower) {
  Box b{lower, lower};
  for (auto& h : b.hi) h += 1;
  return b;
}

Box unit_cube_at(const LatticePoint& lower) { return unit_cube_at(to_point(lower)); }

}  // namespace ucl
