#pragma once

// Exact coordinates, points, boxes and L-infinity predicates shared by the
// algorithms, adversaries and the offline oracle. All arithmetic is exact
// rational arithmetic; there is no floating-point path anywhere.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ucl {

using Int = boost::multiprecision::cpp_int;
// Canonical-form rational (gcd 1, positive denominator), arbitrary precision.
using Rational = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return rat_den(r) == 1; }

// floor(r), exact.
Int rat_floor(const Rational& r);

// 2^e for e >= 0, and 2^-e as a rational for e >= 0.
Int pow2(unsigned e);
Rational pow2_inv(unsigned e);

// Parses "p", "-p" or "p/q" (q > 0). Throws std::invalid_argument on junk.
Rational rat_parse(const std::string& s);

// "p" when integral, else "p/q".
std::string rat_str(const Rational& r);

// Decimal rendering with the given number of fractional digits (round toward zero).
std::string rat_decimal(const Rational& r, int digits = 4);

using Point = std::vector<Rational>;
using LatticePoint = std::vector<std::int64_t>;

Point to_point(const LatticePoint& p);

// max_j |p_j - q_j|. Throws on dimension mismatch.
Rational linf_dist(const Point& p, const Point& q);

// Closed axis-aligned box; lo[j] <= hi[j] for all j.
struct Box {
  std::vector<Rational> lo;
  std::vector<Rational> hi;

  std::size_t dim() const { return lo.size(); }
  Rational extent(std::size_t j) const { return hi[j] - lo[j]; }
  bool operator==(const Box& other) const = default;
};

// Validating constructor. Throws if sizes differ or lo[j] > hi[j].
Box make_box(std::vector<Rational> lo, std::vector<Rational> hi);

// Degenerate box around a single point.
Box box_of_point(const Point& p);

// Smallest box containing b and p.
Box box_extend(const Box& b, const Point& p);

// Closed containment: lo[j] <= p_j <= hi[j] for all j.
bool box_contains(const Box& b, const Point& p);

// min_j min(p_j - lo[j], hi[j] - p_j). Requires box_contains(b, p).
Rational dist_to_boundary(const Box& b, const Point& p);

// Extent exactly 1 in every dimension.
bool is_unit_cube(const Box& b);

// [lower, lower+1]^d.
Box unit_cube_at(const Point& lower);
Box unit_cube_at(const LatticePoint& lower);

}  // namespace ucl
