#pragma once

// Rational points of projective space over Q: canonical primitive
// representatives and height-ordered enumeration.

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "cbcount/arith.hpp"

namespace cbcount {

/// A point of P^n(Q) stored as its unique primitive integer vector whose
/// first nonzero coordinate is positive.
class ProjPoint {
 public:
  /// Canonical representative of the point with homogeneous coordinates `raw`.
  /// Throws InputError for the zero vector.
  static ProjPoint canonicalize(std::span<const Rat> raw);
  static ProjPoint from_integers(std::span<const Int> raw);
  static ProjPoint from_integers(std::initializer_list<long> raw);

  /// Base dimension n (the vector has n + 1 entries).
  unsigned dimension() const { return static_cast<unsigned>(coords_.size()) - 1; }
  const std::vector<Int>& coords() const { return coords_; }
  const Int& operator[](std::size_t i) const { return coords_[i]; }

  /// Coordinates joined by ':', e.g. "1:-2".
  std::string key() const;

  friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
  friend std::strong_ordering operator<=>(const ProjPoint& a, const ProjPoint& b);

 private:
  explicit ProjPoint(std::vector<Int> coords) : coords_(std::move(coords)) {}
  std::vector<Int> coords_;
};

/// True iff v is nonzero, primitive, and its first nonzero entry is positive.
bool is_canonical_vector(std::span<const Int> v);

/// Usual O(1)-height: max |y_i| of the canonical representative.
Int height(const ProjPoint& y);

/// Points of height exactly h in lexicographic order of their coordinates.
std::vector<ProjPoint> enumerate_shell(unsigned n, std::uint64_t h);

/// Visits every point of P^n(Q) with height <= T exactly once, by
/// nondecreasing height and lexicographically within a height shell.
void for_each_base_point(unsigned n, std::uint64_t T,
                         const std::function<void(const ProjPoint&)>& visit);

std::vector<ProjPoint> enumerate_base(unsigned n, std::uint64_t T);

/// Number of points of P^1(Q) of height <= T, counted via Euler's totient;
/// independent of the enumerator.
std::uint64_t count_p1_points(std::uint64_t T);

}  // namespace cbcount
