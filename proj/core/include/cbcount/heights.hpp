#pragma once

// The standard height H* for D = -K_X + alpha*F:
//   H*(y; x) = H(y)^A * max_j H(y)^{a_j} |x_j|,  A = n + 1 + alpha - (a0 + a1 + a2 + e),
// evaluated on canonical representatives. alpha is rational with denominator q;
// every comparison is decided exactly after raising to the q-th power.

#include <array>
#include <optional>
#include <string>

#include "cbcount/bundle.hpp"
#include "cbcount/projgeo.hpp"
#include "cbcount/ternary_form.hpp"

namespace cbcount {

class HeightModel {
 public:
  /// Throws InputError if alpha does not exceed the regime threshold or A + a2 <= 0.
  static HeightModel make(unsigned n, std::array<long, 3> a, long e, const Rat& alpha);
  static HeightModel for_surface(const ConicBundleSurface& s, const Rat& alpha) {
    return make(s.n, s.a, s.e, alpha);
  }

  /// a0 + a1 + e for n = 1, e + 2(a0 + a1 + a2)/3 otherwise; alpha must exceed it.
  static Rat threshold(unsigned n, std::array<long, 3> a, long e);

  unsigned n() const { return n_; }
  const std::array<long, 3>& weights() const { return a_; }
  long e() const { return e_; }
  const Rat& alpha() const { return alpha_; }
  const Rat& A() const { return A_; }
  /// Denominator of alpha.
  unsigned long q() const { return q_; }
  /// A + a_j.
  Rat exponent(int j) const { return A_ + a_[j]; }
  /// q * (A + a_j), an integer.
  long scaled_exponent(int j) const;
  /// q * A, an integer.
  long scaled_A() const;

 private:
  unsigned n_ = 1;
  std::array<long, 3> a_{};
  long e_ = 0;
  Rat alpha_;
  Rat A_;
  unsigned long q_ = 1;
};

/// A canonical point (y; x) of the bundle.
struct BundlePoint {
  ProjPoint y;
  Vec3 x;
};

/// H* kept in exact form: H*^q = H(y)^{qA} * max_term^q.
struct StandardHeight {
  Int base_height;  // H(y)
  Rat max_term;     // max_j H(y)^{a_j} |x_j|
  Rat A;
  unsigned long q = 1;

  /// Exact value when A is an integer.
  std::optional<Rat> exact() const;
  /// Approximate value (double); labelled approximate wherever reported.
  double approx() const;
  /// Sign of H* - B, decided exactly.
  int compare(const Rat& B) const;
  bool at_most(const Rat& B) const { return compare(B) <= 0; }
  /// Exact string when A is integral, else "H^A*M" with exact parts.
  std::string to_string() const;
};

/// Throws InputError when y or x is not canonical (primitive, first nonzero positive).
StandardHeight standard_height(const HeightModel& model, const ProjPoint& y, const Vec3& x);

/// Exact bounds b_j = max{ b : H(y)^{A + a_j} * b <= B }; all zero if H(y)^{A + a2} > B.
Box3 fibre_box(const HeightModel& model, const Int& base_height, const Rat& B);
inline Box3 fibre_box(const HeightModel& model, const ProjPoint& y, const Rat& B) {
  return fibre_box(model, height(y), B);
}

/// Largest T with T^{A + a2} <= B (0 if B < 1).
Int base_bound(const HeightModel& model, const Rat& B);

}  // namespace cbcount
