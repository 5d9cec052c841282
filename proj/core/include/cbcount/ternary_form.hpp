#pragma once

#include <array>
#include <string>

#include "cbcount/arith.hpp"

namespace cbcount {

using Vec3 = std::array<Int, 3>;
using Gram3 = std::array<std::array<Int, 3>, 3>;

/// Coordinate bounds |x_j| <= bound[j] of a search box.
using Box3 = std::array<Int, 3>;

Int determinant(const Gram3& g);

/// Adjugate (transposed cofactor matrix); g * adj(g) = det(g) * I.
Gram3 adjugate(const Gram3& g);

/// gcd of all nine 2x2 minors (0 when every minor vanishes).
Int minors_gcd(const Gram3& g);

/// x^T g x.
Int evaluate(const Gram3& g, const Vec3& x);

/// x^T g y.
Int bilinear(const Gram3& g, const Vec3& x, const Vec3& y);

/// Primitive representative with first nonzero entry positive; v != 0.
Vec3 canonical_vector(const Vec3& v);
bool is_canonical(const Vec3& v);

/// A nondegenerate symmetric integer 3x3 matrix; the quadratic form is
/// Q(x) = x^T G x, so off-diagonal entries are half the cross coefficients.
class TernaryForm {
 public:
  /// Throws InputError if g is not symmetric or det g = 0.
  explicit TernaryForm(const Gram3& g);
  static TernaryForm diagonal(const Int& a, const Int& b, const Int& c);

  const Gram3& gram() const { return gram_; }
  const Int& det() const { return det_; }
  Int operator()(const Vec3& x) const { return evaluate(gram_, x); }
  Int bilinear(const Vec3& x, const Vec3& y) const { return cbcount::bilinear(gram_, x, y); }
  Int minors_gcd() const { return cbcount::minors_gcd(gram_); }

  std::string to_string() const;

 private:
  Gram3 gram_;
  Int det_;
};

}  // namespace cbcount
