#pragma once

// Conic bundle hypersurfaces of bidegree (e, 2) in the P^2-bundle
// F_n(a0, a1, a2) over P^n:  sum_{i,j} f_ij(y) x_i x_j = 0.

#include <array>
#include <string>
#include <vector>

#include "cbcount/poly.hpp"
#include "cbcount/projgeo.hpp"
#include "cbcount/ternary_form.hpp"

namespace cbcount {

using GramPoly = std::array<std::array<MultiPoly, 3>, 3>;

struct ConicBundleSurface {
  unsigned n = 1;
  std::array<long, 3> a{0, 0, 0};
  long e = 0;
  GramPoly gram;

  unsigned base_vars() const { return n + 1; }
  /// a_i + a_j + e, the degree required of f_ij.
  long entry_degree(int i, int j) const { return a[i] + a[j] + e; }
  /// 2(a0 + a1 + a2) + 3e.
  long discriminant_degree() const { return 2 * (a[0] + a[1] + a[2]) + 3 * e; }
};

enum class CheckStatus { pass, fail, asserted };

std::string to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool ok() const;
  /// First failing check, formatted for an error message; empty if ok().
  std::string first_failure() const;
};

/// Runs every structural check and never throws on a failing check.
ValidationReport validate(const ConicBundleSurface& surface);

/// Throws InputError naming the first failed check.
void require_valid(const ConicBundleSurface& surface);

/// det(f_ij) as a polynomial in y0..yn.
MultiPoly discriminant(const ConicBundleSurface& surface);

/// The fibre of the bundle above y.
struct FibreClass {
  ProjPoint y;
  Gram3 form;
  Int disc;        // Delta(y) = det(form)
  Int minors_gcd;  // Delta_0(y), gcd of the 2x2 minors (0 if all vanish)

  bool singular() const { return disc == 0; }
};

Gram3 fibre_gram(const ConicBundleSurface& surface, const ProjPoint& y);
FibreClass fibre_class(const ConicBundleSurface& surface, const ProjPoint& y);

/// Blows a cubic hypersurface in P^{n+2} up along a line L contained in it.
/// cubic: homogeneous of degree 3 in n + 3 variables; p, q span L.
/// Throws InputError on a rank defect or if L is not contained in the cubic.
/// Odd cross coefficients are handled by doubling the whole Gram matrix.
ConicBundleSurface import_cubic_with_line(const MultiPoly& cubic, const ProjPoint& p, const ProjPoint& q);

/// The surface x0^2 + x1^2 - y0*y1*x2^2 in F_1(0, 0, 1), e = 0.
ConicBundleSurface sum_of_two_squares_surface();

/// x0^2 - x1^2 - f(y)*x2^2 in F_1(0, 0, a), e = 0, with deg f = 2a.
ConicBundleSurface hyperbolic_surface(long a, const MultiPoly& f);

/// Product of the 2a linear forms y0 - j*y1, j = 0..2a-1.
MultiPoly default_hyperbolic_coefficient(long a);

}  // namespace cbcount
