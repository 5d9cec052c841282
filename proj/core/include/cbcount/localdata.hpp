#pragma once

// Local densities of a fibre conic Q_y and its Tamagawa number
//   tau = sigma_inf * prod_p sigma_p,
// with sigma_p = lim N(p^n) / p^{2n},
//   N(p^n) = #{x mod p^n : x != 0 mod p, Q(x) = 0 mod p^n},
// and sigma_inf the integral of the Leray form of Q against 1/H_inf.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "cbcount/bundle.hpp"
#include "cbcount/conics.hpp"
#include "cbcount/heights.hpp"

namespace cbcount {

/// Odd primes above this use the closed Jordan-form evaluation instead of lift-and-count.
inline constexpr unsigned long kLiftPrimeLimit = 200;

/// Exact N(p^n) by lift-and-count over the projective charts.
Int count_mod_prime_power(const TernaryForm& form, const Int& p, unsigned n);

struct SigmaP {
  Rat value;
  /// "lift": N(p^n)/p^{2n} at the first Hensel-stable n > 2 v_p(det) + 1;
  /// "jordan": closed form from a p-adic diagonalization (odd p only).
  std::string method;
  unsigned level = 0;  // n at which the stopping rule fired (lift only)
};

/// Lift-and-count with the Hensel stopping rule and a one-level audit.
SigmaP sigma_p_lift(const TernaryForm& form, const Int& p);
/// Closed-form density for odd p from the Jordan splitting over Z_p.
SigmaP sigma_p_jordan(const TernaryForm& form, const Int& p);
/// Dispatches: lift for p = 2 and p <= kLiftPrimeLimit, Jordan otherwise.
SigmaP sigma_p_detail(const TernaryForm& form, const Int& p);
Rat sigma_p(const TernaryForm& form, const Int& p);
Rat sigma_p(const ConicBundleSurface& surface, const ProjPoint& y, const Int& p);

struct RealDensity {
  double value = 0;
  double achieved_tol = 0;  // estimated relative error
  long evaluations = 0;
};

/// Integral over the real conic x^T G x = 0 of the Leray form divided by
/// max_j weights[j] |x_j|. Zero when the form is definite.
RealDensity real_density(const Gram3& gram, const std::array<double, 3>& weights, double tol);

/// The fibre height weights H(y)^{A + a_j} (approximate).
std::array<double, 3> fibre_weights(const HeightModel& model, const ProjPoint& y);

RealDensity sigma_inf(const ConicBundleSurface& surface, const HeightModel& model, const ProjPoint& y,
                      double tol = 1e-8);

/// Peyre's alpha-invariant of a smooth conic with a rational point.
inline constexpr double kConicAlpha = 0.5;

struct FibreReport {
  ProjPoint y;
  Gram3 form;
  Int disc;
  Int minors_gcd;
  bool soluble = false;
  std::vector<Place> obstructions;
  double sigma_inf = 0;
  double sigma_inf_tol = 0;
  std::map<Int, Rat> sigma_p;  // primes p | 2 disc only
  double tamagawa = 0;
  double peyre = 0;
};

/// Throws InputError on a singular fibre; ToleranceError from the quadrature.
FibreReport fibre_report(const ConicBundleSurface& surface, const HeightModel& model, const ProjPoint& y,
                         double tol = 1e-8);

double tamagawa(const ConicBundleSurface& surface, const HeightModel& model, const ProjPoint& y,
                double tol = 1e-8);

/// kConicAlpha * tamagawa if the fibre has a rational point, else exactly 0.
double peyre_constant(const ConicBundleSurface& surface, const HeightModel& model, const ProjPoint& y,
                      double tol = 1e-8);

}  // namespace cbcount
