#pragma once

// Sparse multivariate polynomials with arbitrary-precision integer
// coefficients, plus a small univariate rational toolkit used for
// squarefree tests of binary forms.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbcount/arith.hpp"

namespace cbcount {

using Exponents = std::vector<unsigned>;

class MultiPoly {
 public:
  explicit MultiPoly(unsigned nvars = 0) : nvars_(nvars) {}

  static MultiPoly constant(unsigned nvars, const Int& c);
  static MultiPoly variable(unsigned nvars, unsigned index);
  static MultiPoly monomial(const Int& coefficient, Exponents exps);

  unsigned nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponents, Int>& terms() const { return terms_; }

  /// Degree of the first term; nullopt for the zero polynomial.
  std::optional<unsigned> degree() const;
  bool is_homogeneous() const;

  /// Adds c * x^exps (merging, dropping zero coefficients).
  void add_term(const Int& c, const Exponents& exps);

  Int eval(std::span<const Int> point) const;
  MultiPoly derivative(unsigned var) const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const Int& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const Int& c) { return a *= c; }
  friend MultiPoly operator-(MultiPoly a) { return a *= Int(-1); }
  friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

  MultiPoly pow(unsigned k) const;

  /// Substitutes variable i by images[i] (all images share an nvars).
  MultiPoly compose(std::span<const MultiPoly> images) const;

  /// Human-readable form with variables named prefix0, prefix1, ...
  std::string to_string(char prefix) const;

 private:
  unsigned nvars_;
  std::map<Exponents, Int> terms_;
};

/// Parses an expression such as "y0^3 + 2*y0*y1 - (y0 - y1)^2" in nvars
/// variables named <prefix><index>. Throws InputError with the column of the
/// first offending character.
MultiPoly parse_poly(const std::string& text, unsigned nvars, char prefix);

/// Dense univariate polynomial over Q, coefficient i multiplies u^i.
using UniPoly = std::vector<Rat>;

void trim(UniPoly& f);
UniPoly derivative(const UniPoly& f);
UniPoly poly_gcd(UniPoly a, UniPoly b);

/// Result of squarefree testing a binary form f(y0, y1).
struct BinaryFormSquarefree {
  bool squarefree = false;
  unsigned degree_drop = 0;       // multiplicity of the root (0:1)
  unsigned affine_gcd_degree = 0; // deg gcd(f(1,u), f'(1,u))
};

/// f must be a nonzero binary form (nvars == 2).
BinaryFormSquarefree squarefree_binary_form(const MultiPoly& f);

}  // namespace cbcount
