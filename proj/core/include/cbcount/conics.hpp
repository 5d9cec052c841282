#pragma once

// Arithmetic of a single plane conic x^T G x = 0: local and global
// solubility, point search, and rational parametrization.

#include <array>
#include <optional>
#include <string>

#include "cbcount/ternary_form.hpp"

namespace cbcount {

/// A place of Q: a prime p, or the real place (stored as p = 0).
struct Place {
  Int p = 0;

  static Place infinity() { return Place{0}; }
  static Place prime(const Int& p) { return Place{p}; }
  bool is_infinite() const { return p == 0; }
  std::string to_string() const { return is_infinite() ? "inf" : p.get_str(); }
};

/// Congruence diagonalization: with x = T z, Q(x) = d0 z0^2 + d1 z1^2 + d2 z2^2.
/// T is an integer matrix (columns are the new basis vectors) with det != 0.
struct Diagonalization {
  std::array<Int, 3> d;
  Gram3 T;
};

Diagonalization diagonalize(const TernaryForm& form);

/// Hilbert-symbol test (-ac, -bc)_v = 1 on a diagonalization; true iff the
/// conic has a point over Q_v (over R when place is infinite).
bool local_solubility(const TernaryForm& form, const Place& place);

/// The places where local_solubility fails, among infinity and p | 2 det.
std::vector<Place> obstructing_places(const TernaryForm& form);

/// Hasse-Minkowski: soluble at infinity and at every p | 2 det.
bool is_soluble(const TernaryForm& form);

/// Witness data for find_point.
struct PointCertificate {
  std::array<Int, 3> legendre;  // squarefree, pairwise coprime, not all of one sign
  Vec3 legendre_solution;       // nontrivial zero of the Legendre form
  std::array<Int, 3> holzer;    // |w_i| <= holzer_i: sqrt(|product of the other two|)
  Vec3 point;                   // canonical zero of the original form
};

std::optional<PointCertificate> find_point_certified(const TernaryForm& form);
std::optional<Vec3> find_point(const TernaryForm& form);

/// Binary quadratic c[0] s^2 + c[1] s t + c[2] t^2.
struct BinaryQuadratic {
  std::array<Int, 3> c{0, 0, 0};
  Int operator()(const Int& s, const Int& t) const { return c[0] * s * s + c[1] * s * t + c[2] * t * t; }
};

/// phi(s, t) = q(s,t) P - l(s,t) v(s,t), v = s u1 + t u2, where (P, u1, u2) is
/// a unimodular basis, q(s,t) = Q(v) and l(s,t) = 2 P^T G v. Each rational point
/// of the conic is phi(s,t)/gcd(phi(s,t)) for exactly one (s:t) in P^1(Q).
struct ConicParam {
  Vec3 base_point;
  Vec3 u1, u2;
  std::array<BinaryQuadratic, 3> maps;
  std::array<Int, 2> l;       // l(s,t) = l[0] s + l[1] t
  Int l_content;              // c_w = gcd(l[0], l[1])
  std::array<Int, 2> l_prim;  // l / c_w
  Int resultant;              // q(l'_t, -l'_s)
  /// For primitive (s,t), gcd(phi(s,t)) divides content_bound = c_w |resultant|.
  Int content_bound;

  Vec3 at(const Int& s, const Int& t) const {
    return {maps[0](s, t), maps[1](s, t), maps[2](s, t)};
  }
};

/// Throws InputError if point is not a nonzero zero of the form.
ConicParam parametrize(const TernaryForm& form, const Vec3& point);

/// tau(|det|) * ((Delta0^{3/2} B0 B1 B2 / |det|)^{1/3} + 1).
double bsj_diagnostic(const TernaryForm& form, const std::array<double, 3>& boxes);

}  // namespace cbcount
