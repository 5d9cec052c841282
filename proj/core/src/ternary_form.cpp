#include "cbcount/ternary_form.hpp"

#include "cbcount/errors.hpp"

namespace cbcount {

Int determinant(const Gram3& g) {
  return g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
         g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
         g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
}

Gram3 adjugate(const Gram3& g) {
  Gram3 a;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // cofactor C_ji placed at (i, j)
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      a[i][j] = g[r0][c0] * g[r1][c1] - g[r0][c1] * g[r1][c0];
    }
  }
  return a;
}

Int minors_gcd(const Gram3& g) {
  Int acc = 0;
  const Gram3 a = adjugate(g);
  for (const auto& row : a) {
    for (const auto& m : row) acc = gcd(acc, m);
  }
  return acc;
}

Int evaluate(const Gram3& g, const Vec3& x) { return bilinear(g, x, x); }

Int bilinear(const Gram3& g, const Vec3& x, const Vec3& y) {
  Int s = 0;
  for (int i = 0; i < 3; ++i) {
    if (x[i] == 0) continue;
    Int row = g[i][0] * y[0] + g[i][1] * y[1] + g[i][2] * y[2];
    s += x[i] * row;
  }
  return s;
}

Vec3 canonical_vector(const Vec3& v) {
  const Int g = gcd(gcd(v[0], v[1]), v[2]);
  if (g == 0) throw InputError("zero vector has no canonical representative");
  Vec3 r{v[0] / g, v[1] / g, v[2] / g};
  for (const auto& c : r) {
    if (c != 0) {
      if (c < 0) {
        for (auto& d : r) d = -d;
      }
      break;
    }
  }
  return r;
}

bool is_canonical(const Vec3& v) {
  if (gcd(gcd(v[0], v[1]), v[2]) != 1) return false;
  for (const auto& c : v) {
    if (c != 0) return c > 0;
  }
  return false;
}

TernaryForm::TernaryForm(const Gram3& g) : gram_(g) {
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (g[i][j] != g[j][i]) throw InputError("ternary form Gram matrix is not symmetric");
    }
  }
  det_ = determinant(g);
  if (det_ == 0) throw InputError("ternary form is degenerate (det = 0)");
}

TernaryForm TernaryForm::diagonal(const Int& a, const Int& b, const Int& c) {
  Gram3 g{{{a, 0, 0}, {0, b, 0}, {0, 0, c}}};
  return TernaryForm(g);
}

std::string TernaryForm::to_string() const {
  std::string s = "[";
  for (int i = 0; i < 3; ++i) {
    if (i != 0) s += ", ";
    s += "[" + gram_[i][0].get_str() + ", " + gram_[i][1].get_str() + ", " + gram_[i][2].get_str() + "]";
  }
  return s + "]";
}

}  // namespace cbcount
