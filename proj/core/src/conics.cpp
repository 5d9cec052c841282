#include "cbcount/conics.hpp"

#include <algorithm>
#include <cmath>

#include "cbcount/errors.hpp"
#include "cbcount/lattice.hpp"

namespace cbcount {

namespace {

Gram3 identity3() {
  Gram3 t;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) t[i][j] = (i == j) ? 1 : 0;
  }
  return t;
}

/// T^T G T
Gram3 congruence(const Gram3& g, const Gram3& t) {
  Gram3 gt;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) gt[i][j] = g[i][0] * t[0][j] + g[i][1] * t[1][j] + g[i][2] * t[2][j];
  }
  Gram3 out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out[i][j] = t[0][i] * gt[0][j] + t[1][i] * gt[1][j] + t[2][i] * gt[2][j];
  }
  return out;
}

void make_column_primitive(Gram3& t, int c) {
  const Int g = gcd(gcd(t[0][c], t[1][c]), t[2][c]);
  if (g > 1) {
    for (int r = 0; r < 3; ++r) t[r][c] /= g;
  }
}

int sign(const Int& x) { return sgn(x); }

/// Squarefree part s and square root f of the square part: |n| = s f^2, sign kept on s.
void split_square(const Int& n, Int& s, Int& f) {
  s = n < 0 ? -1 : 1;
  f = 1;
  for (const auto& pp : factor(n)) {
    if (pp.exponent % 2 == 1) s *= pp.prime;
    f *= ipow(pp.prime, pp.exponent / 2);
  }
}

}  // namespace

Diagonalization diagonalize(const TernaryForm& form) {
  const Gram3& g0 = form.gram();
  Gram3 t = identity3();
  Gram3 g = g0;
  for (int k = 0; k < 3; ++k) {
    if (g[k][k] == 0) {
      int swap_with = -1;
      for (int i = k + 1; i < 3; ++i) {
        if (g[i][i] != 0) {
          swap_with = i;
          break;
        }
      }
      if (swap_with >= 0) {
        for (int r = 0; r < 3; ++r) std::swap(t[r][k], t[r][swap_with]);
      } else {
        int partner = -1;
        for (int j = k + 1; j < 3; ++j) {
          if (g[k][j] != 0) {
            partner = j;
            break;
          }
        }
        if (partner < 0) throw InternalError("diagonalization met a degenerate form");
        // Q(e_k + e_j) = 2 g_kj != 0 because both diagonal entries vanish
        for (int r = 0; r < 3; ++r) t[r][k] += t[r][partner];
      }
      g = congruence(g0, t);
    }
    for (int j = k + 1; j < 3; ++j) {
      if (g[k][j] == 0) continue;
      const Int gkk = g[k][k];
      const Int gkj = g[k][j];
      for (int r = 0; r < 3; ++r) t[r][j] = gkk * t[r][j] - gkj * t[r][k];
      make_column_primitive(t, j);
    }
    g = congruence(g0, t);
  }
  Diagonalization out;
  out.T = t;
  for (int i = 0; i < 3; ++i) out.d[i] = g[i][i];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j && g[i][j] != 0) throw InternalError("diagonalization left an off-diagonal entry");
    }
  }
  return out;
}

namespace {

bool diagonal_locally_soluble(const std::array<Int, 3>& d, const Place& place) {
  if (place.is_infinite()) {
    const int s0 = sign(d[0]), s1 = sign(d[1]), s2 = sign(d[2]);
    return !(s0 == s1 && s1 == s2);
  }
  const Int a = -d[0] * d[2];
  const Int b = -d[1] * d[2];
  return hilbert_symbol(a, b, place.p) == 1;
}

std::vector<Int> primes_of_2det(const TernaryForm& form) {
  std::vector<Int> ps{2};
  for (const auto& pp : factor(form.det())) {
    if (pp.prime != 2) ps.push_back(pp.prime);
  }
  return ps;
}

}  // namespace

bool local_solubility(const TernaryForm& form, const Place& place) {
  if (!place.is_infinite() && !is_prime(place.p)) throw InputError("place must be a prime or infinity");
  return diagonal_locally_soluble(diagonalize(form).d, place);
}

std::vector<Place> obstructing_places(const TernaryForm& form) {
  const auto dg = diagonalize(form);
  std::vector<Place> out;
  if (!diagonal_locally_soluble(dg.d, Place::infinity())) out.push_back(Place::infinity());
  for (const auto& p : primes_of_2det(form)) {
    if (!diagonal_locally_soluble(dg.d, Place::prime(p))) out.push_back(Place::prime(p));
  }
  return out;
}

bool is_soluble(const TernaryForm& form) {
  const auto dg = diagonalize(form);
  if (!diagonal_locally_soluble(dg.d, Place::infinity())) return false;
  for (const auto& p : primes_of_2det(form)) {
    if (!diagonal_locally_soluble(dg.d, Place::prime(p))) return false;
  }
  return true;
}

std::optional<PointCertificate> find_point_certified(const TernaryForm& form) {
  if (!is_soluble(form)) return std::nullopt;
  const auto dg = diagonalize(form);

  // Legendre reduction; z_i = w_i / den_i where z are the diagonal coordinates.
  std::array<Int, 3> c = dg.d;
  std::array<Int, 3> den{1, 1, 1};
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < 3; ++i) {
      Int s, f;
      split_square(c[i], s, f);
      if (f != 1) {
        c[i] = s;
        den[i] *= f;
        changed = true;
      }
    }
    for (int i = 0; i < 3 && !changed; ++i) {
      for (int j = i + 1; j < 3 && !changed; ++j) {
        const Int g = gcd(c[i], c[j]);
        if (g > 1) {
          const int k = 3 - i - j;
          c[i] /= g;
          c[j] /= g;
          c[k] *= g;
          den[i] *= g;
          den[j] *= g;
          changed = true;
        }
      }
    }
  }

  std::array<Int, 3> bound{isqrt(abs(c[1] * c[2])), isqrt(abs(c[0] * c[2])), isqrt(abs(c[0] * c[1]))};
  // solve for the coordinate with the largest bound, loop over the other two
  int sv = 0;
  for (int i = 1; i < 3; ++i) {
    if (bound[i] > bound[sv]) sv = i;
  }
  const int u = (sv + 1) % 3, v = (sv + 2) % 3;
  std::optional<Vec3> found;
  for (Int a = 0; a <= bound[u] && !found; ++a) {
    for (Int b = 0; b <= bound[v]; ++b) {
      if (a == 0 && b == 0) continue;
      const Int rhs = -(c[u] * a * a + c[v] * b * b);
      if (rhs == 0) {
        // c_sv w^2 = 0 forces w = 0: a genuine zero only if (a, b) solves the binary part
        Vec3 w;
        w[u] = a;
        w[v] = b;
        w[sv] = 0;
        found = w;
        break;
      }
      if (sgn(rhs) != sgn(c[sv])) continue;
      if (!mpz_divisible_p(rhs.get_mpz_t(), c[sv].get_mpz_t())) continue;
      Int r;
      if (!is_square(rhs / c[sv], &r) || r > bound[sv]) continue;
      Vec3 w;
      w[u] = a;
      w[v] = b;
      w[sv] = r;
      found = w;
      break;
    }
  }
  if (!found) throw InternalError("no point found within the Holzer bounds of a soluble conic");

  Int l = 1;
  for (const auto& dd : den) l = lcm(l, dd);
  Vec3 z;
  for (int i = 0; i < 3; ++i) z[i] = (*found)[i] * (l / den[i]);
  Vec3 x;
  for (int r = 0; r < 3; ++r) x[r] = dg.T[r][0] * z[0] + dg.T[r][1] * z[1] + dg.T[r][2] * z[2];
  x = canonical_vector(x);
  if (form(x) != 0) throw InternalError("pulled-back point does not lie on the conic");

  PointCertificate cert;
  cert.legendre = c;
  cert.legendre_solution = *found;
  cert.holzer = bound;
  cert.point = x;
  return cert;
}

std::optional<Vec3> find_point(const TernaryForm& form) {
  auto cert = find_point_certified(form);
  if (!cert) return std::nullopt;
  return cert->point;
}

namespace {

Int dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

/// Nearest integer to a / b, b > 0.
Int round_div(const Int& a, const Int& b) {
  Int q;
  const Int num = 2 * a + b, den = 2 * b;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

/// Unimodular moves on (u1, u2) that keep (p, u1, u2) a basis: Gauss reduction
/// of the projections orthogonal to p, then u_i -= round(<u_i,p>/<p,p>) p.
/// An unreduced completion can leave span(u1, u2) almost containing p, and
/// then all three maps nearly share a root: the counting region degenerates
/// into a needle that no floating-point sampler resolves.
void reduce_against(Vec3& u1, Vec3& u2, const Vec3& p) {
  const Int N = dot(p, p);
  auto gram = [&](const Vec3& a, const Vec3& b) { return Int(N * dot(a, b) - dot(a, p) * dot(b, p)); };
  for (;;) {
    Int g11 = gram(u1, u1), g22 = gram(u2, u2);
    if (g11 > g22) {
      std::swap(u1, u2);
      std::swap(g11, g22);
    }
    const Int r = round_div(gram(u1, u2), g11);
    if (r == 0) break;
    for (int j = 0; j < 3; ++j) u2[j] -= r * u1[j];
  }
  for (Vec3* u : {&u1, &u2}) {
    const Int r = round_div(dot(*u, p), N);
    for (int j = 0; j < 3; ++j) (*u)[j] -= r * p[j];
  }
}

}  // namespace

ConicParam parametrize(const TernaryForm& form, const Vec3& point) {
  if (point[0] == 0 && point[1] == 0 && point[2] == 0) throw InputError("base point must be nonzero");
  if (form(point) != 0) throw InputError("base point does not lie on the conic");
  const Vec3 p = canonical_vector(point);
  const auto comp = unimodular_completion({{p[0], p[1], p[2]}}, 3);
  ConicParam par;
  par.base_point = p;
  for (int r = 0; r < 3; ++r) {
    par.u1[r] = comp.basis[r][1];
    par.u2[r] = comp.basis[r][2];
  }
  reduce_against(par.u1, par.u2, p);
  const Int q0 = form(par.u1);
  const Int q1 = 2 * form.bilinear(par.u1, par.u2);
  const Int q2 = form(par.u2);
  par.l = {2 * form.bilinear(p, par.u1), 2 * form.bilinear(p, par.u2)};
  for (int j = 0; j < 3; ++j) {
    par.maps[j].c[0] = q0 * p[j] - par.l[0] * par.u1[j];
    par.maps[j].c[1] = q1 * p[j] - par.l[0] * par.u2[j] - par.l[1] * par.u1[j];
    par.maps[j].c[2] = q2 * p[j] - par.l[1] * par.u2[j];
  }
  par.l_content = gcd(par.l[0], par.l[1]);
  if (par.l_content == 0) throw InputError("singular conic: the tangent form vanishes at the base point");
  par.l_prim = {par.l[0] / par.l_content, par.l[1] / par.l_content};
  par.resultant = q0 * par.l_prim[1] * par.l_prim[1] - q1 * par.l_prim[1] * par.l_prim[0] +
                  q2 * par.l_prim[0] * par.l_prim[0];
  if (par.resultant == 0) throw InputError("singular conic: a line lies on the conic");
  par.content_bound = par.l_content * abs(par.resultant);
  return par;
}

double bsj_diagnostic(const TernaryForm& form, const std::array<double, 3>& boxes) {
  const double tau = divisor_count(abs(form.det())).get_d();
  const double d0 = form.minors_gcd().get_d();
  const double det = std::fabs(form.det().get_d());
  const double vol = boxes[0] * boxes[1] * boxes[2];
  return tau * (std::cbrt(std::pow(d0, 1.5) * vol / det) + 1.0);
}

}  // namespace cbcount
