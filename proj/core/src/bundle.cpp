#include "cbcount/bundle.hpp"

#include "cbcount/errors.hpp"
#include "cbcount/lattice.hpp"

namespace cbcount {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::asserted:
      return "asserted";
  }
  return "unknown";
}

bool ValidationReport::ok() const {
  for (const auto& c : checks) {
    if (c.status == CheckStatus::fail) return false;
  }
  return true;
}

std::string ValidationReport::first_failure() const {
  for (const auto& c : checks) {
    if (c.status == CheckStatus::fail) return c.name + ": " + c.detail;
  }
  return {};
}

namespace {

std::string entry_name(int i, int j) { return "f" + std::to_string(i) + std::to_string(j); }

MultiPoly det3(const GramPoly& g) {
  return g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
         g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
         g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
}

}  // namespace

MultiPoly discriminant(const ConicBundleSurface& surface) { return det3(surface.gram); }

ValidationReport validate(const ConicBundleSurface& s) {
  ValidationReport rep;
  auto add = [&](std::string name, CheckStatus st, std::string detail) {
    rep.checks.push_back({std::move(name), st, std::move(detail)});
  };

  bool structural = true;
  if (s.n < 1) {
    add("base dimension", CheckStatus::fail, "n must be at least 1");
    structural = false;
  } else {
    add("base dimension", CheckStatus::pass, "n = " + std::to_string(s.n));
  }
  std::string bad_vars;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (s.gram[i][j].nvars() != s.base_vars()) bad_vars += (bad_vars.empty() ? "" : ", ") + entry_name(i, j);
    }
  }
  if (!bad_vars.empty()) {
    add("entry variables", CheckStatus::fail,
        "entries not in " + std::to_string(s.base_vars()) + " variables: " + bad_vars);
    structural = false;
  } else {
    add("entry variables", CheckStatus::pass, "all entries in y0..y" + std::to_string(s.n));
  }

  if (s.a[0] <= s.a[1] && s.a[1] <= s.a[2]) {
    add("weight order", CheckStatus::pass, "a0 <= a1 <= a2");
  } else {
    add("weight order", CheckStatus::fail,
        "need a0 <= a1 <= a2, got (" + std::to_string(s.a[0]) + ", " + std::to_string(s.a[1]) + ", " +
            std::to_string(s.a[2]) + ")");
  }

  if (!structural) {
    add("symmetry", CheckStatus::fail, "skipped: entries malformed");
    add("degree matrix", CheckStatus::fail, "skipped: entries malformed");
    add("discriminant nonzero", CheckStatus::fail, "skipped: entries malformed");
    return rep;
  }

  std::string asym;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (!(s.gram[i][j] == s.gram[j][i])) asym += (asym.empty() ? "" : ", ") + entry_name(i, j) + " != " + entry_name(j, i);
    }
  }
  add("symmetry", asym.empty() ? CheckStatus::pass : CheckStatus::fail, asym.empty() ? "f_ij = f_ji" : asym);

  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      const MultiPoly& f = s.gram[i][j];
      const long want = s.entry_degree(i, j);
      const std::string name = "degree " + entry_name(i, j);
      if (f.is_zero()) {
        add(name, CheckStatus::pass, "zero entry");
        continue;
      }
      if (!f.is_homogeneous()) {
        add(name, CheckStatus::fail, entry_name(i, j) + " is not homogeneous; expected degree " + std::to_string(want));
        continue;
      }
      const long got = static_cast<long>(*f.degree());
      if (got != want) {
        add(name, CheckStatus::fail,
            entry_name(i, j) + " has degree " + std::to_string(got) + ", expected a" + std::to_string(i) + " + a" +
                std::to_string(j) + " + e = " + std::to_string(want));
      } else {
        add(name, CheckStatus::pass, "degree " + std::to_string(want));
      }
    }
  }

  const MultiPoly delta = discriminant(s);
  if (delta.is_zero()) {
    add("discriminant nonzero", CheckStatus::fail, "det(f_ij) is the zero polynomial");
    return rep;
  }
  add("discriminant nonzero", CheckStatus::pass, "Delta = " + delta.to_string('y'));

  const long want_deg = s.discriminant_degree();
  if (!delta.is_homogeneous() || static_cast<long>(*delta.degree()) != want_deg) {
    add("discriminant degree", CheckStatus::fail,
        "expected homogeneous of degree 2(a0+a1+a2)+3e = " + std::to_string(want_deg));
  } else {
    add("discriminant degree", CheckStatus::pass, "degree " + std::to_string(want_deg));
  }

  if (s.n == 1) {
    const auto sq = squarefree_binary_form(delta);
    if (sq.squarefree) {
      add("discriminant squarefree", CheckStatus::pass, "gcd(Delta(1,u), Delta'(1,u)) is constant");
    } else {
      add("discriminant squarefree", CheckStatus::fail,
          "Delta has a repeated factor (affine gcd degree " + std::to_string(sq.affine_gcd_degree) +
              ", multiplicity at (0:1) " + std::to_string(sq.degree_drop) + ")");
    }
  } else {
    add("discriminant squarefree", CheckStatus::asserted, "not checked for n > 1; smoothness is user-asserted");
  }
  return rep;
}

void require_valid(const ConicBundleSurface& surface) {
  const auto rep = validate(surface);
  if (!rep.ok()) throw InputError("invalid surface: " + rep.first_failure());
}

Gram3 fibre_gram(const ConicBundleSurface& surface, const ProjPoint& y) {
  if (y.dimension() != surface.n) throw InputError("base point has wrong dimension");
  Gram3 g;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) g[i][j] = surface.gram[i][j].eval(y.coords());
  }
  return g;
}

FibreClass fibre_class(const ConicBundleSurface& surface, const ProjPoint& y) {
  FibreClass fc{y, fibre_gram(surface, y), 0, 0};
  fc.disc = determinant(fc.form);
  fc.minors_gcd = minors_gcd(fc.form);
  return fc;
}

ConicBundleSurface import_cubic_with_line(const MultiPoly& cubic, const ProjPoint& p, const ProjPoint& q) {
  const unsigned nz = cubic.nvars();
  if (nz < 4) throw InputError("cubic must have at least 4 variables (n >= 1)");
  if (cubic.is_zero() || !cubic.is_homogeneous() || *cubic.degree() != 3) {
    throw InputError("cubic must be a nonzero homogeneous form of degree 3");
  }
  if (p.coords().size() != nz || q.coords().size() != nz) throw InputError("line points have wrong dimension");
  const auto comp = unimodular_completion({p.coords(), q.coords()}, nz);
  if (comp.rank != 2) throw InputError("rank error: the two points do not span a line");
  const IntMatrix& m = comp.basis;

  // z = M z'; then z' = (x0, x1, y0 x2, ..., yn x2).
  const unsigned n = nz - 3;
  const unsigned nv = (n + 1) + 3;  // y0..yn, x0, x1, x2
  auto yv = [&](unsigned i) { return MultiPoly::variable(nv, i); };
  auto xv = [&](unsigned i) { return MultiPoly::variable(nv, n + 1 + i); };
  std::vector<MultiPoly> zprime;
  zprime.push_back(xv(0));
  zprime.push_back(xv(1));
  for (unsigned i = 0; i <= n; ++i) zprime.push_back(yv(i) * xv(2));
  std::vector<MultiPoly> images;
  for (unsigned r = 0; r < nz; ++r) {
    MultiPoly acc(nv);
    for (unsigned c = 0; c < nz; ++c) {
      if (m[r][c] != 0) acc += zprime[c] * m[r][c];
    }
    images.push_back(acc);
  }
  const MultiPoly g = cubic.compose(images);

  GramPoly coeff;
  for (auto& row : coeff) {
    for (auto& f : row) f = MultiPoly(n + 1);
  }
  for (const auto& [e, c] : g.terms()) {
    const unsigned i0 = e[n + 1], i1 = e[n + 2], i2 = e[n + 3];
    if (i2 == 0) throw InputError("containment error: the line is not contained in the cubic");
    // divide by x2; remaining x-degree is 2
    std::array<unsigned, 3> xe{i0, i1, i2 - 1};
    int r = -1, s = -1;
    for (int k = 0; k < 3; ++k) {
      for (unsigned rep = 0; rep < xe[k]; ++rep) (r < 0 ? r : s) = k;
    }
    if (s < 0 || r < 0) throw InternalError("unexpected monomial after blow-up substitution");
    Exponents ye(e.begin(), e.begin() + n + 1);
    coeff[r][s].add_term(c, ye);
  }
  bool odd_cross = false;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      for (const auto& [e, c] : coeff[i][j].terms()) {
        if (mpz_odd_p(c.get_mpz_t()) != 0) odd_cross = true;
      }
    }
  }
  ConicBundleSurface out;
  out.n = n;
  out.a = {0, 0, 1};
  out.e = 1;
  const Int scale = odd_cross ? 2 : 1;
  for (int i = 0; i < 3; ++i) {
    out.gram[i][i] = coeff[i][i] * scale;
    for (int j = i + 1; j < 3; ++j) {
      MultiPoly half(n + 1);
      for (const auto& [e, c] : coeff[i][j].terms()) half.add_term(odd_cross ? c : Int(c / 2), e);
      out.gram[i][j] = half;
      out.gram[j][i] = half;
    }
  }
  return out;
}

ConicBundleSurface sum_of_two_squares_surface() {
  ConicBundleSurface s;
  s.n = 1;
  s.a = {0, 0, 1};
  s.e = 0;
  for (auto& row : s.gram) {
    for (auto& f : row) f = MultiPoly(2);
  }
  s.gram[0][0] = MultiPoly::constant(2, 1);
  s.gram[1][1] = MultiPoly::constant(2, 1);
  s.gram[2][2] = MultiPoly::monomial(-1, {1, 1});
  return s;
}

MultiPoly default_hyperbolic_coefficient(long a) {
  if (a < 1) throw InputError("hyperbolic coefficient needs a >= 1");
  MultiPoly f = MultiPoly::constant(2, 1);
  for (long j = 0; j < 2 * a; ++j) {
    f = f * (MultiPoly::variable(2, 0) - MultiPoly::variable(2, 1) * Int(j));
  }
  return f;
}

ConicBundleSurface hyperbolic_surface(long a, const MultiPoly& f) {
  ConicBundleSurface s;
  s.n = 1;
  s.a = {0, 0, a};
  s.e = 0;
  for (auto& row : s.gram) {
    for (auto& g : row) g = MultiPoly(2);
  }
  s.gram[0][0] = MultiPoly::constant(2, 1);
  s.gram[1][1] = MultiPoly::constant(2, -1);
  s.gram[2][2] = -f;
  return s;
}

}  // namespace cbcount
