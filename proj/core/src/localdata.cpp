#include "cbcount/localdata.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <tuple>

#include "cbcount/errors.hpp"
#include "cbcount/quadrature.hpp"

namespace cbcount {

namespace {

constexpr unsigned kMaxDepth = 400;

unsigned capped_valuation(const Int& x, const Int& p, unsigned cap) {
  if (x == 0) return cap;
  const unsigned v = valuation(x, p);
  return v < cap ? v : cap;
}

/// Balls z0 + p^k Z_p^2 in the affine charts x_c = 1 (earlier coordinates
/// divisible by p), classified by k, the gradient valuation m and v(f(z0)).
struct LiftTree {
  Int p;
  std::map<unsigned, Int> alive;  // level k -> #visited balls at level k with f(z0) = 0 mod p^k
  // terminal balls (m < k): key (k, m, min(v(f), k + m)) -> multiplicity
  std::map<std::tuple<unsigned, unsigned, unsigned>, Int> leaves;

  /// Number of chart points mod p^n (projective count over Z/p^n).
  Int chart_count(unsigned n) const {
    Int total = 0;
    if (auto it = alive.find(n); it != alive.end()) total += it->second;
    for (const auto& [key, mult] : leaves) {
      const auto [k, m, vf] = key;
      if (k >= n) continue;
      if (n >= k + m) {
        if (vf >= k + m) total += mult * ipow(p, n - k + m);
      } else if (vf >= n) {
        total += mult * ipow(p, 2 * (n - k));
      }
    }
    return total;
  }

  /// lim N(p^n) / p^{2n}.
  Rat limit() const {
    Rat total = 0;
    for (const auto& [key, mult] : leaves) {
      const auto [k, m, vf] = key;
      if (vf >= k + m) total += Rat(mult) / Rat(ipow(p, k - m));
    }
    return total * (Rat(1) - Rat(1) / Rat(p));
  }

  unsigned max_terminal_level() const {
    unsigned out = 0;
    for (const auto& [key, mult] : leaves) out = std::max(out, std::get<0>(key) + std::get<1>(key));
    return out;
  }
};

LiftTree build_lift_tree(const Gram3& g, const Int& p) {
  if (!p.fits_slong_p() || p > Int(1) << 30) throw InputError("prime too large for lift-and-count");
  LiftTree tree;
  tree.p = p;
  const long pl = p.get_si();

  long gm[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Int r;
      mpz_fdiv_r(r.get_mpz_t(), g[i][j].get_mpz_t(), p.get_mpz_t());
      gm[i][j] = r.get_si();
    }
  }

  struct Node {
    unsigned k;
    int chart;
    Int za, zb;
  };
  std::vector<Node> stack;
  Int simple_leaves = 0;

  for (int c = 0; c < 3; ++c) {
    const int fa = (c == 0) ? 1 : 0;
    const int fb = (c == 2) ? 1 : 2;
    const long amax = (fa < c) ? 1 : pl;  // coordinates before the chart index are 0 mod p
    const long bmax = (fb < c) ? 1 : pl;
    for (long za = 0; za < amax; ++za) {
      for (long zb = 0; zb < bmax; ++zb) {
        long x[3];
        x[c] = 1;
        x[fa] = za;
        x[fb] = zb;
        long gx[3];
        for (int i = 0; i < 3; ++i) gx[i] = (gm[i][0] * x[0] + gm[i][1] * x[1] + gm[i][2] * x[2]) % pl;
        const long f = (x[0] * gx[0] + x[1] * gx[1] + x[2] * gx[2]) % pl;
        if (f != 0) continue;  // dead at level 1
        const bool grad_unit = (2 * gx[fa]) % pl != 0 || (2 * gx[fb]) % pl != 0;
        if (grad_unit) {
          ++simple_leaves;
        } else {
          stack.push_back({1, c, Int(za), Int(zb)});
        }
      }
    }
  }
  if (simple_leaves != 0) {
    tree.alive[1] += simple_leaves;
    tree.leaves[{1, 0, 1}] += simple_leaves;
  }

  while (!stack.empty()) {
    Node nd = std::move(stack.back());
    stack.pop_back();
    if (nd.k > kMaxDepth) throw InternalError("lift-and-count exceeded its depth limit");
    const int c = nd.chart;
    const int fa = (c == 0) ? 1 : 0;
    const int fb = (c == 2) ? 1 : 2;
    Vec3 x;
    x[c] = 1;
    x[fa] = nd.za;
    x[fb] = nd.zb;
    const Int gxa = g[fa][0] * x[0] + g[fa][1] * x[1] + g[fa][2] * x[2];
    const Int gxb = g[fb][0] * x[0] + g[fb][1] * x[1] + g[fb][2] * x[2];
    const Int f = evaluate(g, x);
    const unsigned k = nd.k;
    const unsigned m = std::min(capped_valuation(2 * gxa, p, k), capped_valuation(2 * gxb, p, k));
    const unsigned vf = capped_valuation(f, p, 2 * k + 2);
    if (vf >= k) tree.alive[k] += 1;
    if (m < k) {
      tree.leaves[{k, m, std::min(vf, k + m)}] += 1;
      continue;
    }
    // With m >= k every child satisfies f(child) = f(z0) mod p^{k+1}, so
    // the children are all dead unless p^{k+1} | f(z0).
    if (vf < k + 1) continue;
    const Int step = ipow(p, k);
    for (long wa = 0; wa < pl; ++wa) {
      for (long wb = 0; wb < pl; ++wb) {
        stack.push_back({k + 1, c, nd.za + step * wa, nd.zb + step * wb});
      }
    }
  }
  return tree;
}

Int unit_count(const Int& p, unsigned n) { return n == 0 ? Int(1) : Int(ipow(p, n) - ipow(p, n - 1)); }

}  // namespace

Int count_mod_prime_power(const TernaryForm& form, const Int& p, unsigned n) {
  if (!is_prime(p)) throw InputError("count_mod_prime_power: " + p.get_str() + " is not prime");
  if (n == 0) throw InputError("count_mod_prime_power: n must be positive");
  const LiftTree tree = build_lift_tree(form.gram(), p);
  return unit_count(p, n) * tree.chart_count(n);
}

SigmaP sigma_p_lift(const TernaryForm& form, const Int& p) {
  if (!is_prime(p)) throw InputError("sigma_p: " + p.get_str() + " is not prime");
  const LiftTree tree = build_lift_tree(form.gram(), p);
  const unsigned v = valuation(form.det(), p);
  const Int p2 = p * p;
  auto N = [&](unsigned n) -> Int { return unit_count(p, n) * tree.chart_count(n); };
  const unsigned start = 2 * v + 2;
  const unsigned stop = std::max(start, tree.max_terminal_level()) + 64;
  for (unsigned n = start; n < stop; ++n) {
    const Int a = N(n);
    const Int b = N(n + 1);
    if (b != p2 * a) continue;
    if (N(n + 2) != p2 * b) {
      throw InternalError("sigma_p audit failed: N(p^" + std::to_string(n + 2) + ") != p^2 N(p^" +
                          std::to_string(n + 1) + ") for p = " + p.get_str());
    }
    SigmaP out;
    out.value = Rat(a, ipow(p, 2 * n));
    out.value.canonicalize();
    out.method = "lift";
    out.level = n;
    if (out.value != tree.limit()) {
      throw InternalError("sigma_p stopping rule fired before stabilization for p = " + p.get_str());
    }
    return out;
  }
  throw InternalError("sigma_p: point counts did not stabilize for p = " + p.get_str());
}

namespace {

int rat_valuation(const Rat& x, const Int& p) {
  return static_cast<int>(valuation(x.get_num(), p)) - static_cast<int>(valuation(x.get_den(), p));
}

}  // namespace

SigmaP sigma_p_jordan(const TernaryForm& form, const Int& p) {
  if (p == 2 || !is_prime(p)) throw InputError("sigma_p_jordan needs an odd prime");
  // Diagonalize over Z_(p) by congruences with p-integral transformations.
  std::array<std::array<Rat, 3>, 3> g;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) g[i][j] = Rat(form.gram()[i][j]);
  }
  auto swap_basis = [&](int a, int b) {
    if (a == b) return;
    std::swap(g[a], g[b]);
    for (int r = 0; r < 3; ++r) std::swap(g[r][a], g[r][b]);
  };
  for (int k = 0; k < 3; ++k) {
    int bi = -1, bj = -1, best = 0;
    for (int i = k; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        if (g[i][j] == 0) continue;
        const int val = rat_valuation(g[i][j], p);
        // prefer diagonal entries on ties
        if (bi < 0 || val < best || (val == best && i == j && bi != bj)) {
          bi = i;
          bj = j;
          best = val;
        }
      }
    }
    if (bi < 0) throw InternalError("degenerate form in p-adic diagonalization");
    if (bi != bj) {
      // e_bi <- e_bi + e_bj: the new diagonal entry has the off-diagonal valuation (p odd)
      for (int r = 0; r < 3; ++r) g[bi][r] += g[bj][r];
      for (int r = 0; r < 3; ++r) g[r][bi] += g[r][bj];
    }
    swap_basis(k, bi);
    for (int j = k + 1; j < 3; ++j) {
      if (g[k][j] == 0) continue;
      const Rat ratio = g[k][j] / g[k][k];
      for (int r = 0; r < 3; ++r) g[j][r] -= ratio * g[k][r];
      for (int r = 0; r < 3; ++r) g[r][j] -= ratio * g[r][k];
    }
  }
  std::array<int, 3> v{};
  std::array<int, 3> chi{};
  for (int i = 0; i < 3; ++i) {
    if (g[i][i] == 0) throw InternalError("zero diagonal entry after p-adic diagonalization");
    v[i] = rat_valuation(g[i][i], p);
    Rat u = g[i][i];
    if (v[i] > 0) {
      u /= Rat(ipow(p, static_cast<unsigned long>(v[i])));
    } else if (v[i] < 0) {
      u *= Rat(ipow(p, static_cast<unsigned long>(-v[i])));
    }
    u.canonicalize();
    chi[i] = legendre(u.get_num() * u.get_den(), p);
  }
  const Rat one(1);
  const Rat pr(p);
  const Rat inv_p = one / pr;
  auto ppow = [&](int e) {
    if (e >= 0) return Rat(ipow(p, static_cast<unsigned long>(e)));
    return Rat(Int(1), ipow(p, static_cast<unsigned long>(-e)));
  };
  auto pair_factor = [&](int i, int j) { return Rat((1 - inv_p) * (1 - inv_p) * (1 + chi[i] * chi[j] * legendre(Int(-1), p))); };

  Rat sigma = 0;
  // all three valuations E_i = v_i + 2 w_i equal
  {
    const int m = std::max({v[0], v[1], v[2]});
    if ((m - v[0]) % 2 == 0 && (m - v[1]) % 2 == 0 && (m - v[2]) % 2 == 0) {
      const int ws = ((m - v[0]) + (m - v[1]) + (m - v[2])) / 2;
      Rat pairs_sum = 0;
      pairs_sum += 1 + chi[0] * chi[1] * legendre(Int(-1), p);
      pairs_sum += 1 + chi[0] * chi[2] * legendre(Int(-1), p);
      pairs_sum += 1 + chi[1] * chi[2] * legendre(Int(-1), p);
      const Rat z3 = pr * pr - 1 - (pr - 1) * pairs_sum;
      sigma += ppow(-ws) * ppow(m) * z3 / (pr * pr);
    }
  }
  // exactly two minimal
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const int k = 3 - i - j;
      if ((v[i] - v[j]) % 2 != 0) continue;
      const Rat pf = pair_factor(i, j);
      if (pf == 0) continue;
      // min(w_i, w_j) = 0
      {
        const int m = std::max(v[i], v[j]);
        const int wij = (m - v[i]) / 2 + (m - v[j]) / 2;
        // w_k >= 0 with v_k + 2 w_k > m
        int wmin = 0;
        if (v[k] <= m) wmin = (m - v[k]) / 2 + 1;
        const Rat tail = ppow(-wmin) / (1 - inv_p);
        sigma += ppow(-wij) * tail * ppow(m) * pf;
      }
      // w_k = 0 and w_i, w_j >= 1: m > max(v_i, v_j), m < v_k
      for (int m = std::max(v[i], v[j]) + 2; m < v[k]; m += 2) {
        const int wij = (m - v[i]) / 2 + (m - v[j]) / 2;
        sigma += ppow(-wij) * ppow(m) * pf;
      }
    }
  }
  sigma.canonicalize();
  return SigmaP{sigma, "jordan", 0};
}

SigmaP sigma_p_detail(const TernaryForm& form, const Int& p) {
  if (!is_prime(p)) throw InputError("sigma_p: " + p.get_str() + " is not prime");
  if (p == 2 || p <= kLiftPrimeLimit) return sigma_p_lift(form, p);
  return sigma_p_jordan(form, p);
}

Rat sigma_p(const TernaryForm& form, const Int& p) { return sigma_p_detail(form, p).value; }

Rat sigma_p(const ConicBundleSurface& surface, const ProjPoint& y, const Int& p) {
  const FibreClass fc = fibre_class(surface, y);
  if (fc.singular()) throw InputError("precondition error: fibre above " + y.key() + " is singular");
  return sigma_p(TernaryForm(fc.form), p);
}

RealDensity real_density(const Gram3& gram, const std::array<double, 3>& weights, double tol) {
  Eigen::Matrix3d G;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) G(i, j) = gram[i][j].get_d();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(G);
  const Eigen::Vector3d lam = es.eigenvalues();
  const Eigen::Matrix3d V = es.eigenvectors();
  int npos = 0;
  for (int i = 0; i < 3; ++i) npos += lam(i) > 0 ? 1 : 0;
  if (npos == 0 || npos == 3) return RealDensity{0.0, 0.0, 0};
  // the pair of equal sign spans the circle, the odd one out is the axis
  const bool pair_positive = npos == 2;
  int axis = -1, a = -1, b = -1;
  for (int i = 0; i < 3; ++i) {
    const bool pos = lam(i) > 0;
    if (pos != pair_positive) {
      axis = i;
    } else if (a < 0) {
      a = i;
    } else {
      b = i;
    }
  }
  const Eigen::Vector3d va = V.col(a) / std::sqrt(std::fabs(lam(a)));
  const Eigen::Vector3d vb = V.col(b) / std::sqrt(std::fabs(lam(b)));
  const Eigen::Vector3d vc = V.col(axis) / std::sqrt(std::fabs(lam(axis)));
  auto integrand = [&](double th) {
    const double c = std::cos(th), s = std::sin(th);
    const Eigen::Vector3d x = va * c + vb * s + vc;
    const Eigen::Vector3d dx = -va * s + vb * c;
    const Eigen::Vector3d grad = 2.0 * (G * x);
    const double vol = std::fabs(x.dot(dx.cross(grad)));
    double h = 0;
    for (int j = 0; j < 3; ++j) h = std::max(h, weights[j] * std::fabs(x(j)));
    return vol / (grad.squaredNorm() * h);
  };
  const double two_pi = 2.0 * 3.14159265358979323846;
  const QuadratureResult q = integrate(integrand, 0.0, two_pi, tol);
  RealDensity out;
  out.value = q.value;
  out.achieved_tol = q.value != 0.0 ? q.error / std::fabs(q.value) : q.error;
  out.evaluations = q.evaluations;
  return out;
}

std::array<double, 3> fibre_weights(const HeightModel& model, const ProjPoint& y) {
  const double lh = std::log(height(y).get_d());
  std::array<double, 3> w{};
  for (int j = 0; j < 3; ++j) w[j] = std::exp(model.exponent(j).get_d() * lh);
  return w;
}

RealDensity sigma_inf(const ConicBundleSurface& surface, const HeightModel& model, const ProjPoint& y,
                      double tol) {
  const FibreClass fc = fibre_class(surface, y);
  if (fc.singular()) throw InputError("precondition error: fibre above " + y.key() + " is singular");
  return real_density(fc.form, fibre_weights(model, y), tol);
}

FibreReport fibre_report(const ConicBundleSurface& surface, const HeightModel& model, const ProjPoint& y,
                         double tol) {
  const FibreClass fc = fibre_class(surface, y);
  if (fc.singular()) throw InputError("precondition error: fibre above " + y.key() + " is singular");
  const TernaryForm form(fc.form);
  FibreReport rep{y, {}, {}, {}, false, {}, 0.0, 0.0, {}, 0.0, 0.0};

  rep.form = fc.form;
  rep.disc = fc.disc;
  rep.minors_gcd = fc.minors_gcd;
  rep.obstructions = obstructing_places(form);
  rep.soluble = rep.obstructions.empty();
  const RealDensity rd = real_density(fc.form, fibre_weights(model, y), tol);
  rep.sigma_inf = rd.value;
  rep.sigma_inf_tol = rd.achieved_tol;
  rep.sigma_p[Int(2)] = sigma_p(form, Int(2));
  for (const auto& pp : factor(fc.disc)) {
    if (pp.prime != 2) rep.sigma_p[pp.prime] = sigma_p(form, pp.prime);
  }
  const double pi = 3.14159265358979323846;
  double tau = rd.value * 6.0 / (pi * pi);
  for (const auto& [p, s] : rep.sigma_p) {
    const Rat euler = Rat(1) - Rat(Int(1), Int(p * p));
    tau *= to_double(s / euler);
  }
  rep.tamagawa = tau;
  rep.peyre = rep.soluble ? kConicAlpha * tau : 0.0;
  return rep;
}

double tamagawa(const ConicBundleSurface& surface, const HeightModel& model, const ProjPoint& y, double tol) {
  return fibre_report(surface, model, y, tol).tamagawa;
}

double peyre_constant(const ConicBundleSurface& surface, const HeightModel& model, const ProjPoint& y,
                      double tol) {
  return fibre_report(surface, model, y, tol).peyre;
}

}  // namespace cbcount
