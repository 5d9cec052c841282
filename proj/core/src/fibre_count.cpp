#include "cbcount/fibre_count.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "cbcount/errors.hpp"
#include "cbcount/lattice.hpp"
#include "int_ops.hpp"

namespace cbcount {

using detail::from_int;
using detail::i128;
using detail::tabs;
using detail::tgcd;
using detail::tsquare;

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::box:
      return "box";
    case Strategy::parametrized:
      return "parametrized";
    case Strategy::both:
      return "both";
    case Strategy::automatic:
      return "auto";
  }
  return "unknown";
}

Strategy parse_strategy(const std::string& text) {
  if (text == "box") return Strategy::box;
  if (text == "parametrized" || text == "param") return Strategy::parametrized;
  if (text == "both") return Strategy::both;
  if (text == "auto" || text == "automatic") return Strategy::automatic;
  throw InputError("unknown strategy '" + text + "' (expected box, parametrized, both or auto)");
}

namespace {

void check_nested(std::span<const Box3> boxes) {
  if (boxes.empty()) throw InputError("at least one box is required");
  for (std::size_t i = 1; i < boxes.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      if (boxes[i][k] < boxes[i - 1][k]) throw InputError("boxes must be nested and increasing");
    }
  }
  for (const auto& b : boxes) {
    for (const auto& v : b) {
      if (v < 0) throw InputError("box bounds must be nonnegative");
    }
  }
}

/// Assigns each point to the smallest box containing it.
template <class T>
struct BoxBinner {
  std::vector<std::array<T, 3>> bounds;
  std::vector<std::uint64_t> hits;

  explicit BoxBinner(std::span<const Box3> boxes) : hits(boxes.size(), 0) {
    for (const auto& b : boxes) bounds.push_back({from_int<T>(b[0]), from_int<T>(b[1]), from_int<T>(b[2])});
  }

  void add(const T& a0, const T& a1, const T& a2) {
    const T x0 = tabs(a0), x1 = tabs(a1), x2 = tabs(a2);
    auto it = std::partition_point(bounds.begin(), bounds.end(), [&](const std::array<T, 3>& b) {
      return x0 > b[0] || x1 > b[1] || x2 > b[2];
    });
    if (it != bounds.end()) ++hits[static_cast<std::size_t>(it - bounds.begin())];
  }

  std::vector<std::uint64_t> cumulative() const {
    std::vector<std::uint64_t> out(hits.size(), 0);
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < hits.size(); ++i) {
      acc += hits[i];
      out[i] = acc;
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Box kernel

template <class T, class Sink>
void direct_kernel(const Gram3& g, const Box3& box, bool require_x2_nonzero, Sink&& sink) {
  int w = 0;
  for (int k = 1; k < 3; ++k) {
    if (box[k] > box[w]) w = k;
  }
  const int u = (w == 0) ? 1 : 0;
  const int v = 3 - w - u;
  const T guu = from_int<T>(g[u][u]), guv = from_int<T>(g[u][v]), gvv = from_int<T>(g[v][v]);
  const T guw = from_int<T>(g[u][w]), gvw = from_int<T>(g[v][w]), gww = from_int<T>(g[w][w]);
  const T bu = from_int<T>(box[u]), bv = from_int<T>(box[v]), bw = from_int<T>(box[w]);

  auto emit = [&](const T& a, const T& b, const T& c) {
    std::array<T, 3> x;
    x[u] = a;
    x[v] = b;
    x[w] = c;
    if (require_x2_nonzero && x[2] == 0) return;
    if (tgcd(tgcd(a, b), c) != 1) return;
    sink(x[0], x[1], x[2]);
  };

  // (u, v) = (0, 0): only e_w, a zero iff g_ww = 0
  if (gww == 0 && bw >= 1) emit(T(0), T(0), T(1));

  // (u, v) in the half plane u > 0, or u = 0 and v > 0: each projective point once
  for (T a = 0; a <= bu; ++a) {
    const T vlo = (a == 0) ? T(1) : T(-bv);
    const T two_guv_a = T(2) * guv * a;
    const T guu_aa = guu * a * a;
    const T guw_a = guw * a;
    for (T b = vlo; b <= bv; ++b) {
      const T beta = guw_a + gvw * b;
      const T gamma = guu_aa + two_guv_a * b + gvv * b * b;
      if (gww != 0) {
        const T disc = beta * beta - gww * gamma;
        T r;
        if (!tsquare(disc, r)) continue;
        T num = -beta + r;
        if (num % gww == 0) {
          const T c = num / gww;
          if (tabs(c) <= bw) emit(a, b, c);
        }
        if (r != 0) {
          num = -beta - r;
          if (num % gww == 0) {
            const T c = num / gww;
            if (tabs(c) <= bw) emit(a, b, c);
          }
        }
      } else {
        if (beta == 0) continue;  // gamma != 0 here, or the conic would contain a line
        const T num = -gamma;
        const T den = T(2) * beta;
        if (num % den == 0) {
          const T c = num / den;
          if (tabs(c) <= bw) emit(a, b, c);
        }
      }
    }
  }
}

Int direct_bound(const Gram3& g, const Box3& box) {
  Int gmax = 0, bmax = 0;
  for (const auto& row : g) {
    for (const auto& e : row) gmax = std::max(gmax, Int(abs(e)));
  }
  for (const auto& b : box) bmax = std::max(bmax, b);
  return 16 * gmax * gmax * (bmax + 1) * (bmax + 1);
}

template <class Visitor>
void dispatch_direct(const Gram3& g, const Box3& box, Visitor&& visit) {
  const Int bound = direct_bound(g, box);
  if (detail::fits<long long>(bound)) {
    visit(static_cast<long long*>(nullptr));
  } else if (detail::fits<i128>(bound)) {
    visit(static_cast<i128*>(nullptr));
  } else {
    visit(static_cast<Int*>(nullptr));
  }
}

// ---------------------------------------------------------------------------
// Parametrized kernel

struct Interval {
  Int lo, hi;
};
using IntervalSet = std::vector<Interval>;

Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int cdiv(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const Int lo = std::max(a[i].lo, b[j].lo);
    const Int hi = std::min(a[i].hi, b[j].hi);
    if (lo <= hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

/// set ∩ {j : A j^2 + B j + C <= 0}, exactly.
void restrict_le_zero(IntervalSet& set, const Int& A, const Int& B, const Int& C) {
  if (set.empty()) return;
  const Int L = set.front().lo;
  const Int H = set.back().hi;
  IntervalSet sol;
  if (A == 0) {
    if (B == 0) {
      if (C <= 0) return;
      set.clear();
      return;
    }
    if (B > 0) {
      sol.push_back({L, std::min(H, fdiv(-C, B))});
    } else {
      sol.push_back({std::max(L, cdiv(-C, B)), H});
    }
  } else {
    const Int D = B * B - 4 * A * C;
    if (A > 0) {
      if (D < 0) {
        set.clear();
        return;
      }
      const Int r = isqrt(D);
      sol.push_back({std::max(L, cdiv(-B - r, 2 * A)), std::min(H, fdiv(-B + r, 2 * A))});
    } else {
      if (D <= 0) return;  // A (j - root)^2 - D/(4|A|) <= 0 everywhere
      const Int r = isqrt(D - 1);
      const Int a2 = -2 * A;
      const Int flo = cdiv(B - r, a2);
      const Int fhi = fdiv(B + r, a2);
      if (flo > fhi) return;
      sol.push_back({L, std::min(H, Int(flo - 1))});
      sol.push_back({std::max(L, Int(fhi + 1)), H});
    }
  }
  IntervalSet clean;
  for (auto& iv : sol) {
    if (iv.lo <= iv.hi) clean.push_back(iv);
  }
  set = intersect(set, clean);
}

struct RegionSample {
  long double mu = 0;       // certified lower bound for min_theta max_k |phi_k(u)|/M_k
  long double area = 0;     // area of {max_k |phi_k|/M_k <= 1}
  long double S[2][2]{};    // inverse second moment of that region (shape)
};

template <class R>
R to_real(const Int& v) {
  const Int a = abs(v);
  R r = 0;
  const std::size_t limbs = mpz_size(a.get_mpz_t());
  for (std::size_t i = limbs; i-- > 0;) {
    r = r * R(18446744073709551616.0L) + R(static_cast<unsigned long long>(mpz_getlimbn(a.get_mpz_t(), i)));
  }
  return v < 0 ? -r : r;
}

template <class R>
R real_abs(R x) {
  return x < 0 ? -x : x;
}

/// Directions are covered by the two charts u = (1, tau) and u = (tau, 1),
/// tau in [-1, 1]; on each chart phi_k(u) is a quadratic polynomial in tau, so
/// its range over an interval is known exactly up to rounding. An interval is
/// accepted once that certified lower bound is at least half the midpoint
/// value; thin regions refine only near the minimum of the gauge. Returns
/// nullopt if the working precision cannot separate the gauge from zero.
template <class R>
std::optional<RegionSample> sample_region_in(const ConicParam& par, const Box3& box, R eps) {
  R q[2][3][3];  // chart, map, coefficient of tau^0, tau^1, tau^2
  R m[3], err[3];
  for (int k = 0; k < 3; ++k) {
    const R c0 = to_real<R>(par.maps[k].c[0]), c1 = to_real<R>(par.maps[k].c[1]), c2 = to_real<R>(par.maps[k].c[2]);
    q[0][k][0] = c0, q[0][k][1] = c1, q[0][k][2] = c2;  // phi(1, tau)
    q[1][k][0] = c2, q[1][k][1] = c1, q[1][k][2] = c0;  // phi(tau, 1)
    m[k] = to_real<R>(box[k]);
    err[k] = 16 * eps * (real_abs(c0) + real_abs(c1) + real_abs(c2));
  }
  // certified min over [a, b] of |q(tau)|
  auto min_abs = [&](const R* c, R a, R b, const R& e) {
    auto at = [&](R x) { return c[0] + c[1] * x + c[2] * x * x; };
    R lo = std::min(at(a), at(b)), hi = std::max(at(a), at(b));
    if (c[2] != 0) {
      const R v = -c[1] / (2 * c[2]);
      if (a < v && v < b) {
        const R y = at(v);
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    }
    lo -= e;
    hi += e;
    if (lo <= 0 && hi >= 0) return R(0);
    return lo > 0 ? lo : -hi;
  };
  struct Piece {
    R lo, width;
  };
  RegionSample rs;
  R mu = -1;
  R i00 = 0, i01 = 0, i11 = 0, area = 0;
  const int initial = 128;
  for (int chart = 0; chart < 2; ++chart) {
    std::vector<Piece> stack;
    for (int i = initial - 1; i >= 0; --i) stack.push_back({R(-1) + R(2) * i / initial, R(2) / initial});
    while (!stack.empty()) {
      const Piece pc = stack.back();
      stack.pop_back();
      const R a = pc.lo, b = pc.lo + pc.width, mid = pc.lo + pc.width / 2;
      const R n2max = 1 + std::max(a * a, b * b);
      const R n2mid = 1 + mid * mid;
      R lb = 0, fmid = 0;
      for (int k = 0; k < 3; ++k) {
        const R* c = q[chart][k];
        lb = std::max(lb, min_abs(c, a, b, err[k]) / m[k]);
        fmid = std::max(fmid, real_abs(c[0] + c[1] * mid + c[2] * mid * mid) / m[k]);
      }
      lb /= n2max;
      fmid /= n2mid;
      if (!(lb >= fmid / 2) || !(lb > 0)) {
        // rounding noise comparable to the gauge itself: this precision cannot certify
        R noise = 0;
        for (int k = 0; k < 3; ++k) noise = std::max(noise, err[k] / m[k]);
        if (fmid * n2mid <= 8 * noise || pc.width < R(1e-30L)) return std::nullopt;
        stack.push_back({mid, pc.width / 2});
        stack.push_back({a, pc.width / 2});
        continue;
      }
      mu = mu < 0 ? lb : std::min(mu, lb);
      // d theta = d tau / (1 + tau^2); unit direction (1, tau) / |.| or (tau, 1) / |.|
      const R dth = pc.width / n2mid;
      const R w = dth / (fmid * fmid) / n2mid;
      const R us = chart == 0 ? R(1) : mid, ut = chart == 0 ? mid : R(1);
      i00 += w * us * us;
      i01 += w * us * ut;
      i11 += w * ut * ut;
      area += dth / fmid;
    }
  }
  if (!(mu > 0)) return std::nullopt;
  rs.mu = static_cast<long double>(mu);
  rs.area = static_cast<long double>(area);
  const R det = i00 * i11 - i01 * i01;
  if (det > 0 && static_cast<long double>(det) < std::numeric_limits<long double>::infinity()) {
    rs.S[0][0] = static_cast<long double>(i11 / det);
    rs.S[1][1] = static_cast<long double>(i00 / det);
    rs.S[0][1] = rs.S[1][0] = static_cast<long double>(-i01 / det);
  } else {
    rs.S[0][0] = rs.S[1][1] = 1;
  }
  return rs;
}

RegionSample sample_region(const ConicParam& par, const Box3& box) {
  if (auto rs = sample_region_in<long double>(par, box, std::numeric_limits<long double>::epsilon())) return *rs;
  // 2^-112, the unit roundoff of binary128
  const __float128 eps128 = static_cast<__float128>(1.92592994438723585305597794258492732e-34L) * 1;
  if (auto rs = sample_region_in<__float128>(par, box, eps128)) return *rs;
  throw InternalError("could not certify the parametrized region bound");
}

using Vec2 = std::array<Int, 2>;

long double shape_norm(const long double S[2][2], const Vec2& v) {
  const long double a = static_cast<long double>(v[0].get_d());
  const long double b = static_cast<long double>(v[1].get_d());
  return S[0][0] * a * a + 2 * S[0][1] * a * b + S[1][1] * b * b;
}

long double shape_dot(const long double S[2][2], const Vec2& v, const Vec2& w) {
  const long double a = static_cast<long double>(v[0].get_d()), b = static_cast<long double>(v[1].get_d());
  const long double c = static_cast<long double>(w[0].get_d()), d = static_cast<long double>(w[1].get_d());
  return S[0][0] * a * c + S[0][1] * (a * d + b * c) + S[1][1] * b * d;
}

void gauss_reduce(Vec2& e1, Vec2& e2, const long double S[2][2]) {
  for (int iter = 0; iter < 10000; ++iter) {
    if (shape_norm(S, e1) > shape_norm(S, e2)) std::swap(e1, e2);
    const long double n1 = shape_norm(S, e1);
    if (!(n1 > 0)) return;
    const long double r = std::round(shape_dot(S, e1, e2) / n1);
    if (r == 0 || !std::isfinite(r)) return;
    Int mu;
    mpz_set_d(mu.get_mpz_t(), static_cast<double>(r));
    e2[0] -= mu * e1[0];
    e2[1] -= mu * e1[1];
  }
}

Int euclid_norm_ceil(const Vec2& v) { return isqrt(v[0] * v[0] + v[1] * v[1]) + 1; }

struct DivisorPlan {
  Int d;
  Vec2 e1, e2;                    // lattice basis, (s,t) = i e1 + j e2
  std::array<Int, 3> A, Bc, C, M; // psi_k(i,j) = A j^2 + Bc i j + C i^2, |psi_k| <= M_k
  Int imax, jmax;
};

DivisorPlan plan_divisor(const ConicParam& par, const Box3& box, const RegionSample& rs, const Int& d,
                         unsigned slack) {
  DivisorPlan pl;
  pl.d = d;
  const Int dprime = d / gcd(d, par.l_content);
  Int u, v;
  extended_gcd(par.l_prim[0], par.l_prim[1], u, v);
  pl.e1 = {dprime * u, dprime * v};
  pl.e2 = {-par.l_prim[1], par.l_prim[0]};
  gauss_reduce(pl.e1, pl.e2, rs.S);
  for (int k = 0; k < 3; ++k) {
    const auto& f = par.maps[k];
    pl.A[k] = f(pl.e2[0], pl.e2[1]);
    pl.C[k] = f(pl.e1[0], pl.e1[1]);
    pl.Bc[k] = f(pl.e1[0] + pl.e2[0], pl.e1[1] + pl.e2[1]) - pl.A[k] - pl.C[k];
    pl.M[k] = d * box[k];
  }
  // (s,t) lies in the disc of radius R = sqrt(d / mu); (i, j) = E^{-1} (s, t)
  const long double R = std::sqrt(static_cast<long double>(d.get_d()) / rs.mu) * (1.0L + 1e-9L) + 1.0L;
  const Int det = abs(pl.e1[0] * pl.e2[1] - pl.e2[0] * pl.e1[1]);
  auto bound = [&](const Vec2& other) {
    const long double len = static_cast<long double>(euclid_norm_ceil(other).get_d());
    const long double b = R * len / static_cast<long double>(det.get_d());
    Int out;
    mpz_set_d(out.get_mpz_t(), static_cast<double>(std::ceil(b)));
    return Int((out + 1) << slack);
  };
  pl.imax = bound(pl.e2);
  pl.jmax = bound(pl.e1);
  return pl;
}

Int param_bound(const ConicParam& par, const DivisorPlan& pl) {
  Int cmax = 0;
  for (const auto& f : par.maps) {
    for (const auto& c : f.c) cmax = std::max(cmax, Int(abs(c)));
  }
  Int emax = 0;
  for (const auto& v : {pl.e1[0], pl.e1[1], pl.e2[0], pl.e2[1]}) emax = std::max(emax, Int(abs(v)));
  const Int smax = (pl.imax + pl.jmax + 2) * emax;
  return std::max(Int(4 * cmax * smax * smax), Int(4 * smax * (pl.d + 1)));
}

/// Visits every (i, j) of the half plane in the exact region; returns false if
/// a region point touched the i/j clamps (bounds must then be enlarged).
template <class T, class Sink>
bool param_kernel(const ConicParam& par, const DivisorPlan& pl, bool require_x2_nonzero, Sink&& sink) {
  const T e1s = from_int<T>(pl.e1[0]), e1t = from_int<T>(pl.e1[1]);
  const T e2s = from_int<T>(pl.e2[0]), e2t = from_int<T>(pl.e2[1]);
  T c[3][3];
  for (int k = 0; k < 3; ++k) {
    for (int m = 0; m < 3; ++m) c[k][m] = from_int<T>(par.maps[k].c[m]);
  }
  const T d = from_int<T>(pl.d);
  bool clean = true;
  for (Int i = 0; i <= pl.imax; ++i) {
    IntervalSet set{{i == 0 ? Int(1) : Int(-pl.jmax), pl.jmax}};
    const Int ii = i * i;
    for (int k = 0; k < 3 && !set.empty(); ++k) {
      const Int bi = pl.Bc[k] * i;
      const Int ci = pl.C[k] * ii;
      restrict_le_zero(set, pl.A[k], bi, ci - pl.M[k]);
      restrict_le_zero(set, -pl.A[k], -bi, -ci - pl.M[k]);
    }
    if (set.empty()) continue;
    if (i == pl.imax) clean = false;
    if (set.front().lo == -pl.jmax || set.back().hi == pl.jmax) clean = false;
    const T ti = from_int<T>(i);
    const T si0 = ti * e1s, ti0 = ti * e1t;
    for (const auto& iv : set) {
      const T jhi = from_int<T>(iv.hi);
      for (T j = from_int<T>(iv.lo); j <= jhi; ++j) {
        const T s = si0 + j * e2s;
        const T t = ti0 + j * e2t;
        if (tgcd(s, t) != 1) continue;
        const T ss = s * s, st = s * t, tt = t * t;
        const T p0 = c[0][0] * ss + c[0][1] * st + c[0][2] * tt;
        const T p1 = c[1][0] * ss + c[1][1] * st + c[1][2] * tt;
        const T p2 = c[2][0] * ss + c[2][1] * st + c[2][2] * tt;
        if (require_x2_nonzero && p2 == 0) continue;
        if (tgcd(tgcd(p0, p1), p2) != d) continue;
        sink(T(p0 / d), T(p1 / d), T(p2 / d));
      }
    }
  }
  return clean;
}

template <class Visitor>
void dispatch_param(const ConicParam& par, const DivisorPlan& pl, Visitor&& visit) {
  const Int bound = param_bound(par, pl);
  if (detail::fits<long long>(bound)) {
    visit(static_cast<long long*>(nullptr));
  } else if (detail::fits<i128>(bound)) {
    visit(static_cast<i128*>(nullptr));
  } else {
    visit(static_cast<Int*>(nullptr));
  }
}

bool has_zero_bound(const Box3& b) { return b[0] == 0 || b[1] == 0 || b[2] == 0; }

/// Runs the parametrized enumeration for the largest box, feeding points to
/// make_sink<T>() sinks; restarts with wider clamps if the audit trips.
template <class Consumer>
void run_parametrized(const ConicParam& par, const Box3& big, bool require_x2_nonzero, Consumer&& consumer) {
  const RegionSample rs = sample_region(par, big);
  const auto divs = divisors(factor(par.content_bound));
  for (unsigned slack = 0;; ++slack) {
    consumer.reset();
    bool clean = true;
    for (const auto& d : divs) {
      const DivisorPlan pl = plan_divisor(par, big, rs, d, slack);
      dispatch_param(par, pl, [&](auto* tag) {
        using T = std::remove_pointer_t<decltype(tag)>;
        auto sink = [&](const T& x0, const T& x1, const T& x2) { consumer.template add<T>(x0, x1, x2); };
        if (!param_kernel<T>(par, pl, require_x2_nonzero, sink)) clean = false;
      });
    }
    if (clean) return;
    if (slack >= 8) throw InternalError("parametrized enumeration bound audit failed repeatedly");
  }
}

struct BinningConsumer {
  std::span<const Box3> boxes;
  std::vector<std::uint64_t> hits;

  void reset() { hits.assign(boxes.size(), 0); }

  template <class T>
  void add(const T& x0, const T& x1, const T& x2) {
    const Int a0 = abs(detail::to_int(x0)), a1 = abs(detail::to_int(x1)), a2 = abs(detail::to_int(x2));
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (a0 <= boxes[i][0] && a1 <= boxes[i][1] && a2 <= boxes[i][2]) {
        ++hits[i];
        return;
      }
    }
  }
};

/// Faster binning for machine integers: compares in the native type.
struct FastBinningConsumer {
  std::span<const Box3> boxes;
  std::vector<std::array<long long, 3>> small;
  bool small_ok = true;
  std::vector<std::uint64_t> hits;

  explicit FastBinningConsumer(std::span<const Box3> b) : boxes(b) {
    for (const auto& box : b) {
      std::array<long long, 3> s{};
      for (int k = 0; k < 3; ++k) {
        if (!box[k].fits_slong_p()) small_ok = false;
        s[k] = box[k].fits_slong_p() ? box[k].get_si() : 0;
      }
      small.push_back(s);
    }
  }

  void reset() { hits.assign(boxes.size(), 0); }

  template <class T>
  void add(const T& x0, const T& x1, const T& x2) {
    if constexpr (std::is_same_v<T, long long>) {
      if (small_ok) {
        const long long a0 = x0 < 0 ? -x0 : x0, a1 = x1 < 0 ? -x1 : x1, a2 = x2 < 0 ? -x2 : x2;
        for (std::size_t i = 0; i < small.size(); ++i) {
          if (a0 <= small[i][0] && a1 <= small[i][1] && a2 <= small[i][2]) {
            ++hits[i];
            return;
          }
        }
        return;
      }
    }
    const Int a0 = abs(detail::to_int(x0)), a1 = abs(detail::to_int(x1)), a2 = abs(detail::to_int(x2));
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (a0 <= boxes[i][0] && a1 <= boxes[i][1] && a2 <= boxes[i][2]) {
        ++hits[i];
        return;
      }
    }
  }

  std::vector<std::uint64_t> cumulative() const {
    std::vector<std::uint64_t> out(hits.size(), 0);
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < hits.size(); ++i) {
      acc += hits[i];
      out[i] = acc;
    }
    return out;
  }
};

struct ListConsumer {
  std::vector<Vec3> points;
  void reset() { points.clear(); }
  template <class T>
  void add(const T& x0, const T& x1, const T& x2) {
    points.push_back(canonical_vector({detail::to_int(x0), detail::to_int(x1), detail::to_int(x2)}));
  }
};

}  // namespace

std::vector<std::uint64_t> count_direct(const TernaryForm& form, std::span<const Box3> boxes,
                                        bool require_x2_nonzero) {
  check_nested(boxes);
  std::vector<std::uint64_t> out;
  dispatch_direct(form.gram(), boxes.back(), [&](auto* tag) {
    using T = std::remove_pointer_t<decltype(tag)>;
    BoxBinner<T> binner(boxes);
    direct_kernel<T>(form.gram(), boxes.back(), require_x2_nonzero,
                     [&](const T& a, const T& b, const T& c) { binner.add(a, b, c); });
    out = binner.cumulative();
  });
  return out;
}

std::vector<Vec3> list_direct(const TernaryForm& form, const Box3& box, bool require_x2_nonzero) {
  std::vector<Vec3> pts;
  dispatch_direct(form.gram(), box, [&](auto* tag) {
    using T = std::remove_pointer_t<decltype(tag)>;
    direct_kernel<T>(form.gram(), box, require_x2_nonzero, [&](const T& a, const T& b, const T& c) {
      pts.push_back(canonical_vector({detail::to_int(a), detail::to_int(b), detail::to_int(c)}));
    });
  });
  std::sort(pts.begin(), pts.end());
  return pts;
}

std::vector<std::uint64_t> count_parametrized(const TernaryForm& form, const ConicParam& param,
                                              std::span<const Box3> boxes, bool require_x2_nonzero) {
  check_nested(boxes);
  if (form(param.base_point) != 0) throw InputError("parametrization does not belong to this form");
  if (has_zero_bound(boxes.back())) return count_direct(form, boxes, require_x2_nonzero);
  FastBinningConsumer consumer(boxes);
  run_parametrized(param, boxes.back(), require_x2_nonzero, consumer);
  return consumer.cumulative();
}

std::vector<Vec3> list_parametrized(const TernaryForm& form, const ConicParam& param, const Box3& box,
                                    bool require_x2_nonzero) {
  if (form(param.base_point) != 0) throw InputError("parametrization does not belong to this form");
  if (has_zero_bound(box)) return list_direct(form, box, require_x2_nonzero);
  ListConsumer consumer;
  run_parametrized(param, box, require_x2_nonzero, consumer);
  std::sort(consumer.points.begin(), consumer.points.end());
  return consumer.points;
}

double estimate_direct_cost(const Box3& box) {
  std::array<double, 3> r{box[0].get_d(), box[1].get_d(), box[2].get_d()};
  std::sort(r.begin(), r.end());
  return (r[0] + 1.0) * (2.0 * r[1] + 1.0);
}

double estimate_parametrized_cost(const ConicParam& param, const Box3& box) {
  if (has_zero_bound(box)) return 0.0;
  const RegionSample rs = sample_region(param, box);
  const double area = static_cast<double>(rs.area);
  double cost = 3000.0;
  for (const auto& d : divisors(factor(param.content_bound))) {
    const double g = Int(gcd(d, param.l_content)).get_d();
    cost += 3.0 * g * area * 0.5 + 60.0 * std::sqrt(g * area + 1.0) + 100.0;
  }
  return cost;
}

FibreCount count_in_boxes(const TernaryForm& form, std::span<const Box3> boxes, Strategy strategy,
                          bool require_x2_nonzero) {
  check_nested(boxes);
  FibreCount out;
  const Box3& big = boxes.back();
  auto zeros = [&] { return std::vector<std::uint64_t>(boxes.size(), 0); };
  auto param_counts = [&]() -> std::vector<std::uint64_t> {
    const auto pt = find_point(form);
    if (!pt) return zeros();
    return count_parametrized(form, parametrize(form, *pt), boxes, require_x2_nonzero);
  };
  switch (strategy) {
    case Strategy::box:
      out.counts = count_direct(form, boxes, require_x2_nonzero);
      out.used = Strategy::box;
      return out;
    case Strategy::parametrized:
      out.counts = param_counts();
      out.used = Strategy::parametrized;
      return out;
    case Strategy::both: {
      const auto a = count_direct(form, boxes, require_x2_nonzero);
      const auto b = param_counts();
      if (a != b) {
        throw InternalError("box and parametrized counts disagree on form " + form.to_string() + ": " +
                            std::to_string(a.back()) + " vs " + std::to_string(b.back()));
      }
      out.counts = a;
      out.used = Strategy::both;
      return out;
    }
    case Strategy::automatic:
      break;
  }
  if (require_x2_nonzero && big[2] == 0) {
    out.counts = zeros();
    out.used = Strategy::box;
    return out;
  }
  const double direct_cost = estimate_direct_cost(big);
  if (direct_cost <= 20000.0) {
    out.counts = count_direct(form, boxes, require_x2_nonzero);
    out.used = Strategy::box;
    return out;
  }
  const auto pt = find_point(form);
  out.used = Strategy::parametrized;
  if (!pt) {
    out.counts = zeros();
    return out;
  }
  const ConicParam par = parametrize(form, *pt);
  if (estimate_parametrized_cost(par, big) < direct_cost) {
    out.counts = count_parametrized(form, par, boxes, require_x2_nonzero);
  } else {
    out.counts = count_direct(form, boxes, require_x2_nonzero);
    out.used = Strategy::box;
  }
  return out;
}

FibreCount count_fibre_grid(const ConicBundleSurface& surface, const HeightModel& model, const ProjPoint& y,
                            std::span<const Rat> grid, Strategy strategy) {
  if (grid.empty()) throw InputError("empty B grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i - 1] < grid[i])) throw InputError("B grid must be strictly increasing");
  }
  const FibreClass fc = fibre_class(surface, y);
  if (fc.singular()) throw InputError("precondition error: fibre above " + y.key() + " is singular");
  const Int h = height(y);
  std::vector<Box3> boxes;
  for (const auto& B : grid) boxes.push_back(fibre_box(model, h, B));
  if (boxes.back()[2] == 0) {
    FibreCount out;
    out.counts.assign(grid.size(), 0);
    out.used = Strategy::box;
    return out;
  }
  return count_in_boxes(TernaryForm(fc.form), boxes, strategy, true);
}

std::uint64_t count_fibre(const ConicBundleSurface& surface, const HeightModel& model, const ProjPoint& y,
                          const Rat& B, Strategy strategy) {
  const Rat grid[1] = {B};
  return count_fibre_grid(surface, model, y, grid, strategy).counts.front();
}

}  // namespace cbcount
