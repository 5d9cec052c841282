#include "cbcount/census.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "cbcount/errors.hpp"

namespace cbcount {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// processed exactly once; the first exception is rethrown after joining.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
        return;
      }
    }
  };
  const unsigned count = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

bool is_excluded(const CensusOptions& options, const ProjPoint& y) {
  return std::find(options.exclude.begin(), options.exclude.end(), y) != options.exclude.end();
}

std::uint64_t to_u64(const Int& v) {
  if (v < 0 || !v.fits_ulong_p()) throw InputError("base height bound does not fit in 64 bits");
  return v.get_ui();
}

/// Smooth, non-excluded base points of height <= T in enumeration order.
std::vector<ProjPoint> contributing_base(const ConicBundleSurface& surface, std::uint64_t T,
                                         const CensusOptions& options, std::uint64_t& singular,
                                         std::uint64_t& excluded) {
  std::vector<ProjPoint> out;
  singular = excluded = 0;
  for_each_base_point(surface.n, T, [&](const ProjPoint& y) {
    if (is_excluded(options, y)) {
      ++excluded;
      return;
    }
    if (fibre_class(surface, y).singular()) {
      ++singular;
      return;
    }
    out.push_back(y);
  });
  return out;
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() <= 8) {
    double s = 0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

CountTable count_total(const ConicBundleSurface& surface, const HeightModel& model, std::vector<Rat> grid,
                       const CensusOptions& options) {
  require_valid(surface);
  if (grid.empty()) throw InputError("count_total: empty B grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= 0) throw InputError("count_total: bounds must be positive");
    if (i > 0 && grid[i] <= grid[i - 1]) throw InputError("count_total: B grid must be strictly increasing");
  }
  CountTable table;
  table.grid = grid;
  table.base_bound = base_bound(model, grid.back());
  const std::vector<ProjPoint> base =
      contributing_base(surface, to_u64(table.base_bound), options, table.singular_skipped, table.excluded);

  std::vector<FibreCount> results(base.size());
  parallel_for(base.size(), options.threads, [&](std::size_t i) {
    results[i] = count_fibre_grid(surface, model, base[i], table.grid, options.strategy);
  });

  table.totals.assign(grid.size(), Int(0));
  table.fibres.reserve(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t k = 0; k < grid.size(); ++k) table.totals[k] += static_cast<unsigned long>(results[i].counts[k]);
    table.fibres.push_back({base[i], std::move(results[i].counts), results[i].used});
  }
  return table;
}

double PeyreSum::partial(std::uint64_t t) const {
  std::vector<double> inc;
  for (const auto& s : shells) {
    if (s.height <= t) inc.push_back(s.increment);
  }
  return pairwise_sum(inc);
}

double PeyreSum::increment(std::uint64_t lo, std::uint64_t hi) const {
  std::vector<double> inc;
  for (const auto& s : shells) {
    if (s.height > lo && s.height <= hi) inc.push_back(s.increment);
  }
  return pairwise_sum(inc);
}

PeyreSum peyre_sum(const ConicBundleSurface& surface, const HeightModel& model, std::uint64_t T,
                   const CensusOptions& options) {
  require_valid(surface);
  if (T < 1) throw InputError("peyre_sum: T must be at least 1");
  std::uint64_t singular = 0, excluded = 0;
  const std::vector<ProjPoint> base = contributing_base(surface, T, options, singular, excluded);

  std::vector<PeyreRow> rows(base.size(), PeyreRow{ProjPoint::from_integers({1}), 0, 0, false});
  parallel_for(base.size(), options.threads, [&](std::size_t i) {
    const FibreReport rep = fibre_report(surface, model, base[i], options.tol);
    rows[i] = PeyreRow{base[i], rep.peyre, std::fabs(rep.peyre) * rep.sigma_inf_tol, rep.soluble};
  });

  PeyreSum out;
  out.T = T;
  out.shells.resize(T);
  std::vector<std::vector<double>> values(T), errors(T);
  for (const auto& r : rows) {
    const std::uint64_t h = to_u64(height(r.y));
    values[h - 1].push_back(r.value);
    errors[h - 1].push_back(r.error);
    ++out.shells[h - 1].fibres;
  }
  std::vector<double> incs, errs;
  for (std::uint64_t h = 1; h <= T; ++h) {
    auto& s = out.shells[h - 1];
    s.height = h;
    s.increment = pairwise_sum(values[h - 1]);
    s.error = pairwise_sum(errors[h - 1]);
    incs.push_back(s.increment);
    errs.push_back(s.error);
  }
  out.total = pairwise_sum(incs);
  out.error_bound = pairwise_sum(errs);
  out.rows = std::move(rows);
  return out;
}

std::vector<Rat> geometric_grid(const Rat& B0, const Rat& Bmax, unsigned ratio) {
  if (B0 <= 0 || Bmax < B0 || ratio < 2) throw InputError("geometric_grid: need 0 < B0 <= Bmax and ratio >= 2");
  std::vector<Rat> grid;
  for (Rat b = B0; b <= Bmax; b *= ratio) grid.push_back(b);
  if (grid.back() != Bmax) grid.push_back(Bmax);
  return grid;
}

AsymptoticProbe asymptotic_probe(const ConicBundleSurface& surface, const HeightModel& model,
                                 std::vector<Rat> grid, const CensusOptions& options) {
  AsymptoticProbe probe;
  probe.table = count_total(surface, model, std::move(grid), options);
  const auto& g = probe.table.grid;
  const std::uint64_t tmax = to_u64(base_bound(model, g.back()));
  probe.peyre = peyre_sum(surface, model, std::max<std::uint64_t>(tmax, 1), options);
  probe.peyre_limit = probe.peyre.total;

  for (std::size_t k = 0; k < g.size(); ++k) {
    ProbeRow row;
    row.B = g[k];
    row.count = probe.table.totals[k];
    row.ratio = to_double(Rat(row.count) / g[k]);
    row.T = to_u64(base_bound(model, g[k]));
    row.peyre_partial = probe.peyre.partial(row.T);
    probe.rows.push_back(row);
  }

  // least squares over the top half
  const std::size_t first = g.size() / 2;
  const std::size_t m = g.size() - first;
  double sx = 0, sy = 0;
  for (std::size_t k = first; k < g.size(); ++k) {
    sx += to_double(g[k]);
    sy += probe.rows[k].count.get_d();
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t k = first; k < g.size(); ++k) {
    const double dx = to_double(g[k]) - mx;
    sxx += dx * dx;
    sxy += dx * (probe.rows[k].count.get_d() - my);
  }
  if (m == 1 || sxx == 0.0) {
    // a single point: the line through the origin
    probe.slope = my / mx;
    probe.intercept = 0;
  } else {
    probe.slope = sxy / sxx;
    probe.intercept = my - probe.slope * mx;
  }
  for (std::size_t k = first; k < g.size(); ++k) {
    auto& r = probe.rows[k];
    r.fitted = true;
    r.residual = r.count.get_d() - (probe.slope * to_double(g[k]) + probe.intercept);
  }
  return probe;
}

bool bt_admissible(const Int& t) {
  if (t < 1 || !is_squarefree(t)) return false;
  for (const auto& pp : factor(t)) {
    if (pp.prime != 2 && pp.prime % 4 != 1) return false;
  }
  return true;
}

double bt_closed_form(const Int& t) {
  if (!bt_admissible(t)) throw InputError("bt_closed_form: t must be squarefree with odd prime factors = 1 mod 4");
  // prod_{p | t} 2 (1 - 1/p) * prod_{p not dividing 2t} (1 - 1/p^2)
  double value = 6.0 / (kPi * kPi) / 0.75;
  for (const auto& pp : factor(t)) {
    const double p = pp.prime.get_d();
    value *= 2.0 * (1.0 - 1.0 / p);
    if (pp.prime != 2) value /= 1.0 - 1.0 / (p * p);
  }
  return value;
}

BtReport bt_probe(const Rat& alpha, std::uint64_t t_max, unsigned k_max, double tol) {
  const ConicBundleSurface surface = sum_of_two_squares_surface();
  const HeightModel model = HeightModel::for_surface(surface, alpha);
  BtReport rep;
  rep.alpha = alpha;
  rep.t_max = t_max;

  const double exponent = 2.0 + to_double(alpha);
  auto normalized = [&](const Int& t, double tau) { return tau * std::pow(t.get_d(), exponent) / kPi; };

  for (std::uint64_t tv = 1; tv <= t_max; ++tv) {
    const Int t(static_cast<unsigned long>(tv));
    if (!is_squarefree(t)) continue;
    BtRow row;
    row.t = t;
    row.tau = tamagawa(surface, model, ProjPoint::from_integers({1L, static_cast<long>(tv)}), tol);
    row.normalized = normalized(t, row.tau);
    row.admissible = bt_admissible(t);
    if (row.admissible) {
      row.closed = bt_closed_form(t);
      row.rel_error = std::fabs(row.normalized - *row.closed) / *row.closed;
      rep.max_rel_error = std::max(rep.max_rel_error, row.rel_error);
    }
    if (row.tau == 0.0) {
      rep.zero_tau.push_back(t);
      if (is_prime(t) && t % 4 == 3) rep.lower_violations.push_back(t);
    }
    rep.rows.push_back(std::move(row));
  }

  // t_k: product of the first k primes = 1 mod 4
  Int tk = 1;
  Int p = 2;
  double prev = -1;
  rep.growth_ok = true;
  for (unsigned k = 1; k <= k_max; ++k) {
    do {
      mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    } while (p % 4 != 1);
    tk *= p;
    if (!tk.fits_slong_p()) throw InputError("bt_probe: t_k overflows the base coordinate range");
    BtGrowthRow g;
    g.k = k;
    g.t = tk;
    const double tau = tamagawa(surface, model, ProjPoint::from_integers({1L, tk.get_si()}), tol);
    g.normalized = normalized(tk, tau);
    g.lower_bound = 6.0 / (kPi * kPi) * std::pow(4.0 / 3.0, static_cast<double>(k));
    g.above_bound = g.normalized >= g.lower_bound;
    g.increasing = g.normalized > prev;
    prev = g.normalized;
    rep.growth_ok = rep.growth_ok && g.above_bound && g.increasing;
    rep.growth.push_back(std::move(g));
  }
  return rep;
}

NorthcottReport northcott_probe(long a, std::uint64_t count, std::optional<MultiPoly> f) {
  if (a <= 9 || a % 3 != 0) throw InputError("northcott_probe: a must be a multiple of 3 with a > 9");
  NorthcottReport rep;
  rep.a = a;
  rep.f = f ? *f : default_hyperbolic_coefficient(a);
  if (rep.f.nvars() != 2 || !rep.f.is_homogeneous() || rep.f.degree() != static_cast<unsigned>(2 * a)) {
    throw InputError("northcott_probe: f must be a binary form of degree 2a");
  }
  const ConicBundleSurface surface = hyperbolic_surface(a, rep.f);
  const ValidationReport vr = validate(surface);
  if (!vr.ok()) throw InputError("northcott_probe: " + vr.first_failure());
  rep.alpha = Rat(2 * a, 3) + 1;
  rep.alpha.canonicalize();
  const HeightModel model = HeightModel::for_surface(surface, rep.alpha);
  const Vec3 section{Int(1), Int(-1), Int(0)};
  const long exponent = 3 - a / 3;

  for (std::uint64_t h = 1; rep.rows.size() < count; ++h) {
    for (const ProjPoint& y : enumerate_shell(surface.n, h)) {
      if (rep.rows.size() >= count) break;
      NorthcottRow row{y, height(y), Rat(0), Rat(0), fibre_class(surface, y).singular()};
      const StandardHeight sh = standard_height(model, y, section);
      const auto exact = sh.exact();
      if (!exact) throw InternalError("northcott_probe: height exponent is not integral");
      row.height = *exact;
      row.expected = exponent >= 0 ? Rat(ipow(row.base_height, exponent)) : Rat(Int(1), ipow(row.base_height, -exponent));
      if (row.height != row.expected) {
        throw InternalError("northcott_probe: section height " + to_string(row.height) + " differs from H(y)^" +
                            std::to_string(exponent) + " at y = " + y.key());
      }
      if (row.height > 1) throw InternalError("northcott_probe: section height exceeds 1 at y = " + y.key());
      ++rep.at_most_one;
      if (row.height == 1) ++rep.equal_one;
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

}  // namespace cbcount
