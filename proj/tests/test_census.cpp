#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cbcount/census.hpp"
#include "cbcount/errors.hpp"
#include "support.hpp"

using namespace cbcount;

namespace {

bool is_square(long v, long& r) {
  if (v < 0) return false;
  r = static_cast<long>(std::llround(std::sqrt(static_cast<double>(v))));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r * r == v;
}

// N(U, H, B) on x0^2 + x1^2 = y0 y1 x2^2 with alpha = 1: the fibre box is
// |x0|, |x1| <= B / H(y)^2 and 0 < x2 <= B / H(y)^3. Straight from the definition.
std::uint64_t brute_total(long B) {
  std::uint64_t total = 0;
  for (long h = 1; h * h * h <= B; ++h) {
    for (long a = -h; a <= h; ++a) {
      for (long b = -h; b <= h; ++b) {
        if (std::max(std::labs(a), std::labs(b)) != h || std::gcd(a, b) != 1) continue;
        if (a < 0 || (a == 0 && b < 0)) continue;  // canonical: first nonzero entry positive
        const long t = a * b;
        if (t <= 0) continue;  // singular, or no real points
        const long m01 = B / (h * h), m2 = B / (h * h * h);
        for (long x0 = -m01; x0 <= m01; ++x0) {
          for (long x1 = -m01; x1 <= m01; ++x1) {
            const long v = x0 * x0 + x1 * x1;
            if (v % t != 0) continue;
            long x2;
            if (!is_square(v / t, x2) || x2 == 0 || x2 > m2) continue;
            if (std::gcd(std::gcd(x0, x1), x2) == 1) ++total;
          }
        }
      }
    }
  }
  return total;
}

std::vector<Rat> grid_of(std::initializer_list<long> values) {
  std::vector<Rat> g;
  for (long v : values) g.emplace_back(v);
  return g;
}

}  // namespace

TEST_CASE("pairwise summation") {
  std::vector<double> v;
  for (int i = 1; i <= 1000; ++i) v.push_back(static_cast<double>(i));
  CHECK(pairwise_sum(v) == 500500.0);
  CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
  std::vector<double> w;
  for (int i = 0; i < 777; ++i) w.push_back(1.0 / (1.0 + i));
  const double first = pairwise_sum(w);
  CHECK(pairwise_sum(w) == first);
  CHECK(first == doctest::Approx(std::accumulate(w.begin(), w.end(), 0.0)).epsilon(1e-14));
}

TEST_CASE("B = 1 on x0^2 + x1^2 = y0 y1 x2^2") {
  const auto s = sum_of_two_squares_surface();
  const HeightModel m = HeightModel::for_surface(s, Rat(1));
  const CountTable t = count_total(s, m, grid_of({1}));
  // only y = (1, 1) contributes: (1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)
  CHECK(t.totals[0] == 4);
  CHECK(t.singular_skipped == 2);
  CensusOptions opt;
  opt.exclude.push_back(ProjPoint::from_integers({1, 1}));
  const CountTable u = count_total(s, m, grid_of({1}), opt);
  CHECK(u.totals[0] == 0);
  CHECK(u.excluded == 1);
}

TEST_CASE("global count against the definition") {
  const auto s = sum_of_two_squares_surface();
  const HeightModel m = HeightModel::for_surface(s, Rat(1));
  const auto grid = grid_of({10, 64, 200, 1000});
  const CountTable t = count_total(s, m, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(t.totals[i] == brute_total(grid[i].get_num().get_si()));
  }
}

TEST_CASE("breakdown, monotonicity and strategy independence") {
  const auto s = sum_of_two_squares_surface();
  const HeightModel m = HeightModel::for_surface(s, Rat(1));
  const auto grid = grid_of({100, 300, 1000, 3000, 10000});
  CensusOptions automatic;
  const CountTable a = count_total(s, m, grid, automatic);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Int sum = 0;
    for (const auto& row : a.fibres) sum += row.counts[i];
    CHECK(sum == a.totals[i]);
    if (i > 0) CHECK(a.totals[i] >= a.totals[i - 1]);
  }
  CensusOptions param;
  param.strategy = Strategy::parametrized;
  CHECK(count_total(s, m, grid, param).totals == a.totals);
  CensusOptions box;
  box.strategy = Strategy::box;
  const auto small = grid_of({100, 300, 1000});
  CHECK(count_total(s, m, small, box).totals == count_total(s, m, small, param).totals);
  CensusOptions threaded;
  threaded.threads = 3;
  CHECK(count_total(s, m, grid, threaded).totals == a.totals);
  CHECK_THROWS_AS(count_total(s, m, grid_of({10, 10})), InputError);
}

TEST_CASE("strategies agree on the other sample surfaces") {
  for (const auto& [s, alpha] : {std::pair{cbtest::cubic_surface(), Rat(2)}, std::pair{cbtest::mixed_surface(), Rat(3)}}) {
    const HeightModel m = HeightModel::for_surface(s, alpha);
    const auto grid = grid_of({50, 400, 3000});
    CensusOptions box, param;
    box.strategy = Strategy::box;
    param.strategy = Strategy::parametrized;
    const CountTable a = count_total(s, m, grid, box);
    CHECK(a.totals == count_total(s, m, grid, param).totals);
    CHECK(a.totals.back() > 0);
  }
}

TEST_CASE("partial sums of leading constants") {
  const auto s = sum_of_two_squares_surface();
  const HeightModel m = HeightModel::for_surface(s, Rat(1));
  const PeyreSum ps = peyre_sum(s, m, 30);
  REQUIRE(ps.shells.size() == 30);
  double running = 0;
  for (std::uint64_t t = 1; t <= 30; ++t) {
    CHECK(ps.shells[t - 1].height == t);
    CHECK(ps.shells[t - 1].increment >= 0.0);
    CHECK(ps.partial(t) >= running);
    running = ps.partial(t);
  }
  CHECK(ps.partial(30) == ps.total);
  CHECK(ps.increment(10, 30) == doctest::Approx(ps.partial(30) - ps.partial(10)).epsilon(1e-12));
  // the shell at height 1: only y = (1, 1) is soluble, with c = tau / 2 = 4 / pi
  CHECK(ps.partial(1) == doctest::Approx(4.0 / M_PI).epsilon(1e-9));
  for (const auto& row : ps.rows) {
    if (!row.soluble) CHECK(row.value == 0.0);
    if (height(row.y) <= 4) {
      CHECK(row.value == doctest::Approx(peyre_constant(s, m, row.y)).epsilon(1e-9));
    }
  }
  // later shells contribute less on average
  CHECK(ps.increment(20, 30) < ps.increment(0, 10));
}

TEST_CASE("geometric grid") {
  CHECK(geometric_grid(Rat(10), Rat(100)) == grid_of({10, 20, 40, 80, 100}));
  CHECK(geometric_grid(Rat(1), Rat(27), 3) == grid_of({1, 3, 9, 27}));
  CHECK_THROWS_AS(geometric_grid(Rat(10), Rat(5)), InputError);
}

TEST_CASE("asymptotic probe fits the top half") {
  const auto s = sum_of_two_squares_surface();
  const HeightModel m = HeightModel::for_surface(s, Rat(1));
  const AsymptoticProbe p = asymptotic_probe(s, m, geometric_grid(Rat(1000), Rat(16000)));
  REQUIRE(p.rows.size() == 5);
  for (const auto& r : p.rows) CHECK(r.ratio == doctest::Approx(r.count.get_d() / r.B.get_d()));
  CHECK_FALSE(p.rows[0].fitted);
  CHECK(p.rows.back().fitted);
  CHECK(p.slope > 1.5);
  CHECK(p.slope < 2.2);
}

TEST_CASE("Tamagawa numbers on the slice y = (1, t)") {
  CHECK(bt_closed_form(Int(1)) == doctest::Approx(8.0 / (M_PI * M_PI)).epsilon(1e-14));
  CHECK(bt_closed_form(Int(5)) == doctest::Approx(8.0 / (M_PI * M_PI) * 1.6 / 0.96).epsilon(1e-14));
  for (long t : {1L, 2L, 5L, 10L, 13L, 65L, 130L}) CHECK(bt_admissible(Int(t)));
  for (long t : {3L, 6L, 21L, 4L}) CHECK_FALSE(bt_admissible(Int(t)));

  const BtReport r = bt_probe(Rat(1), 50, 4);
  std::vector<long> violations;
  for (const auto& p : r.lower_violations) violations.push_back(p.get_si());
  CHECK(violations == std::vector<long>{3, 7, 11, 19, 23, 31, 43, 47});
  CHECK(r.max_rel_error < 1e-9);
  CHECK(r.growth_ok);
  REQUIRE(r.growth.size() == 4);
  for (const auto& g : r.growth) CHECK(g.normalized > g.lower_bound);
  for (const auto& row : r.rows) {
    CHECK((row.tau > 0) == row.admissible);
    if (row.admissible) CHECK(row.normalized == doctest::Approx(*row.closed).epsilon(1e-9));
  }
}

TEST_CASE("Northcott probe on the hyperbolic family") {
  const NorthcottReport r = northcott_probe(12, 40);
  REQUIRE(r.rows.size() == 40);
  CHECK(r.alpha == Rat(9));
  CHECK(r.at_most_one == 40);
  CHECK(r.equal_one == 4);
  for (const auto& row : r.rows) {
    CHECK(row.height == Rat(Int(1), row.base_height));
    CHECK(row.height <= 1);
  }
  const NorthcottReport r15 = northcott_probe(15, 12);
  for (const auto& row : r15.rows) CHECK(row.height == Rat(Int(1), row.base_height * row.base_height));
  CHECK_THROWS_AS(northcott_probe(9, 5), InputError);
  CHECK_THROWS_AS(northcott_probe(10, 5), InputError);
  CHECK_THROWS_AS(northcott_probe(12, 5, cbtest::poly("y0^3*y1^3")), InputError);
}
