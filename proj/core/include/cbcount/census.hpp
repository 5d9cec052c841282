#pragma once

// Global counts N(U, H, B) over the open set U = {disc(y) != 0, x2 != 0},
// partial sums of the per-fibre leading constants, and the two probes of the
// Tamagawa-number distribution and of the Northcott property.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cbcount/bundle.hpp"
#include "cbcount/fibre_count.hpp"
#include "cbcount/heights.hpp"
#include "cbcount/localdata.hpp"
#include "cbcount/projgeo.hpp"

namespace cbcount {

struct CensusOptions {
  Strategy strategy = Strategy::automatic;
  unsigned threads = 1;
  std::vector<ProjPoint> exclude;  // further fibres removed from U
  double tol = 1e-8;               // relative tolerance for sigma_inf
};

/// Sum of doubles in a fixed pairwise tree order (bit-stable for a given input order).
double pairwise_sum(std::span<const double> values);

struct FibreCountRow {
  ProjPoint y;
  std::vector<std::uint64_t> counts;  // one per B in the grid
  Strategy used = Strategy::box;
};

struct CountTable {
  std::vector<Rat> grid;
  std::vector<Int> totals;           // N(U, H, B) per grid entry
  std::vector<FibreCountRow> fibres;  // every visited smooth fibre, in enumeration order
  Int base_bound;                    // heights of visited base points
  std::uint64_t singular_skipped = 0;
  std::uint64_t excluded = 0;
};

/// Counts all grid bounds in one sweep; the grid must be strictly increasing.
CountTable count_total(const ConicBundleSurface& surface, const HeightModel& model, std::vector<Rat> grid,
                       const CensusOptions& options = {});

struct PeyreRow {
  ProjPoint y;
  double value = 0;
  double error = 0;
  bool soluble = false;
};

struct PeyreShell {
  std::uint64_t height = 0;
  double increment = 0;  // sum of c_y over the shell H(y) = height
  double error = 0;
  std::uint64_t fibres = 0;
};

struct PeyreSum {
  std::uint64_t T = 0;
  double total = 0;
  double error_bound = 0;
  std::vector<PeyreShell> shells;  // heights 1..T
  std::vector<PeyreRow> rows;      // enumeration order

  /// Partial sum over H(y) <= t (t <= T).
  double partial(std::uint64_t t) const;
  /// Sum of increments for heights in (lo, hi].
  double increment(std::uint64_t lo, std::uint64_t hi) const;
};

PeyreSum peyre_sum(const ConicBundleSurface& surface, const HeightModel& model, std::uint64_t T,
                   const CensusOptions& options = {});

struct ProbeRow {
  Rat B;
  Int count;
  double ratio = 0;    // N / B
  std::uint64_t T = 0;  // base_bound(B)
  double peyre_partial = 0;
  double residual = 0;  // N - (slope B + intercept), fitted rows only
  bool fitted = false;
};

struct AsymptoticProbe {
  std::vector<ProbeRow> rows;
  double slope = 0;
  double intercept = 0;
  double peyre_limit = 0;  // peyre partial sum at the largest matched T
  CountTable table;
  PeyreSum peyre;
};

/// Least-squares line N ~ slope * B + intercept over the top half of the grid.
AsymptoticProbe asymptotic_probe(const ConicBundleSurface& surface, const HeightModel& model,
                                 std::vector<Rat> grid, const CensusOptions& options = {});

/// Default grid: B0 * 2^k up to Bmax.
std::vector<Rat> geometric_grid(const Rat& B0, const Rat& Bmax, unsigned ratio = 2);

// --- Tamagawa numbers along the slice y = (1, t) of x0^2 + x1^2 = y0 y1 x2^2

/// Closed formula for tau(X_t) t^{2+alpha} / pi when the fibre is everywhere
/// locally soluble, i.e. every odd prime factor of the squarefree t is 1 mod 4.
double bt_closed_form(const Int& t);
bool bt_admissible(const Int& t);

struct BtRow {
  Int t;
  double tau = 0;
  double normalized = 0;  // tau t^{2+alpha} / pi
  bool admissible = false;
  std::optional<double> closed;
  double rel_error = 0;
};

struct BtGrowthRow {
  unsigned k = 0;
  Int t;
  double normalized = 0;
  double lower_bound = 0;  // (1/zeta(2)) (4/3)^k
  bool above_bound = false;
  bool increasing = false;  // strictly larger than the previous row
};

struct BtReport {
  Rat alpha;
  std::uint64_t t_max = 0;
  std::vector<BtRow> rows;                 // squarefree t <= t_max
  std::vector<Int> lower_violations;       // primes t = 3 mod 4 with tau = 0
  std::vector<Int> zero_tau;               // all t with tau = 0
  std::vector<BtGrowthRow> growth;
  double max_rel_error = 0;                // over admissible t
  bool growth_ok = false;
};

BtReport bt_probe(const Rat& alpha, std::uint64_t t_max, unsigned k_max = 6, double tol = 1e-10);

struct NorthcottRow {
  ProjPoint y;
  Int base_height;
  Rat height;    // H*(y; (1, -1, 0))
  Rat expected;  // H(y)^{3 - a/3}
  bool singular = false;
};

struct NorthcottReport {
  long a = 0;
  Rat alpha;
  MultiPoly f;
  std::vector<NorthcottRow> rows;
  std::uint64_t at_most_one = 0;
  std::uint64_t equal_one = 0;
};

/// Throws InputError unless 3 | a and a > 9, or if f is not a squarefree form of degree 2a.
NorthcottReport northcott_probe(long a, std::uint64_t count, std::optional<MultiPoly> f = std::nullopt);

}  // namespace cbcount
