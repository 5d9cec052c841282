#pragma once

// Exact counts of rational points of bounded height on a single fibre conic.
//
// Both kernels count canonical primitive zeros x of Q with |x_j| <= b_j
// (optionally x2 != 0) for a family of nested boxes in one pass:
//  * box: loop over the two coordinates with the smallest ranges and solve
//    the quadratic for the third;
//  * parametrized: enumerate (s:t) in P^1 through phi = (phi0, phi1, phi2),
//    split by the content d = gcd(phi(s,t)), which divides a fixed bound K.
//    For each d | K the admissible (s,t) lie in the sublattice where the
//    tangent form l vanishes mod d/gcd(d, c_w), inside the compact region
//    |phi_j| <= d b_j; rows of that region are cut out exactly.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cbcount/bundle.hpp"
#include "cbcount/conics.hpp"
#include "cbcount/heights.hpp"

namespace cbcount {

enum class Strategy { box, parametrized, both, automatic };

std::string to_string(Strategy s);
/// "box", "parametrized", "both", "auto"; throws InputError otherwise.
Strategy parse_strategy(const std::string& text);

/// counts[i] = number of points inside boxes[i]. Boxes must be nested increasing.
std::vector<std::uint64_t> count_direct(const TernaryForm& form, std::span<const Box3> boxes,
                                        bool require_x2_nonzero = true);
std::vector<std::uint64_t> count_parametrized(const TernaryForm& form, const ConicParam& param,
                                              std::span<const Box3> boxes, bool require_x2_nonzero = true);

/// Point lists (canonical x, sorted) for cross-checking; the largest box only.
std::vector<Vec3> list_direct(const TernaryForm& form, const Box3& box, bool require_x2_nonzero = true);
std::vector<Vec3> list_parametrized(const TernaryForm& form, const ConicParam& param, const Box3& box,
                                    bool require_x2_nonzero = true);

struct FibreCount {
  std::vector<std::uint64_t> counts;
  Strategy used = Strategy::box;
};

/// Dispatches on strategy; `both` runs both kernels and throws InternalError
/// on disagreement; `automatic` picks the cheaper kernel by estimated work and
/// returns zeros for insoluble conics without enumeration.
FibreCount count_in_boxes(const TernaryForm& form, std::span<const Box3> boxes, Strategy strategy,
                          bool require_x2_nonzero = true);

/// N(X_y ∩ U, H*, B) for each B of an increasing grid. Throws InputError on a singular fibre.
FibreCount count_fibre_grid(const ConicBundleSurface& surface, const HeightModel& model, const ProjPoint& y,
                            std::span<const Rat> grid, Strategy strategy);

std::uint64_t count_fibre(const ConicBundleSurface& surface, const HeightModel& model, const ProjPoint& y,
                          const Rat& B, Strategy strategy);

/// Work estimates used by the automatic strategy (arbitrary but comparable units).
double estimate_direct_cost(const Box3& box);
double estimate_parametrized_cost(const ConicParam& param, const Box3& box);

}  // namespace cbcount
