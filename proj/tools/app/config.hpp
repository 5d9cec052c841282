#pragma once

// Run configuration: a JSON document with the sections
//   surface  { n, a: [a0, a1, a2], e, gram: 3x3 of polynomial entries }
//   model    { alpha: "p/q" }
//   params   { B, T, grid, tol, t_max, a, strategy, y, p, count, k_max, f }
//   exclude  [ [y0, y1, ...], ... ]
//   cubic    { equation, line: [[...], [...]] }     (import-cubic only)
//   output   { json, csv }
// Integers may be JSON numbers or decimal strings; rationals are strings
// ("3/2") or integers. A polynomial entry is either an expression string
// ("y0^3 - 2*y0*y1^2") or a monomial list [[coefficient, [e0, ..., en]], ...].

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbcount/bundle.hpp"
#include "cbcount/fibre_count.hpp"
#include "cbcount/heights.hpp"
#include "cbcount/projgeo.hpp"

namespace cbcount::app {

inline constexpr const char* kEngineVersion = "0.1.0";

struct Params {
  std::vector<Rat> B;  // explicit bounds, or the expansion of `grid`
  std::optional<Rat> grid_from, grid_to;
  unsigned grid_ratio = 2;
  std::uint64_t T = 100;
  double tol = 1e-8;
  std::uint64_t t_max = 50;
  long a = 12;
  Strategy strategy = Strategy::automatic;
  std::optional<ProjPoint> y;
  std::optional<Int> p;
  std::uint64_t count = 40;
  unsigned k_max = 6;
  std::optional<std::string> f;  // northcott coefficient override

  bool operator==(const Params&) const = default;
};

struct CubicSpec {
  std::string equation;  // in z0..z3
  ProjPoint p, q;        // two points spanning the line

  bool operator==(const CubicSpec&) const = default;
};

struct RunConfig {
  std::optional<ConicBundleSurface> surface;
  std::optional<Rat> alpha;
  Params params;
  std::vector<ProjPoint> exclude;
  std::optional<CubicSpec> cubic;
  std::string output_json;
  std::string output_csv;

  bool operator==(const RunConfig&) const;
  HeightModel model() const;  // throws InputError when the surface or alpha is missing
  const ConicBundleSurface& require_surface() const;
};

/// Syntax errors carry line and column; semantic errors name the violated invariant.
/// With validate = true the surface must pass validate() and (surface, alpha) must
/// form a legal height model.
RunConfig parse_config(const std::string& text, bool validate = true);
RunConfig parse_config_file(const std::string& path, bool validate = true);

nlohmann::ordered_json emit_config(const RunConfig& cfg);
std::string emit_config_text(const RunConfig& cfg);

nlohmann::ordered_json emit_surface(const ConicBundleSurface& s);
nlohmann::ordered_json emit_poly(const MultiPoly& p);

/// FNV-1a 64 over the canonical emitted config, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace cbcount::app
