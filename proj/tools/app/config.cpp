#include "app/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cbcount/errors.hpp"

namespace cbcount::app {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void semantic(const std::string& where, const std::string& what) {
  throw InputError("config error at " + where + ": " + what);
}

Int parse_int(const json& v, const std::string& where) {
  if (v.is_number_integer()) {
    return v.is_number_unsigned() ? Int(std::to_string(v.get<std::uint64_t>())) : Int(std::to_string(v.get<std::int64_t>()));
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    Int out;
    if (s.empty() || out.set_str(s, 10) != 0) semantic(where, "expected an integer, got \"" + s + "\"");
    return out;
  }
  semantic(where, "expected an integer");
}

long parse_long(const json& v, const std::string& where) {
  const Int i = parse_int(v, where);
  if (!i.fits_slong_p()) semantic(where, "integer out of range");
  return i.get_si();
}

std::uint64_t parse_u64(const json& v, const std::string& where) {
  const Int i = parse_int(v, where);
  if (i < 0 || !i.fits_ulong_p()) semantic(where, "expected a nonnegative 64-bit integer");
  return i.get_ui();
}

Rat parse_rat(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rat(parse_int(v, where));
  if (v.is_number_float()) {
    // accept floats only when they are exact integers (1e6 and the like)
    const double d = v.get<double>();
    if (d == static_cast<double>(static_cast<long long>(d))) return Rat(Int(std::to_string(static_cast<long long>(d))));
    semantic(where, "non-integral numbers must be given as exact fraction strings");
  }
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const InputError& e) {
      semantic(where, e.what());
    }
  }
  semantic(where, "expected a rational number");
}

ProjPoint parse_point(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) semantic(where, "expected a coordinate list");
  std::vector<Rat> raw;
  for (std::size_t i = 0; i < v.size(); ++i) raw.push_back(parse_rat(v[i], where + "[" + std::to_string(i) + "]"));
  try {
    return ProjPoint::canonicalize(raw);
  } catch (const InputError& e) {
    semantic(where, e.what());
  }
}

MultiPoly parse_poly_entry(const json& v, unsigned nvars, char prefix, const std::string& where) {
  if (v.is_string()) {
    try {
      return parse_poly(v.get<std::string>(), nvars, prefix);
    } catch (const InputError& e) {
      semantic(where, e.what());
    }
  }
  if (v.is_number_integer()) return MultiPoly::constant(nvars, parse_int(v, where));
  if (!v.is_array()) semantic(where, "expected a polynomial string or a monomial list");
  MultiPoly p(nvars);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string w = where + "[" + std::to_string(k) + "]";
    const json& term = v[k];
    if (!term.is_array() || term.size() != 2 || !term[1].is_array()) semantic(w, "monomial must be [coefficient, [exponents]]");
    if (term[1].size() != nvars) semantic(w, "expected " + std::to_string(nvars) + " exponents");
    Exponents e;
    for (const auto& x : term[1]) {
      const long ex = parse_long(x, w);
      if (ex < 0) semantic(w, "negative exponent");
      e.push_back(static_cast<unsigned>(ex));
    }
    p.add_term(parse_int(term[0], w), e);
  }
  return p;
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) semantic(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) semantic(where, "unknown key \"" + key + "\"");
  }
}

ConicBundleSurface parse_surface(const json& s) {
  check_keys(s, "surface", {"n", "a", "e", "gram"});
  ConicBundleSurface out;
  if (!s.contains("n") || !s.contains("a") || !s.contains("gram")) semantic("surface", "n, a and gram are required");
  const long n = parse_long(s["n"], "surface.n");
  if (n < 1) semantic("surface.n", "base dimension must be at least 1");
  out.n = static_cast<unsigned>(n);
  if (!s["a"].is_array() || s["a"].size() != 3) semantic("surface.a", "expected three twists");
  for (int i = 0; i < 3; ++i) out.a[i] = parse_long(s["a"][i], "surface.a[" + std::to_string(i) + "]");
  out.e = s.contains("e") ? parse_long(s["e"], "surface.e") : 0;
  const json& g = s["gram"];
  if (!g.is_array() || g.size() != 3) semantic("surface.gram", "expected a 3x3 matrix");
  for (int i = 0; i < 3; ++i) {
    if (!g[i].is_array() || g[i].size() != 3) semantic("surface.gram", "expected a 3x3 matrix");
    for (int j = 0; j < 3; ++j) {
      out.gram[i][j] = parse_poly_entry(g[i][j], out.n + 1, 'y',
                                        "surface.gram[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
  }
  return out;
}

bool same_surface(const ConicBundleSurface& a, const ConicBundleSurface& b) {
  return a.n == b.n && a.a == b.a && a.e == b.e && a.gram == b.gram;
}

std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

ordered_json rat_json(const Rat& r) { return cbcount::to_string(r); }

ordered_json point_json(const ProjPoint& y) {
  ordered_json out = ordered_json::array();
  for (const auto& c : y.coords()) {
    if (c.fits_slong_p()) {
      out.push_back(c.get_si());
    } else {
      out.push_back(c.get_str());
    }
  }
  return out;
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
  if (surface.has_value() != o.surface.has_value()) return false;
  if (surface && !same_surface(*surface, *o.surface)) return false;
  return alpha == o.alpha && params == o.params && exclude == o.exclude && cubic == o.cubic &&
         output_json == o.output_json && output_csv == o.output_csv;
}

HeightModel RunConfig::model() const {
  const ConicBundleSurface& s = require_surface();
  if (!alpha) throw InputError("config error at model.alpha: a height model is required");
  return HeightModel::for_surface(s, *alpha);
}

const ConicBundleSurface& RunConfig::require_surface() const {
  if (!surface) throw InputError("config error at surface: this command needs a surface");
  return *surface;
}

RunConfig parse_config(const std::string& text, bool validate) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    // drop the library prefix ("[json.exception.parse_error.101] parse error at line 1, column 2: ")
    if (const auto pos = msg.find(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
    throw InputError("syntax error at " + location(text, e.byte) + ": " + msg);
  }
  check_keys(doc, "top level", {"surface", "model", "params", "exclude", "cubic", "output"});

  RunConfig cfg;
  if (doc.contains("surface")) cfg.surface = parse_surface(doc["surface"]);
  if (doc.contains("model")) {
    check_keys(doc["model"], "model", {"alpha"});
    if (!doc["model"].contains("alpha")) semantic("model", "alpha is required");
    cfg.alpha = parse_rat(doc["model"]["alpha"], "model.alpha");
  }
  if (doc.contains("params")) {
    const json& p = doc["params"];
    check_keys(p, "params", {"B", "T", "grid", "tol", "t_max", "a", "strategy", "y", "p", "count", "k_max", "f"});
    Params& out = cfg.params;
    if (p.contains("B")) {
      if (p["B"].is_array()) {
        for (std::size_t i = 0; i < p["B"].size(); ++i) out.B.push_back(parse_rat(p["B"][i], "params.B[" + std::to_string(i) + "]"));
      } else {
        out.B.push_back(parse_rat(p["B"], "params.B"));
      }
      for (std::size_t i = 0; i < out.B.size(); ++i) {
        if (out.B[i] <= 0) semantic("params.B", "bounds must be positive");
        if (i > 0 && out.B[i] <= out.B[i - 1]) semantic("params.B", "bounds must be strictly increasing");
      }
    }
    if (p.contains("grid")) {
      const json& g = p["grid"];
      check_keys(g, "params.grid", {"from", "to", "ratio"});
      if (!g.contains("from") || !g.contains("to")) semantic("params.grid", "from and to are required");
      out.grid_from = parse_rat(g["from"], "params.grid.from");
      out.grid_to = parse_rat(g["to"], "params.grid.to");
      if (g.contains("ratio")) out.grid_ratio = static_cast<unsigned>(parse_u64(g["ratio"], "params.grid.ratio"));
      if (*out.grid_from <= 0 || *out.grid_to < *out.grid_from || out.grid_ratio < 2) {
        semantic("params.grid", "need 0 < from <= to and ratio >= 2");
      }
    }
    if (p.contains("T")) out.T = parse_u64(p["T"], "params.T");
    if (p.contains("tol")) {
      if (!p["tol"].is_number()) semantic("params.tol", "expected a number");
      out.tol = p["tol"].get<double>();
      if (!(out.tol > 0 && out.tol < 1)) semantic("params.tol", "tolerance must lie in (0, 1)");
    }
    if (p.contains("t_max")) out.t_max = parse_u64(p["t_max"], "params.t_max");
    if (p.contains("a")) out.a = parse_long(p["a"], "params.a");
    if (p.contains("strategy")) {
      if (!p["strategy"].is_string()) semantic("params.strategy", "expected a string");
      try {
        out.strategy = parse_strategy(p["strategy"].get<std::string>());
      } catch (const InputError& e) {
        semantic("params.strategy", e.what());
      }
    }
    if (p.contains("y")) out.y = parse_point(p["y"], "params.y");
    if (p.contains("p")) {
      out.p = parse_int(p["p"], "params.p");
      if (!is_prime(*out.p)) semantic("params.p", out.p->get_str() + " is not prime");
    }
    if (p.contains("count")) out.count = parse_u64(p["count"], "params.count");
    if (p.contains("k_max")) out.k_max = static_cast<unsigned>(parse_u64(p["k_max"], "params.k_max"));
    if (p.contains("f")) {
      if (!p["f"].is_string()) semantic("params.f", "expected a polynomial string in y0, y1");
      out.f = p["f"].get<std::string>();
    }
  }
  if (doc.contains("exclude")) {
    if (!doc["exclude"].is_array()) semantic("exclude", "expected a list of base points");
    for (std::size_t i = 0; i < doc["exclude"].size(); ++i) {
      cfg.exclude.push_back(parse_point(doc["exclude"][i], "exclude[" + std::to_string(i) + "]"));
    }
  }
  if (doc.contains("cubic")) {
    const json& c = doc["cubic"];
    check_keys(c, "cubic", {"equation", "line"});
    if (!c.contains("equation") || !c["equation"].is_string()) semantic("cubic.equation", "expected a polynomial string");
    if (!c.contains("line") || !c["line"].is_array() || c["line"].size() != 2) {
      semantic("cubic.line", "expected two points spanning the line");
    }
    cfg.cubic = CubicSpec{c["equation"].get<std::string>(), parse_point(c["line"][0], "cubic.line[0]"),
                          parse_point(c["line"][1], "cubic.line[1]")};
  }
  if (doc.contains("output")) {
    check_keys(doc["output"], "output", {"json", "csv"});
    if (doc["output"].contains("json")) cfg.output_json = doc["output"]["json"].get<std::string>();
    if (doc["output"].contains("csv")) cfg.output_csv = doc["output"]["csv"].get<std::string>();
  }

  if (cfg.params.y && cfg.surface && cfg.params.y->dimension() != cfg.surface->n) {
    semantic("params.y", "base point must have n + 1 coordinates");
  }
  for (const auto& y : cfg.exclude) {
    if (cfg.surface && y.dimension() != cfg.surface->n) semantic("exclude", "base point must have n + 1 coordinates");
  }
  if (validate && cfg.surface) {
    const ValidationReport rep = cbcount::validate(*cfg.surface);
    if (!rep.ok()) throw InputError("invalid surface: " + rep.first_failure());
    if (cfg.alpha) (void)cfg.model();
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path, bool validate) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), validate);
}

ordered_json emit_poly(const MultiPoly& p) {
  ordered_json out = ordered_json::array();
  for (const auto& [e, c] : p.terms()) {
    ordered_json exps = ordered_json::array();
    for (unsigned x : e) exps.push_back(x);
    out.push_back(ordered_json::array({c.get_str(), exps}));
  }
  return out;
}

ordered_json emit_surface(const ConicBundleSurface& s) {
  ordered_json out;
  out["n"] = s.n;
  out["a"] = {s.a[0], s.a[1], s.a[2]};
  out["e"] = s.e;
  ordered_json g = ordered_json::array();
  for (int i = 0; i < 3; ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < 3; ++j) row.push_back(emit_poly(s.gram[i][j]));
    g.push_back(row);
  }
  out["gram"] = g;
  return out;
}

ordered_json emit_config(const RunConfig& cfg) {
  ordered_json out;
  if (cfg.surface) out["surface"] = emit_surface(*cfg.surface);
  if (cfg.alpha) out["model"]["alpha"] = rat_json(*cfg.alpha);
  const Params& p = cfg.params;
  ordered_json params;
  if (!p.B.empty()) {
    ordered_json b = ordered_json::array();
    for (const auto& x : p.B) b.push_back(rat_json(x));
    params["B"] = b;
  }
  if (p.grid_from) {
    params["grid"] = {{"from", rat_json(*p.grid_from)}, {"to", rat_json(*p.grid_to)}, {"ratio", p.grid_ratio}};
  }
  params["T"] = p.T;
  params["tol"] = p.tol;
  params["t_max"] = p.t_max;
  params["a"] = p.a;
  params["strategy"] = to_string(p.strategy);
  if (p.y) params["y"] = point_json(*p.y);
  if (p.p) params["p"] = p.p->get_str();
  params["count"] = p.count;
  params["k_max"] = p.k_max;
  if (p.f) params["f"] = *p.f;
  out["params"] = params;
  if (!cfg.exclude.empty()) {
    ordered_json ex = ordered_json::array();
    for (const auto& y : cfg.exclude) ex.push_back(point_json(y));
    out["exclude"] = ex;
  }
  if (cfg.cubic) {
    out["cubic"] = {{"equation", cfg.cubic->equation},
                    {"line", ordered_json::array({point_json(cfg.cubic->p), point_json(cfg.cubic->q)})}};
  }
  if (!cfg.output_json.empty()) out["output"]["json"] = cfg.output_json;
  if (!cfg.output_csv.empty()) out["output"]["csv"] = cfg.output_csv;
  return out;
}

std::string emit_config_text(const RunConfig& cfg) { return emit_config(cfg).dump(2) + "\n"; }

std::string config_hash(const RunConfig& cfg) {
  // output locations do not change the computation
  RunConfig canonical = cfg;
  canonical.output_json.clear();
  canonical.output_csv.clear();
  const std::string text = emit_config(canonical).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cbcount::app
