#include "app/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cbcount/census.hpp"
#include "cbcount/conics.hpp"
#include "cbcount/errors.hpp"
#include "cbcount/localdata.hpp"

namespace cbcount::app {

using nlohmann::ordered_json;

namespace {

ordered_json num(double v) {
  if (!std::isfinite(v)) return format_double(v);
  return ordered_json::parse(format_double(v));
}

std::string str(const Int& v) { return v.get_str(); }
std::string str(const Rat& v) { return cbcount::to_string(v); }

ordered_json point(const ProjPoint& y) {
  ordered_json out = ordered_json::array();
  for (const auto& c : y.coords()) out.push_back(c.get_str());
  return out;
}

ordered_json gram_json(const Gram3& g) {
  ordered_json out = ordered_json::array();
  for (const auto& row : g) out.push_back({row[0].get_str(), row[1].get_str(), row[2].get_str()});
  return out;
}

ordered_json places_json(const std::vector<Place>& places) {
  ordered_json out = ordered_json::array();
  for (const auto& p : places) out.push_back(p.to_string());
  return out;
}

std::vector<Rat> bounds(const RunConfig& cfg) {
  const Params& p = cfg.params;
  if (!p.B.empty()) return p.B;
  if (p.grid_from) return geometric_grid(*p.grid_from, *p.grid_to, p.grid_ratio);
  throw InputError("config error at params.B: this command needs B or grid");
}

const ProjPoint& require_y(const RunConfig& cfg) {
  if (!cfg.params.y) throw InputError("config error at params.y: this command needs a base point");
  return *cfg.params.y;
}

CensusOptions census_options(const RunConfig& cfg, const RunOptions& options) {
  CensusOptions o;
  o.strategy = cfg.params.strategy;
  o.threads = options.threads;
  o.exclude = cfg.exclude;
  o.tol = cfg.params.tol;
  return o;
}

ordered_json fibre_report_json(const FibreReport& r) {
  ordered_json out;
  out["y"] = point(r.y);
  out["form"] = gram_json(r.form);
  out["disc"] = str(r.disc);
  out["minors_gcd"] = str(r.minors_gcd);
  out["soluble"] = r.soluble;
  out["obstructions"] = places_json(r.obstructions);
  out["sigma_inf"] = num(r.sigma_inf);
  out["sigma_inf_rel_error"] = num(r.sigma_inf_tol);
  ordered_json sp = ordered_json::object();
  for (const auto& [p, v] : r.sigma_p) sp[p.get_str()] = str(v);
  out["sigma_p"] = sp;
  out["tamagawa"] = num(r.tamagawa);
  out["peyre"] = num(r.peyre);
  return out;
}

struct Output {
  ordered_json result = ordered_json::object();
  std::string csv;
};

// --- subcommands

Output cmd_validate(const RunConfig& cfg, const RunOptions&) {
  Output out;
  const ValidationReport rep = validate(cfg.require_surface());
  ordered_json checks = ordered_json::array();
  std::string csv = "check,status,detail\n";
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
    csv += "\"" + c.name + "\"," + to_string(c.status) + ",\"" + c.detail + "\"\n";
  }
  out.result["checks"] = checks;
  out.result["surface_ok"] = rep.ok();
  out.result["discriminant"] = discriminant(cfg.require_surface()).to_string('y');
  if (cfg.alpha) {
    try {
      const HeightModel m = cfg.model();
      out.result["model"] = {{"alpha", str(m.alpha())}, {"A", str(m.A())}, {"threshold", str(HeightModel::threshold(m.n(), m.weights(), m.e()))}};
    } catch (const InputError& e) {
      out.result["model"] = {{"alpha", str(*cfg.alpha)}, {"error", e.what()}};
      out.csv = csv;
      throw InputError(std::string("model check failed: ") + e.what());
    }
  }
  out.csv = csv;
  if (!rep.ok()) throw InputError("invalid surface: " + rep.first_failure());
  return out;
}

Output cmd_count(const RunConfig& cfg, const RunOptions& options) {
  Output out;
  const auto& s = cfg.require_surface();
  const HeightModel m = cfg.model();
  const CountTable t = count_total(s, m, bounds(cfg), census_options(cfg, options));
  ordered_json per_b = ordered_json::array();
  for (std::size_t k = 0; k < t.grid.size(); ++k) {
    per_b.push_back({{"B", str(t.grid[k])},
                     {"count", str(t.totals[k])},
                     {"ratio", num(to_double(Rat(t.totals[k]) / t.grid[k]))},
                     {"base_bound", str(base_bound(m, t.grid[k]))}});
  }
  out.result["totals"] = per_b;
  out.result["base_bound"] = str(t.base_bound);
  out.result["singular_skipped"] = t.singular_skipped;
  out.result["excluded"] = t.excluded;
  ordered_json fibres = ordered_json::array();
  std::string csv = "B,y,count\n";
  for (const auto& f : t.fibres) {
    ordered_json counts = ordered_json::array();
    for (auto c : f.counts) counts.push_back(std::to_string(c));
    fibres.push_back({{"y", point(f.y)}, {"counts", counts}, {"strategy", to_string(f.used)}});
  }
  for (std::size_t k = 0; k < t.grid.size(); ++k) {
    for (const auto& f : t.fibres) {
      if (f.counts[k] == 0) continue;
      csv += str(t.grid[k]) + "," + f.y.key() + "," + std::to_string(f.counts[k]) + "\n";
    }
  }
  out.result["fibres"] = fibres;
  out.csv = csv;
  return out;
}

Output cmd_fibre(const RunConfig& cfg, const RunOptions&) {
  Output out;
  const auto& s = cfg.require_surface();
  const HeightModel m = cfg.model();
  const ProjPoint& y = require_y(cfg);
  const FibreClass fc = fibre_class(s, y);
  out.result["y"] = point(y);
  out.result["form"] = gram_json(fc.form);
  out.result["disc"] = str(fc.disc);
  out.result["minors_gcd"] = str(fc.minors_gcd);
  out.result["singular"] = fc.singular();
  if (fc.singular()) throw InputError("precondition error: fibre above " + y.key() + " is singular");
  const std::vector<Rat> grid = bounds(cfg);
  const FibreCount fcount = count_fibre_grid(s, m, y, grid, cfg.params.strategy);
  const FibreReport rep = fibre_report(s, m, y, cfg.params.tol);
  ordered_json counts = ordered_json::array();
  std::string csv = "B,y,count,ratio\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double ratio = to_double(Rat(Int(static_cast<unsigned long>(fcount.counts[k]))) / grid[k]);
    counts.push_back({{"B", str(grid[k])}, {"count", std::to_string(fcount.counts[k])}, {"ratio", num(ratio)}});
    csv += str(grid[k]) + "," + y.key() + "," + std::to_string(fcount.counts[k]) + "," + format_double(ratio) + "\n";
  }
  out.result["strategy"] = to_string(fcount.used);
  out.result["counts"] = counts;
  if (auto pt = find_point(TernaryForm(fc.form))) {
    out.result["rational_point"] = {(*pt)[0].get_str(), (*pt)[1].get_str(), (*pt)[2].get_str()};
  }
  out.result["densities"] = fibre_report_json(rep);
  out.csv = csv;
  return out;
}

Output cmd_density(const RunConfig& cfg, const RunOptions&) {
  Output out;
  const auto& s = cfg.require_surface();
  const ProjPoint& y = require_y(cfg);
  const FibreClass fc = fibre_class(s, y);
  if (fc.singular()) throw InputError("precondition error: fibre above " + y.key() + " is singular");
  const TernaryForm form(fc.form);
  out.result["y"] = point(y);
  if (cfg.params.p) {
    const SigmaP sp = sigma_p_detail(form, *cfg.params.p);
    out.result["p"] = str(*cfg.params.p);
    out.result["sigma_p"] = str(sp.value);
    out.result["method"] = sp.method;
    if (sp.method == "lift") out.result["level"] = sp.level;
    out.csv = "y,p,sigma_p,method\n" + y.key() + "," + str(*cfg.params.p) + "," + str(sp.value) + "," + sp.method + "\n";
    return out;
  }
  const HeightModel m = cfg.model();
  const FibreReport rep = fibre_report(s, m, y, cfg.params.tol);
  out.result["densities"] = fibre_report_json(rep);
  std::string csv = "y,place,value\n";
  csv += y.key() + ",inf," + format_double(rep.sigma_inf) + "\n";
  for (const auto& [p, v] : rep.sigma_p) csv += y.key() + "," + p.get_str() + "," + str(v) + "\n";
  csv += y.key() + ",tamagawa," + format_double(rep.tamagawa) + "\n";
  csv += y.key() + ",peyre," + format_double(rep.peyre) + "\n";
  out.csv = csv;
  return out;
}

Output cmd_peyre_sum(const RunConfig& cfg, const RunOptions& options) {
  Output out;
  const auto& s = cfg.require_surface();
  const HeightModel m = cfg.model();
  const PeyreSum ps = peyre_sum(s, m, cfg.params.T, census_options(cfg, options));
  out.result["T"] = ps.T;
  out.result["total"] = num(ps.total);
  out.result["error_bound"] = num(ps.error_bound);
  ordered_json shells = ordered_json::array();
  std::string csv = "height,fibres,increment,partial\n";
  double running = 0;
  std::vector<double> incs;
  for (const auto& sh : ps.shells) {
    incs.push_back(sh.increment);
    running = pairwise_sum(incs);
    shells.push_back({{"height", sh.height},
                      {"fibres", sh.fibres},
                      {"increment", num(sh.increment)},
                      {"error", num(sh.error)},
                      {"partial", num(running)}});
    csv += std::to_string(sh.height) + "," + std::to_string(sh.fibres) + "," + format_double(sh.increment) + "," +
           format_double(running) + "\n";
  }
  out.result["shells"] = shells;
  if (ps.T >= 4) {
    const std::uint64_t half = ps.T / 2;
    out.result["doubling_change"] = num(ps.total == 0 ? 0.0 : (ps.total - ps.partial(half)) / ps.total);
  }
  out.csv = csv;
  return out;
}

Output cmd_probe(const RunConfig& cfg, const RunOptions& options) {
  Output out;
  const auto& s = cfg.require_surface();
  const HeightModel m = cfg.model();
  const AsymptoticProbe pr = asymptotic_probe(s, m, bounds(cfg), census_options(cfg, options));
  ordered_json rows = ordered_json::array();
  std::string csv = "B,count,ratio,T,peyre_partial,residual\n";
  for (const auto& r : pr.rows) {
    ordered_json row = {{"B", str(r.B)},         {"count", str(r.count)},
                        {"ratio", num(r.ratio)}, {"T", r.T},
                        {"peyre_partial", num(r.peyre_partial)}};
    if (r.fitted) row["residual"] = num(r.residual);
    rows.push_back(row);
    csv += str(r.B) + "," + str(r.count) + "," + format_double(r.ratio) + "," + std::to_string(r.T) + "," +
           format_double(r.peyre_partial) + "," + (r.fitted ? format_double(r.residual) : std::string()) + "\n";
  }
  out.result["rows"] = rows;
  out.result["slope"] = num(pr.slope);
  out.result["intercept"] = num(pr.intercept);
  out.result["peyre_limit"] = num(pr.peyre_limit);
  out.result["slope_rel_deviation"] = num(pr.peyre_limit == 0 ? 0.0 : (pr.slope - pr.peyre_limit) / pr.peyre_limit);
  out.csv = csv;
  return out;
}

Output cmd_bt_probe(const RunConfig& cfg, const RunOptions&) {
  Output out;
  const Rat alpha = cfg.alpha ? *cfg.alpha : Rat(1);
  const BtReport rep = bt_probe(alpha, cfg.params.t_max, cfg.params.k_max, std::min(cfg.params.tol, 1e-10));
  out.result["alpha"] = str(rep.alpha);
  out.result["t_max"] = rep.t_max;
  ordered_json viol = ordered_json::array(), zeros = ordered_json::array();
  for (const auto& t : rep.lower_violations) viol.push_back(str(t));
  for (const auto& t : rep.zero_tau) zeros.push_back(str(t));
  out.result["lower_bound_violations"] = viol;
  out.result["zero_tau"] = zeros;
  out.result["max_rel_error"] = num(rep.max_rel_error);
  ordered_json rows = ordered_json::array();
  std::string csv = "t,tau,normalized,admissible,closed,rel_error\n";
  for (const auto& r : rep.rows) {
    ordered_json row = {{"t", str(r.t)}, {"tau", num(r.tau)}, {"normalized", num(r.normalized)}, {"admissible", r.admissible}};
    if (r.closed) {
      row["closed"] = num(*r.closed);
      row["rel_error"] = num(r.rel_error);
    }
    rows.push_back(row);
    csv += str(r.t) + "," + format_double(r.tau) + "," + format_double(r.normalized) + "," + (r.admissible ? "1" : "0") +
           "," + (r.closed ? format_double(*r.closed) : std::string()) + "," +
           (r.closed ? format_double(r.rel_error) : std::string()) + "\n";
  }
  out.result["rows"] = rows;
  ordered_json growth = ordered_json::array();
  for (const auto& g : rep.growth) {
    growth.push_back({{"k", g.k},
                      {"t", str(g.t)},
                      {"normalized", num(g.normalized)},
                      {"lower_bound", num(g.lower_bound)},
                      {"above_bound", g.above_bound},
                      {"increasing", g.increasing}});
  }
  out.result["growth"] = growth;
  out.result["growth_ok"] = rep.growth_ok;
  out.csv = csv;
  return out;
}

Output cmd_northcott(const RunConfig& cfg, const RunOptions&) {
  Output out;
  std::optional<MultiPoly> f;
  if (cfg.params.f) f = parse_poly(*cfg.params.f, 2, 'y');
  const NorthcottReport rep = northcott_probe(cfg.params.a, cfg.params.count, f);
  out.result["a"] = rep.a;
  out.result["alpha"] = str(rep.alpha);
  out.result["f"] = rep.f.to_string('y');
  out.result["section"] = {"1", "-1", "0"};
  out.result["at_most_one"] = rep.at_most_one;
  out.result["equal_one"] = rep.equal_one;
  ordered_json rows = ordered_json::array();
  std::string csv = "y,base_height,height,expected,singular\n";
  for (const auto& r : rep.rows) {
    rows.push_back({{"y", point(r.y)},
                    {"base_height", str(r.base_height)},
                    {"height", str(r.height)},
                    {"expected", str(r.expected)},
                    {"singular", r.singular}});
    csv += r.y.key() + "," + str(r.base_height) + "," + str(r.height) + "," + str(r.expected) + "," +
           (r.singular ? "1" : "0") + "\n";
  }
  out.result["rows"] = rows;
  out.csv = csv;
  return out;
}

Output cmd_import_cubic(const RunConfig& cfg, const RunOptions&) {
  Output out;
  if (!cfg.cubic) throw InputError("config error at cubic: import-cubic needs a cubic section");
  const CubicSpec& c = *cfg.cubic;
  if (c.p.dimension() != c.q.dimension()) throw InputError("config error at cubic.line: points differ in dimension");
  const unsigned nvars = c.p.dimension() + 1;
  const MultiPoly cubic = parse_poly(c.equation, nvars, 'z');
  const ConicBundleSurface s = import_cubic_with_line(cubic, c.p, c.q);
  const ValidationReport vr = validate(s);
  RunConfig emitted;
  emitted.surface = s;
  emitted.alpha = cfg.alpha;
  if (emitted.alpha) {
    try {
      (void)emitted.model();
    } catch (const InputError&) {
      emitted.alpha.reset();
    }
  }
  if (!emitted.alpha) emitted.alpha = HeightModel::threshold(s.n, s.a, s.e) + 1;
  out.result["config"] = emit_config(emitted);
  ordered_json gram = ordered_json::array();
  for (const auto& row : s.gram) gram.push_back({row[0].to_string('y'), row[1].to_string('y'), row[2].to_string('y')});
  out.result["gram"] = gram;
  out.result["discriminant"] = discriminant(s).to_string('y');
  ordered_json checks = ordered_json::array();
  for (const auto& ch : vr.checks) checks.push_back({{"name", ch.name}, {"status", to_string(ch.status)}, {"detail", ch.detail}});
  out.result["checks"] = checks;
  out.result["valid"] = vr.ok();
  if (!vr.ok()) throw InputError("imported surface fails validation: " + vr.first_failure());
  return out;
}

using Handler = std::function<Output(const RunConfig&, const RunOptions&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"validate", cmd_validate},     {"count", cmd_count},         {"fibre", cmd_fibre},
      {"density", cmd_density},       {"peyre-sum", cmd_peyre_sum}, {"probe", cmd_probe},
      {"bt-probe", cmd_bt_probe},     {"northcott-probe", cmd_northcott},
      {"import-cubic", cmd_import_cubic},
  };
  return table;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"validate", "count",    "fibre",           "density",     "peyre-sum",
                                                 "probe",    "bt-probe", "northcott-probe", "import-cubic"};
  return names;
}

RunResult run(const std::string& command, const RunConfig& cfg, const RunOptions& options) {
  RunResult res;
  res.report["engine"] = {{"name", "cbcount"}, {"version", kEngineVersion}};
  res.report["config_hash"] = config_hash(cfg);
  res.report["command"] = command;
  auto fail = [&](int code, const char* kind, const std::string& message) {
    res.exit_code = code;
    res.report["status"] = "error";
    res.report["error"] = {{"kind", kind}, {"message", message}};
  };
  const auto it = handlers().find(command);
  if (it == handlers().end()) {
    fail(kExitInput, "input", "unknown subcommand '" + command + "'");
    return res;
  }
  try {
    Output out = it->second(cfg, options);
    res.report["status"] = "ok";
    res.report["result"] = std::move(out.result);
    res.csv = std::move(out.csv);
  } catch (const ToleranceError& e) {
    fail(kExitTolerance, "tolerance", e.what());
    res.report["error"]["best_estimate"] = num(e.best_estimate());
    res.report["error"]["achieved"] = num(e.achieved());
  } catch (const InputError& e) {
    fail(kExitInput, "input", e.what());
  } catch (const InternalError& e) {
    fail(kExitInternal, "internal", e.what());
  } catch (const std::exception& e) {
    fail(kExitOther, "other", e.what());
  }
  return res;
}

std::string write_artifacts(const RunResult& result, const RunConfig& cfg, const std::string& command) {
  const std::string text = result.report.dump(2) + "\n";
  if (!cfg.output_json.empty()) {
    std::ofstream out(cfg.output_json);
    if (!out) throw InputError("cannot write " + cfg.output_json);
    out << text;
  }
  if (!cfg.output_csv.empty() && !result.csv.empty()) {
    std::ofstream out(cfg.output_csv);
    if (!out) throw InputError("cannot write " + cfg.output_csv);
    out << result.csv;
  }
  ordered_json summary = {{"command", command},
                          {"status", result.report.value("status", "error")},
                          {"exit_code", result.exit_code},
                          {"config_hash", result.report["config_hash"]},
                          {"version", kEngineVersion}};
  if (!cfg.output_json.empty()) summary["json"] = cfg.output_json;
  if (!cfg.output_csv.empty() && !result.csv.empty()) summary["csv"] = cfg.output_csv;
  if (result.report.contains("error")) summary["error"] = result.report["error"];
  return summary.dump();
}

}  // namespace cbcount::app
