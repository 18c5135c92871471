#pragma once

// Subcommands of the `mup` driver. Each reads a RunConfig, runs one lab, ucp
// or embed operation and returns the experiment table plus a full report.
// `execute` writes run.json, rows.csv and report.json and maps the outcome to
// an exit code: 0 success, 2 a verdict failed, 1 the run could not be made.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "mup/config.hpp"
#include "mup/error.hpp"
#include "mup/io.hpp"
#include "mup/lab.hpp"

namespace mup {

struct CommandResult {
  ExperimentResult experiment;
  json report = json::object();
  std::string resolution;
};

// ---------------------------------------------------------------------------
// Config readers.

inline GridKind parse_grid_kind(const std::string& s) {
  static const std::map<std::string, GridKind> table{{"circle", GridKind::circle},
                                                     {"sphere2", GridKind::sphere2},
                                                     {"interval", GridKind::interval},
                                                     {"ball", GridKind::ball},
                                                     {"disjoint-union", GridKind::disjoint_union}};
  const auto it = table.find(s);
  if (it == table.end()) throw Error(ErrorCode::configuration, "unknown grid kind: " + s);
  return it->second;
}

inline std::size_t positive_count(const RunConfig& c, const std::string& key, std::int64_t fallback) {
  const auto v = c.get_int(key, fallback);
  if (v < 0) throw Error(ErrorCode::configuration, key + " must be >= 0");
  return static_cast<std::size_t>(v);
}

/// [grid] kind, n, n2, a, b, dim; unions use parts, part_kind, part_n and
/// per-part part<i>_a / part<i>_b for intervals.
inline GridSpec grid_spec_from(const RunConfig& c) {
  GridSpec g;
  g.kind = parse_grid_kind(c.require("grid.kind"));
  g.n = positive_count(c, "grid.n", 0);
  g.n2 = positive_count(c, "grid.n2", 0);
  g.a = c.get_double("grid.a", -1.0);
  g.b = c.get_double("grid.b", 1.0);
  g.ball_dim = static_cast<int>(c.get_int("grid.dim", 1));
  if (g.kind == GridKind::disjoint_union) {
    const auto parts = positive_count(c, "grid.parts", 2);
    const auto kind = parse_grid_kind(c.get("grid.part_kind", "circle"));
    for (std::size_t i = 0; i < parts; ++i) {
      GridSpec p;
      p.kind = kind;
      p.n = positive_count(c, "grid.part_n", 256);
      const std::string tag = "grid.part" + std::to_string(i);
      p.a = c.get_double(tag + "_a", 2.0 * static_cast<double>(i));
      p.b = c.get_double(tag + "_b", 2.0 * static_cast<double>(i) + 1.0);
      g.parts.push_back(p);
    }
  } else if (g.n == 0) {
    throw Error(ErrorCode::configuration, "grid.n is required");
  }
  return g;
}

inline std::string describe(const GridSpec& g) {
  std::string s = to_string(g.kind);
  if (g.kind == GridKind::disjoint_union) {
    s += "(";
    for (std::size_t i = 0; i < g.parts.size(); ++i) s += (i ? "+" : "") + describe(g.parts[i]);
    return s + ")";
  }
  s += ":n=" + std::to_string(g.n);
  if (g.n2) s += ",n2=" + std::to_string(g.n2);
  return s;
}

/// [embedding] kind plus numeric parameters (every other key).
inline EmbeddingDescriptor embedding_from(const RunConfig& c) {
  EmbeddingDescriptor d;
  d.kind = parse_embedding_kind(c.require("embedding.kind"));
  for (const auto& [k, v] : c.values()) {
    if (k.rfind("embedding.", 0) != 0 || k == "embedding.kind") continue;
    d.params[k.substr(10)] = c.get_double(k, 0.0);
  }
  return d;
}

/// [family] name, parameters, count, seed plus numeric options.
inline FamilySpec family_from(const RunConfig& c) {
  FamilySpec f;
  f.name = c.require("family.name");
  f.parameters = c.get_list("family.parameters");
  f.count = positive_count(c, "family.count", 0);
  f.seed = static_cast<std::uint64_t>(c.get_int("family.seed", static_cast<std::int64_t>(c.seed())));
  for (const auto& [k, v] : c.values()) {
    if (k.rfind("family.", 0) != 0) continue;
    const auto key = k.substr(7);
    if (key == "name" || key == "parameters" || key == "count" || key == "seed") continue;
    f.options[key] = c.get_double(k, 0.0);
  }
  return f;
}

inline AdmissibilityBudget budget_from(const RunConfig& c) {
  AdmissibilityBudget b;
  b.seed = c.seed();
  b.n_pairs = positive_count(c, "budget.n_pairs", static_cast<std::int64_t>(b.n_pairs));
  b.n_samples = positive_count(c, "budget.n_samples", static_cast<std::int64_t>(b.n_samples));
  b.coarse_nodes = positive_count(c, "budget.coarse_nodes", static_cast<std::int64_t>(b.coarse_nodes));
  if (c.has("budget.n_list")) {
    b.n_list.clear();
    for (double x : c.get_list("budget.n_list")) b.n_list.push_back(static_cast<int>(x));
  }
  const double cap = c.get_double("budget.max_evaluations", 1e8);
  if (static_cast<double>(b.evaluations()) > cap)
    throw Error(ErrorCode::budget_exceeded, "budget exceeded: " + std::to_string(b.evaluations()) +
                                                " configuration evaluations requested, cap " + csv_number(cap));
  return b;
}

inline void enforce_node_cap(const RunConfig& c, std::size_t nodes) {
  const double cap = c.get_double("budget.max_nodes", 4e6);
  if (static_cast<double>(nodes) > cap)
    throw Error(ErrorCode::budget_exceeded,
                "budget exceeded: " + std::to_string(nodes) + " grid nodes requested, cap " + csv_number(cap));
}

inline std::vector<int> int_list(const std::vector<double>& xs) {
  std::vector<int> out;
  for (double x : xs) out.push_back(static_cast<int>(x));
  return out;
}

// ---------------------------------------------------------------------------
// Commands.

inline CommandResult cmd_constants(const RunConfig& c) {
  const auto spec = grid_spec_from(c);
  const auto budget = budget_from(c);
  const auto grid = spec.build();
  enforce_node_cap(c, grid.size());
  const auto m = build_embedding(grid, embedding_from(c));
  const auto adm = check_admissible(grid, m, budget);

  CommandResult out;
  out.resolution = describe(spec);
  auto& r = out.experiment;
  r.id = "constants";
  r.columns = {"N", "c_hat_N", "evaluated"};
  for (const auto& [n, v] : adm.c_per_n)
    r.rows.push_back({static_cast<double>(n), v, static_cast<double>(adm.samples_used.at(n))});
  r.summary["L_hat"] = adm.l_hat;
  r.summary["C_hat"] = adm.c_hat;
  r.summary["centering_residual"] = adm.centering_residual;
  r.summary["ref_bound"] = adm.ref_bound();
  const double c_min = c.get_double("tolerances.c_min", 1e-2);
  r.verdicts.push_back(check_range("condition_1_bilipschitz", adm.l_hat, 1.0, std::numeric_limits<double>::max()));
  r.verdicts.push_back(check_range("condition_2_curvature", adm.c_hat, c_min, kInfinity));
  r.verdicts.push_back(check_range("condition_3_centering", adm.centering_residual, 0.0, 1e-10 * grid.total_volume()));
  std::string verdict = "admissible";
  for (std::size_t i = 0; i < r.verdicts.size(); ++i)
    if (!r.verdicts[i].passed) {
      verdict = "fails condition " + std::to_string(i + 1);
      break;
    }
  out.report = {{"admissibility", to_json(adm)}, {"verdict", verdict}};
  return out;
}

inline SweepOptions sweep_options_from(const RunConfig& c) {
  SweepOptions o;
  o.budget = budget_from(c);
  o.stability_tol = c.get_double("tolerances.stability", o.stability_tol);
  o.refine = c.get_int("experiment.refine", 1) != 0;
  return o;
}

inline CommandResult cmd_verify(const RunConfig& c) {
  const auto spec = grid_spec_from(c);
  const auto desc = embedding_from(c);
  const auto family = family_from(c);
  CommandResult out;
  out.resolution = describe(spec);
  enforce_node_cap(c, spec.refined().build().size());

  if (spec.kind == GridKind::ball && desc.kind == EmbeddingKind::paraboloid_graph && family.name == "radial-gaussian") {
    if (spec.ball_dim != 1) throw Error(ErrorCode::configuration, "Euclidean reduction runs on the 1-d ball");
    EuclideanOptions o;
    o.n_r = spec.n;
    o.variation_tol = c.get_double("tolerances.variation", o.variation_tol);
    o.closed_form_tol = c.get_double("tolerances.closed_form", o.closed_form_tol);
    out.experiment = euclidean_reduction(family.parameters, c.get_list("experiment.centers", {0.0}), o);
    out.report = to_json(out.experiment);
    return out;
  }

  SweepReports reports;
  json members = json::array();
  if (spec.kind == GridKind::disjoint_union) {
    out.experiment = disconnected_sweep(spec, desc, family, sweep_options_from(c), &reports);
    for (const auto& u : reports.disconnected) members.push_back(to_json(u));
  } else {
    out.experiment = uncertainty_sweep(spec, desc, family, sweep_options_from(c), &reports);
    for (std::size_t j = 0; j < reports.uncertainty.size(); ++j) {
      json m = to_json(reports.uncertainty[j]);
      if (j < reports.breitenberger.size()) m["breitenberger"] = to_json(reports.breitenberger[j]);
      if (j < reports.goh_goodman.size()) m["goh_goodman"] = to_json(reports.goh_goodman[j]);
      members.push_back(m);
    }
  }
  out.report = {{"admissibility", to_json(reports.admissibility)}, {"members", members}};
  return out;
}

inline CommandResult cmd_scaling(const RunConfig& c) {
  ScalingOptions o;
  o.n = positive_count(c, "experiment.n", static_cast<std::int64_t>(o.n));
  o.budget = budget_from(c);
  o.slope_tol = c.get_double("tolerances.slope", o.slope_tol);
  o.band = c.get_double("tolerances.band", o.band);
  enforce_node_cap(c, o.n);
  CommandResult out;
  out.resolution = "circle:n=" + std::to_string(o.n);
  out.experiment = scaling_experiment(c.get_list("experiment.L_list", {4, 8, 16, 32}), o);
  out.report = to_json(out.experiment);
  return out;
}

inline CommandResult cmd_inverse(const RunConfig& c) {
  InverseOptions o;
  o.n = positive_count(c, "experiment.n", static_cast<std::int64_t>(o.n));
  o.members = positive_count(c, "experiment.members", static_cast<std::int64_t>(o.members));
  o.degree = static_cast<int>(c.get_int("experiment.degree", o.degree));
  o.seed = c.seed();
  o.stability_tol = c.get_double("tolerances.stability", o.stability_tol);
  o.budget = budget_from(c);
  enforce_node_cap(c, 2 * o.n);
  CommandResult out;
  out.resolution = "circle:n=" + std::to_string(o.n) + "," + std::to_string(2 * o.n);
  out.experiment = inverse_experiment(o);

  // Reference member f = (1 + cos x)/√(3π).
  const auto grid = build_circle_grid(o.n);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 + std::cos(grid.node(i)[0]);
  const auto ref = inverse_constructive(grid, normalize_field(grid, v), o.budget);
  out.experiment.summary["reference_rhs"] = ref.rhs;
  out.experiment.summary["reference_lhs"] = ref.lhs;
  out.report = to_json(out.experiment);
  out.report["reference"] = to_json(ref);
  return out;
}

inline CommandResult cmd_degenerate(const RunConfig& c) {
  DegenerateOptions o;
  o.n_r = positive_count(c, "experiment.n_r", static_cast<std::int64_t>(o.n_r));
  o.modified_tol = c.get_double("tolerances.modified", o.modified_tol);
  o.decay_min = c.get_double("tolerances.decay", o.decay_min);
  enforce_node_cap(c, 2 * o.n_r + 1);
  CommandResult out;
  out.resolution = "ball1:n_r=" + std::to_string(o.n_r);
  out.experiment = degenerate_k_experiment(int_list(c.get_list("experiment.k_list", {2, 3, 4, 6})),
                                           c.get_list("experiment.eps_list", {0.2, 0.1, 0.05}),
                                           c.get_list("experiment.centers", {0.0, 0.5}), o);
  out.report = to_json(out.experiment);
  return out;
}

inline CommandResult cmd_disconnected(const RunConfig& c) {
  if (grid_spec_from(c).kind != GridKind::disjoint_union)
    throw Error(ErrorCode::configuration, "disconnected needs grid.kind = disjoint-union");
  return cmd_verify(c);
}

inline CommandResult cmd_n2check(const RunConfig& c) {
  const auto spec = grid_spec_from(c);
  const auto budget = budget_from(c);
  const auto grid = spec.build();
  enforce_node_cap(c, grid.size());
  const auto m = build_embedding(grid, embedding_from(c));
  const auto s = test_n2_sufficiency(grid, m, budget);
  CommandResult out;
  out.resolution = describe(spec);
  auto& r = out.experiment;
  r.id = "n2check";
  r.columns = {"c_hat_n2", "c_hat_sampled", "ratio", "violation"};
  r.rows.push_back({s.c_n2, s.c_sampled, s.ratio, s.violation ? 1.0 : 0.0});
  r.summary["ratio"] = s.ratio;
  r.summary["violation"] = s.violation ? 1.0 : 0.0;
  if (c.has("tolerances.ratio_lo") || c.has("tolerances.ratio_hi"))
    r.verdicts.push_back(check_range("n2_ratio", s.ratio, c.get_double("tolerances.ratio_lo", 0.0),
                                     c.get_double("tolerances.ratio_hi", kInfinity)));
  out.report = to_json(s);
  return out;
}

inline const std::map<std::string, std::function<CommandResult(const RunConfig&)>>& command_table() {
  static const std::map<std::string, std::function<CommandResult(const RunConfig&)>> table{
      {"constants", cmd_constants}, {"verify", cmd_verify},       {"scaling", cmd_scaling},
      {"inverse", cmd_inverse},     {"degenerate", cmd_degenerate}, {"disconnected", cmd_disconnected},
      {"n2check", cmd_n2check}};
  return table;
}

/// Runs `name`; the config's run.experiment, when present, must agree with it.
inline CommandResult run_command(const std::string& name, const RunConfig& c) {
  const auto& table = command_table();
  const auto it = table.find(name);
  if (it == table.end()) throw Error(ErrorCode::configuration, "unknown experiment id: " + name);
  const auto declared = c.get("run.experiment", name);
  if (declared != name)
    throw Error(ErrorCode::configuration, "config declares experiment '" + declared + "' but '" + name + "' was run");
  return it->second(c);
}

/// Writes the three output files into `out_dir`.
inline void write_outputs(const std::filesystem::path& out_dir, const RunConfig& c, const CommandResult& res) {
  OutputHeader h{c.hash(), c.run_id(), res.resolution, c.seed(), kToolVersion};
  json run = to_json(res.experiment);
  run["header"] = to_json(h);
  run["config"] = c.values();
  json report = res.report;
  report["header"] = to_json(h);
  write_text(out_dir / "run.json", run.dump(2) + "\n");
  write_text(out_dir / "rows.csv", to_csv(res.experiment, h));
  write_text(out_dir / "report.json", report.dump(2) + "\n");
}

/// Full driver step with exit-code mapping.
inline int execute(const std::string& name, const RunConfig& c, const std::filesystem::path& out_dir,
                   std::ostream& log = std::cout, std::ostream& err = std::cerr) {
  try {
    const auto res = run_command(name, c);
    write_outputs(out_dir, c, res);
    for (const auto& v : res.experiment.verdicts)
      log << (v.passed ? "PASS " : "FAIL ") << v.name << " = " << csv_number(v.value) << "\n";
    log << "run " << c.run_id() << " -> " << out_dir.string() << "\n";
    return res.experiment.passed() ? 0 : 2;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace mup
