#pragma once

// JSON and CSV serialization. Non-finite numbers are written as the strings
// "inf", "-inf" and "nan" in JSON and as the same tokens in CSV.

#include <fmt/format.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mup/admissibility.hpp"
#include "mup/config.hpp"
#include "mup/lab.hpp"
#include "mup/ucp.hpp"

namespace mup {

using nlohmann::json;

inline json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline json numbers(std::span<const double> xs) {
  json a = json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

inline std::string csv_number(double x) { return fmt::format("{:.17g}", x); }

struct OutputHeader {
  std::string config_hash;
  std::string run_id;
  std::string resolution;
  std::uint64_t seed = 0;
  std::string version = kToolVersion;
};

inline json to_json(const OutputHeader& h) {
  return {{"config_hash", h.config_hash}, {"run_id", h.run_id}, {"resolution", h.resolution},
          {"seed", h.seed},               {"version", h.version}};
}

inline json to_json(const AdmissibilityReport& r) {
  json per_n = json::object(), used = json::object();
  for (const auto& [n, c] : r.c_per_n) per_n[std::to_string(n)] = number(c);
  for (const auto& [n, c] : r.samples_used) used[std::to_string(n)] = c;
  return {{"L_hat", number(r.l_hat)},
          {"C_hat", number(r.c_hat)},
          {"C_hat_per_N", per_n},
          {"centering_residual", number(r.centering_residual)},
          {"n2_exhaustive", r.n2_exhaustive},
          {"samples_used", used},
          {"seed", r.seed},
          {"ref_bound", number(r.ref_bound())}};
}

inline json to_json(const UncertaintyReport& r) {
  json flags = json::array();
  if (r.degenerate_tau) flags.push_back("degenerate_tau");
  return {{"tau", numbers(r.tau)},
          {"tau_norm", number(r.tau_norm)},
          {"nearest_point_index", r.nearest_node},
          {"nearest_dist", number(r.nearest_dist)},
          {"dirichlet", number(r.dirichlet)},
          {"terms",
           {{"infdist", number(r.term_infdist)},
            {"invtau2", number(r.term_invtau2)},
            {"energy", number(r.term_energy)}}},
          {"U", number(r.U)},
          {"ref_bound", number(r.ref_bound)},
          {"flags", flags}};
}

inline json to_json(const DisconnectedReport& r) {
  json centroids = json::array();
  for (const auto& p : r.centroids) centroids.push_back(numbers(p));
  json flags = json::array();
  if (r.degenerate) flags.push_back("tau_in_simplex");
  flags.push_back("centroids_volume_normalized");
  return {{"tau", numbers(r.tau)},
          {"centroids", centroids},
          {"simplex_dist", number(r.simplex_dist)},
          {"simplex_weights", numbers(r.simplex.weights)},
          {"separation", number(r.sigma)},
          {"nearest_dist", number(r.nearest_dist)},
          {"dirichlet", number(r.dirichlet)},
          {"component_masses", numbers(r.component_masses)},
          {"terms",
           {{"infdist", number(r.term_infdist)},
            {"invsimplex2", number(r.term_invsimplex2)},
            {"energy", number(r.term_energy)}}},
          {"U", number(r.U)},
          {"ref_bound", number(r.ref_bound)},
          {"flags", flags}};
}

inline json to_json(const BreitenbergerReport& r) {
  json flags = json::array();
  if (r.degenerate_tau) flags.push_back("degenerate_tau");
  return {{"tau", numbers(r.tau)},           {"tau_abs", number(r.tau_abs)},
          {"var_F", number(r.var_F)},        {"var_A", number(r.var_A)},
          {"product", number(r.product)},    {"modified_product", number(r.modified_product)},
          {"parseval", number(r.parseval)},  {"flags", flags}};
}

inline json to_json(const GohGoodmanReport& r) {
  json flags = json::array();
  if (r.degenerate_tau) flags.push_back("degenerate_tau");
  return {{"tau", numbers(r.tau)},        {"tau_norm", number(r.tau_norm)}, {"var_F", number(r.var_F)},
          {"var_A", number(r.var_A)},     {"product", number(r.product)},   {"bound", r.bound},
          {"holds", r.holds()},           {"flags", flags}};
}

inline json to_json(const InverseReport& r) {
  return {{"tau", numbers(r.tau)},
          {"tau_norm", number(r.tau_norm)},
          {"f4", number(r.f4)},
          {"excess", number(r.excess)},
          {"grad_sup", number(r.grad_sup)},
          {"C_hat", number(r.c_hat)},
          {"L_hat", number(r.l_hat)},
          {"lhs", number(r.lhs)},
          {"lhs_unsquared", number(r.lhs_unsquared)},
          {"rhs", number(r.rhs)},
          {"pythagorean_lower", number(r.pythagorean)},
          {"third_identity", number(r.third_identity)},
          {"constant", number(r.constant)}};
}

inline json to_json(const SufficiencyReport& r) {
  return {{"C_hat_n2", number(r.c_n2)},
          {"C_hat_sampled", number(r.c_sampled)},
          {"ratio", number(r.ratio)},
          {"violation", r.violation}};
}

inline json to_json(const Verdict& v) {
  return {{"name", v.name}, {"value", number(v.value)}, {"lo", number(v.lo)}, {"hi", number(v.hi)},
          {"passed", v.passed}};
}

inline json to_json(const SlopeFit& s) {
  return {{"name", s.name},
          {"slope", number(s.slope)},
          {"intercept", number(s.intercept)},
          {"stderr", number(s.stderr_slope)},
          {"points", s.points}};
}

/// Summary of an experiment: verdicts, slopes and scalar results (rows go to CSV).
inline json to_json(const ExperimentResult& r) {
  json verdicts = json::array(), slopes = json::array(), summary = json::object();
  for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
  for (const auto& s : r.slopes) slopes.push_back(to_json(s));
  for (const auto& [k, v] : r.summary) summary[k] = number(v);
  return {{"experiment", r.id}, {"passed", r.passed()}, {"verdicts", verdicts},
          {"slopes", slopes},   {"summary", summary},   {"rows", r.rows.size()}};
}

/// CSV text: a `#` header block, the column line, then one line per row; every
/// row starts with run_id and seed.
inline std::string to_csv(const ExperimentResult& r, const OutputHeader& h) {
  std::string out;
  out += "# experiment=" + r.id + "\n";
  out += "# config_hash=" + h.config_hash + "\n";
  out += "# resolution=" + h.resolution + "\n";
  out += "# seed=" + std::to_string(h.seed) + "\n";
  out += "# version=" + h.version + "\n";
  out += "run_id,seed";
  for (const auto& c : r.columns) out += "," + c;
  out += "\n";
  for (const auto& row : r.rows) {
    out += h.run_id + "," + std::to_string(h.seed);
    for (double x : row) out += "," + csv_number(x);
    out += "\n";
  }
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::configuration, "cannot write " + path.string());
  out << text;
}

}  // namespace mup
