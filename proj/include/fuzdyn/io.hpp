#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fuzdyn/chaos.hpp"
#include "fuzdyn/gallery.hpp"

namespace fuzdyn {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// CSV: fixed column schemas, rationals as exact "p/q" strings

struct CsvWriter {
  std::string text;

  void header_comment(const std::string& line) { text += "# " + line + "\n"; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text += ',';
      text += cells[i];
    }
    text += '\n';
  }
};

// columns: j, d_j, d_j_approx
inline std::string trace_csv(const DistanceTrace& trace, const std::string& config_line) {
  CsvWriter w;
  w.header_comment(config_line);
  w.row({"j", "d_j", "d_j_approx"});
  for (std::size_t j = 0; j < trace.values.size(); ++j)
    w.row({std::to_string(j + 1), rat_to_string(trace.values[j]),
           format_double(trace.values[j].convert_to<double>())});
  return w.text;
}

// columns: delta, phi_lower, phi_upper
inline std::string profile_csv(const DistributionalProfile& prof, const std::string& config_line) {
  CsvWriter w;
  w.header_comment(config_line);
  w.row({"delta", "phi_lower", "phi_upper"});
  for (std::size_t d = 0; d < prof.delta_grid.size(); ++d)
    w.row({rat_to_string(prof.delta_grid[d]), rat_to_string(prof.phi_lower[d]),
           rat_to_string(prof.phi_upper[d])});
  return w.text;
}

// columns: checkpoint, mean_approx, plus per-delta below ratios
inline std::string checkpoints_csv(const DistributionalProfile& prof, const std::string& config_line) {
  CsvWriter w;
  w.header_comment(config_line);
  std::vector<std::string> head{"m", "mean_approx"};
  for (const auto& d : prof.delta_grid) head.push_back("below(" + rat_to_string(d) + ")");
  w.row(head);
  for (std::size_t c = 0; c < prof.checkpoints.size(); ++c) {
    std::vector<std::string> cells{std::to_string(prof.checkpoints[c]),
                                   format_double(prof.mean_approx[c])};
    for (std::size_t d = 0; d < prof.delta_grid.size(); ++d)
      cells.push_back(rat_to_string(prof.below_ratios[d][c]));
    w.row(cells);
  }
  return w.text;
}

// ---------------------------------------------------------------------------
// JSON mirrors

inline Json to_json(const PairVerdict& v) {
  Json j;
  j["horizon"] = v.horizon;
  j["proximal"] = v.proximal;
  j["min_value"] = rat_to_string(v.min_value);
  j["min_index"] = v.min_index;
  j["ly"] = v.ly;
  j["tail_max_value"] = rat_to_string(v.tail_max_value);
  j["mly"] = v.mly;
  j["mean_min_approx"] = format_double(v.mean_min_approx);
  j["mean_max_approx"] = format_double(v.mean_max_approx);
  j["d1"] = v.d1;
  j["d1half"] = v.d1half;
  j["d2"] = v.d2;
  j["d2half"] = v.d2half;
  j["d2half_insufficient_grid"] = v.d2half_insufficient_grid;
  j["d3"] = v.d3;
  j["d3_insufficient_grid"] = v.d3_insufficient_grid;
  j["phi_at_eps"] = rat_to_string(v.phi_at_eps);
  j["phi_upper_floor"] = rat_to_string(v.phi_upper_floor);
  j["config"] = {{"eps", rat_to_string(v.config.eps)},
                 {"prox_tol", rat_to_string(v.config.prox_tol)},
                 {"zero_tol", rat_to_string(v.config.zero_tol)},
                 {"one_tol", rat_to_string(v.config.one_tol)},
                 {"sep_margin", rat_to_string(v.config.sep_margin)},
                 {"mean_tol", rat_to_string(v.config.mean_tol)}};
  return j;
}

inline Json to_json(const ScrambledMatrix& m) {
  Json j = Json::array();
  for (const auto& e : m.entries) {
    Json cell;
    cell["i"] = e.i;
    cell["j"] = e.j;
    cell["verdict"] = to_json(e.verdict);
    j.push_back(cell);
  }
  return j;
}

// columns: pair_i, pair_j, flag, evidence
inline std::string matrix_csv(const ScrambledMatrix& m, const std::string& config_line) {
  CsvWriter w;
  w.header_comment(config_line);
  w.row({"pair_i", "pair_j", "flag", "evidence"});
  auto flag_row = [&](const MatrixEntry& e, const std::string& name, bool value,
                      const std::string& evidence) {
    w.row({std::to_string(e.i), std::to_string(e.j), name + "=" + (value ? "1" : "0"), evidence});
  };
  for (const auto& e : m.entries) {
    flag_row(e, "proximal", e.verdict.proximal, rat_to_string(e.verdict.min_value));
    flag_row(e, "ly", e.verdict.ly, rat_to_string(e.verdict.tail_max_value));
    flag_row(e, "mly", e.verdict.mly, format_double(e.verdict.mean_max_approx));
    flag_row(e, "d1", e.verdict.d1, rat_to_string(e.verdict.phi_at_eps));
    flag_row(e, "d2", e.verdict.d2, rat_to_string(e.verdict.phi_upper_floor));
    flag_row(e, "d3", e.verdict.d3, rat_to_string(e.verdict.d3_min_gap));
  }
  return w.text;
}

inline Json to_json(const Claim& c) {
  Json j;
  j["id"] = c.id;
  j["pass"] = c.pass;
  Json ev;
  for (const auto& [k, v] : c.evidence) ev[k] = v;
  j["evidence"] = ev;
  return j;
}

inline Json to_json(const VerifyReport& r) {
  Json j;
  j["title"] = r.title;
  j["pass"] = r.pass();
  Json claims = Json::array();
  for (const auto& c : r.claims) claims.push_back(to_json(c));
  j["claims"] = claims;
  return j;
}

inline Json to_json(const MetricReport& r) {
  Json j;
  j["pass"] = r.pass();
  j["pairs_checked"] = r.pairs_checked;
  j["triples_checked"] = r.triples_checked;
  Json v = Json::array();
  for (const auto& viol : r.violations) v.push_back({{"kind", viol.kind}, {"detail", viol.detail}});
  j["violations"] = v;
  return j;
}

inline Json to_json(const BridgeReport& r) {
  Json j;
  j["pass"] = r.pass();
  j["steps"] = r.steps;
  j["exact_escalations"] = r.exact_escalations;
  Json v = Json::array();
  for (const auto& viol : r.violations)
    v.push_back({{"n", viol.n}, {"delta", rat_to_string(viol.delta)}, {"which", viol.which}});
  j["violations"] = v;
  return j;
}

template <Universe U>
Json witness_json(const U& space, const SensitivityWitness<point_t<U>>& w) {
  Json j;
  j["center"] = space.point_to_string(w.center);
  j["neighbor"] = space.point_to_string(w.neighbor);
  j["n"] = w.time_n;
  j["delta"] = rat_to_string(w.delta);
  j["eps"] = rat_to_string(w.eps);
  j["initial_distance"] = rat_to_string(w.initial_distance);
  j["separation"] = rat_to_string(w.separation);
  return j;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open output file: " + path);
  out << content;
}

}  // namespace fuzdyn
