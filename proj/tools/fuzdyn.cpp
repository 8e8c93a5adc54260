// Command-line experiment runner for the fuzzy-dynamics laboratory.
//
// Subcommands:
//   metrics check      randomized metric identity / inequality suites
//   pair classify      trace -> profile -> verdict for a canonical pair
//   transfer           exact transfer-formula check for the u^alpha family
//   example verify     counterexample reports (1 | 2 | 3)
//   shift demo         weighted backward shift report
//   prox sample        proximal-pair coverage over a point mesh
//   sens search        sensitivity witness search
//
// Exit status: 0 when every asserted claim in the invoked report passes,
// 1 when a claim fails (the failing ids go to stderr), 2 on usage errors.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fuzdyn/fuzdyn.hpp"
#include "fuzdyn/random_instances.hpp"
#include "fuzdyn/suites.hpp"

namespace fs = std::filesystem;
using namespace fuzdyn;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 42;
  std::string out_dir = "out";
};

void ensure_out(const GlobalOpts& g) { fs::create_directories(g.out_dir); }

std::string out_path(const GlobalOpts& g, const std::string& name) {
  return (fs::path(g.out_dir) / name).string();
}

std::string config_line(const GlobalOpts& g, const std::string& detail) {
  return "seed=" + std::to_string(g.seed) + " " + detail;
}

// prints one line per claim and returns the exit status
int finish_report(const GlobalOpts& g, const VerifyReport& rep, const std::string& json_name) {
  ensure_out(g);
  Json j = to_json(rep);
  j["seed"] = g.seed;
  write_file(out_path(g, json_name), j.dump(2) + "\n");
  bool all = rep.pass();
  for (const auto& c : rep.claims) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << "\n";
    if (!c.pass) std::cerr << "claim failed: " << c.id << "\n";
  }
  std::cout << (all ? "report PASS: " : "report FAIL: ") << json_name << "\n";
  return all ? 0 : 1;
}

std::vector<Rat> parse_rat_list(const std::string& csv) {
  std::vector<Rat> out;
  std::string cur;
  for (char ch : csv) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(rat_from_string(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(rat_from_string(cur));
  return out;
}

// ---------------------------------------------------------------------------
// pair classify

struct ClassifyOpts {
  std::string level = "base";
  int example = 1;
  std::uint64_t horizon = 362879;
  std::string eps = "1/2";
  std::uint64_t trace_rows = 4096;
};

template <Universe U>
int classify_and_emit(const GlobalOpts& g, const ClassifyOpts& o, const DynSystem<U>& sys,
                      const point_t<U>& a, const point_t<U>& b,
                      const std::vector<std::uint64_t>& structural)
  requires std::same_as<scalar_t<U>, Rat>
{
  ensure_out(g);
  auto grid = default_delta_grid();
  Rat eps = rat_from_string(o.eps);
  bool in_grid = false;
  for (const auto& d : grid) in_grid = in_grid || d == eps;
  if (!in_grid) grid.push_back(eps);
  auto checkpoints = checkpoint_schedule(o.horizon, structural);

  TraceSource src;
  if (o.level == "base") {
    src = base_trace_source(sys, a, b, o.horizon);
  } else if (o.level == "hyper") {
    auto k = iota1(sys.space, a);
    auto l = CompactSet<U>(sys.space, {a, b});
    DynSystem<U> sys_copy = sys;
    src = TraceSource{"hyper", "", o.horizon, [sys_copy, k, l]() {
                        auto ki = k;
                        auto li = l;
                        return [sys_copy, ki, li]() mutable {
                          ki = hyper_apply(sys_copy, ki);
                          li = hyper_apply(sys_copy, li);
                          return hausdorff(sys_copy.space, ki, li);
                        };
                      }};
  } else {
    MetricKind m = metric_from_string(o.level);
    auto k = iota1(sys.space, a);
    auto l = CompactSet<U>(sys.space, {a, b});
    auto ua = u_alpha(sys.space, k, l, Rat(3, 4));
    auto ub = u_alpha(sys.space, k, l, Rat(1, 4));
    src = fuzzy_trace_source(sys, m, ub, ua, o.horizon);
  }

  auto prof = distributional_profile(src, grid, checkpoints);
  ClassifierConfig cfg;
  cfg.eps = eps;
  cfg.min_horizon = std::min<std::uint64_t>(256, o.horizon);
  auto verdict = classify_pair(prof, cfg);

  std::string detail = "level=" + o.level + " example=" + std::to_string(o.example) +
                       " horizon=" + std::to_string(o.horizon);
  Json j;
  j["seed"] = g.seed;
  j["level"] = o.level;
  j["example"] = o.example;
  j["horizon"] = o.horizon;
  j["verdict"] = to_json(verdict);
  write_file(out_path(g, "pair_verdict.json"), j.dump(2) + "\n");
  write_file(out_path(g, "pair_profile.csv"), profile_csv(prof, config_line(g, detail)));
  write_file(out_path(g, "pair_checkpoints.csv"), checkpoints_csv(prof, config_line(g, detail)));
  {
    auto capped = src;
    capped.horizon = std::min<std::uint64_t>(o.horizon, o.trace_rows);
    write_file(out_path(g, "pair_trace.csv"), trace_csv(materialize(capped), config_line(g, detail)));
  }
  std::cout << "verdict written: d1=" << (verdict.d1 ? "true" : "false")
            << " mly=" << (verdict.mly ? "true" : "false") << " ly=" << (verdict.ly ? "true" : "false")
            << " d3=" << (verdict.d3 ? "true" : "false") << "\n";
  return 0;
}

int run_classify(const GlobalOpts& g, const ClassifyOpts& o) {
  switch (o.example) {
    case 1: {
      auto sys = build_example1();
      return classify_and_emit(g, o, sys, GridPoint{0, 0}, GridPoint{0, 1},
                               sys.space.density_set().block_edge_checkpoints(o.horizon));
    }
    case 2: {
      auto sys = build_example2();
      return classify_and_emit(g, o, sys, BandPoint{0, Rat(0)}, BandPoint{0, Rat(1)},
                               sys.space.density_set().block_edge_checkpoints(o.horizon));
    }
    case 3: {
      auto sys = build_example3();
      return classify_and_emit(g, o, sys, BandPoint{0, Rat(0)}, BandPoint{0, Rat(1)},
                               sys.space.density_set().block_edge_checkpoints(o.horizon));
    }
    default:
      throw CLI::ValidationError("--example must be 1, 2 or 3");
  }
}

// ---------------------------------------------------------------------------
// prox sample

int run_prox_sample(const GlobalOpts& g, int example, std::uint64_t mesh_columns,
                    std::uint64_t horizon, const std::string& tol_str) {
  ensure_out(g);
  Rat tol = rat_from_string(tol_str);
  Json cells = Json::array();
  std::size_t covered = 0, pairs = 0;

  auto run = [&](auto sys, auto mesh, auto flip) {
    using P = typename std::decay_t<decltype(mesh)>::value_type;
    for (std::size_t i = 0; i < mesh.size(); ++i)
      for (std::size_t j = i + 1; j < mesh.size(); ++j) {
        ++pairs;
        // candidate pairs: the mesh pair itself and its second-coordinate flips
        std::vector<std::pair<P, P>> cands;
        cands.emplace_back(mesh[i], mesh[j]);
        cands.emplace_back(mesh[i], flip(mesh[j]));
        cands.emplace_back(flip(mesh[i]), mesh[j]);
        bool hit = false;
        Rat best;
        bool first = true;
        for (const auto& [a, b] : cands) {
          if (a == b) continue;
          auto pm = proximal_min(base_trace_source(sys, a, b, horizon));
          if (first || pm.value < best) best = pm.value;
          first = false;
          if (pm.value <= tol) {
            hit = true;
            Json cell;
            cell["a"] = sys.space.point_to_string(mesh[i]);
            cell["b"] = sys.space.point_to_string(mesh[j]);
            cell["witness_a"] = sys.space.point_to_string(a);
            cell["witness_b"] = sys.space.point_to_string(b);
            cell["min_value"] = rat_to_string(pm.value);
            cell["min_index"] = pm.index;
            cells.push_back(cell);
            break;
          }
        }
        if (hit) {
          ++covered;
        } else {
          Json cell;
          cell["a"] = sys.space.point_to_string(mesh[i]);
          cell["b"] = sys.space.point_to_string(mesh[j]);
          cell["covered"] = false;
          cell["best_min"] = first ? "none" : rat_to_string(best);
          cells.push_back(cell);
        }
      }
  };

  if (example == 1) {
    auto sys = build_example1();
    std::vector<GridPoint> mesh;
    for (std::uint64_t n = 0; n < mesh_columns; ++n) mesh.push_back(GridPoint{n, 0});
    run(sys, mesh, [](const GridPoint& p) { return GridPoint{p.n, static_cast<std::uint8_t>(1 - p.s)}; });
  } else if (example == 3) {
    auto sys = build_example3();
    std::vector<BandPoint> mesh;
    for (std::uint64_t n = 0; n < mesh_columns; ++n) mesh.push_back(BandPoint{n, Rat(0)});
    run(sys, mesh, [](const BandPoint& p) { return BandPoint{p.n, Rat(1) - p.t}; });
  } else if (example == 0) {  // shift universe
    auto sys = build_shift(Rat(2));
    std::vector<SeqVec> mesh;
    mesh.push_back(sys.space.zero());
    for (std::uint64_t n = 0; n + 1 < mesh_columns; ++n)
      mesh.push_back(seq_unit(static_cast<std::uint32_t>(n)));
    run(sys, mesh, [](const SeqVec& p) { return p; });
  } else {
    throw CLI::ValidationError("--example must be 0 (shift), 1 or 3");
  }

  Json j;
  j["seed"] = g.seed;
  j["pairs"] = pairs;
  j["covered"] = covered;
  j["coverage"] = pairs ? static_cast<double>(covered) / static_cast<double>(pairs) : 0.0;
  j["cells"] = cells;
  write_file(out_path(g, "prox_sample.json"), j.dump(2) + "\n");
  std::cout << "proximal coverage: " << covered << "/" << pairs << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sens search

int run_sens_search(const GlobalOpts& g, const std::string& target, const std::string& eps_str,
                    const std::string& delta_str, std::uint64_t horizon) {
  ensure_out(g);
  Rat eps = rat_from_string(eps_str);
  Rat delta = rat_from_string(delta_str);
  Json j;
  j["seed"] = g.seed;
  j["eps"] = rat_to_string(eps);
  j["delta"] = rat_to_string(delta);
  j["horizon"] = horizon;

  if (target == "shift") {
    auto sys = build_shift(Rat(2));
    CandidateGen<SeqVec> gen = [&sys, delta, horizon](std::size_t idx) -> std::optional<SeqVec> {
      if (idx >= horizon) return std::nullopt;
      return sys.space.scale(seq_unit(static_cast<std::uint32_t>(idx + 1)), delta / 2);
    };
    auto w = sensitivity_search_base(sys, sys.space.zero(), delta, eps, horizon, gen);
    j["found"] = w.has_value();
    if (w) j["witness"] = witness_json(sys.space, *w);
    write_file(out_path(g, "sens_search.json"), j.dump(2) + "\n");
    std::cout << (w ? "witness found at n=" + std::to_string(w->time_n) : "no witness at this horizon")
              << "\n";
    return 0;
  }
  if (target == "example3-endograph") {
    // the Zadeh extension of example 3 is an endograph isometry: the search
    // is expected to come back empty
    auto sys = build_example3();
    StepFuzzySet<Example3Universe> center(sys.space, {{BandPoint{0, Rat(0)}, Rat(1)}});
    CandidateGen<StepFuzzySet<Example3Universe>> gen =
        [&sys, delta](std::size_t idx) -> std::optional<StepFuzzySet<Example3Universe>> {
      if (idx >= 8) return std::nullopt;
      Rat lvl = delta / Rat(Int(2 + idx));
      return StepFuzzySet<Example3Universe>(
          sys.space, {{BandPoint{0, Rat(0)}, Rat(1)}, {BandPoint{0, Rat(1)}, lvl}});
    };
    auto w = sensitivity_search_fuzzy(sys, MetricKind::endograph, center, delta, eps, horizon, gen);
    j["found"] = w.has_value();
    write_file(out_path(g, "sens_search.json"), j.dump(2) + "\n");
    std::cout << (w ? "witness found (unexpected for an isometry)" : "no witness (isometry)") << "\n";
    return 0;
  }
  throw CLI::ValidationError("--target must be 'shift' or 'example3-endograph'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fuzdyn: a computational laboratory for fuzzy dynamical systems"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a TOML/INI file");

  GlobalOpts g;
  app.add_option("--seed", g.seed, "random seed for all sampling")->envname("FUZZDYN_SEED");
  app.add_option("--out", g.out_dir, "output directory for CSV/JSON artifacts");

  // metrics check
  auto* metrics = app.add_subcommand("metrics", "fuzzy metric suites");
  auto* metrics_check = metrics->add_subcommand("check", "identity and inequality suites");
  std::uint64_t metrics_trials = 1000;
  metrics_check->add_option("--trials", metrics_trials, "number of random pairs");

  // pair classify
  auto* pair = app.add_subcommand("pair", "pair diagnostics");
  auto* classify = pair->add_subcommand("classify", "trace -> profile -> verdict");
  ClassifyOpts cls;
  classify->add_option("--level", cls.level, "base | hyper | sup | skorokhod | sendograph | endograph");
  classify->add_option("--example", cls.example, "example system 1 | 2 | 3");
  classify->add_option("--horizon", cls.horizon, "trace horizon");
  classify->add_option("--eps", cls.eps, "epsilon threshold (exact rational)");
  classify->add_option("--trace-rows", cls.trace_rows, "rows to keep in the trace CSV");

  // transfer
  auto* transfer = app.add_subcommand("transfer", "u^alpha transfer formula check");
  int transfer_example = 1;
  std::string transfer_alphas = "1/4,3/4";
  std::uint64_t transfer_horizon = 64;
  transfer->add_option("--example", transfer_example, "1 | 3 | 0 (shift)");
  transfer->add_option("--alphas", transfer_alphas, "comma list of levels in (0,1)");
  transfer->add_option("--horizon", transfer_horizon, "window length");

  // example verify
  auto* example = app.add_subcommand("example", "counterexample reports");
  auto* verify = example->add_subcommand("verify", "run one example's claim suite");
  int which = 1;
  std::uint64_t verify_trials = 1000;
  std::uint64_t verify_horizon = 0;
  verify->add_option("--which", which, "1 | 2 | 3")->required();
  verify->add_option("--trials", verify_trials, "random trials where applicable");
  verify->add_option("--horizon", verify_horizon, "override the default horizon");

  // shift demo
  auto* shift = app.add_subcommand("shift", "weighted backward shift");
  auto* demo = shift->add_subcommand("demo", "equicontinuity, orbits, transfer");
  std::string weight = "2";
  demo->add_option("--weight", weight, "shift weight > 1 (exact rational)");

  // prox sample
  auto* prox = app.add_subcommand("prox", "proximality drivers");
  auto* sample = prox->add_subcommand("sample", "proximal coverage over a mesh");
  int prox_example = 1;
  std::uint64_t mesh_columns = 4;
  std::uint64_t prox_horizon = 5040;
  std::string prox_tol = "1/1000";
  sample->add_option("--example", prox_example, "0 (shift) | 1 | 3");
  sample->add_option("--mesh", mesh_columns, "mesh size");
  sample->add_option("--horizon", prox_horizon, "orbit horizon");
  sample->add_option("--tol", prox_tol, "proximality tolerance (exact rational)");

  // sens search
  auto* sens = app.add_subcommand("sens", "sensitivity drivers");
  auto* search = sens->add_subcommand("search", "look for a sensitivity witness");
  std::string sens_target = "shift";
  std::string sens_eps = "8";
  std::string sens_delta = "1/4";
  std::uint64_t sens_horizon = 64;
  search->add_option("--target", sens_target, "shift | example3-endograph");
  search->add_option("--eps", sens_eps, "separation constant");
  search->add_option("--delta", sens_delta, "ball radius");
  search->add_option("--horizon", sens_horizon, "time window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (metrics_check->parsed()) {
      auto rep = metric_identity_suite(metrics_trials, g.seed);
      auto rep2 = key_lemma_suite(metrics_trials, g.seed + 1);
      rep.claims.insert(rep.claims.end(), rep2.claims.begin(), rep2.claims.end());
      return finish_report(g, rep, "metrics_check.json");
    }
    if (classify->parsed()) return run_classify(g, cls);
    if (transfer->parsed()) {
      auto alphas = parse_rat_list(transfer_alphas);
      if (alphas.size() < 2) throw CLI::ValidationError("--alphas needs at least two levels");
      std::sort(alphas.begin(), alphas.end());
      VerifyReport rep;
      rep.title = "transfer";
      Rat worst(0);
      auto run_pairs = [&](auto sys, auto k, auto l) {
        for (std::size_t i = 0; i + 1 < alphas.size(); ++i) {
          auto r = transfer_check(sys, k, l, alphas[i + 1], alphas[i], transfer_horizon);
          if (r.max_discrepancy > worst) worst = r.max_discrepancy;
        }
      };
      if (transfer_example == 1) {
        auto sys = build_example1();
        run_pairs(sys, iota1(sys.space, GridPoint{0, 0}),
                  CompactSet<Example1Universe>(sys.space, {GridPoint{0, 0}, GridPoint{0, 1}}));
      } else if (transfer_example == 3) {
        auto sys = build_example3();
        run_pairs(sys, iota1(sys.space, BandPoint{0, Rat(0)}),
                  CompactSet<Example3Universe>(sys.space, {BandPoint{0, Rat(0)}, BandPoint{0, Rat(1)}}));
      } else if (transfer_example == 0) {
        auto sys = build_shift(Rat(2));
        run_pairs(sys, CompactSet<SeqUniverse>(sys.space, {sys.space.zero()}),
                  CompactSet<SeqUniverse>(sys.space, {sys.space.zero(), seq_unit(3)}));
      } else {
        throw CLI::ValidationError("--example must be 0, 1 or 3");
      }
      Claim c{"transfer.exact", worst == 0, {}};
      gallery_detail::put(c, "max_discrepancy", worst);
      gallery_detail::put(c, "horizon", transfer_horizon);
      rep.claims.push_back(std::move(c));
      return finish_report(g, rep, "transfer.json");
    }
    if (verify->parsed()) {
      VerifyReport rep;
      if (which == 1) {
        Example1Options o;
        if (verify_horizon) o.horizon = verify_horizon;
        rep = verify_example1(o);
      } else if (which == 2) {
        Example2Options o;
        if (verify_horizon) o.horizon = std::max<std::uint64_t>(verify_horizon, 65536);
        rep = verify_example2(o);
      } else if (which == 3) {
        Example3Options o;
        o.trials = verify_trials;
        o.seed = g.seed;
        if (verify_horizon) o.horizon = verify_horizon;
        rep = verify_example3(o);
      } else {
        throw CLI::ValidationError("--which must be 1, 2 or 3");
      }
      return finish_report(g, rep, "example" + std::to_string(which) + "_verify.json");
    }
    if (demo->parsed()) {
      ShiftDemoOptions o;
      o.weight = rat_from_string(weight);
      return finish_report(g, shift_demo(o), "shift_demo.json");
    }
    if (sample->parsed()) return run_prox_sample(g, prox_example, mesh_columns, prox_horizon, prox_tol);
    if (search->parsed()) return run_sens_search(g, sens_target, sens_eps, sens_delta, sens_horizon);
    std::cerr << "no subcommand action matched\n";
    return 2;
  } catch (const config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
