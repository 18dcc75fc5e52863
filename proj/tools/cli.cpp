#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "treepark/acceptance.hpp"
#include "treepark/config.hpp"
#include "treepark/dist_solver.hpp"
#include "treepark/errors.hpp"
#include "treepark/experiments.hpp"
#include "treepark/io.hpp"
#include "treepark/parking.hpp"
#include "treepark/puiseux.hpp"
#include "treepark/treegen.hpp"

namespace treepark::cli {

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> reps;
  std::optional<std::uint64_t> n;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::size_t dump_trees = 0;
  bool json = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool need_config = true) {
  auto* c = cmd->add_option("--config", flags.config_path, "model/experiment config file (JSON)");
  if (need_config) c->required();
  cmd->add_option("--seed", flags.seed, "master seed (fallback: TREEPARK_SEED, then config)");
  cmd->add_option("--reps", flags.reps, "replicate count override");
  cmd->add_option("--n", flags.n, "tree size override");
  cmd->add_option("--out", flags.out, "output directory for CSV/JSON reports");
  cmd->add_option("--threads", flags.threads, "worker cap (default: hardware)");
  cmd->add_option("--dump-trees", flags.dump_trees,
                  "dump the first N sampled tree/arrival line pairs");
  cmd->add_flag("--json", flags.json, "print the JSON summary to stdout");
}

struct Resolved {
  LoadedConfig cfg;
  RunOptions opts;
};

Resolved resolve(const CommonFlags& flags) {
  Resolved r{load_config_file(flags.config_path), {}};
  r.opts.master_seed = r.cfg.seed;
  if (const char* env = std::getenv("TREEPARK_SEED"); env && !flags.seed)
    r.opts.master_seed = std::strtoull(env, nullptr, 10);
  if (flags.seed) r.opts.master_seed = *flags.seed;
  r.opts.threads = flags.threads.value_or(r.cfg.threads);
  if (flags.out)
    r.opts.out_dir = *flags.out;
  else if (r.cfg.out_dir)
    r.opts.out_dir = r.cfg.out_dir;
  r.opts.dump_trees = flags.dump_trees;
  r.opts.config_echo = r.cfg.raw;
  return r;
}

const nlohmann::json& experiment_block(const LoadedConfig& cfg) {
  static const nlohmann::json empty = nlohmann::json::object();
  return cfg.experiment.is_object() ? cfg.experiment : empty;
}

std::uint64_t pick_reps(const CommonFlags& flags, const nlohmann::json& exp,
                        std::uint64_t fallback) {
  if (flags.reps) return *flags.reps;
  return exp.value("reps", fallback);
}

void print_report(const EstimateReport& r, bool as_json) {
  if (as_json) {
    std::cout << r.to_json().dump(2) << "\n";
    return;
  }
  std::printf("%s: estimate %.8g +- %.3g over %llu replicates", r.name.c_str(), r.estimate,
              r.std_error, static_cast<unsigned long long>(r.replicates));
  if (r.reference) std::printf(", reference %.8g", *r.reference);
  if (r.reference_diverged) std::printf(", reference +inf");
  if (r.z) std::printf(", z = %.3f", *r.z);
  if (r.censored) std::printf(", censored %llu", static_cast<unsigned long long>(r.censored));
  if (!r.note.empty()) std::printf(" (%s)", r.note.c_str());
  std::printf("\n");
}

int band_exit(const EstimateReport& r) { return r.in_band() ? 0 : 1; }

// ------------------------------------------------------------- subcommands

int cmd_classify(const CommonFlags& flags) {
  const Resolved r = resolve(flags);
  const Model& m = r.cfg.model;
  const auto& mm = m.moments();
  const Regime regime = classify(m);
  const double tmax = t_max(m);
  const double phi1 = mean_flux_curve(m, 1.0);
  if (flags.json) {
    nlohmann::json j{{"e_sb_m", mm.e_sb_m},
                     {"e_m", mm.e_m},
                     {"e_q", mm.e_q},
                     {"sigma2", mm.sigma2},
                     {"theta", mm.theta},
                     {"regime", phase_name(regime.phase)},
                     {"hypothesis_e_sb_m_le_1", regime.hypothesis_holds},
                     {"t_max", std::isfinite(tmax) ? nlohmann::json(tmax) : "infinity"},
                     {"phi_1", std::isfinite(phi1) ? nlohmann::json(phi1) : "infinity"}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("E_nubar[m] = %.10g\nE_nu[m]    = %.10g\nE_nu[q]    = %.10g\n", mm.e_sb_m,
                mm.e_m, mm.e_q);
    std::printf("Sigma^2    = %.10g\nTheta      = %.10g\n", mm.sigma2, mm.theta);
    std::printf("regime     = %s%s\n", phase_name(regime.phase),
                regime.hypothesis_holds ? "" : " (E_nubar[m] > 1: theorem hypothesis fails)");
    if (std::isfinite(tmax))
      std::printf("t_max      = %.10g\n", tmax);
    else
      std::printf("t_max      = infinity\n");
    if (std::isfinite(phi1))
      std::printf("Phi(1)     = %.10g\n", phi1);
    else
      std::printf("Phi(1)     = infinity\n");
  }
  return 0;
}

int cmd_park(const CommonFlags& flags, const std::string& input) {
  std::ifstream in(input);
  if (!in) throw Error(Errc::ConfigError, "cannot read " + input);
  std::string tree_line, arrival_line;
  std::getline(in, tree_line);
  std::getline(in, arrival_line);
  const PlaneTree tree = PlaneTree::from_line(tree_line);
  const std::vector<std::int32_t> arrivals = parse_count_line(arrival_line);
  const ParkingResult pr = park(tree, arrivals);
  const ClusterStats cs = clusters(tree, pr.parked);
  if (flags.json) {
    nlohmann::json j{{"n", tree.size()},
                     {"root_flux", pr.root_flux},
                     {"parked", nlohmann::json::array()},
                     {"edge_flux", pr.edge_flux},
                     {"visits", pr.visits},
                     {"cluster_sizes", cs.sizes}};
    for (std::size_t i = 0; i < tree.size(); ++i)
      if (pr.parked[i]) j["parked"].push_back(i);
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("n = %zu, root_flux = %lld\n", tree.size(),
                static_cast<long long>(pr.root_flux));
    std::printf("parked:");
    for (std::size_t i = 0; i < tree.size(); ++i)
      if (pr.parked[i]) std::printf(" %zu", i);
    std::printf("\ncluster sizes:");
    for (auto s : cs.sizes) std::printf(" %lld", static_cast<long long>(s));
    std::printf("\n");
  }
  return 0;
}

int cmd_simulate(const CommonFlags& flags) {
  const Resolved r = resolve(flags);
  const auto& exp = experiment_block(r.cfg);
  require_keys(exp, {"name", "reps", "size_cap", "t", "n", "root_parked_reps"}, "experiment");
  const std::string name = exp.value("name", "root_parked");
  RunOptions opts = r.opts;
  opts.size_cap = exp.value("size_cap", opts.size_cap);
  EstimateReport report;
  if (name == "root_parked") {
    report = estimate_root_parked(r.cfg.model, pick_reps(flags, exp, 100000), opts);
  } else if (name == "mean_flux") {
    report = estimate_mean_flux(r.cfg.model, exp.value("t", 1.0),
                                pick_reps(flags, exp, 100000), opts);
  } else if (name == "flux_lln") {
    const std::size_t n = flags.n.value_or(exp.value("n", 2000));
    report = estimate_flux_lln(r.cfg.model, n, pick_reps(flags, exp, 500), opts,
                               exp.value("root_parked_reps", 1000000));
  } else {
    throw Error(Errc::ConfigError, "unknown simulate experiment '" + name + "'");
  }
  print_report(report, flags.json);
  return band_exit(report);
}

int cmd_law(const CommonFlags& flags) {
  const Resolved r = resolve(flags);
  const auto& exp = experiment_block(r.cfg);
  require_keys(exp, {"name", "N", "max_iters", "tol", "window"}, "experiment");
  const std::size_t N = exp.value("N", 400);
  const std::size_t max_iters = exp.value("max_iters", 20000);
  const double tol = exp.value("tol", 1e-12);
  const std::size_t window = exp.value("window", 32);
  const LawResult lr = iterate_law(r.cfg.model, N, max_iters, tol);
  const DistVector flux = flux_law(lr.law);
  nlohmann::json j{{"p0", lr.law.pmf[0]},
                   {"mean", law_mean(lr.law)},
                   {"flux_mean", law_mean(flux)},
                   {"mass_defect", lr.law.mass_defect},
                   {"iterations", lr.iterations},
                   {"last_tv", lr.last_tv}};
  try {
    j["tail_rate"] = tail_rate(lr.law, window);
  } catch (const Error& e) {
    j["tail_rate"] = nullptr;
    j["tail_rate_error"] = e.what();
  }
  if (r.opts.out_dir) {
    CsvWriter csv(*r.opts.out_dir / "law.csv", {"k", "p_k"});
    for (std::size_t k = 0; k < lr.law.pmf.size(); ++k)
      csv.row({std::to_string(k), format_double(lr.law.pmf[k])});
    csv.close();
    nlohmann::json out = j;
    out["config"] = r.cfg.raw;
    write_json_file(*r.opts.out_dir / "law.json", out);
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_series(const CommonFlags& flags, bool emit_f) {
  const Resolved r = resolve(flags);
  const auto& exp = experiment_block(r.cfg);
  require_keys(exp, {"name", "D", "w_order", "window"}, "experiment");
  const std::size_t D = exp.value("D", 8);
  const std::size_t w_order = exp.value("w_order", 64);
  const std::size_t window = exp.value("window", 16);
  const Model& m = r.cfg.model;
  nlohmann::json j;
  j["theta"] = theta(m);
  const double p0 = default_p0(m);
  j["p0"] = p0;
  try {
    const auto [cm, cp] = puiseux_c(m);
    j["c_minus"] = cm;
    j["c_plus"] = cp;
    const PuiseuxBranch bm = puiseux_branch(m, BranchSign::Minus, D);
    const PuiseuxBranch bp = puiseux_branch(m, BranchSign::Plus, D);
    j["branch_minus"] = std::vector<double>(bm.c.begin() + 1, bm.c.end());
    j["branch_plus"] = std::vector<double>(bp.c.begin() + 1, bp.c.end());
  } catch (const Error& e) {
    j["branches"] = nullptr;
    j["branch_error"] = e.what();
  }
  const TruncatedSeries w = w_series(m, w_order, p0);
  j["w_coefficients"] = w.coeffs();
  try {
    j["radius_estimate"] = 1.0 / coeff_ratio(w, window);
  } catch (const Error& e) {
    j["radius_estimate"] = nullptr;
    j["radius_error"] = e.what();
  }
  if (emit_f) {
    const BivariateSeries F = f_series(m, D, p0);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i <= D; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t jj = 0; i + jj <= D; ++jj) row.push_back(F.coeff(i, jj));
      rows.push_back(row);
    }
    j["f_coefficients"] = rows;
  }
  if (r.opts.out_dir) {
    nlohmann::json out = j;
    out["config"] = r.cfg.raw;
    write_json_file(*r.opts.out_dir / "series.json", out);
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_fringe(const CommonFlags& flags) {
  const Resolved r = resolve(flags);
  const auto& exp = experiment_block(r.cfg);
  require_keys(exp, {"name", "reps", "n", "k", "max_pattern_size"}, "experiment");
  const std::size_t n = flags.n.value_or(exp.value("n", 10000));
  const FringeTable table =
      fringe_census(r.cfg.model, n, exp.value("k", 0), exp.value("max_pattern_size", 6),
                    pick_reps(flags, exp, 200), r.opts);
  double worst = 0.0;
  for (const auto& row : table.rows) worst = std::max(worst, std::abs(row.z));
  if (flags.json) {
    nlohmann::json j{{"patterns", table.rows.size()},
                     {"worst_abs_z", worst},
                     {"residual_mean", table.residual_mean},
                     {"partitions_ok", table.partitions_ok}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("fringe k=%zu: %zu patterns, worst |z| = %.3f, residual %.6f\n", table.k,
                table.rows.size(), worst, table.residual_mean);
  }
  return worst <= 4.0 && table.partitions_ok ? 0 : 1;
}

int cmd_clusters(const CommonFlags& flags) {
  const Resolved r = resolve(flags);
  const auto& exp = experiment_block(r.cfg);
  require_keys(exp, {"name", "reps", "n_list"}, "experiment");
  std::vector<std::size_t> n_list = exp.value("n_list", std::vector<std::size_t>{1000, 10000});
  if (flags.n) n_list = {static_cast<std::size_t>(*flags.n)};
  const auto rows = cluster_experiment(r.cfg.model, n_list, pick_reps(flags, exp, 200), r.opts);
  for (const auto& row : rows)
    std::printf("n=%zu: C_max/n = %.5f +- %.5f, median C_max/ln n = %.3f, "
                "P(C_2<=30 ln n) = %.3f\n",
                row.n, row.mean_cmax_over_n, row.se_cmax_over_n, row.median_cmax_over_logn,
                row.frac_c2_le_30logn);
  return 0;
}

int cmd_giant(const CommonFlags& flags) {
  const Resolved r = resolve(flags);
  const auto& exp = experiment_block(r.cfg);
  require_keys(exp, {"name", "reps", "K_list", "margin_fraction", "graft_cap"}, "experiment");
  const std::vector<std::size_t> ks = exp.value("K_list", std::vector<std::size_t>{20, 40, 80});
  const double margin_fraction = exp.value("margin_fraction", 0.25);
  RunOptions opts = r.opts;
  opts.graft_cap = exp.value("graft_cap", opts.graft_cap);
  const std::uint64_t reps = pick_reps(flags, exp, 20000);
  int code = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const std::size_t K = ks[i];
    const auto margin = static_cast<std::size_t>(margin_fraction * static_cast<double>(K));
    opts.master_seed = mix_seed(r.opts.master_seed, 77000 + K);
    const EstimateReport rep = estimate_giant_constant(r.cfg.model, K, margin, reps, opts);
    print_report(rep, flags.json);
  }
  return code;
}

int cmd_tails(const CommonFlags& flags) {
  const Resolved r = resolve(flags);
  const auto& exp = experiment_block(r.cfg);
  require_keys(exp, {"name", "reps", "thresholds", "size_cap"}, "experiment");
  std::vector<std::int64_t> thresholds =
      exp.value("thresholds", std::vector<std::int64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  RunOptions opts = r.opts;
  opts.size_cap = exp.value("size_cap", opts.size_cap);
  const TailTable table =
      tail_experiment(r.cfg.model, pick_reps(flags, exp, 1000000), thresholds, opts);
  if (flags.json) {
    nlohmann::json j{{"slope", table.slope},
                     {"fitted_points", table.fitted_points},
                     {"censored", table.censored},
                     {"subcritical", table.subcritical}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("tails: slope %.4f over %zu points, censored %llu%s\n", table.slope,
                table.fitted_points, static_cast<unsigned long long>(table.censored),
                table.note.empty() ? "" : (" [" + table.note + "]").c_str());
    for (const auto& row : table.rows)
      std::printf("  P(phi >= %lld) = %.3e (%llu hits)\n",
                  static_cast<long long>(row.threshold), row.survival,
                  static_cast<unsigned long long>(row.hits));
  }
  return 0;
}

int cmd_repro(const CommonFlags& flags) {
  AcceptanceOptions opts;
  if (flags.seed) opts.seed = *flags.seed;
  if (flags.threads) opts.threads = *flags.threads;
  if (flags.out) opts.out_dir = *flags.out;
  const auto results = run_acceptance(opts);
  const int failures = report_acceptance(results);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"parking on Galton-Watson trees: phase classifier, solvers, experiments"};
  app.name("treepark");
  app.require_subcommand(1);

  CommonFlags classify_flags, park_flags, sim_flags, law_flags, series_flags, fringe_flags,
      clusters_flags, giant_flags, tails_flags, repro_flags;
  std::string park_input;
  bool emit_f = false;

  add_common(app.add_subcommand("classify", "moments, Theta, regime, t_max, Phi(1)"),
             classify_flags);
  auto* park_cmd = app.add_subcommand("park", "run the parking process on a tree file");
  add_common(park_cmd, park_flags, /*need_config=*/false);
  park_cmd->add_option("--input", park_input, "two-line file: degrees, arrivals")->required();
  add_common(app.add_subcommand("simulate", "root-parked / mean-flux / flux-LLN experiments"),
             sim_flags);
  add_common(app.add_subcommand("law", "law of X by fixed-point iteration of (DE)"), law_flags);
  auto* series_cmd =
      app.add_subcommand("series", "F coefficients, Puiseux branches, W series");
  add_common(series_cmd, series_flags);
  series_cmd->add_flag("--emit-f", emit_f, "include the F(x,y) coefficient matrix");
  add_common(app.add_subcommand("fringe", "fringe-subtree census"), fringe_flags);
  add_common(app.add_subcommand("clusters", "parked-cluster geometry over n"), clusters_flags);
  add_common(app.add_subcommand("giant", "giant-component constant on sin-tree truncations"),
             giant_flags);
  add_common(app.add_subcommand("tails", "flux survival function and slope"), tails_flags);
  auto* repro_cmd = app.add_subcommand("repro", "run the pinned acceptance suite");
  add_common(repro_cmd, repro_flags, /*need_config=*/false);

  std::vector<const char*> argv;
  argv.push_back("treepark");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("classify")) return cmd_classify(classify_flags);
    if (app.got_subcommand("park")) return cmd_park(park_flags, park_input);
    if (app.got_subcommand("simulate")) return cmd_simulate(sim_flags);
    if (app.got_subcommand("law")) return cmd_law(law_flags);
    if (app.got_subcommand("series")) return cmd_series(series_flags, emit_f);
    if (app.got_subcommand("fringe")) return cmd_fringe(fringe_flags);
    if (app.got_subcommand("clusters")) return cmd_clusters(clusters_flags);
    if (app.got_subcommand("giant")) return cmd_giant(giant_flags);
    if (app.got_subcommand("tails")) return cmd_tails(tails_flags);
    if (app.got_subcommand("repro")) return cmd_repro(repro_flags);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}

}  // namespace treepark::cli
