// Command-line driver: solves the Riccati and consistency systems for a
// config file, runs population simulations, deviation studies and
// convergence sweeps, and writes the CSV/JSON artifacts.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "mmlqg/config.hpp"
#include "mmlqg/errors.hpp"
#include "mmlqg/moments.hpp"
#include "mmlqg/nash.hpp"
#include "mmlqg/nce.hpp"
#include "mmlqg/population.hpp"
#include "mmlqg/reports.hpp"
#include "mmlqg/riccati.hpp"
#include "mmlqg/rng.hpp"
#include "mmlqg/study.hpp"
#include "mmlqg/tolerances.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace mmlqg;

struct Check {
  std::string name;
  double value;
  double limit;
  bool pass;
};

struct Artifacts {
  ValidatedParams vp;
  TimeGrid grid;
  RiccatiSolution riccati;
  LinearBvpSystem nce_system;
  NceSolution nce;
  MomentTrajectory moments;
};

json tolerance_block() {
  json t;
  t["riccati_residual"] = kRiccatiResidualTol;
  t["nce_residual"] = kNceResidualTol;
  t["boundary_defect"] = kBoundaryDefectTol;
  t["consistency"] = kConsistencyTol;
  t["mean_field_identity"] = kMeanFieldIdentityTol;
  t["condition_limit"] = kConditionLimit;
  return t;
}

json config_block(const RunConfig& cfg) {
  json c;
  for (const auto& [k, v] : config_echo(cfg)) c[k] = v;
  return c;
}

void add_check(std::vector<Check>& checks, const std::string& name,
               double value, double limit) {
  checks.push_back({name, value, limit, value <= limit});
}

json checks_block(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    json e;
    e["name"] = c.name;
    e["value"] = c.value;
    e["limit"] = c.limit;
    e["pass"] = c.pass;
    arr.push_back(e);
  }
  return arr;
}

bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

// Solves the deterministic layer and collects its standard diagnostics.
Artifacts solve_pipeline(const RunConfig& cfg, std::vector<Check>& checks) {
  ValidatedParams vp = require_valid(cfg.model);
  TimeGrid grid = build_time_grid(cfg.model.T, cfg.M);
  RiccatiSolution riccati = solve_riccati(vp, grid);
  add_check(checks, "riccati_residual", riccati_residual(riccati, vp),
            kRiccatiResidualTol);

  LinearBvpSystem system = assemble_nce(vp, riccati);
  NceSolution nce = solve_nce(vp, riccati);
  const NceResidualReport res = nce_residual(nce, system);
  add_check(checks, "nce_equation_residual", res.worst_equation(),
            kNceResidualTol);
  add_check(checks, "nce_boundary_defect", res.worst_boundary(),
            kBoundaryDefectTol);
  add_check(checks, "nce_condition_number", nce.condition_number,
            kConditionLimit);
  const auto [dev_x, dev_k] = consistency_check(nce, vp, riccati);
  add_check(checks, "consistency_xbar", dev_x, kConsistencyTol);
  add_check(checks, "consistency_k", dev_k, kConsistencyTol);

  MomentTrajectory moments = solve_moments(vp, riccati, nce);
  add_check(checks, "mean_field_identity", mean_field_identity_gap(moments, nce),
            kMeanFieldIdentityTol);

  return Artifacts{std::move(vp),   grid,
                   std::move(riccati), std::move(system),
                   std::move(nce),  std::move(moments)};
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << body;
}

void write_summary(const std::filesystem::path& out_dir, json summary) {
  std::ofstream f(out_dir / "summary.json", std::ios::binary);
  if (!f) throw UsageError("cannot write summary.json");
  f << summary.dump(2) << "\n";
}

json cost_report_block(const CostReport& r) {
  json j;
  j["N"] = r.N;
  j["n_paths"] = r.n_paths;
  j["seed"] = r.seed;
  j["J0_emp"] = r.j0_emp;
  j["se_J0_emp"] = r.j0_se;
  j["J0_bar"] = r.j0_bar;
  j["gap_major"] = r.gap_major;
  j["Ji_emp_mean"] = r.ji_emp_mean;
  j["se_Ji_emp_mean"] = r.ji_mean_se;
  j["Ji_bar"] = r.ji_bar;
  j["gap_minor"] = r.gap_minor;
  j["avg_gap_sq"] = r.avg_gap_sq;
  j["se_avg_gap_sq"] = r.avg_gap_sq_se;
  j["control_energy"] = r.control_energy;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"major-minor mean-field LQG game solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  std::optional<int> workers_override;
  app.add_option("-c,--config", config_path, "config file")->required();
  app.add_option("-o,--out", out_dir, "output directory");
  app.add_option("--seed", seed_override, "override config seed");
  app.add_option("--workers", workers_override, "override worker count");

  auto* cmd_validate = app.add_subcommand("validate", "check parameters");
  auto* cmd_riccati = app.add_subcommand("riccati", "solve the Riccati equation");
  auto* cmd_nce = app.add_subcommand("nce",
                                     "solve the consistency system and verify it");

  auto* cmd_sim = app.add_subcommand("simulate", "closed-loop population run");
  std::optional<int> sim_N;
  std::optional<int> sim_paths;
  bool export_paths = false;
  cmd_sim->add_option("--N", sim_N, "population size");
  cmd_sim->add_option("--paths", sim_paths, "Monte Carlo replications");
  cmd_sim->add_flag("--export-paths", export_paths,
                    "write per-path trajectories (small runs)");

  auto* cmd_gap = app.add_subcommand("gap", "unilateral deviation study");
  std::vector<int> gap_Ns;
  int gap_player = 0;
  std::string gap_family = "standard";
  cmd_gap->add_option("--Ns", gap_Ns, "population sizes");
  cmd_gap->add_option("--player", gap_player, "deviating minor index");
  cmd_gap->add_option("--family", gap_family, "deviation family (standard)");
  std::optional<int> gap_paths;
  cmd_gap->add_option("--paths", gap_paths, "Monte Carlo replications");

  auto* cmd_study = app.add_subcommand("study", "convergence sweep over N");
  std::vector<int> study_Ns;
  std::optional<int> study_paths;
  cmd_study->add_option("--Ns", study_Ns, "population sizes");
  cmd_study->add_option("--paths", study_paths, "Monte Carlo replications");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config(config_path);
    if (seed_override) cfg.seed = *seed_override;
    if (workers_override) cfg.workers = *workers_override;

    const std::filesystem::path out(out_dir);
    std::filesystem::create_directories(out);

    json summary;
    summary["config"] = config_block(cfg);
    summary["tolerances"] = tolerance_block();

    if (cmd_validate->parsed()) {
      summary["command"] = "validate";
      const ParamValidation v = validate_params(cfg.model);
      summary["valid"] = v.ok();
      summary["violations"] = v.violations;
      write_summary(out, summary);
      if (!v.ok()) {
        for (const auto& m : v.violations) std::cerr << "invalid: " << m << "\n";
        return 1;
      }
      std::cout << "parameters valid\n";
      return 0;
    }

    std::vector<Check> checks;

    if (cmd_riccati->parsed()) {
      summary["command"] = "riccati";
      ValidatedParams vp = require_valid(cfg.model);
      TimeGrid grid = build_time_grid(cfg.model.T, cfg.M);
      RiccatiSolution sol = solve_riccati(vp, grid);
      add_check(checks, "riccati_residual", riccati_residual(sol, vp),
                kRiccatiResidualTol);
      write_text(out / "riccati.csv", riccati_csv(sol));
      summary["results"] = {{"P0", sol.at(0)},
                            {"PT", sol.at(grid.M)},
                            {"supremum_bound", sol.supremum_bound}};
      summary["checks"] = checks_block(checks);
      write_summary(out, summary);
    } else if (cmd_nce->parsed()) {
      summary["command"] = "nce";
      Artifacts art = solve_pipeline(cfg, checks);
      write_text(out / "riccati.csv", riccati_csv(art.riccati));
      write_text(out / "nce.csv", nce_csv(art.nce, art.vp));
      write_text(out / "moments.csv", moments_csv(art.moments));
      summary["results"] = {
          {"condition_number", art.nce.condition_number},
          {"x0_hat_0", art.nce.x0_hat.node(0)},
          {"J0_bar", limiting_cost_major(art.vp, art.nce)},
          {"Ji_bar",
           limiting_cost_minor(art.vp, art.riccati, art.nce, art.moments)},
      };
      summary["checks"] = checks_block(checks);
      write_summary(out, summary);
    } else if (cmd_sim->parsed()) {
      summary["command"] = "simulate";
      Artifacts art = solve_pipeline(cfg, checks);
      SimulationConfig sim;
      sim.N = sim_N.value_or(cfg.N);
      sim.n_paths = sim_paths.value_or(cfg.n_paths);
      sim.seed = derive_seed(cfg.seed, "simulate",
                             static_cast<std::uint64_t>(sim.N));
      sim.workers = cfg.workers;
      sim.state_cap = cfg.state_cap;
      sim.retain_paths = export_paths;
      if (export_paths) {
        const double budget = static_cast<double>(sim.N) * sim.n_paths *
                              (cfg.M + 1);
        if (budget > 5e7) {
          throw UsageError("simulate: --export-paths refused, N*paths*(M+1) "
                           "too large");
        }
      }
      const PopulationSample sample =
          simulate_population(art.vp, art.riccati,
                              equilibrium_scenario(art.vp, art.nce), sim);
      const CostReport report =
          empirical_costs(sample, art.vp, art.riccati, art.nce, art.moments);
      write_text(out / "costs.csv", costs_csv(report));
      write_text(out / "moments.csv", moments_csv(art.moments));
      if (export_paths) write_text(out / "paths.csv", paths_csv(sample));
      summary["results"] = cost_report_block(report);
      summary["checks"] = checks_block(checks);
      write_summary(out, summary);
    } else if (cmd_gap->parsed()) {
      summary["command"] = "gap";
      if (gap_family != "standard") {
        throw UsageError("gap: unknown deviation family '" + gap_family + "'");
      }
      Artifacts art = solve_pipeline(cfg, checks);
      const std::vector<int> Ns = gap_Ns.empty() ? cfg.gap_N_list : gap_Ns;
      const ResponderMode mode = cfg.responder_k == "frozen"
                                     ? ResponderMode::kFrozen
                                     : ResponderMode::kRecomputed;
      const GapStudyResult gap = run_gap_study(
          art.vp, art.riccati, art.nce, Ns, gap_paths.value_or(cfg.n_paths),
          cfg.seed, cfg.workers, gap_player, mode);
      write_text(out / "gap.csv", gap_csv(gap.reports,
                                          gap_paths.value_or(cfg.n_paths),
                                          gap.seeds));
      json eps = json::array();
      for (std::size_t i = 0; i < gap.Ns.size(); ++i) {
        eps.push_back({{"N", gap.Ns[i]},
                       {"seed", gap.seeds[i]},
                       {"epsilon_hat", gap.reports[i].epsilon_hat}});
      }
      summary["results"] = {{"epsilon_hat", eps}};
      summary["checks"] = checks_block(checks);
      write_summary(out, summary);
    } else if (cmd_study->parsed()) {
      summary["command"] = "study";
      Artifacts art = solve_pipeline(cfg, checks);
      const std::vector<int> Ns = study_Ns.empty() ? cfg.N_list : study_Ns;
      const ConvergenceTable table = run_convergence_study(
          art.vp, art.riccati, art.nce, art.moments, Ns,
          study_paths.value_or(cfg.n_paths), cfg.seed, cfg.workers);
      write_text(out / "convergence.csv", convergence_csv(table));
      json fits;
      for (const char* column :
           {"avg_gap_sq", "cost_gap_major", "cost_gap_minor", "strategy_gap"}) {
        try {
          const SlopeFit f = fit_loglog_slope(table, column);
          fits[column] = {{"slope", f.slope},
                          {"intercept", f.intercept},
                          {"r_squared", f.r_squared}};
        } catch (const UsageError& e) {
          fits[column] = {{"error", e.what()}};
        }
      }
      summary["results"] = {{"slope_fits", fits}};
      for (const auto& row : table.rows) {
        if (row.status != "ok") {
          checks.push_back({"study_row_N" + std::to_string(row.N), 1.0, 0.0,
                            false});
        }
      }
      summary["checks"] = checks_block(checks);
      write_summary(out, summary);
      std::cout << convergence_csv(table);
      if (fits.contains("avg_gap_sq") &&
          fits["avg_gap_sq"].contains("slope")) {
        std::cout << "avg_gap_sq log-log slope: "
                  << fits["avg_gap_sq"]["slope"].dump() << "\n";
      }
    }

    if (!all_pass(checks)) {
      json failed = json::array();
      for (const auto& c : checks) {
        if (!c.pass) {
          failed.push_back(
              {{"name", c.name}, {"value", c.value}, {"limit", c.limit}});
        }
      }
      std::cerr << "error: " << failed.dump() << "\n";
      return 1;
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "error: " << nlohmann::json{{"type", "usage"},
                                             {"message", e.what()}}
                                  .dump()
              << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "error: " << nlohmann::json{{"type", "solver"},
                                             {"message", e.what()}}
                                  .dump()
              << "\n";
    return 3;
  }
}
