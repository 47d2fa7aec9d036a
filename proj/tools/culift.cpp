// culift: command-line front end for the lifting library.
//
// Single-shot subcommands read the JSON schemas and print JSON on stdout.
// `run` and `verify` drive the batch suites; exit status is 1 when any check
// fails and 2 on usage or input errors.

#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "culift/experiment.hpp"
#include "culift/io.hpp"
#include "culift/lifting.hpp"
#include "culift/metrics.hpp"

namespace fs = std::filesystem;
using namespace culift;
using nlohmann::json;

namespace {

fs::path default_out() {
  if (const char* env = std::getenv("CULIFT_OUT"); env && *env) return env;
  return "culift-out";
}

RegionPtr load_region(const std::string& path) {
  return path.empty() ? nullptr : io::region_from_json(io::read_file(path));
}

RankMeasure load_morphism(const std::string& path, const RegionPtr& region) {
  return io::morphism_from_json(io::read_file(path), region);
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

struct BatchOptions {
  std::string suite;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> replay;
  std::optional<std::size_t> threads;
  std::string out;
};

experiment::ExperimentConfig load_config(const BatchOptions& o) {
  auto cfg = o.config.empty() ? experiment::ExperimentConfig{} : experiment::config_from_json(io::read_file(o.config));
  if (o.seed) cfg.seed = *o.seed;
  if (o.trials) cfg.trials = *o.trials;
  if (o.threads) cfg.threads = *o.threads;
  if (!o.out.empty()) cfg.out = o.out;
  if (cfg.out.empty()) cfg.out = default_out();
  cfg.validate();
  return cfg;
}

std::vector<std::string> selected(const std::string& suite) {
  if (suite == "all") return experiment::suite_names();
  return {suite};
}

int run_batch(const BatchOptions& o, bool write) {
  const auto cfg = load_config(o);
  bool ok = true;
  for (const auto& name : selected(o.suite)) {
    const auto report = experiment::run_suite(name, cfg, o.replay);
    if (write) {
      experiment::write_report(report, cfg.out);
      if (o.replay) experiment::write_csv(report, std::cout);
    }
    std::cout << name << ": " << report.passed() << "/" << report.rows.size() << " passed, "
              << report.cover_failures() << " cover failures of " << report.covers() << " -> "
              << (report.ok() ? "PASS" : "FAIL") << '\n';
    ok = ok && report.ok();
  }
  return ok ? 0 : 1;
}

void add_batch_options(CLI::App* cmd, BatchOptions& o) {
  cmd->add_option("suite", o.suite, "suite name or 'all'")->required();
  cmd->add_option("--config", o.config, "experiment config (JSON)");
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--trials", o.trials, "number of instances");
  cmd->add_option("--replay", o.replay, "re-run a single instance id");
  cmd->add_option("--threads", o.threads, "worker threads");
  cmd->add_option("--out", o.out, "report directory (default $CULIFT_OUT or ./culift-out)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cu-morphism lifting toolkit"};
  app.require_subcommand(1);

  std::string region_path, a_path, b_path, out_path;
  std::vector<std::string> alphas, betas;
  double delta = 0.0;
  std::optional<double> delta0;

  auto* dcu = app.add_subcommand("dcu", "bottleneck d_cu between two morphisms");
  dcu->add_option("alpha", a_path)->required();
  dcu->add_option("beta", b_path)->required();
  dcu->add_option("--region", region_path);

  auto* dw = app.add_subcommand("dw", "d_W between two normal matrices");
  dw->add_option("x", a_path)->required();
  dw->add_option("y", b_path)->required();
  dw->add_option("--region", region_path)->required();

  auto* du = app.add_subcommand("du", "d_U bracket and witness unitary");
  du->add_option("x", a_path)->required();
  du->add_option("y", b_path)->required();

  auto* marriage = app.add_subcommand("marriage", "check d_cu of sums against the best pairing");
  marriage->add_option("--alphas", alphas)->required();
  marriage->add_option("--betas", betas)->required();
  marriage->add_option("--region", region_path);

  auto* cover = app.add_subcommand("cover", "almost delta-cover with certificates");
  cover->add_option("alpha", a_path)->required();
  cover->add_option("--delta", delta)->required();
  cover->add_option("--region", region_path);

  auto* lift_cmd = app.add_subcommand("lift", "finite-dimensional lift within 6 delta");
  lift_cmd->add_option("alpha", a_path)->required();
  lift_cmd->add_option("--delta", delta)->required();
  lift_cmd->add_option("--region", region_path);

  auto* exact = app.add_subcommand("exactlift", "aligned Cauchy sequence of lifts");
  exact->add_option("alpha", a_path)->required();
  exact->add_option("--delta", delta0, "starting delta (default: region diameter)");
  exact->add_option("--region", region_path);

  experiment::ExperimentConfig gen_cfg;
  std::string gen_config;
  std::optional<std::uint64_t> gen_seed;
  std::optional<std::size_t> gen_trials;
  auto* gen = app.add_subcommand("gen", "write seeded random instances");
  gen->add_option("--config", gen_config);
  gen->add_option("--seed", gen_seed);
  gen->add_option("--trials", gen_trials);
  gen->add_option("--out", out_path);

  BatchOptions run_opts, verify_opts;
  auto* run = app.add_subcommand("run", "run a suite and write CSV + JSON reports");
  add_batch_options(run, run_opts);
  auto* verify = app.add_subcommand("verify", "run a suite and report pass/fail only");
  add_batch_options(verify, verify_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*dcu) {
      const auto region = load_region(region_path);
      print(io::to_json(d_cu(load_morphism(a_path, region), load_morphism(b_path, region))));
    } else if (*dw) {
      const auto region = load_region(region_path);
      const NormalMatrix x(io::matrix_from_json(io::read_file(a_path)));
      const NormalMatrix y(io::matrix_from_json(io::read_file(b_path)));
      print({{"value", io::real_to_json(d_w(x, y, region))}});
    } else if (*du) {
      const NormalMatrix x(io::matrix_from_json(io::read_file(a_path)));
      const NormalMatrix y(io::matrix_from_json(io::read_file(b_path)));
      print(io::to_json(d_u_bracket(x, y)));
    } else if (*marriage) {
      const auto region = load_region(region_path);
      std::vector<RankMeasure> as, bs;
      for (const auto& p : alphas) as.push_back(load_morphism(p, region));
      for (const auto& p : betas) bs.push_back(load_morphism(p, region));
      const auto check = marriage_check(as, bs);
      print({{"lhs", io::real_to_json(check.lhs)}, {"rhs", io::real_to_json(check.rhs)}, {"holds", check.holds()}});
      return check.holds() ? 0 : 1;
    } else if (*cover) {
      const auto alpha = load_morphism(a_path, load_region(region_path));
      const auto c = build_cover(alpha, delta);
      print(io::to_json(c, *alpha.region()));
      return c.certificates.all() ? 0 : 1;
    } else if (*lift_cmd) {
      const auto alpha = load_morphism(a_path, load_region(region_path));
      print(io::to_json(lift(alpha, delta)));
    } else if (*exact) {
      const auto alpha = load_morphism(a_path, load_region(region_path));
      const auto r = exact_lift(alpha, delta0);
      json eig = json::array();
      for (const auto& l : r.x.eigenvalues()) eig.push_back(io::to_json(l));
      print({{"eigenvalues", std::move(eig)},
             {"deltas", r.deltas},
             {"bounds", r.bounds},
             {"step_distances", r.step_distances},
             {"average_decay", io::real_to_json(r.average_decay())},
             {"normality_defect", r.x.normality_defect()},
             {"final_distance", r.final_distance},
             {"matrix", io::to_json(r.x.entries())}});
    } else if (*gen) {
      auto cfg = gen_config.empty() ? experiment::ExperimentConfig{} : experiment::config_from_json(io::read_file(gen_config));
      if (gen_seed) cfg.seed = *gen_seed;
      if (gen_trials) cfg.trials = *gen_trials;
      const fs::path dir = out_path.empty() ? (cfg.out.empty() ? default_out() : cfg.out) : fs::path(out_path);
      for (const auto& p : experiment::generate(cfg, dir)) std::cout << p.string() << '\n';
    } else if (*run) {
      return run_batch(run_opts, true);
    } else if (*verify) {
      return run_batch(verify_opts, false);
    }
  } catch (const LiftError& e) {
    std::cerr << "culift: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "culift: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
