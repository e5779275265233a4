// treewave_cli: solve the shifted wave equation on T_q and run the checks.
//
//   treewave_cli propagate --q 2 --steps 8 --solver both --initial delta0 --out run1
//   treewave_cli energy --q 3 --initial random --seed 7
//   treewave_cli transforms --q 2 --initial delta1
//   treewave_cli verify --q 2,3 --seed 1

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "treewave/experiment.hpp"
#include "treewave/verify.hpp"

namespace {

using namespace treewave;

struct Options {
  int q = 2;
  std::vector<int> q_list{2, 3};
  int steps = 8;
  std::string mode = "exact";
  std::string solver = "both";
  std::string initial = "delta0";
  std::string schedule = "sqrt";
  std::string out = "treewave_out";
  std::uint64_t seed = 1;
  int radius = -1;
  int data_radius = 2;
  std::size_t expansion_limit = 100000;
  std::string propagator_scale = "1";
};

void add_run_flags(CLI::App* cmd, Options& o, bool with_solver) {
  cmd->add_option("--q", o.q, "branching parameter (degree q+1)")->capture_default_str();
  cmd->add_option("--mode", o.mode, "scalar mode: exact | float")->capture_default_str();
  cmd->add_option("--initial", o.initial,
                  "initial data: delta0 | delta0-velocity | random | JSON {\"f\":...,\"g\":...} | file")
      ->capture_default_str();
  cmd->add_option("--out", o.out, "output directory")->envname("TREEWAVE_OUT")->capture_default_str();
  cmd->add_option("--seed", o.seed, "seed for random initial data")->capture_default_str();
  cmd->add_option("--data-radius", o.data_radius, "support radius of random initial data")->capture_default_str();
  if (!with_solver) return;
  cmd->add_option("--steps", o.steps, "solve for |n| <= steps")->capture_default_str();
  cmd->add_option("--solver", o.solver, "closed | recurrence | both")->capture_default_str();
  cmd->add_option("--schedule", o.schedule, "Huygens shell margin N_n: sqrt | <integer>")->capture_default_str();
  cmd->add_option("--radius", o.radius, "truncation radius (default steps + data radius + 2)");
  cmd->add_option("--expansion-limit", o.expansion_limit,
                  "snapshot CSVs list vertices up to this support size, cells beyond it")
      ->capture_default_str();
}

ExperimentConfig to_config(const Options& o, std::set<Output> outputs) {
  ExperimentConfig c;
  c.q = o.q;
  c.steps = o.steps;
  c.mode = parse_scalar_mode(o.mode);
  c.solver = o.solver;
  c.initial = o.initial;
  if (o.radius >= 0) c.radius = o.radius;
  c.schedule = o.schedule;
  c.out = o.out;
  c.seed = o.seed;
  c.data_radius = o.data_radius;
  c.expansion_limit = o.expansion_limit;
  c.outputs = std::move(outputs);
  return c;
}

void report(const ExperimentResult& r, const char* agreement = "closed/recurrence agreement") {
  std::cout << "manifest: " << r.manifest.string() << '\n';
  if (r.snapshot_count > 0) std::cout << "snapshots: " << r.snapshot_count << '\n';
  std::cout << agreement << ": " << r.agreement << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver and checks for the shifted wave equation on homogeneous trees"};
  app.require_subcommand(1);
  Options o;

  auto* propagate = app.add_subcommand("propagate", "solve and write one CSV per snapshot");
  auto* energy = app.add_subcommand("energy", "kinetic, potential and total energy table");
  auto* equip = app.add_subcommand("equipartition", "K - P by direct sums and by the operator route");
  auto* huygens = app.add_subcommand("huygens", "interior sums inside the light-cone shell");
  auto* transforms = app.add_subcommand("transforms", "Abel and dual Abel transforms of a radial profile");
  auto* verify = app.add_subcommand("verify", "run the property-check suite");
  for (auto* cmd : {propagate, energy, equip, huygens}) add_run_flags(cmd, o, true);
  add_run_flags(transforms, o, false);
  verify->add_option("--q", o.q_list, "branching parameters")->delimiter(',')->capture_default_str();
  verify->add_option("--seed", o.seed, "seed")->capture_default_str();
  verify->add_option("--steps", o.steps, "solve for |n| <= steps")->default_val(6);
  verify->add_option("--data-radius", o.data_radius, "support radius of random data")->capture_default_str();
  verify->add_option("--propagator-scale", o.propagator_scale,
                     "scale applied to C_n f for n != 0; anything but 1 must make checks fail");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      VerifyOptions v;
      v.q_values = o.q_list;
      v.seed = o.seed;
      v.steps = o.steps;
      v.data_radius = o.data_radius;
      v.propagator_scale = parse_rational(o.propagator_scale);
      if (v.steps < 2) throw UsageError("steps: verify needs steps >= 2");
      VerifyReport r = verify_suite(v);
      std::cout << r.to_text();
      return r.passed() ? 0 : 1;
    }
    if (transforms->parsed()) {
      report(run_transforms(to_config(o, {})), "brute/closed agreement");
      return 0;
    }
    std::set<Output> outputs;
    if (propagate->parsed()) outputs = {Output::snapshots, Output::propagation};
    if (energy->parsed()) outputs = {Output::energy};
    if (equip->parsed()) outputs = {Output::equipartition};
    if (huygens->parsed()) outputs = {Output::huygens};
    report(run_experiment(to_config(o, outputs)));
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const TruncationError& e) {
    std::cerr << "truncation error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
