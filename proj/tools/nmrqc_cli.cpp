#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nmrqc/acceptance.hpp"
#include "nmrqc/config.hpp"
#include "nmrqc/errors.hpp"
#include "nmrqc/scenarios.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Donor nuclear-spin quantum register models"};
  app.set_version_flag("--version", nmrqc::tool_version);
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::uint64_t seed = 0;
  unsigned jobs = 1, workers = 0;
  auto* run = app.add_subcommand("run", "run the scenarios of a config file");
  run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory")->capture_default_str();
  auto* seed_opt = run->add_option("--seed", seed, "run seed (overrides the config)");
  run->add_option("--jobs", jobs, "concurrent scenarios")->capture_default_str()->check(CLI::PositiveNumber);
  run->add_option("--workers", workers, "threads inside a scenario, 0 = all cores")->capture_default_str();

  auto* list = app.add_subcommand("list", "list registered scenarios");
  bool verbose = false;
  list->add_flag("-v,--verbose", verbose, "show parameters and outputs");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  std::uint64_t verify_seed = nmrqc::default_seed;
  verify->add_option("--seed", verify_seed, "seed for the stochastic checks")->capture_default_str();
  verify->add_option("--workers", workers, "threads, 0 = all cores")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      nmrqc::RunOptions opts;
      opts.out_dir = out_dir;
      if (*seed_opt) opts.seed = seed;
      opts.jobs = jobs;
      opts.workers = workers;
      const auto summary = nmrqc::run_config(nmrqc::load_config(config_path), opts);
      for (std::size_t i = 0; i < summary.scenarios.size(); ++i)
        std::cout << summary.scenarios[i] << ": " << summary.timings[i].seconds << " s\n";
      std::cout << "seed " << summary.seed << ", outputs in " << out_dir << "\n";
      return 0;
    }
    if (*list) {
      for (const auto& s : nmrqc::scenario_registry()) {
        std::cout << s.name << "  " << s.summary << "\n";
        if (!verbose) continue;
        for (const auto& p : s.params)
          std::cout << "    " << p.key << " = " << p.default_value << "    # " << p.help << "\n";
        for (const auto& o : s.outputs) std::cout << "    -> " << o << "\n";
      }
      return 0;
    }
    if (*verify) {
      nmrqc::AcceptanceOptions o;
      o.seed = verify_seed;
      o.workers = workers;
      bool ok = true;
      std::vector<nmrqc::CriterionResult> done;
      for (int id = 1; id <= 13; ++id) {
        done.push_back(nmrqc::run_criterion(id, o));
        std::cout << nmrqc::format_result(done.back()) << std::endl;
        ok = ok && done.back().pass;
      }
      const auto last = nmrqc::final_criterion(done, o);
      std::cout << nmrqc::format_result(last) << std::endl;
      ok = ok && last.pass;
      return ok ? 0 : 1;
    }
  } catch (const nmrqc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
