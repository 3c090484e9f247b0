#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "einselect/scenarios.hpp"

int main(int argc, char** argv) {
  using namespace einselect;

  CLI::App app{"einselect - decoherence and einselection experiment driver"};
  app.require_subcommand(0, 1);

  auto* list = app.add_subcommand("list", "print scenario schemas as JSON");

  scenarios::RunOptions opt;
  std::string scenario, preset, config, out_dir;
  uint64_t seed = 0;
  bool seed_set = false, emit_plots = false;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "run one scenario");
  run->add_option("scenario", scenario, "scenario name")->required();
  run->add_option("--preset", preset, "named parameter preset");
  run->add_option("--config", config, "JSON config file");
  run->add_option("--seed", seed, "root RNG seed")->each([&](const std::string&) {
    seed_set = true;
  });
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--jobs", jobs, "worker cap for internal parallelism");
  run->add_flag("--emit-plots", emit_plots, "write SVG heatmaps");

  // `einselect <scenario> ...` without the explicit `run` keyword
  app.allow_extras();
  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    std::cout << scenarios::list_scenarios().dump(2) << "\n";
    return 0;
  }
  if (!run->parsed()) {
    const auto extras = app.remaining();
    if (extras.empty()) {
      std::cout << app.help() << "\navailable scenarios:\n";
      for (const auto& s : scenarios::registry())
        std::cout << "  " << s.name << " - " << s.description << "\n";
      return 0;
    }
    // re-parse as an implicit run: einselect <scenario> [options]
    std::vector<std::string> args = {"einselect", "run"};
    for (int i = 1; i < argc; ++i) args.push_back(argv[i]);
    std::vector<char*> cargs;
    for (auto& a : args) cargs.push_back(a.data());
    CLI::App app2{"einselect"};
    auto* run2 = app2.add_subcommand("run");
    run2->add_option("scenario", scenario)->required();
    run2->add_option("--preset", preset);
    run2->add_option("--config", config);
    run2->add_option("--seed", seed)->each(
        [&](const std::string&) { seed_set = true; });
    run2->add_option("--out", out_dir);
    run2->add_option("--jobs", jobs);
    run2->add_flag("--emit-plots", emit_plots);
    try {
      app2.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
      return app2.exit(e) ? scenarios::kExitConfig : scenarios::kExitConfig;
    }
  }

  opt.scenario = scenario;
  opt.preset = preset;
  if (!config.empty()) opt.config_path = config;
  if (seed_set) opt.seed = seed;
  opt.emit_plots = emit_plots;
  opt.jobs = jobs;

  if (!out_dir.empty())
    opt.out_dir = out_dir;
  else if (const char* env = std::getenv("EINSELECT_OUT"))
    opt.out_dir = env;
  else
    opt.out_dir = ".";
  // EINSELECT_OUT overrides an explicit --out per the interface contract
  if (const char* env = std::getenv("EINSELECT_OUT")) opt.out_dir = env;

  return scenarios::run(opt);
}
