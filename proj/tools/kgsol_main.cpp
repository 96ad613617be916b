// Command-line driver. Exit codes: 0 ok, 1 validation error, 2 numerical
// failure.

#include <CLI11.hpp>
#include <cstdio>

#include "kgs/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Klein-Gordon field/particle soliton simulator and spectral toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file (key-value tables)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed for randomized data")->each([&](const std::string&) {
      seed_set = true;
    });
    sub->add_option("--threads", threads, "worker threads for scan-style commands");
  };

  static const char* names[] = {"simulate", "soliton",     "spectral", "wiener-check",
                                "frozen",   "decay-probe", "scatter"};
  for (const char* n : names) add_common(app.add_subcommand(n));

  CLI11_PARSE(app, argc, argv);

  try {
    kgs::ExperimentSpec spec =
        config_path.empty() ? kgs::ExperimentSpec{} : kgs::parse_config(config_path);
    spec.command = app.get_subcommands().front()->get_name();
    if (!out_dir.empty()) spec.out_dir = out_dir;
    if (seed_set) spec.seed = seed;
    if (threads > 0) spec.threads = threads;
    return kgs::run_experiment(spec);
  } catch (const kgs::validation_error& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  }
}
