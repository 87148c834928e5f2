#include <iostream>

#include "CLI11.hpp"
#include "app.hpp"

using namespace gradcoh::app;

int main(int argc, char** argv) {
  CLI::App cli{"gradcoh: windowed Lie algebra cohomology and proof replays"};
  cli.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> cache_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  bool timings = false;
  std::string target;

  auto* scan = cli.add_subcommand("scan", "windowed dimension scans from a config");
  auto* replay = cli.add_subcommand("replay", "seeded proof replays from a config");
  for (auto* sub : {scan, replay}) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--cache", cache_dir, "cache directory (overrides config)");
    sub->add_option("--seed", seed, "fixture seed (overrides config)");
    sub->add_option("--jobs", jobs, "worker threads (overrides config)")->check(CLI::Range(1u, 256u));
  }
  scan->add_flag("--timings", timings, "write measured elapsed_ms instead of 0");
  auto* show = cli.add_subcommand("show", "print a report or cached scan as a table");
  show->add_option("target", target, "report path or cache key")->required();
  show->add_option("--cache", cache_dir, "cache directory");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (show->parsed()) return cmd_show(target, cache_dir ? std::optional<std::filesystem::path>(*cache_dir) : std::nullopt,
                                      std::cout, std::cerr);

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  if (out_dir) cfg.out_dir = *out_dir;
  if (cache_dir) cfg.cache_dir = *cache_dir;
  if (seed) cfg.seed = *seed;
  if (jobs) cfg.jobs = *jobs;
  cfg.timings = timings;

  try {
    return scan->parsed() ? cmd_scan(cfg, std::cout, std::cerr) : cmd_replay(cfg, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMismatch;
  }
}
