#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "specrange/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Certified enclosures of the numerical range, pseudonumerical "
               "range and resolvent bounds of operator functions"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  std::uint64_t seed = 0;
  bool have_seed = false;

  for (const char* name : {"scan", "trace", "envelope", "oracle", "pseudo"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("config", config_path, "run configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads for scans");
    sub->add_option("--seed", seed, "override the configured RNG seed")
        ->each([&](const std::string&) { have_seed = true; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    specrange::RunConfig config = specrange::load_config(config_path);
    const std::string mode = app.get_subcommands().front()->get_name();
    if (config.mode != mode)
      throw specrange::ConfigError("config mode '" + config.mode +
                                   "' does not match subcommand '" + mode + "'");
    if (threads > 0) config.threads = threads;
    if (have_seed) config.seed = seed;
    return specrange::run(config, out_dir);
  } catch (const specrange::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const specrange::ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
