// Command-line front end: solve / verify / bench over scenario configs.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>

#include "covlap/runner.hpp"

namespace {

int dispatch(const std::string& mode, const std::string& config_path,
             bool seed_set, std::uint64_t seed) {
  using namespace covlap;
  try {
    ScenarioConfig cfg = parse_config_file(config_path);
    if (seed_set) {
      cfg.seed = seed;
      cfg.resolved["seed"] = std::to_string(seed);
    }
    if (mode == "solve") return run_solve(cfg);
    if (mode == "verify") return run_verify(cfg);
    return run_bench(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covariant Poisson solver and weighted-Sobolev inequality lab"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "scenario config file")->required();
    sub->add_option("--seed", seed, "override the config seed")
        ->each([&](const std::string&) { seed_set = true; });
  };

  CLI::App* solve = app.add_subcommand("solve", "solve Delta(A) Z = F");
  CLI::App* verify =
      app.add_subcommand("verify", "run the configured inequality checks");
  CLI::App* bench =
      app.add_subcommand("bench", "operator and solver throughput");
  add_common(solve);
  add_common(verify);
  add_common(bench);

  CLI11_PARSE(app, argc, argv);

  const std::string mode = app.got_subcommand(solve)   ? "solve"
                           : app.got_subcommand(verify) ? "verify"
                                                        : "bench";
  const int code = dispatch(mode, config_path, seed_set, seed);
  if (code == 0)
    std::cout << mode << ": ok\n";
  else
    std::cout << mode << ": exit code " << code << "\n";
  return code;
}
