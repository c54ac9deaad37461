#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "leafcurrent/commands.hpp"

namespace leafcurrent {

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks of a directed harmonic current near a hyperbolic singularity",
               "leafcurrent"};
  app.fallthrough();

  std::string config_path;
  std::optional<std::string> out_dir, profile;
  std::optional<double> a, b, amplitude;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "INI file with sections named after the modules")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--a", a, "Re eta");
  app.add_option("--b", b, "Im eta (b < 0 swaps the coordinates)");
  app.add_option("--profile", profile, "power:P | logpower:ALPHA | table:PATH");
  app.add_option("--A", amplitude, "amplitude of the boundary data");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--seed", seed, "seed for randomized checks");

  std::string chosen;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name, "");
    sub->callback([&chosen, name] { chosen = name; });
  }
  app.get_subcommand("leaf")->description("sample the leaf through (1, 1) and plot it");
  app.get_subcommand("extend")->description("Poisson extension on half-plane and sector grids");
  app.get_subcommand("mass")->description("trace mass on shrinking bidiscs");
  app.get_subcommand("lemmas")->description("asymptotics of Z'(r) and of the kernel integral");
  app.get_subcommand("ddc")->description("edge integrals over the exhaustion Q_s");
  app.get_subcommand("sharpness")->description("mass / (delta^2 epsilon(delta)) and its stability");

  if (argc <= 1) {
    out << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (chosen.empty()) {
    err << "a subcommand is required\n" << app.help();
    return 2;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (out_dir) cfg.out = *out_dir;
    if (a) cfg.a = *a;
    if (b) cfg.b = *b;
    if (profile) cfg.profile = *profile;
    if (amplitude) cfg.A = *amplitude;
    if (threads) cfg.threads = *threads;
    if (seed) cfg.seed = *seed;
    cfg.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    return run_command(chosen, cfg, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace leafcurrent
