#include <cstdio>
#include <exception>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "ciprec/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo BER sweeps for 1-bit hybrid CI precoding"};

  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::string schemes;
  bool plot = false;
  bool quiet = false;
  bool print_config = false;

  app.add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--out", out_path, "CSV output path (overrides output_path)");
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides master_seed)");
  app.add_option("--workers", workers, "Worker threads; results do not depend on this")
      ->check(CLI::PositiveNumber);
  auto* schemes_opt = app.add_option(
      "--schemes", schemes, "Comma-separated subset of ci-1bit,zf-1bit,zf-hybrid-ideal,zf-fd");
  app.add_flag("--plot", plot, "Also write <out>.dat plot series");
  app.add_flag("--quiet,-q", quiet, "No progress on stderr");
  app.add_flag("--print-config", print_config, "Print the resolved config and exit");
  CLI11_PARSE(app, argc, argv);

  try {
    ciprec::ExperimentSpec spec = ciprec::parse_config(config_path);
    if (*out_opt) spec.output_path = out_path;
    if (*seed_opt) spec.config.master_seed = seed;
    if (*schemes_opt) spec.config.schemes = ciprec::parse_scheme_list(schemes);
    if (plot) spec.emit_plot_series = true;
    spec.validate();

    if (print_config) {
      std::cout << ciprec::serialize_config(spec);
      return 0;
    }

    ciprec::ProgressFn progress;
    if (!quiet) {
      progress = [](std::size_t done, std::size_t total) {
        std::fprintf(stderr, "\rrealizations %zu/%zu", done, total);
        if (done == total) std::fputc('\n', stderr);
      };
    }
    const auto records = ciprec::run_experiment(spec, workers, progress);
    if (!quiet) {
      std::fprintf(stderr, "wrote %zu rows to %s\n", records.size(),
                   spec.output_path.string().c_str());
    }
  } catch (const ciprec::ConfigError& e) {
    std::cerr << "ciprec-sim: invalid config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ciprec-sim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
