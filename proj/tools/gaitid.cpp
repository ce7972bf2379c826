// gaitid: command-line front end of the pipeline.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gaitid/cli/config.hpp"
#include "gaitid/cli/pipeline.hpp"
#include "gaitid/core/error.hpp"
#include "gaitid/io/rten.hpp"

namespace {

using namespace gaitid;

void log_line(const std::string& m) { std::cerr << m << std::endl; }

cli::PipelineConfig config_or_default(const std::string& path) {
  return path.empty() ? cli::PipelineConfig{} : cli::load_config(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radar gait identification pipeline"};
  app.require_subcommand(1);
  bool serial = false;
  app.add_flag("--serial", serial, "run every kernel single-threaded");

  std::string config_path, in, out, dataset, checkpoint;
  std::vector<std::string> experiments;

  auto* simulate = app.add_subcommand("simulate", "synthesize the cohort's radar captures");
  simulate->add_option("--config", config_path, "pipeline config (JSON)");
  simulate->add_option("--out", out, "output directory")->required();

  auto* spectrogram = app.add_subcommand("spectrogram", "micro-Doppler and micro-omega spectrograms of a simulation");
  spectrogram->add_option("--in", in, "simulate output directory")->required();
  spectrogram->add_option("--out", out, "output directory")->required();

  auto* slice = app.add_subcommand("slice", "cut spectrograms into half-gait slices");
  slice->add_option("--in", in, "spectrogram output directory")->required();
  slice->add_option("--out", out, "dataset directory")->required();

  auto* build = app.add_subcommand("dataset-build", "simulate, transform and slice in one pass");
  build->add_option("--config", config_path, "pipeline config (JSON)");
  build->add_option("--out", out, "dataset directory")->required();

  auto* train = app.add_subcommand("train", "train the embedding network");
  train->add_option("--dataset", dataset, "dataset directory")->required();
  train->add_option("--config", config_path, "pipeline config (JSON); defaults to the dataset's");
  train->add_option("--out", out, "checkpoint directory")->required();

  auto* eval = app.add_subcommand("eval", "run evaluation experiments");
  eval->add_option("--dataset", dataset, "dataset directory")->required();
  eval->add_option("--checkpoint", checkpoint, "take training settings from this checkpoint");
  eval->add_option("--experiment", experiments, "constellation, complexity, size or window (repeatable)");
  eval->add_option("--config", config_path, "pipeline config (JSON); defaults to the dataset's");
  eval->add_option("--out", out, "report directory")->required();

  auto* embed = app.add_subcommand("embed", "export embeddings of a dataset as CSV");
  embed->add_option("--dataset", dataset, "dataset directory")->required();
  embed->add_option("--checkpoint", checkpoint, "checkpoint directory")->required();
  embed->add_option("--out", out, "CSV path")->required();

  auto* config = app.add_subcommand("config", "print or check a pipeline config");
  bool defaults = false;
  config->add_flag("--defaults", defaults, "print the default config");
  config->add_option("--check", config_path, "validate a config file and print its normalised form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    auto dataset_config = [&](const std::string& dir) {
      if (!config_path.empty()) return cli::load_config(config_path);
      return cli::load_config((std::filesystem::path(dir) / "config.json").string());
    };
    auto with_exec = [&](cli::PipelineConfig c) {
      c.net.train.exec = serial ? Exec::serial : Exec::parallel;
      return c;
    };
    if (*simulate) {
      cli::cmd_simulate(config_or_default(config_path), out, log_line);
    } else if (*spectrogram) {
      cli::cmd_spectrogram(in, out, log_line);
    } else if (*slice) {
      cli::cmd_slice(in, out, log_line);
    } else if (*build) {
      cli::cmd_dataset_build(config_or_default(config_path), out, log_line);
    } else if (*train) {
      cli::cmd_train(dataset, with_exec(dataset_config(dataset)), out, log_line);
    } else if (*eval) {
      cli::cmd_eval(dataset, checkpoint, experiments, with_exec(dataset_config(dataset)), out, log_line);
    } else if (*embed) {
      cli::cmd_embed(dataset, checkpoint, out, log_line);
    } else if (*config) {
      if (!defaults && config_path.empty()) throw ValidationError("config", "pass --defaults or --check <file>");
      std::cout << cli::config_to_json(config_or_default(defaults ? "" : config_path));
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << std::endl;
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << std::endl;
    return 2;
  }
  return 0;
}
