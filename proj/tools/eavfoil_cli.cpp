#include <iostream>

#include "CLI11.hpp"

#include "eavfoil/cli/runner.hpp"

int main(int argc, char** argv) {
  eavfoil::cli::CliConfig config;
  auto& induce = config.session.induce;
  CLI::App app{"Dialogue-driven knowledge base with rule induction"};
  app.add_option("--scene", config.scene_path, "scene detections document");
  app.add_option("--embeddings", config.embeddings_path, "word vector table")->required();
  app.add_option("--patterns", config.patterns_path,
                 "utterance pattern file; lexicon.txt and replies.txt are read from its directory")
      ->required();
  app.add_option("--kb", config.kb_path, "KB snapshot to start from");
  app.add_option("--batch", config.script_path, "run a script instead of the REPL");
  app.add_option("--m", induce.m, "m-estimate smoothing")->check(CLI::NonNegativeNumber);
  app.add_option("--max-body", induce.max_body_len, "maximum clause body length")->check(CLI::PositiveNumber);
  app.add_option("--tau", config.session.disambiguation.tau, "disambiguation confidence ratio")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--log", config.session.inference_log_path, "append inference records to this file");
  CLI11_PARSE(app, argc, argv);
  if (!config.script_path.empty()) config.mode = eavfoil::cli::Mode::batch;
  return eavfoil::cli::run(config, std::cin, std::cout, std::cerr);
}
