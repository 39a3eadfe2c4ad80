#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <map>

#include <CLI11.hpp>

#include "densek_cli/run.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("densek");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("DENSEK_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

void add_common(CLI::App& app, densek::cli::RunSpec& spec) {
  using densek::EdgeFormat;
  using densek::ExtrapolationMode;
  const std::map<std::string, EdgeFormat> formats{{"snap", EdgeFormat::snap},
                                                  {"konect", EdgeFormat::konect}};
  const std::map<std::string, ExtrapolationMode> modes{{"practical", ExtrapolationMode::practical},
                                                       {"theory", ExtrapolationMode::theory}};
  app.add_option("--input", spec.input, "edge list file")->required();
  app.add_option("--format", spec.format, "snap or konect")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  app.add_option("--methods", spec.methods, "comma-separated methods")->delimiter(',');
  app.add_option("--lambda0", spec.lambda0, "initial penalty");
  app.add_option("--lambda-growth", spec.lambda_growth, "penalty growth factor");
  app.add_option("--max-iter", spec.max_iter, "iteration cap");
  app.add_option("--stop-tol", spec.stop_tol, "squared step tolerance");
  app.add_option("--c1", spec.c1, "step-size constant, 1/eta = c1 L_f");
  app.add_option("--c2", spec.c2, "residual constant, c2 >= c1");
  app.add_option("--extrapolation", spec.extrapolation, "practical or theory")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  app.add_option("--trace-out", spec.trace_out, "EP-Prox iteration trace, JSON lines");
  app.add_option("--out", spec.out, "CSV output (default stdout)");
  app.add_option("--jobs", spec.jobs, "parallel cells")->check(CLI::PositiveNumber);
  app.add_option("--seed", spec.seed, "seed");
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  using densek::cli::Mode;
  densek::cli::RunSpec spec;

  CLI::App app{"densek: densest k-subgraph solvers"};
  app.require_subcommand(1);

  auto* dks = app.add_subcommand("dks", "densest k-subgraph on a unipartite graph");
  add_common(*dks, spec);
  dks->add_option("--k", spec.k, "comma-separated k values")->delimiter(',')->required();

  auto* dkbs = app.add_subcommand("dkbs", "densest (k1, k2) bipartite subgraph");
  add_common(*dkbs, spec);
  dkbs->add_option("--k1", spec.k1, "comma-separated k1 values")->delimiter(',')->required();
  dkbs->add_option("--k2", spec.k2, "comma-separated k2 values")->delimiter(',')->required();

  CLI11_PARSE(app, argc, argv);

  if (dkbs->parsed()) {
    spec.mode = Mode::dkbs;
    if (dkbs->count("--format") == 0) spec.format = densek::EdgeFormat::konect;
    if (spec.methods.empty()) spec.methods = {"epprox"};
  } else {
    spec.mode = Mode::dks;
    if (spec.methods.empty()) spec.methods = {"epprox", "greedy", "tpm"};
  }
  return densek::cli::run(spec);
}
