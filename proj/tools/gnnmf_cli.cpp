#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gnnmf/bounds.hpp"
#include "gnnmf/config.hpp"
#include "gnnmf/filters.hpp"
#include "gnnmf/report.hpp"
#include "gnnmf/sweep.hpp"
#include "gnnmf/synth.hpp"

using namespace gnnmf;

namespace {

ReportContext make_context(const ExperimentConfig& config, const GraphDataset& dataset) {
  ReportContext ctx;
  ctx.config = config;
  ctx.stats = dataset_stats(dataset);
  for (FilterKind f : config.filters) ctx.filters.push_back(g_max(dataset, f));
  return ctx;
}

int cmd_gen_data(const std::string& source, std::uint64_t seed, const std::string& out) {
  const GraphDataset dataset = make_dataset(resolve_synth_source(source, seed));
  save_dataset(dataset, out);
  const DatasetStats s = dataset_stats(dataset);
  std::cout << dataset_stats_to_json(s).dump() << "\n";
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& params_out) {
  const ExperimentConfig config = load_experiment_config(config_path);
  const GraphDataset dataset = resolve_dataset(config.dataset, config.dataset_seed);
  const SingleRun run = run_single(config, dataset);
  if (!params_out.empty()) save_params(run.params, params_out);
  std::cout << run_row_to_json(run.row).dump(1) << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir) {
  const ExperimentConfig config = load_experiment_config(config_path);
  const GraphDataset dataset = resolve_dataset(config.dataset, config.dataset_seed);
  const auto rows = run_sweep(config, dataset);
  const auto summary = aggregate(rows);
  emit_reports(rows, summary, out_dir, make_context(config, dataset));
  int diverged = 0;
  for (const auto& r : rows) diverged += r.diverged ? 1 : 0;
  std::cout << rows.size() << " runs, " << diverged << " diverged, reports in " << out_dir
            << "\n";
  return 0;
}

int cmd_bounds(const std::string& params_path, const std::string& dataset_source,
               const std::string& config_path) {
  const ExperimentConfig config = load_experiment_config(config_path);
  const GraphDataset dataset = resolve_dataset(dataset_source, config.dataset_seed);
  validate_dataset(dataset);
  const UnitParams params = load_params(params_path);
  const ModelKind kind = config.models.front();
  const ModelConfig mc = config.model_config(kind, config.filters.front(),
                                             config.readouts.front(), params.width());
  check_shapes(params, mc, dataset.feature_dim);

  const DatasetStats stats = dataset_stats(dataset);
  // Training-set size under the configured split of this dataset.
  const auto [train_idx, test_idx] =
      split_indices(dataset.size(), config.betas.front(), split_seed(config.seeds.front()));
  const BoundInputs inputs =
      bound_inputs_for(mc, static_cast<int>(train_idx.size()), config.train.alpha, stats.n_max,
                       stats.b_f, g_max(dataset, mc.filter).g_max, config.delta);
  const BoundReport report =
      compute_bounds(kind, inputs, extract_model_stats(params), config.bounded_activation);
  std::cout << bound_report_to_json(report).dump(1) << "\n";
  return 0;
}

int cmd_filters(const std::string& dataset_source, const std::string& kind,
                std::uint64_t seed) {
  const GraphDataset dataset = resolve_dataset(dataset_source, seed);
  validate_dataset(dataset);
  Json out = Json::array();
  if (kind == "all") {
    for (FilterKind f : kAllFilters) out.push_back(filter_report_to_json(g_max(dataset, f)));
  } else {
    out.push_back(filter_report_to_json(g_max(dataset, parse_filter(kind))));
  }
  Json doc = {{"dataset", dataset.name},
              {"stats", dataset_stats_to_json(dataset_stats(dataset))},
              {"filters", std::move(out)}};
  std::cout << doc.dump(1) << "\n";
  return 0;
}

int cmd_report(const std::string& rows_path, const std::string& out_dir) {
  const auto rows = rows_from_csv(read_text_file(rows_path));
  const auto summary = aggregate(rows);
  emit_reports(rows, summary, out_dir);
  std::cout << summary.size() << " summary rows written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Width sweeps and generalization bounds for one-hidden-layer GCN and MPGNN"};
  app.require_subcommand(1);

  std::string source, out, config_path, params_path, params_out, dataset_source, kind = "all",
                                                                             rows_path;
  std::uint64_t seed = 0;

  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic dataset file");
  gen->add_option("source", source, "Preset name (sbm1 sbm2 sbm3 er4 er5) or spec file")
      ->required();
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--out", out, "Output dataset file")->required();

  auto* train_cmd = app.add_subcommand("train", "Single training run; prints the run result");
  train_cmd->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--params-out", params_out, "Write trained parameters to this file");

  auto* sweep = app.add_subcommand("sweep", "Width x seed sweep with reports");
  sweep->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out, "Output directory")->required();

  auto* bounds = app.add_subcommand("bounds", "Bound report for saved parameters");
  bounds->add_option("--params", params_path, "Parameter file")->required()->check(CLI::ExistingFile);
  bounds->add_option("--dataset", dataset_source, "Dataset file or preset")->required();
  bounds->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  auto* filters = app.add_subcommand("filters", "Filter norm report over a dataset");
  filters->add_option("--dataset", dataset_source, "Dataset file or preset")->required();
  filters->add_option("--kind", kind, "sym-norm, random-walk, mean-agg, sum-agg or all");
  filters->add_option("--seed", seed, "Generator seed when --dataset is a preset");

  auto* report = app.add_subcommand("report", "Re-aggregate and plot an existing rows.csv");
  report->add_option("--rows", rows_path, "rows.csv")->required()->check(CLI::ExistingFile);
  report->add_option("--out", out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen_data(source, seed, out);
    if (*train_cmd) return cmd_train(config_path, params_out);
    if (*sweep) return cmd_sweep(config_path, out);
    if (*bounds) return cmd_bounds(params_path, dataset_source, config_path);
    if (*filters) return cmd_filters(dataset_source, kind, seed);
    if (*report) return cmd_report(rows_path, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
