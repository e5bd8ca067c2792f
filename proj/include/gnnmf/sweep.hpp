#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gnnmf/bounds.hpp"
#include "gnnmf/config.hpp"

namespace gnnmf {

/// One train + measure + bound pipeline at a single sweep coordinate.
struct SweepRow {
  std::string dataset;
  double beta = 0.0;
  ModelKind model = ModelKind::Gcn;
  FilterKind filter = FilterKind::SymNorm;
  Readout readout = Readout::Mean;
  int width = 0;
  std::uint64_t seed = 0;

  double train_risk = 0.0;
  double test_risk = 0.0;
  double abs_gen_error = 0.0;
  double fd_bound = 0.0;
  double rademacher_bound = 0.0;
  double wall_time_s = 0.0;

  // Set when training diverged; the measured values are then NaN.
  bool diverged = false;
  std::string error;
  // Only present for rows produced in-process (not for rows read from CSV).
  std::optional<BoundReport> bound;
  std::vector<double> loss_history;
};

// Canonical order: dataset, beta, model, filter, readout, width, seed.
bool row_less(const SweepRow& a, const SweepRow& b);

// Seeds used by a run with the given row seed.
std::uint64_t split_seed(std::uint64_t seed);
std::uint64_t init_seed(std::uint64_t seed);
std::uint64_t train_seed(std::uint64_t seed);

std::vector<SweepRow> run_sweep(const ExperimentConfig& config);
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const GraphDataset& dataset);

// A single run at the first entry of every list in `config`.
struct SingleRun {
  SweepRow row;
  UnitParams params;
  ModelConfig model_config;
};
SingleRun run_single(const ExperimentConfig& config, const GraphDataset& dataset);

struct SummaryRow {
  std::string dataset;
  double beta = 0.0;
  ModelKind model = ModelKind::Gcn;
  FilterKind filter = FilterKind::SymNorm;
  Readout readout = Readout::Mean;
  int width = 0;
  int n_runs = 0;
  int n_completed = 0;
  double gen_mean = 0.0;
  double gen_std = 0.0;
  double train_risk_mean = 0.0;
  double test_risk_mean = 0.0;
  double fd_mean = 0.0;
  double fd_std = 0.0;
  double rademacher_mean = 0.0;
  double rademacher_std = 0.0;
};

// Value as it reads back from a 15-significant-digit text field.
double quantize(double v);

// Groups by every coordinate except seed. Diverged rows count toward n_runs
// only. Std uses the n-1 denominator and is 0 for a single run. Values are
// quantized first so in-memory rows and rows parsed from CSV agree exactly.
std::vector<SummaryRow> aggregate(const std::vector<SweepRow>& rows);

}  // namespace gnnmf
