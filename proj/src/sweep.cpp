#include "gnnmf/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "gnnmf/rng.hpp"

namespace gnnmf {

namespace {

auto row_key(const SweepRow& r) {
  return std::make_tuple(r.dataset, r.beta, model_name(r.model), filter_name(r.filter),
                         readout_name(r.readout), r.width, r.seed);
}

struct Coordinate {
  double beta;
  ModelKind model;
  FilterKind filter;
  Readout readout;
  int width;
  std::uint64_t seed;
};

struct SharedData {
  const GraphDataset* dataset = nullptr;
  DatasetStats stats;
  std::map<FilterKind, double> g_max;
};

SweepRow run_coordinate(const ExperimentConfig& config, const SharedData& shared,
                        const Coordinate& c, UnitParams* params_out = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  SweepRow row;
  row.dataset = shared.dataset->name;
  row.beta = c.beta;
  row.model = c.model;
  row.filter = c.filter;
  row.readout = c.readout;
  row.width = c.width;
  row.seed = c.seed;

  const ModelConfig mc = config.model_config(c.model, c.filter, c.readout, c.width);
  const DatasetSplit split = split_dataset(*shared.dataset, c.beta, split_seed(c.seed));
  const auto train_set = prepare_dataset(split.train, mc);
  const auto test_set = prepare_dataset(split.test, mc);
  UnitParams params = init_params(mc, shared.dataset->feature_dim, init_seed(c.seed));
  TrainConfig tc = config.train;
  tc.seed = train_seed(c.seed);

  try {
    TrainOutcome outcome = train(std::move(params), train_set, tc, mc);
    const RunResult r = measure_generalization(outcome.params, train_set, test_set, mc);
    row.train_risk = r.train_risk;
    row.test_risk = r.test_risk;
    row.abs_gen_error = r.abs_gen_error;
    row.loss_history = std::move(outcome.loss_history);

    const BoundInputs inputs = bound_inputs_for(
        mc, static_cast<int>(split.train.size()), config.train.alpha, shared.stats.n_max,
        shared.stats.b_f, shared.g_max.at(c.filter), config.delta);
    row.bound = compute_bounds(c.model, inputs, extract_model_stats(outcome.params),
                               config.bounded_activation);
    row.fd_bound = row.bound->fd_bound;
    row.rademacher_bound = row.bound->rademacher_bound;
    if (params_out) *params_out = std::move(outcome.params);
  } catch (const TrainingDiverged& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.diverged = true;
    row.error = e.what();
    row.train_risk = row.test_risk = row.abs_gen_error = nan;
    row.fd_bound = row.rademacher_bound = nan;
  }
  if (config.record_wall_time) {
    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return row;
}

SharedData prepare_shared(const ExperimentConfig& config, const GraphDataset& dataset) {
  validate_dataset(dataset);
  SharedData shared;
  shared.dataset = &dataset;
  shared.stats = dataset_stats(dataset);
  // Filter norms over the full dataset, train and test alike.
  for (FilterKind f : config.filters) {
    if (!shared.g_max.count(f)) shared.g_max[f] = g_max(dataset, f).g_max;
  }
  return shared;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

bool row_less(const SweepRow& a, const SweepRow& b) { return row_key(a) < row_key(b); }

std::uint64_t split_seed(std::uint64_t seed) { return derive_seed(seed, 1); }
std::uint64_t init_seed(std::uint64_t seed) { return derive_seed(seed, 2); }
std::uint64_t train_seed(std::uint64_t seed) { return derive_seed(seed, 3); }

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
  config.validate();
  const GraphDataset dataset = resolve_dataset(config.dataset, config.dataset_seed);
  return run_sweep(config, dataset);
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const GraphDataset& dataset) {
  config.validate();
  const SharedData shared = prepare_shared(config, dataset);

  std::vector<Coordinate> coords;
  for (double beta : config.betas)
    for (ModelKind m : config.models)
      for (FilterKind f : config.filters)
        for (Readout r : config.readouts)
          for (int w : config.widths)
            for (std::uint64_t s : config.seeds) coords.push_back({beta, m, f, r, w, s});

  std::vector<SweepRow> rows(coords.size());
  if (config.workers <= 1) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
      rows[i] = run_coordinate(config, shared, coords[i]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= coords.size()) return;
        try {
          rows[i] = run_coordinate(config, shared, coords[i]);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = coords.size();
        }
      }
    };
    const int n_threads = std::min<int>(config.workers, static_cast<int>(coords.size()));
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  std::stable_sort(rows.begin(), rows.end(), row_less);
  return rows;
}

SingleRun run_single(const ExperimentConfig& config, const GraphDataset& dataset) {
  config.validate();
  SingleRun out;
  ExperimentConfig one = config;
  one.filters = {config.filters.front()};
  const SharedData shared = prepare_shared(one, dataset);
  const Coordinate c{config.betas.front(),   config.models.front(), config.filters.front(),
                     config.readouts.front(), config.widths.front(), config.seeds.front()};
  out.model_config = config.model_config(c.model, c.filter, c.readout, c.width);
  out.row = run_coordinate(config, shared, c, &out.params);
  if (out.row.diverged) throw TrainingDiverged(out.row.error);
  return out;
}

double quantize(double v) {
  if (!std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return std::strtod(buf, nullptr);
}

std::vector<SummaryRow> aggregate(const std::vector<SweepRow>& rows) {
  std::vector<const SweepRow*> sorted;
  sorted.reserve(rows.size());
  for (const auto& r : rows) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SweepRow* a, const SweepRow* b) { return row_less(*a, *b); });

  std::vector<SummaryRow> out;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const SweepRow& head = *sorted[i];
    const auto group_key = [](const SweepRow& r) {
      return std::make_tuple(r.dataset, quantize(r.beta), r.model, r.filter, r.readout, r.width);
    };
    std::vector<double> gen, train_r, test_r, fd, rad;
    SummaryRow s;
    s.dataset = head.dataset;
    s.beta = quantize(head.beta);
    s.model = head.model;
    s.filter = head.filter;
    s.readout = head.readout;
    s.width = head.width;
    std::size_t j = i;
    for (; j < sorted.size() && group_key(*sorted[j]) == group_key(head); ++j) {
      const SweepRow& r = *sorted[j];
      ++s.n_runs;
      if (r.diverged || !std::isfinite(r.abs_gen_error)) continue;
      ++s.n_completed;
      gen.push_back(quantize(r.abs_gen_error));
      train_r.push_back(quantize(r.train_risk));
      test_r.push_back(quantize(r.test_risk));
      fd.push_back(quantize(r.fd_bound));
      rad.push_back(quantize(r.rademacher_bound));
    }
    if (s.n_completed > 0) {
      s.gen_mean = mean_of(gen);
      s.gen_std = sample_std(gen, s.gen_mean);
      s.train_risk_mean = mean_of(train_r);
      s.test_risk_mean = mean_of(test_r);
      s.fd_mean = mean_of(fd);
      s.fd_std = sample_std(fd, s.fd_mean);
      s.rademacher_mean = mean_of(rad);
      s.rademacher_std = sample_std(rad, s.rademacher_mean);
    } else {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      s.gen_mean = s.gen_std = s.train_risk_mean = s.test_risk_mean = nan;
      s.fd_mean = s.fd_std = s.rademacher_mean = s.rademacher_std = nan;
    }
    out.push_back(s);
    i = j;
  }
  return out;
}

}  // namespace gnnmf
