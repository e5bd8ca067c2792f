#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gnnmf/filters.hpp"
#include "gnnmf/models.hpp"
#include "gnnmf/synth.hpp"
#include "gnnmf/training.hpp"

namespace gnnmf {

/// Bad config text: unknown key, malformed value, duplicate key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

// `key = value` lines; '#' starts a comment; blank lines ignored.
// Duplicate keys are rejected.
std::vector<KeyValue> parse_key_values(const std::string& text);

/// Everything the CLI needs for a train, bounds or sweep invocation.
struct ExperimentConfig {
  std::string dataset = "sbm1";  // preset name or dataset file path
  std::uint64_t dataset_seed = 0;
  std::vector<double> betas{0.7, 0.9};
  std::vector<int> widths{4, 8, 16, 32, 64, 128, 256};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<ModelKind> models{ModelKind::Gcn};
  std::vector<FilterKind> filters{FilterKind::SymNorm};
  std::vector<Readout> readouts{Readout::Mean};
  TrainConfig train;
  double delta = 0.05;
  bool bounded_activation = true;
  bool record_wall_time = true;
  int workers = 1;
  InitScheme init = InitScheme::FanIn;
  Nonlinearity activation = Nonlinearity::Tanh;
  Nonlinearity zeta = Nonlinearity::Tanh;
  Nonlinearity rho = Nonlinearity::Tanh;
  Nonlinearity kappa = Nonlinearity::Tanh;

  void validate() const;
  // Model config for one sweep coordinate, nonlinearities and init filled in.
  ModelConfig model_config(ModelKind kind, FilterKind filter, Readout readout,
                           int width) const;
};

ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
// Canonical text form; parse_experiment_config(to_text(c)) == c field-wise.
std::string experiment_config_to_text(const ExperimentConfig& config);

// Synthetic dataset description for `gen-data`:
//   generator = sbm | er
//   block_sizes = 40, 60          (sbm)
//   edge_prob = 0.25, 0.13; 0.13, 0.37   (sbm: rows split by ';', er: scalar)
//   node_count = 100             (er)
//   n_graphs, feature_dim, name  (optional)
SynthConfig parse_synth_spec(const std::string& text, std::uint64_t seed);

// Preset name or spec file path.
SynthConfig resolve_synth_source(const std::string& source, std::uint64_t seed);

// Preset name (generated with dataset_seed) or dataset file.
GraphDataset resolve_dataset(const std::string& source, std::uint64_t dataset_seed);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace gnnmf
