#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gnnmf/graph.hpp"

namespace gnnmf {

/// Stochastic block model. Nodes are assigned to blocks contiguously by index.
struct SbmSpec {
  std::vector<int> block_sizes;
  Matrix edge_prob;  // symmetric, one row/col per block, entries in [0, 1]

  int node_count() const;
  void validate() const;
};

/// Erdos-Renyi G(n, p).
struct ErSpec {
  int node_count = 0;
  double edge_prob = 0.0;

  void validate() const;
};

struct SynthConfig {
  std::variant<SbmSpec, ErSpec> model;
  int n_graphs = 200;
  int feature_dim = 16;
  std::uint64_t seed = 0;
  std::string name = "synthetic";
};

// Topology only; features and label are attached by make_dataset.
Matrix generate_sbm(const SbmSpec& spec, std::uint64_t seed);
Matrix generate_er(const ErSpec& spec, std::uint64_t seed);

// i.i.d. standard Gaussian rows scaled to unit Euclidean norm.
Matrix generate_features(int n, int k, std::uint64_t seed);

GraphDataset make_dataset(const SynthConfig& config);

// Built-in presets "sbm1", "sbm2", "sbm3", "er4", "er5".
SynthConfig preset(std::string_view name, std::uint64_t seed = 0);
const std::vector<std::string>& preset_names();
bool is_preset(std::string_view name);

}  // namespace gnnmf
