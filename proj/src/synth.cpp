#include "gnnmf/synth.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "gnnmf/rng.hpp"

namespace gnnmf {

namespace {

// Stream identifiers mixed into per-graph seeds.
constexpr std::uint64_t kTopologyStream = 1;
constexpr std::uint64_t kFeatureStream = 2;
constexpr std::uint64_t kLabelStream = 3;

Matrix sample_blocks(const std::vector<int>& block_of, const Matrix& prob,
                     std::uint64_t seed) {
  const int n = static_cast<int>(block_of.size());
  Matrix a = Matrix::Zero(n, n);
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.bernoulli(prob(block_of[i], block_of[j]))) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return a;
}

}  // namespace

int SbmSpec::node_count() const {
  return std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
}

void SbmSpec::validate() const {
  const auto blocks = static_cast<Eigen::Index>(block_sizes.size());
  if (blocks == 0) throw std::invalid_argument("SBM needs at least one block");
  for (int b : block_sizes) {
    if (b < 1) throw std::invalid_argument("SBM block sizes must be positive");
  }
  if (edge_prob.rows() != blocks || edge_prob.cols() != blocks) {
    throw std::invalid_argument("SBM edge_prob must be blocks x blocks");
  }
  for (Eigen::Index i = 0; i < blocks; ++i) {
    for (Eigen::Index j = 0; j < blocks; ++j) {
      const double p = edge_prob(i, j);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("SBM edge probabilities must lie in [0, 1]");
      }
      if (p != edge_prob(j, i)) {
        throw std::invalid_argument("SBM edge_prob must be symmetric");
      }
    }
  }
}

void ErSpec::validate() const {
  if (node_count < 1) throw std::invalid_argument("ER node_count must be positive");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw std::invalid_argument("ER edge probability must lie in [0, 1]");
  }
}

Matrix generate_sbm(const SbmSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::vector<int> block_of;
  block_of.reserve(static_cast<std::size_t>(spec.node_count()));
  for (std::size_t b = 0; b < spec.block_sizes.size(); ++b) {
    block_of.insert(block_of.end(), static_cast<std::size_t>(spec.block_sizes[b]),
                    static_cast<int>(b));
  }
  return sample_blocks(block_of, spec.edge_prob, seed);
}

Matrix generate_er(const ErSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::vector<int> block_of(static_cast<std::size_t>(spec.node_count), 0);
  return sample_blocks(block_of, Matrix::Constant(1, 1, spec.edge_prob), seed);
}

Matrix generate_features(int n, int k, std::uint64_t seed) {
  if (n < 1 || k < 1) {
    throw std::invalid_argument("generate_features: n and k must be positive");
  }
  Rng rng(seed);
  Matrix f(n, k);
  for (int r = 0; r < n; ++r) {
    double norm = 0.0;
    // A zero row has probability zero; redraw rather than divide by it.
    do {
      for (int c = 0; c < k; ++c) f(r, c) = rng.normal();
      norm = f.row(r).norm();
    } while (norm == 0.0);
    f.row(r) /= norm;
  }
  return f;
}

GraphDataset make_dataset(const SynthConfig& config) {
  if (config.n_graphs < 1) throw std::invalid_argument("n_graphs must be >= 1");
  if (config.feature_dim < 1) throw std::invalid_argument("feature_dim must be >= 1");
  GraphDataset dataset;
  dataset.name = config.name;
  dataset.feature_dim = config.feature_dim;
  dataset.samples.reserve(static_cast<std::size_t>(config.n_graphs));
  for (int g = 0; g < config.n_graphs; ++g) {
    const std::uint64_t graph_seed = derive_seed(config.seed, static_cast<std::uint64_t>(g));
    GraphSample s;
    s.adjacency = std::visit(
        [&](const auto& spec) -> Matrix {
          using T = std::decay_t<decltype(spec)>;
          const auto topo_seed = derive_seed(graph_seed, kTopologyStream);
          if constexpr (std::is_same_v<T, SbmSpec>) {
            return generate_sbm(spec, topo_seed);
          } else {
            return generate_er(spec, topo_seed);
          }
        },
        config.model);
    s.features = generate_features(s.node_count(), config.feature_dim,
                                   derive_seed(graph_seed, kFeatureStream));
    Rng label_rng(derive_seed(graph_seed, kLabelStream));
    s.label = label_rng.bernoulli(0.5) ? 1 : -1;
    dataset.samples.push_back(std::move(s));
  }
  return dataset;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"sbm1", "sbm2", "sbm3", "er4", "er5"};
  return names;
}

bool is_preset(std::string_view name) {
  const auto& names = preset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

SynthConfig preset(std::string_view name, std::uint64_t seed) {
  SynthConfig config;
  config.seed = seed;
  config.name = std::string(name);
  if (name == "sbm1") {
    SbmSpec spec{{40, 60}, Matrix(2, 2)};
    spec.edge_prob << 0.25, 0.13,
                      0.13, 0.37;
    config.model = spec;
  } else if (name == "sbm2") {
    SbmSpec spec{{25, 25, 50}, Matrix(3, 3)};
    spec.edge_prob << 0.25, 0.05, 0.02,
                      0.05, 0.35, 0.07,
                      0.02, 0.07, 0.40;
    config.model = spec;
  } else if (name == "sbm3") {
    SbmSpec spec{{15, 15, 20}, Matrix(3, 3)};
    spec.edge_prob << 0.5, 0.1, 0.2,
                      0.1, 0.4, 0.1,
                      0.2, 0.1, 0.4;
    config.model = spec;
  } else if (name == "er4") {
    config.model = ErSpec{100, 0.7};
  } else if (name == "er5") {
    config.model = ErSpec{20, 0.5};
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) +
                                "' (expected sbm1, sbm2, sbm3, er4, er5)");
  }
  return config;
}

}  // namespace gnnmf
