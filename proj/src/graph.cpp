#include "gnnmf/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "gnnmf/rng.hpp"

namespace gnnmf {

using nlohmann::json;

GraphSample make_sample(int node_count,
                        const std::vector<std::pair<int, int>>& edges,
                        Matrix features, int label) {
  if (node_count < 1) {
    throw ValidationError("node count must be positive");
  }
  GraphSample sample;
  sample.adjacency = Matrix::Zero(node_count, node_count);
  for (const auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= node_count || j >= node_count) {
      throw ValidationError("edge endpoint out of range: (" +
                            std::to_string(i) + "," + std::to_string(j) + ")");
    }
    if (i == j) {
      throw ValidationError("self-loop at node " + std::to_string(i));
    }
    sample.adjacency(i, j) = 1.0;
    sample.adjacency(j, i) = 1.0;
  }
  sample.features = std::move(features);
  sample.label = label;
  return sample;
}

std::vector<std::string> validate_sample(const GraphSample& sample) {
  std::vector<std::string> violations;
  const auto& a = sample.adjacency;
  const Eigen::Index n = a.rows();
  if (n < 1) violations.emplace_back("empty graph");
  if (a.cols() != n) {
    violations.emplace_back("adjacency not square");
    return violations;
  }
  bool binary = true, symmetric = true, zero_diag = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a(i, i) != 0.0) zero_diag = false;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = a(i, j);
      if (v != 0.0 && v != 1.0) binary = false;
      if (v != a(j, i)) symmetric = false;
    }
  }
  if (!binary) violations.emplace_back("non-binary adjacency entry");
  if (!symmetric) violations.emplace_back("asymmetric");
  if (!zero_diag) violations.emplace_back("nonzero diagonal");
  if (sample.features.rows() != n) {
    violations.emplace_back("feature row count differs from node count");
  }
  if (sample.features.cols() < 1) {
    violations.emplace_back("feature dimension must be positive");
  }
  if (!sample.features.allFinite()) {
    violations.emplace_back("non-finite feature value");
  }
  if (sample.label != 1 && sample.label != -1) {
    violations.emplace_back("label must be -1 or +1");
  }
  return violations;
}

void validate_dataset(const GraphDataset& dataset) {
  if (dataset.samples.empty()) {
    throw ValidationError("dataset '" + dataset.name + "' is empty");
  }
  if (dataset.feature_dim < 1) {
    throw ValidationError("feature_dim must be positive");
  }
  for (std::size_t g = 0; g < dataset.samples.size(); ++g) {
    const auto& s = dataset.samples[g];
    auto violations = validate_sample(s);
    if (s.feature_dim() != dataset.feature_dim) {
      violations.emplace_back("feature_dim " + std::to_string(s.feature_dim()) +
                              " != dataset feature_dim " +
                              std::to_string(dataset.feature_dim));
    }
    if (!violations.empty()) {
      std::string msg = "graph #" + std::to_string(g) + ": ";
      for (std::size_t v = 0; v < violations.size(); ++v) {
        if (v) msg += "; ";
        msg += violations[v];
      }
      throw ValidationError(msg);
    }
  }
}

std::vector<int> degrees(const GraphSample& sample) {
  const Vector sums = sample.adjacency.rowwise().sum();
  std::vector<int> out(static_cast<std::size_t>(sums.size()));
  for (Eigen::Index i = 0; i < sums.size(); ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<int>(std::lround(sums(i)));
  }
  return out;
}

std::size_t edge_count(const GraphSample& sample) {
  return static_cast<std::size_t>(std::lround(sample.adjacency.sum() / 2.0));
}

GraphSample permute_sample(const GraphSample& sample,
                           const std::vector<int>& perm) {
  const int n = sample.node_count();
  if (static_cast<int>(perm.size()) != n) {
    throw std::invalid_argument("invalid permutation");
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]) {
      throw std::invalid_argument("invalid permutation");
    }
    seen[static_cast<std::size_t>(p)] = 1;
  }
  GraphSample out;
  out.label = sample.label;
  out.adjacency.resize(n, n);
  out.features.resize(n, sample.features.cols());
  for (int i = 0; i < n; ++i) {
    out.features.row(perm[i]) = sample.features.row(i);
    for (int j = 0; j < n; ++j) {
      out.adjacency(perm[i], perm[j]) = sample.adjacency(i, j);
    }
  }
  return out;
}

DatasetStats dataset_stats(const GraphDataset& dataset) {
  if (dataset.samples.empty()) {
    throw std::invalid_argument("dataset_stats: empty dataset");
  }
  DatasetStats stats;
  stats.n_graphs = dataset.samples.size();
  stats.feature_dim = dataset.feature_dim;
  stats.d_min = std::numeric_limits<int>::max();
  for (const auto& s : dataset.samples) {
    stats.n_max = std::max(stats.n_max, s.node_count());
    for (int d : degrees(s)) {
      stats.d_max = std::max(stats.d_max, d);
      stats.d_min = std::min(stats.d_min, d);
    }
    if (s.features.size() > 0) {
      stats.b_f = std::max(stats.b_f, s.features.rowwise().norm().maxCoeff());
    }
  }
  return stats;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double beta_sup, std::uint64_t seed) {
  if (!(beta_sup > 0.0 && beta_sup < 1.0)) {
    throw std::invalid_argument("beta_sup must lie in (0, 1)");
  }
  if (n < 2) {
    throw std::invalid_argument("split needs at least 2 samples");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  auto n_train = static_cast<std::size_t>(std::llround(beta_sup * static_cast<double>(n)));
  // Both sides must stay nonempty datasets.
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return {std::move(train), std::move(test)};
}

DatasetSplit split_dataset(const GraphDataset& dataset, double beta_sup,
                           std::uint64_t seed) {
  auto [train_idx, test_idx] = split_indices(dataset.size(), beta_sup, seed);
  DatasetSplit split;
  split.train.name = dataset.name + "/train";
  split.test.name = dataset.name + "/test";
  split.train.feature_dim = split.test.feature_dim = dataset.feature_dim;
  for (auto i : train_idx) split.train.samples.push_back(dataset.samples[i]);
  for (auto i : test_idx) split.test.samples.push_back(dataset.samples[i]);
  return split;
}

namespace {

json sample_to_json(const GraphSample& s) {
  json edges = json::array();
  for (int i = 0; i < s.node_count(); ++i) {
    for (int j = i + 1; j < s.node_count(); ++j) {
      if (s.adjacency(i, j) != 0.0) edges.push_back({i, j});
    }
  }
  json features = json::array();
  for (Eigen::Index r = 0; r < s.features.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < s.features.cols(); ++c) {
      row.push_back(s.features(r, c));
    }
    features.push_back(std::move(row));
  }
  return {{"n", s.node_count()},
          {"edges", std::move(edges)},
          {"features", std::move(features)},
          {"label", s.label}};
}

template <typename T>
T require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(where + ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": field '" + key + "': " + e.what());
  }
}

GraphSample sample_from_json(const json& g, int feature_dim,
                             const std::string& where) {
  const int n = require<int>(g, "n", where);
  if (n < 1) throw ParseError(where + ": n must be positive");
  const auto edges = require<std::vector<std::vector<int>>>(g, "edges", where);
  const auto rows =
      require<std::vector<std::vector<double>>>(g, "features", where);
  const int label = require<int>(g, "label", where);

  if (static_cast<int>(rows.size()) != n) {
    throw ParseError(where + ": expected " + std::to_string(n) +
                     " feature rows, got " + std::to_string(rows.size()));
  }
  Matrix features(n, feature_dim);
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != feature_dim) {
      throw ParseError(where + ": feature row " + std::to_string(r) +
                       " has wrong length");
    }
    for (int c = 0; c < feature_dim; ++c) {
      features(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
  }
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.size() != 2) throw ParseError(where + ": edge must be an index pair");
    pairs.emplace_back(e[0], e[1]);
  }
  try {
    return make_sample(n, pairs, std::move(features), label);
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

}  // namespace

std::string dataset_to_json(const GraphDataset& dataset) {
  json graphs = json::array();
  for (const auto& s : dataset.samples) graphs.push_back(sample_to_json(s));
  json doc = {{"name", dataset.name},
              {"feature_dim", dataset.feature_dim},
              {"graphs", std::move(graphs)}};
  return doc.dump();
}

GraphDataset dataset_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("dataset document: ") + e.what());
  }
  GraphDataset dataset;
  dataset.name = require<std::string>(doc, "name", "dataset");
  dataset.feature_dim = require<int>(doc, "feature_dim", "dataset");
  if (dataset.feature_dim < 1) {
    throw ParseError("dataset: feature_dim must be positive");
  }
  if (!doc.contains("graphs") || !doc["graphs"].is_array()) {
    throw ParseError("dataset: missing array field 'graphs'");
  }
  const auto& graphs = doc["graphs"];
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    dataset.samples.push_back(sample_from_json(
        graphs[g], dataset.feature_dim, "graph #" + std::to_string(g)));
  }
  validate_dataset(dataset);
  return dataset;
}

void save_dataset(const GraphDataset& dataset,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dataset_to_json(dataset) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

GraphDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return dataset_from_json(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace gnnmf
