#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace gnnmf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised when a graph or dataset breaks one of its structural invariants.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a dataset document cannot be decoded.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One undirected graph with node features and a binary label.
///
/// `adjacency` is a dense N x N matrix holding 0.0 / 1.0, symmetric with a
/// zero diagonal. Node identity is the row index. `features` is N x k.
struct GraphSample {
  Matrix adjacency;
  Matrix features;
  int label = 1;

  int node_count() const { return static_cast<int>(adjacency.rows()); }
  int feature_dim() const { return static_cast<int>(features.cols()); }

  friend bool operator==(const GraphSample& a, const GraphSample& b) {
    return a.label == b.label && a.adjacency.rows() == b.adjacency.rows() &&
           a.adjacency.cols() == b.adjacency.cols() &&
           a.features.rows() == b.features.rows() &&
           a.features.cols() == b.features.cols() &&
           a.adjacency == b.adjacency && a.features == b.features;
  }
};

/// Builds a sample from an undirected edge list. Throws ValidationError on
/// out-of-range endpoints or self-loops.
GraphSample make_sample(int node_count,
                        const std::vector<std::pair<int, int>>& edges,
                        Matrix features, int label);

/// Ordered, immutable-after-construction collection of samples sharing one
/// feature dimension.
struct GraphDataset {
  std::string name;
  int feature_dim = 0;
  std::vector<GraphSample> samples;

  std::size_t size() const { return samples.size(); }
  bool operator==(const GraphDataset&) const = default;
};

struct DatasetStats {
  std::size_t n_graphs = 0;
  int n_max = 0;
  int d_max = 0;
  int d_min = 0;
  double b_f = 0.0;  // max Euclidean norm of a feature row
  int feature_dim = 0;
};

// Returns the list of violated invariants; empty means the sample is valid.
std::vector<std::string> validate_sample(const GraphSample& sample);

// Validates every sample plus dataset-level invariants; throws
// ValidationError naming the first offending record.
void validate_dataset(const GraphDataset& dataset);

// Row sums of the adjacency matrix.
std::vector<int> degrees(const GraphSample& sample);

std::size_t edge_count(const GraphSample& sample);

// Relabels node i as perm[i]. Throws std::invalid_argument("invalid
// permutation") when perm is not a bijection on [0, N).
GraphSample permute_sample(const GraphSample& sample,
                           const std::vector<int>& perm);

DatasetStats dataset_stats(const GraphDataset& dataset);

struct DatasetSplit {
  GraphDataset train;
  GraphDataset test;
};

// Seeded shuffle, first round(beta_sup * n) samples go to train.
DatasetSplit split_dataset(const GraphDataset& dataset, double beta_sup,
                           std::uint64_t seed);

// Index form of the split, useful when callers keep their own sample views.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double beta_sup, std::uint64_t seed);

std::string dataset_to_json(const GraphDataset& dataset);
GraphDataset dataset_from_json(const std::string& text);

void save_dataset(const GraphDataset& dataset,
                  const std::filesystem::path& path);
GraphDataset load_dataset(const std::filesystem::path& path);

}  // namespace gnnmf
