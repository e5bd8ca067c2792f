#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gnnmf/filters.hpp"
#include "gnnmf/graph.hpp"

namespace gnnmf {

enum class ModelKind { Gcn, Mpgnn };
enum class Readout { Mean, Sum };

// Zero-centred scalar nonlinearities. SigmoidCentered is sigmoid(x) - 1/2.
enum class Nonlinearity { Tanh, SigmoidCentered, Identity };

// FanIn: W1/W3 entries ~ N(0, 1/k), W2 entries ~ N(0, 1/h).
// StandardNormal: every scalar ~ N(0, 1).
enum class InitScheme { FanIn, StandardNormal };

std::string_view model_name(ModelKind kind);
std::string_view readout_name(Readout readout);
std::string_view nonlinearity_name(Nonlinearity nl);
std::string_view init_name(InitScheme init);
ModelKind parse_model(std::string_view name);
Readout parse_readout(std::string_view name);
Nonlinearity parse_nonlinearity(std::string_view name);
InitScheme parse_init(std::string_view name);

double activate(Nonlinearity nl, double x);
double activate_derivative(Nonlinearity nl, double x);
// Entrywise; the matrix forms are what forward and backward passes use.
Matrix activate(Nonlinearity nl, const Matrix& x);
void activate_inplace(Nonlinearity nl, Eigen::Ref<Matrix> x);
double lipschitz_constant(Nonlinearity nl);
// sup |f(x)|, or nullopt when unbounded.
std::optional<double> output_cap(Nonlinearity nl);

struct ModelConfig {
  ModelKind kind = ModelKind::Gcn;
  FilterKind filter = FilterKind::SymNorm;
  int width = 128;
  Readout readout = Readout::Mean;
  Nonlinearity activation = Nonlinearity::Tanh;  // GCN phi
  Nonlinearity zeta = Nonlinearity::Tanh;        // MPGNN, applied to F
  Nonlinearity rho = Nonlinearity::Tanh;         // MPGNN, applied to G(A) zeta(F)
  Nonlinearity kappa = Nonlinearity::Tanh;       // MPGNN unit output
  InitScheme init = InitScheme::FanIn;

  // phi for GCN, kappa for MPGNN.
  Nonlinearity unit_nonlinearity() const {
    return kind == ModelKind::Gcn ? activation : kappa;
  }
};

/// The finite-width parameter measure m_h as h unit rows.
///
/// Row i of `w1` (h x k) and entry i of `w2` describe unit i. MPGNN units also
/// own row i of `w3` (h x k); for GCN `w3` is empty. The same container holds
/// gradients and momentum buffers.
struct UnitParams {
  Matrix w1;
  Vector w2;
  Matrix w3;

  int width() const { return static_cast<int>(w2.size()); }
  int feature_dim() const { return static_cast<int>(w1.cols()); }
  bool has_w3() const { return w3.size() > 0; }
  std::size_t scalar_count() const {
    return static_cast<std::size_t>(w1.size() + w2.size() + w3.size());
  }

  static UnitParams zeros_like(const UnitParams& other);
  static UnitParams zeros(ModelKind kind, int width, int feature_dim);

  UnitParams& operator+=(const UnitParams& other);
  UnitParams& operator*=(double s);
  bool same_shape(const UnitParams& other) const;

  // Squared Euclidean norm of each unit row (w1_i, w2_i[, w3_i]).
  Vector unit_squared_norms() const;

  // Units of `a` followed by units of `b`.
  static UnitParams concat(const UnitParams& a, const UnitParams& b);
  // Unit i of the result is unit perm[i] of this.
  UnitParams permute_units(const std::vector<int>& perm) const;

  bool operator==(const UnitParams& o) const {
    return same_shape(o) && w1 == o.w1 && w2 == o.w2 && w3 == o.w3;
  }
};

UnitParams init_params(const ModelConfig& config, int feature_dim,
                       std::uint64_t seed);

// Per-node GCN neuron output  w2 * phi(<filtered_row, w1>).
double gcn_unit_output(const Vector& w1_row, double w2,
                       const Vector& filtered_row,
                       Nonlinearity phi = Nonlinearity::Tanh);

// Per-node MPU output  w2 * kappa(<feature_row, w3> + <rho(aggregated_row), w1>)
// where aggregated_row = G(A)[j,:] zeta(F).
double mpgnn_unit_output(const Vector& w1_row, double w2, const Vector& w3_row,
                         const Vector& feature_row,
                         const Vector& aggregated_row,
                         Nonlinearity rho = Nonlinearity::Tanh,
                         Nonlinearity kappa = Nonlinearity::Tanh);

/// Parameter-independent inputs of one graph, computed once per
/// (sample, model config) and reused by every forward/backward pass.
///
/// Unit pre-activations are  propagated * W1^T + self_features * W3^T.
/// GCN: propagated = G(A) F, self_features empty.
/// MPGNN: propagated = rho(G(A) zeta(F)), self_features = F.
struct PreparedGraph {
  Matrix propagated;
  Matrix self_features;
  double readout_scale = 1.0;  // 1/N for Mean, 1 for Sum
  int label = 1;
};

PreparedGraph prepare_graph(const GraphSample& sample, const ModelConfig& config);
std::vector<PreparedGraph> prepare_dataset(const GraphDataset& dataset,
                                           const ModelConfig& config);

// Throws std::invalid_argument when the params do not fit config/sample.
void check_shapes(const UnitParams& params, const ModelConfig& config,
                  int feature_dim);

double forward_prepared(const UnitParams& params, const PreparedGraph& graph,
                        const ModelConfig& config);

// y_hat = psi( sum_j (1/h) sum_i unit_output(i, j) ).
double forward_graph(const UnitParams& params, const GraphSample& sample,
                     const ModelConfig& config);

}  // namespace gnnmf
