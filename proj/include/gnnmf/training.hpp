#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gnnmf/graph.hpp"
#include "gnnmf/models.hpp"

namespace gnnmf {

struct TrainConfig {
  double learning_rate = 0.005;
  double momentum = 0.9;
  double alpha = 100.0;  // inverse temperature; weight decay is 1/(h alpha)
  int batch_size = 128;
  int epochs = 200;
  std::uint64_t seed = 0;

  void validate() const;
};

struct RunResult {
  double train_risk = 0.0;
  double test_risk = 0.0;
  double abs_gen_error = 0.0;
  std::vector<double> loss_history;
  int width = 0;
  std::uint64_t seed = 0;
};

/// Training hit a non-finite loss or parameter.
class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// log(1 + exp(-y * y_hat)), overflow-safe.
double logistic_loss(double y_hat, int y);
// d loss / d y_hat = -y / (1 + exp(y * y_hat)); magnitude never exceeds 1.
double logistic_loss_grad(double y_hat, int y);

double empirical_risk(const UnitParams& params,
                      std::span<const PreparedGraph> graphs,
                      const ModelConfig& config);
double empirical_risk(const UnitParams& params, const GraphDataset& dataset,
                      const ModelConfig& config);

// (1 / (h alpha)) * sum_i ||W[i,:]||^2 / 2
double regularization_penalty(const UnitParams& params, double alpha);

double regularized_risk(const UnitParams& params,
                        std::span<const PreparedGraph> graphs,
                        const ModelConfig& config, double alpha);
double regularized_risk(const UnitParams& params, const GraphDataset& dataset,
                        const ModelConfig& config, double alpha);

// Batch-average gradient of the logistic loss term, by backpropagation.
UnitParams grad_empirical_risk(const UnitParams& params,
                               std::span<const PreparedGraph> batch,
                               const ModelConfig& config);

// Gradient of the penalty: params / (h alpha).
UnitParams penalty_gradient(const UnitParams& params, double alpha);

UnitParams grad_regularized_risk(const UnitParams& params,
                                 std::span<const PreparedGraph> batch,
                                 const ModelConfig& config, double alpha);
UnitParams grad_regularized_risk(const UnitParams& params,
                                 const std::vector<GraphSample>& batch,
                                 const ModelConfig& config, double alpha);

// Classical momentum: v <- momentum * v + g;  p <- p - lr * v.
void sgd_step(UnitParams& params, const UnitParams& grads, UnitParams& velocity,
              const TrainConfig& config);

struct TrainOutcome {
  UnitParams params;
  // Per epoch, the mean logistic loss over that epoch's minibatches,
  // each evaluated at the parameters the step started from.
  std::vector<double> loss_history;
  std::size_t steps = 0;
};

/// Minibatch momentum SGD on the regularized objective. Batch order is
/// reshuffled every epoch from a stream seeded by `config.seed`.
/// Throws TrainingDiverged on a non-finite loss.
TrainOutcome train(UnitParams params, std::span<const PreparedGraph> train_set,
                   const TrainConfig& config, const ModelConfig& model_config);
TrainOutcome train(UnitParams params, const GraphDataset& train_set,
                   const TrainConfig& config, const ModelConfig& model_config);

// Unregularized risks on both splits and |test - train|.
RunResult measure_generalization(const UnitParams& params,
                                 std::span<const PreparedGraph> train_set,
                                 std::span<const PreparedGraph> test_set,
                                 const ModelConfig& config);
RunResult measure_generalization(const UnitParams& params,
                                 const GraphDataset& train_set,
                                 const GraphDataset& test_set,
                                 const ModelConfig& config);

}  // namespace gnnmf
