#include "gnnmf/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gnnmf/rng.hpp"

namespace gnnmf {

namespace {

void require_nonempty(std::span<const PreparedGraph> graphs, const char* what) {
  if (graphs.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty dataset");
  }
}

// Buffers reused across graphs so the inner loop does not allocate.
struct Workspace {
  Matrix pre;
  Matrix act;
  Matrix delta;
};

// Runs the forward pass for one graph, then accumulates
// upstream(y_hat) * d y_hat / d params into `grad`. Returns y_hat.
template <typename Upstream>
double backprop_graph(const UnitParams& params, const PreparedGraph& graph,
                      const ModelConfig& config, Upstream&& upstream,
                      UnitParams& grad, Workspace& ws) {
  const Nonlinearity nl = config.unit_nonlinearity();
  ws.pre.resize(graph.propagated.rows(), params.width());
  ws.pre.noalias() = graph.propagated * params.w1.transpose();
  if (params.has_w3()) ws.pre.noalias() += graph.self_features * params.w3.transpose();
  ws.act = ws.pre;
  activate_inplace(nl, ws.act);

  const double unit_scale = graph.readout_scale / static_cast<double>(params.width());
  const double y_hat = unit_scale * (ws.act * params.w2).sum();

  const double coef = upstream(y_hat) * unit_scale;
  grad.w2.noalias() += coef * ws.act.colwise().sum().transpose();
  // d y_hat / d pre(j, i) = unit_scale * w2_i * slope(j, i)
  const auto w2_row = (coef * params.w2.transpose()).array();
  ws.delta.resize(ws.act.rows(), ws.act.cols());
  switch (nl) {
    case Nonlinearity::Tanh:
      ws.delta.array() = (1.0 - ws.act.array().square()).rowwise() * w2_row;
      break;
    case Nonlinearity::SigmoidCentered:
      // act = s - 1/2, so s (1 - s) = 1/4 - act^2
      ws.delta.array() = (0.25 - ws.act.array().square()).rowwise() * w2_row;
      break;
    case Nonlinearity::Identity:
      ws.delta.rowwise() = w2_row.matrix();
      break;
  }
  grad.w1.noalias() += ws.delta.transpose() * graph.propagated;
  if (params.has_w3()) grad.w3.noalias() += ws.delta.transpose() * graph.self_features;
  return y_hat;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw std::invalid_argument("momentum must lie in [0, 1)");
  }
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
}

double logistic_loss(double y_hat, int y) {
  const double z = static_cast<double>(y) * y_hat;
  return std::log1p(std::exp(-std::abs(z))) + std::max(-z, 0.0);
}

double logistic_loss_grad(double y_hat, int y) {
  const double yd = static_cast<double>(y);
  return -yd / (1.0 + std::exp(yd * y_hat));
}

double empirical_risk(const UnitParams& params,
                      std::span<const PreparedGraph> graphs,
                      const ModelConfig& config) {
  require_nonempty(graphs, "empirical_risk");
  double total = 0.0;
  for (const auto& g : graphs) {
    total += logistic_loss(forward_prepared(params, g, config), g.label);
  }
  return total / static_cast<double>(graphs.size());
}

double empirical_risk(const UnitParams& params, const GraphDataset& dataset,
                      const ModelConfig& config) {
  check_shapes(params, config, dataset.feature_dim);
  const auto prepared = prepare_dataset(dataset, config);
  return empirical_risk(params, prepared, config);
}

double regularization_penalty(const UnitParams& params, double alpha) {
  const double h = static_cast<double>(params.width());
  return params.unit_squared_norms().sum() / (2.0 * h * alpha);
}

double regularized_risk(const UnitParams& params,
                        std::span<const PreparedGraph> graphs,
                        const ModelConfig& config, double alpha) {
  return empirical_risk(params, graphs, config) + regularization_penalty(params, alpha);
}

double regularized_risk(const UnitParams& params, const GraphDataset& dataset,
                        const ModelConfig& config, double alpha) {
  return empirical_risk(params, dataset, config) + regularization_penalty(params, alpha);
}

UnitParams grad_empirical_risk(const UnitParams& params,
                               std::span<const PreparedGraph> batch,
                               const ModelConfig& config) {
  require_nonempty(batch, "grad_empirical_risk");
  UnitParams grad = UnitParams::zeros_like(params);
  Workspace ws;
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (const auto& g : batch) {
    backprop_graph(
        params, g, config,
        [&](double y_hat) { return inv_b * logistic_loss_grad(y_hat, g.label); },
        grad, ws);
  }
  return grad;
}

UnitParams penalty_gradient(const UnitParams& params, double alpha) {
  UnitParams grad = params;
  grad *= 1.0 / (static_cast<double>(params.width()) * alpha);
  return grad;
}

UnitParams grad_regularized_risk(const UnitParams& params,
                                 std::span<const PreparedGraph> batch,
                                 const ModelConfig& config, double alpha) {
  UnitParams grad = grad_empirical_risk(params, batch, config);
  grad += penalty_gradient(params, alpha);
  return grad;
}

UnitParams grad_regularized_risk(const UnitParams& params,
                                 const std::vector<GraphSample>& batch,
                                 const ModelConfig& config, double alpha) {
  std::vector<PreparedGraph> prepared;
  prepared.reserve(batch.size());
  for (const auto& s : batch) {
    check_shapes(params, config, s.feature_dim());
    prepared.push_back(prepare_graph(s, config));
  }
  return grad_regularized_risk(params, prepared, config, alpha);
}

void sgd_step(UnitParams& params, const UnitParams& grads, UnitParams& velocity,
              const TrainConfig& config) {
  if (!params.same_shape(grads) || !params.same_shape(velocity)) {
    throw std::invalid_argument("sgd_step: shape mismatch");
  }
  velocity *= config.momentum;
  velocity += grads;
  params.w1 -= config.learning_rate * velocity.w1;
  params.w2 -= config.learning_rate * velocity.w2;
  if (params.has_w3()) params.w3 -= config.learning_rate * velocity.w3;
}

TrainOutcome train(UnitParams params, std::span<const PreparedGraph> train_set,
                   const TrainConfig& config, const ModelConfig& model_config) {
  config.validate();
  require_nonempty(train_set, "train");
  TrainOutcome out;
  UnitParams velocity = UnitParams::zeros_like(params);
  const double decay = 1.0 / (static_cast<double>(params.width()) * config.alpha);
  Rng rng(config.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch = static_cast<std::size_t>(config.batch_size);
  Workspace ws;
  UnitParams grad = UnitParams::zeros_like(params);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      const double inv_b = 1.0 / static_cast<double>(stop - start);
      // Loss gradient and penalty gradient in one pass.
      grad.w1 = decay * params.w1;
      grad.w2 = decay * params.w2;
      if (params.has_w3()) grad.w3 = decay * params.w3;
      for (std::size_t k = start; k < stop; ++k) {
        const PreparedGraph& g = train_set[order[k]];
        backprop_graph(
            params, g, model_config,
            [&](double y_hat) {
              const double loss = logistic_loss(y_hat, g.label);
              if (!std::isfinite(loss)) {
                throw TrainingDiverged("non-finite loss at epoch " +
                                       std::to_string(epoch) +
                                       " (y_hat = " + std::to_string(y_hat) + ")");
              }
              epoch_loss += loss;
              return inv_b * logistic_loss_grad(y_hat, g.label);
            },
            grad, ws);
      }
      sgd_step(params, grad, velocity, config);
      ++out.steps;
    }
    out.loss_history.push_back(epoch_loss / static_cast<double>(order.size()));
  }
  if (!params.w1.allFinite() || !params.w2.allFinite() || !params.w3.allFinite()) {
    throw TrainingDiverged("non-finite parameters after training");
  }
  out.params = std::move(params);
  return out;
}

TrainOutcome train(UnitParams params, const GraphDataset& train_set,
                   const TrainConfig& config, const ModelConfig& model_config) {
  check_shapes(params, model_config, train_set.feature_dim);
  const auto prepared = prepare_dataset(train_set, model_config);
  return train(std::move(params), prepared, config, model_config);
}

RunResult measure_generalization(const UnitParams& params,
                                 std::span<const PreparedGraph> train_set,
                                 std::span<const PreparedGraph> test_set,
                                 const ModelConfig& config) {
  RunResult r;
  r.train_risk = empirical_risk(params, train_set, config);
  r.test_risk = empirical_risk(params, test_set, config);
  r.abs_gen_error = std::abs(r.test_risk - r.train_risk);
  r.width = params.width();
  return r;
}

RunResult measure_generalization(const UnitParams& params,
                                 const GraphDataset& train_set,
                                 const GraphDataset& test_set,
                                 const ModelConfig& config) {
  check_shapes(params, config, train_set.feature_dim);
  const auto train_prepared = prepare_dataset(train_set, config);
  const auto test_prepared = prepare_dataset(test_set, config);
  return measure_generalization(params, train_prepared, test_prepared, config);
}

}  // namespace gnnmf
