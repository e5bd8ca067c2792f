#pragma once

#include <optional>
#include <string>

#include "gnnmf/models.hpp"

namespace gnnmf {

/// Trained-parameter statistics the bounds consume: sup |W2|, and the largest
/// Euclidean norm of a W1 (and, for MPGNN, W3) unit row.
struct ModelStatsExtracted {
  double w2_max = 0.0;
  double w1_norm_max = 0.0;
  std::optional<double> w3_norm_max;
};

ModelStatsExtracted extract_model_stats(const UnitParams& params);

struct LipschitzConstants {
  double phi = 1.0;    // GCN activation
  double kappa = 1.0;  // MPGNN unit nonlinearity
  double rho = 1.0;
  double zeta = 1.0;
};

struct BoundInputs {
  int n = 1;            // training-sample count
  double alpha = 100.0;
  int n_max = 1;
  double b_f = 1.0;
  double g_max = 1.0;
  Readout readout = Readout::Mean;
  LipschitzConstants lipschitz;
  double m_ell_prime = 1.0;  // sup |d loss / d y_hat|; 1 for logistic loss
  double delta = 0.05;
  std::optional<double> m_phi_cap;  // sup |unit nonlinearity|, if bounded

  // 1/N_max for Mean readout, 1 for Sum.
  double readout_lipschitz() const;
  void validate() const;
};

// Fills Lipschitz constants and the nonlinearity cap from a model config.
BoundInputs bound_inputs_for(const ModelConfig& config, int n, double alpha,
                             int n_max, double b_f, double g_max, double delta);

// Largest logistic loss over |y_hat| <= output_bound: log(1 + exp(B)).
double m_ell(double output_bound);

// alpha * (M_l' M_phi L_psi N_max)^2 / n.
double generic_fd_bound(const BoundInputs& inputs, double m_phi);

// Per-node bound on one GCN unit output:
//   w2 * L_phi * ||W1|| * g_max * B_f             (Lipschitz form)
//   w2 * min(M_phi, L_phi * ||W1|| * g_max * B_f) (bounded form)
double gcn_unit_bound(const BoundInputs& inputs, const ModelStatsExtracted& stats,
                      bool bounded_activation);

// MPGNN analogue with L_kappa B_f (||W3|| + g_max L_rho L_zeta ||W1||).
double mpgnn_unit_bound(const BoundInputs& inputs, const ModelStatsExtracted& stats,
                        bool bounded_kappa);

double gcn_fd_bound(const BoundInputs& inputs, const ModelStatsExtracted& stats,
                    bool bounded_activation);
double mpgnn_fd_bound(const BoundInputs& inputs, const ModelStatsExtracted& stats,
                      bool bounded_kappa);

struct RademacherTerms {
  double complexity = 0.0;  // 4 N L M sqrt(N L M alpha / n) part
  double confidence = 0.0;  // 3 M_l sqrt(log(2/delta) / (2n)) part
  double total() const { return complexity + confidence; }
};

RademacherTerms rademacher_terms(const BoundInputs& inputs, double m_phi,
                                 double m_ell_value);
// m_ell_value defaults to m_ell(N_max * L_psi * m_phi).
double rademacher_bound(const BoundInputs& inputs, double m_phi);

struct BoundReport {
  ModelKind model = ModelKind::Gcn;
  bool bounded = true;
  std::string variant;
  double m_phi = 0.0;         // per-node unit-output bound fed to both bounds
  double output_bound = 0.0;  // |y_hat| <= N_max * L_psi * m_phi
  double m_ell = 0.0;
  double fd_bound = 0.0;
  double rademacher_bound = 0.0;
  BoundInputs inputs;
  ModelStatsExtracted stats;
};

BoundReport compute_bounds(ModelKind model, const BoundInputs& inputs,
                           const ModelStatsExtracted& stats, bool bounded);

}  // namespace gnnmf
