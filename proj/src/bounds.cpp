#include "gnnmf/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gnnmf {

ModelStatsExtracted extract_model_stats(const UnitParams& params) {
  ModelStatsExtracted s;
  if (params.width() == 0) return s;
  s.w2_max = params.w2.cwiseAbs().maxCoeff();
  s.w1_norm_max = params.w1.size() ? params.w1.rowwise().norm().maxCoeff() : 0.0;
  if (params.has_w3()) s.w3_norm_max = params.w3.rowwise().norm().maxCoeff();
  return s;
}

double BoundInputs::readout_lipschitz() const {
  return readout == Readout::Mean ? 1.0 / static_cast<double>(n_max) : 1.0;
}

void BoundInputs::validate() const {
  if (n < 1) throw std::invalid_argument("bound inputs: n must be >= 1");
  if (n_max < 1) throw std::invalid_argument("bound inputs: n_max must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("bound inputs: alpha must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("bound inputs: delta must lie in (0, 1)");
  }
  if (b_f < 0.0 || g_max < 0.0 || m_ell_prime < 0.0) {
    throw std::invalid_argument("bound inputs: negative constant");
  }
}

BoundInputs bound_inputs_for(const ModelConfig& config, int n, double alpha,
                             int n_max, double b_f, double g_max, double delta) {
  BoundInputs in;
  in.n = n;
  in.alpha = alpha;
  in.n_max = n_max;
  in.b_f = b_f;
  in.g_max = g_max;
  in.readout = config.readout;
  in.delta = delta;
  in.lipschitz.phi = lipschitz_constant(config.activation);
  in.lipschitz.kappa = lipschitz_constant(config.kappa);
  in.lipschitz.rho = lipschitz_constant(config.rho);
  in.lipschitz.zeta = lipschitz_constant(config.zeta);
  in.m_phi_cap = output_cap(config.unit_nonlinearity());
  return in;
}

double m_ell(double output_bound) {
  if (output_bound < 0.0) throw std::invalid_argument("m_ell: negative output bound");
  // log(1 + e^B) = B + log1p(e^-B), stable for large B.
  return output_bound + std::log1p(std::exp(-output_bound));
}

double generic_fd_bound(const BoundInputs& inputs, double m_phi) {
  inputs.validate();
  const double c = inputs.m_ell_prime * m_phi * inputs.readout_lipschitz() *
                   static_cast<double>(inputs.n_max);
  return inputs.alpha * c * c / static_cast<double>(inputs.n);
}

double gcn_unit_bound(const BoundInputs& inputs, const ModelStatsExtracted& stats,
                      bool bounded_activation) {
  const double lipschitz_form =
      inputs.lipschitz.phi * stats.w1_norm_max * inputs.g_max * inputs.b_f;
  double per_unit = lipschitz_form;
  if (bounded_activation && inputs.m_phi_cap) {
    per_unit = std::min(*inputs.m_phi_cap, lipschitz_form);
  }
  return stats.w2_max * per_unit;
}

double mpgnn_unit_bound(const BoundInputs& inputs, const ModelStatsExtracted& stats,
                        bool bounded_kappa) {
  if (!stats.w3_norm_max) {
    throw std::invalid_argument("mpgnn bound needs MPGNN statistics (W3 norm)");
  }
  const auto& l = inputs.lipschitz;
  const double lipschitz_form =
      l.kappa * inputs.b_f *
      (*stats.w3_norm_max + inputs.g_max * l.rho * l.zeta * stats.w1_norm_max);
  double per_unit = lipschitz_form;
  if (bounded_kappa && inputs.m_phi_cap) {
    per_unit = std::min(*inputs.m_phi_cap, lipschitz_form);
  }
  return stats.w2_max * per_unit;
}

double gcn_fd_bound(const BoundInputs& inputs, const ModelStatsExtracted& stats,
                    bool bounded_activation) {
  if (stats.w3_norm_max) {
    throw std::invalid_argument("gcn bound given MPGNN statistics");
  }
  inputs.validate();
  // M_c carries the N_max factor under Sum readout.
  const double readout_factor =
      inputs.readout == Readout::Sum ? static_cast<double>(inputs.n_max) : 1.0;
  const double m_c = readout_factor * gcn_unit_bound(inputs, stats, bounded_activation);
  return inputs.alpha * m_c * m_c * inputs.m_ell_prime * inputs.m_ell_prime /
         static_cast<double>(inputs.n);
}

double mpgnn_fd_bound(const BoundInputs& inputs, const ModelStatsExtracted& stats,
                      bool bounded_kappa) {
  inputs.validate();
  const double readout_factor =
      inputs.readout == Readout::Sum ? static_cast<double>(inputs.n_max) : 1.0;
  const double m_p = readout_factor * mpgnn_unit_bound(inputs, stats, bounded_kappa);
  return inputs.alpha * m_p * m_p * inputs.m_ell_prime * inputs.m_ell_prime /
         static_cast<double>(inputs.n);
}

RademacherTerms rademacher_terms(const BoundInputs& inputs, double m_phi,
                                 double m_ell_value) {
  inputs.validate();
  const double n = static_cast<double>(inputs.n);
  const double scale = static_cast<double>(inputs.n_max) * m_phi *
                       inputs.m_ell_prime * inputs.readout_lipschitz();
  RademacherTerms t;
  t.complexity = 4.0 * scale * std::sqrt(scale * inputs.alpha / n);
  t.confidence = 3.0 * m_ell_value * std::sqrt(std::log(2.0 / inputs.delta) / (2.0 * n));
  return t;
}

double rademacher_bound(const BoundInputs& inputs, double m_phi) {
  const double output_bound =
      static_cast<double>(inputs.n_max) * inputs.readout_lipschitz() * m_phi;
  return rademacher_terms(inputs, m_phi, m_ell(output_bound)).total();
}

BoundReport compute_bounds(ModelKind model, const BoundInputs& inputs,
                           const ModelStatsExtracted& stats, bool bounded) {
  BoundReport r;
  r.model = model;
  r.bounded = bounded;
  r.inputs = inputs;
  r.stats = stats;
  const bool capped = bounded && inputs.m_phi_cap.has_value();
  const char* readout = inputs.readout == Readout::Mean ? "mean" : "sum";
  if (model == ModelKind::Gcn) {
    r.m_phi = gcn_unit_bound(inputs, stats, bounded);
    r.fd_bound = gcn_fd_bound(inputs, stats, bounded);
    r.variant = std::string("gcn-") + readout + (capped ? "-bounded" : "-lipschitz");
  } else {
    r.m_phi = mpgnn_unit_bound(inputs, stats, bounded);
    r.fd_bound = mpgnn_fd_bound(inputs, stats, bounded);
    r.variant = std::string("mpgnn-") + readout + (capped ? "-bounded" : "-lipschitz");
  }
  r.output_bound = static_cast<double>(inputs.n_max) * inputs.readout_lipschitz() * r.m_phi;
  r.m_ell = m_ell(r.output_bound);
  r.rademacher_bound = rademacher_terms(inputs, r.m_phi, r.m_ell).total();
  return r;
}

}  // namespace gnnmf
