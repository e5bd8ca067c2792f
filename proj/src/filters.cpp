#include "gnnmf/filters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gnnmf {

std::string_view filter_name(FilterKind kind) {
  switch (kind) {
    case FilterKind::SymNorm: return "sym-norm";
    case FilterKind::RandomWalk: return "random-walk";
    case FilterKind::MeanAgg: return "mean-agg";
    case FilterKind::SumAgg: return "sum-agg";
  }
  return "unknown";
}

FilterKind parse_filter(std::string_view name) {
  for (FilterKind k : kAllFilters) {
    if (filter_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown filter '" + std::string(name) +
                              "' (expected sym-norm, random-walk, mean-agg, sum-agg)");
}

Matrix apply_filter(FilterKind kind, const GraphSample& sample) {
  const Matrix& a = sample.adjacency;
  const Eigen::Index n = a.rows();
  const Vector deg = a.rowwise().sum();
  const Matrix identity = Matrix::Identity(n, n);
  switch (kind) {
    case FilterKind::SymNorm: {
      const Vector inv_sqrt = (deg.array() + 1.0).rsqrt().matrix();
      return inv_sqrt.asDiagonal() * (a + identity) * inv_sqrt.asDiagonal();
    }
    case FilterKind::RandomWalk: {
      Vector inv = Vector::Zero(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (deg(i) > 0.0) inv(i) = 1.0 / deg(i);
      }
      return inv.asDiagonal() * a + identity;
    }
    case FilterKind::MeanAgg: {
      const Vector inv = (deg.array() + 1.0).inverse().matrix();
      return inv.asDiagonal() * (a + identity);
    }
    case FilterKind::SumAgg:
      return a + identity;
  }
  throw std::logic_error("unhandled filter kind");
}

double inf_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double fro_norm(const Matrix& m) { return m.norm(); }

double spectral_norm(const Matrix& m, double tol, int max_iter) {
  if (m.size() == 0) return 0.0;
  const Eigen::Index n = m.cols();
  // Fixed, non-symmetric start so no structured matrix is orthogonal to it by
  // accident (e.g. an all-ones start against a bipartite sign pattern).
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = 1.0 + 0.5 * std::sin(1.0 + 0.7 * static_cast<double>(i));
  }
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Vector mv = m * v;
    Vector w = m.transpose() * mv;
    const double next = v.dot(w);  // Rayleigh quotient of M^T M
    const double w_norm = w.norm();
    if (w_norm == 0.0) return 0.0;
    v = w / w_norm;
    if (it > 0 && std::abs(next - estimate) <= tol * std::abs(next)) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  // Final Rayleigh quotient on the converged direction.
  const double sigma_sq = (m * v).squaredNorm();
  return std::sqrt(std::max(sigma_sq, estimate));
}

int numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cutoff = rel_tol * s(0);
  return static_cast<int>((s.array() > cutoff).count());
}

FilterNormReport g_max(const GraphDataset& dataset, FilterKind kind,
                       double rank_tol) {
  if (dataset.samples.empty()) {
    throw std::invalid_argument("g_max: empty dataset");
  }
  FilterNormReport report;
  report.kind = kind;
  for (const auto& s : dataset.samples) {
    const Matrix g = apply_filter(kind, s);
    report.inf_norm_max = std::max(report.inf_norm_max, inf_norm(g));
    report.fro_norm_max = std::max(report.fro_norm_max, fro_norm(g));
    report.rank_max = std::max(report.rank_max, numerical_rank(g, rank_tol));
  }
  report.g_max = std::min(report.inf_norm_max, report.fro_norm_max);
  const DatasetStats stats = dataset_stats(dataset);
  report.inf_bound = theoretical_inf_bound(kind, stats.d_max, stats.d_min);
  report.fro_bound = theoretical_fro_bound(kind, report.rank_max);
  return report;
}

std::optional<double> theoretical_inf_bound(FilterKind kind, int d_max,
                                            int d_min) {
  if (d_min < 0 || d_max < d_min) {
    throw std::invalid_argument("theoretical_inf_bound: need 0 <= d_min <= d_max");
  }
  switch (kind) {
    case FilterKind::SymNorm:
      return std::sqrt((d_max + 1.0) / (d_min + 1.0));
    case FilterKind::SumAgg:
      return d_max + 1.0;
    case FilterKind::RandomWalk:
      return 2.0;
    case FilterKind::MeanAgg:
      // Row-stochastic.
      return 1.0;
  }
  return std::nullopt;
}

std::optional<double> theoretical_fro_bound(FilterKind kind, int rank_max) {
  if (rank_max < 1) {
    throw std::invalid_argument("theoretical_fro_bound: rank_max must be >= 1");
  }
  switch (kind) {
    case FilterKind::SymNorm:
      return std::sqrt(static_cast<double>(rank_max));
    case FilterKind::RandomWalk:
      return 2.0 * std::sqrt(static_cast<double>(rank_max));
    case FilterKind::MeanAgg:
    case FilterKind::SumAgg:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace gnnmf
