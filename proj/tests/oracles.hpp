#pragma once

// Slow reference implementations used only by tests. They follow the
// definitions entry by entry and share no numerics with the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "gnnmf/filters.hpp"
#include "gnnmf/graph.hpp"
#include "gnnmf/models.hpp"
#include "gnnmf/training.hpp"

namespace oracle {

using gnnmf::FilterKind;
using gnnmf::GraphSample;
using gnnmf::Matrix;
using gnnmf::ModelConfig;
using gnnmf::ModelKind;
using gnnmf::Nonlinearity;
using gnnmf::Readout;
using gnnmf::UnitParams;

inline double act(Nonlinearity nl, double x) {
  switch (nl) {
    case Nonlinearity::Tanh: return std::tanh(x);
    case Nonlinearity::SigmoidCentered: return 1.0 / (1.0 + std::exp(-x)) - 0.5;
    case Nonlinearity::Identity: return x;
  }
  return 0.0;
}

inline Matrix filter(FilterKind kind, const Matrix& a) {
  const long n = a.rows();
  std::vector<double> deg(static_cast<std::size_t>(n), 0.0);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) deg[static_cast<std::size_t>(i)] += a(i, j);
  Matrix g(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      const double tilde = a(i, j) + (i == j ? 1.0 : 0.0);
      const double di = deg[static_cast<std::size_t>(i)];
      const double dj = deg[static_cast<std::size_t>(j)];
      switch (kind) {
        case FilterKind::SymNorm:
          g(i, j) = tilde / std::sqrt((di + 1.0) * (dj + 1.0));
          break;
        case FilterKind::RandomWalk:
          g(i, j) = (di > 0 ? a(i, j) / di : 0.0) + (i == j ? 1.0 : 0.0);
          break;
        case FilterKind::MeanAgg:
          g(i, j) = tilde / (di + 1.0);
          break;
        case FilterKind::SumAgg:
          g(i, j) = tilde;
          break;
      }
    }
  }
  return g;
}

// y_hat = psi( sum_j (1/h) sum_i unit(i, j) ), written as plain loops.
inline double forward(const UnitParams& p, const GraphSample& s, const ModelConfig& c) {
  const Matrix g = filter(c.filter, s.adjacency);
  const long n = s.adjacency.rows();
  const long k = s.features.cols();
  const int h = p.width();
  double total = 0.0;
  for (long j = 0; j < n; ++j) {
    for (int i = 0; i < h; ++i) {
      double unit = 0.0;
      if (c.kind == ModelKind::Gcn) {
        double pre = 0.0;
        for (long col = 0; col < k; ++col) {
          double filtered = 0.0;
          for (long m = 0; m < n; ++m) filtered += g(j, m) * s.features(m, col);
          pre += filtered * p.w1(i, col);
        }
        unit = p.w2(i) * act(c.activation, pre);
      } else {
        double pre = 0.0;
        for (long col = 0; col < k; ++col) {
          double agg = 0.0;
          for (long m = 0; m < n; ++m) agg += g(j, m) * act(c.zeta, s.features(m, col));
          pre += s.features(j, col) * p.w3(i, col) + act(c.rho, agg) * p.w1(i, col);
        }
        unit = p.w2(i) * act(c.kappa, pre);
      }
      total += unit / static_cast<double>(h);
    }
  }
  return c.readout == Readout::Mean ? total / static_cast<double>(n) : total;
}

inline double logistic(double y_hat, int y) { return std::log(1.0 + std::exp(-y * y_hat)); }

// Every scalar of the container, in a fixed order, as mutable references.
inline std::vector<double*> coordinates(UnitParams& p) {
  std::vector<double*> out;
  for (long i = 0; i < p.w1.size(); ++i) out.push_back(p.w1.data() + i);
  for (long i = 0; i < p.w2.size(); ++i) out.push_back(p.w2.data() + i);
  for (long i = 0; i < p.w3.size(); ++i) out.push_back(p.w3.data() + i);
  return out;
}

// Central differences of `objective` around `p`, one entry per coordinate.
inline std::vector<double> central_difference(UnitParams p,
                                              const std::function<double(const UnitParams&)>& objective,
                                              double step = 1e-6) {
  std::vector<double> out;
  for (double* x : coordinates(p)) {
    const double saved = *x;
    *x = saved + step;
    const double up = objective(p);
    *x = saved - step;
    const double down = objective(p);
    *x = saved;
    out.push_back((up - down) / (2.0 * step));
  }
  return out;
}

// Pass when |a - b| <= max(rel * max(|a|, |b|), abs_floor).
inline bool close(double a, double b, double rel, double abs_floor) {
  return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs_floor);
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Random simple graph with unit-norm features and a random label.
inline GraphSample random_sample(std::mt19937_64& gen, int n, int k, double p = 0.5) {
  std::bernoulli_distribution edge(p);
  std::normal_distribution<double> normal;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (edge(gen)) edges.emplace_back(i, j);
  Matrix f(n, k);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) f(i, c) = normal(gen);
    f.row(i) /= f.row(i).norm();
  }
  const int label = std::bernoulli_distribution(0.5)(gen) ? 1 : -1;
  return gnnmf::make_sample(n, edges, f, label);
}

inline UnitParams random_params(std::mt19937_64& gen, ModelKind kind, int h, int k,
                                double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  UnitParams p = UnitParams::zeros(kind, h, k);
  for (double* x : coordinates(p)) *x = normal(gen);
  return p;
}

inline std::vector<int> random_permutation(std::mt19937_64& gen, int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), gen);
  return perm;
}

}  // namespace oracle
