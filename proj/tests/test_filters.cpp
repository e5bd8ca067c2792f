#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gnnmf/filters.hpp"
#include "gnnmf/synth.hpp"
#include "oracles.hpp"

using namespace gnnmf;

namespace {

GraphSample edgeless(int n) { return make_sample(n, {}, Matrix::Ones(n, 1), 1); }
GraphSample single_edge() { return make_sample(2, {{0, 1}}, Matrix::Ones(2, 1), 1); }
GraphSample triangle() { return make_sample(3, {{0, 1}, {1, 2}, {0, 2}}, Matrix::Ones(3, 1), 1); }

}  // namespace

TEST(ApplyFilter, EdgelessSymNormIsIdentity) {
  EXPECT_TRUE(apply_filter(FilterKind::SymNorm, edgeless(2)).isApprox(Matrix::Identity(2, 2)));
}

TEST(ApplyFilter, SingleEdgeSymNorm) {
  Matrix expected(2, 2);
  expected << 0.5, 0.5, 0.5, 0.5;
  EXPECT_TRUE(apply_filter(FilterKind::SymNorm, single_edge()).isApprox(expected, 1e-15));
}

TEST(ApplyFilter, EdgelessRandomWalkIsIdentity) {
  EXPECT_EQ(apply_filter(FilterKind::RandomWalk, edgeless(3)), Matrix::Identity(3, 3));
}

TEST(ApplyFilter, IsolatedNodeRowUnderRandomWalkIsIdentityRow) {
  const GraphSample s = make_sample(3, {{0, 1}}, Matrix::Ones(3, 1), 1);
  const Matrix g = apply_filter(FilterKind::RandomWalk, s);
  EXPECT_EQ(g.row(2), Matrix::Identity(3, 3).row(2));
  EXPECT_DOUBLE_EQ(g(0, 1), 1.0);
}

TEST(ApplyFilter, MatchesDefinitionOracle) {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 40; ++t) {
    const GraphSample s = oracle::random_sample(gen, 1 + t % 10, 1, 0.35);
    for (FilterKind kind : kAllFilters) {
      const Matrix got = apply_filter(kind, s);
      const Matrix want = oracle::filter(kind, s.adjacency);
      EXPECT_LE((got - want).cwiseAbs().maxCoeff(), 1e-14) << filter_name(kind);
    }
  }
}

TEST(ApplyFilter, CommutesWithNodePermutation) {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + t % 9;
    const GraphSample s = oracle::random_sample(gen, n, 1, 0.5);
    const auto perm = oracle::random_permutation(gen, n);
    Matrix p = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) p(perm[static_cast<std::size_t>(i)], i) = 1.0;
    for (FilterKind kind : kAllFilters) {
      const Matrix lhs = apply_filter(kind, permute_sample(s, perm));
      const Matrix rhs = p * apply_filter(kind, s) * p.transpose();
      EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(FilterNames, RoundTrip) {
  for (FilterKind kind : kAllFilters) EXPECT_EQ(parse_filter(filter_name(kind)), kind);
  EXPECT_THROW(parse_filter("laplacian"), std::invalid_argument);
}

TEST(MatrixNorms, Identity3) {
  const Matrix i3 = Matrix::Identity(3, 3);
  EXPECT_DOUBLE_EQ(inf_norm(i3), 1.0);
  EXPECT_NEAR(fro_norm(i3), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(spectral_norm(i3), 1.0, 1e-10);
  EXPECT_EQ(numerical_rank(i3), 3);
}

TEST(MatrixNorms, HalfOnes) {
  Matrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  EXPECT_DOUBLE_EQ(inf_norm(m), 1.0);
  EXPECT_NEAR(fro_norm(m), 1.0, 1e-15);
  EXPECT_NEAR(spectral_norm(m), 1.0, 1e-10);
  EXPECT_EQ(numerical_rank(m), 1);
}

TEST(MatrixNorms, InfNormUsesAbsoluteValues) {
  Matrix m(2, 2);
  m << 1, -3, 0.5, 0.5;
  EXPECT_DOUBLE_EQ(inf_norm(m), 4.0);
}

TEST(MatrixNorms, SpectralNormMatchesSvdOnRandomMatrices) {
  std::mt19937_64 gen(9);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 20; ++t) {
    Matrix m(4 + t % 5, 3 + t % 4);
    for (long i = 0; i < m.size(); ++i) m.data()[i] = normal(gen);
    const double svd = Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
    EXPECT_NEAR(spectral_norm(m), svd, 1e-10 * svd);
  }
}

TEST(MatrixNorms, ZeroMatrix) {
  const Matrix z = Matrix::Zero(3, 3);
  EXPECT_EQ(spectral_norm(z), 0.0);
  EXPECT_EQ(numerical_rank(z), 0);
}

TEST(MatrixNorms, SymNormSpectralNormIsOneOnConnectedGraphs) {
  const GraphDataset d = make_dataset(preset("er5", 1));
  for (std::size_t g = 0; g < 20; ++g) {
    EXPECT_NEAR(spectral_norm(apply_filter(FilterKind::SymNorm, d.samples[g])), 1.0, 1e-9);
  }
}

TEST(MatrixNorms, FrobeniusBelowRootRankTimesSpectral) {
  std::mt19937_64 gen(10);
  for (int t = 0; t < 40; ++t) {
    const GraphSample s = oracle::random_sample(gen, 2 + t % 12, 1, 0.3);
    for (FilterKind kind : kAllFilters) {
      const Matrix g = apply_filter(kind, s);
      EXPECT_LE(fro_norm(g), std::sqrt(numerical_rank(g)) * spectral_norm(g) + 1e-8);
    }
  }
}

TEST(GMax, TriangleSumAgg) {
  const FilterNormReport r = g_max(GraphDataset{"t", 1, {triangle()}}, FilterKind::SumAgg);
  EXPECT_DOUBLE_EQ(r.inf_norm_max, 3.0);
  EXPECT_NEAR(r.fro_norm_max, 3.0, 1e-15);
  EXPECT_EQ(r.g_max, std::min(r.inf_norm_max, r.fro_norm_max));
  EXPECT_NEAR(r.g_max, 3.0, 1e-15);
  EXPECT_EQ(r.rank_max, 1);
  EXPECT_FALSE(r.fro_bound.has_value());
}

TEST(GMax, EdgelessSymNorm) {
  const FilterNormReport r = g_max(GraphDataset{"e", 1, {edgeless(2)}}, FilterKind::SymNorm);
  EXPECT_DOUBLE_EQ(r.g_max, 1.0);
  EXPECT_NEAR(r.fro_norm_max, std::sqrt(2.0), 1e-15);
}

TEST(GMax, RandomWalkWithoutIsolatedNodesIsTwo) {
  const GraphDataset d = make_dataset(preset("er4", 2));
  const FilterNormReport r = g_max(d, FilterKind::RandomWalk);
  EXPECT_NEAR(r.inf_norm_max, 2.0, 1e-12);
}

TEST(GMax, MaximaWithinTheoreticalBounds) {
  const GraphDataset d = make_dataset(preset("sbm3", 5));
  for (FilterKind kind : kAllFilters) {
    const FilterNormReport r = g_max(d, kind);
    EXPECT_EQ(r.g_max, std::min(r.inf_norm_max, r.fro_norm_max));
    if (r.inf_bound) EXPECT_LE(r.inf_norm_max, *r.inf_bound + 1e-9) << filter_name(kind);
    if (r.fro_bound) EXPECT_LE(r.fro_norm_max, *r.fro_bound + 1e-9) << filter_name(kind);
  }
}

TEST(TheoreticalBounds, InfBounds) {
  EXPECT_NEAR(*theoretical_inf_bound(FilterKind::SymNorm, 14, 6), std::sqrt(15.0 / 7.0), 1e-15);
  EXPECT_NEAR(*theoretical_inf_bound(FilterKind::SymNorm, 14, 6), 1.463850, 1e-6);
  EXPECT_EQ(*theoretical_inf_bound(FilterKind::SumAgg, 3, 1), 4.0);
  EXPECT_EQ(*theoretical_inf_bound(FilterKind::RandomWalk, 25, 0), 2.0);
  EXPECT_EQ(*theoretical_inf_bound(FilterKind::MeanAgg, 25, 0), 1.0);
}

TEST(TheoreticalBounds, FroBounds) {
  EXPECT_EQ(*theoretical_fro_bound(FilterKind::SymNorm, 4), 2.0);
  EXPECT_EQ(*theoretical_fro_bound(FilterKind::RandomWalk, 9), 6.0);
  EXPECT_FALSE(theoretical_fro_bound(FilterKind::SumAgg, 5).has_value());
  EXPECT_FALSE(theoretical_fro_bound(FilterKind::MeanAgg, 5).has_value());
}

TEST(NormLemmas, PerGraphOnGeneratedFamilies) {
  for (const std::string name : {"sbm1", "sbm2", "sbm3", "er4", "er5"}) {
    SynthConfig cfg = preset(name, 17);
    cfg.n_graphs = 20;
    for (const auto& s : make_dataset(cfg).samples) {
      const auto d = degrees(s);
      const int d_max = *std::max_element(d.begin(), d.end());
      const int d_min = *std::min_element(d.begin(), d.end());
      const Matrix sym = apply_filter(FilterKind::SymNorm, s);
      EXPECT_LE(inf_norm(sym), std::sqrt((d_max + 1.0) / (d_min + 1.0)) + 1e-9);
      EXPECT_EQ(inf_norm(apply_filter(FilterKind::SumAgg, s)), d_max + 1.0);
      EXPECT_NEAR(spectral_norm(sym), 1.0, 1e-6);
    }
  }
}

TEST(RandomWalkSpectrum, SpectralRadiusIsTwoButNormCanExceedIt) {
  // D^-1 A is similar to the symmetric D^-1/2 A D^-1/2, so its eigenvalues lie
  // in [-1, 1]. It is not normal on irregular graphs, so its 2-norm can be larger.
  const GraphSample path = make_sample(3, {{0, 1}, {1, 2}}, Matrix::Ones(3, 1), 1);
  const Matrix g = apply_filter(FilterKind::RandomWalk, path);
  EXPECT_NEAR(spectral_norm(g), 3.0 / std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(Eigen::EigenSolver<Matrix>(g).eigenvalues().cwiseAbs().maxCoeff(), 2.0, 1e-12);

  for (const std::string name : {"sbm1", "sbm3", "er5"}) {
    SynthConfig cfg = preset(name, 3);
    cfg.n_graphs = 10;
    for (const auto& s : make_dataset(cfg).samples) {
      const Matrix rw = apply_filter(FilterKind::RandomWalk, s);
      const double radius = Eigen::EigenSolver<Matrix>(rw).eigenvalues().cwiseAbs().maxCoeff();
      EXPECT_NEAR(radius, 2.0, 1e-9);
      EXPECT_GE(spectral_norm(rw), 2.0 - 1e-9);
    }
  }
}
