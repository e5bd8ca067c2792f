#include <gtest/gtest.h>

#include <cmath>

#include "gnnmf/synth.hpp"

using namespace gnnmf;

namespace {

double edges_in(const Matrix& a) { return a.sum() / 2.0; }

SbmSpec sbm1_spec() {
  SbmSpec s;
  s.block_sizes = {40, 60};
  s.edge_prob.resize(2, 2);
  s.edge_prob << 0.25, 0.13, 0.13, 0.37;
  return s;
}

}  // namespace

TEST(GenerateSbm, ExtremeProbabilities) {
  SbmSpec s = sbm1_spec();
  s.edge_prob.setZero();
  EXPECT_EQ(generate_sbm(s, 1).sum(), 0.0);
  s.edge_prob.setOnes();
  const Matrix full = generate_sbm(s, 1);
  EXPECT_EQ(edges_in(full), 100.0 * 99.0 / 2.0);
  EXPECT_EQ(full.diagonal().sum(), 0.0);
}

TEST(GenerateSbm, MeanEdgeCountMatchesExpectation) {
  const SbmSpec s = sbm1_spec();
  // 0.25 C(40,2) + 0.37 C(60,2) + 0.13 * 40 * 60
  const double expected = 0.25 * 780 + 0.37 * 1770 + 0.13 * 2400;
  ASSERT_NEAR(expected, 1161.9, 1e-9);
  const double variance = 780 * 0.25 * 0.75 + 1770 * 0.37 * 0.63 + 2400 * 0.13 * 0.87;
  const int graphs = 1000;
  double total = 0.0;
  for (int g = 0; g < graphs; ++g) total += edges_in(generate_sbm(s, 1000 + g));
  EXPECT_NEAR(total / graphs, expected, 3.0 * std::sqrt(variance / graphs));
}

TEST(GenerateSbm, BlockDensitiesMatchProbabilities) {
  const SbmSpec s = sbm1_spec();
  double within0 = 0, within1 = 0, cross = 0;
  const int graphs = 500;
  for (int g = 0; g < graphs; ++g) {
    const Matrix a = generate_sbm(s, 77 + g);
    within0 += a.topLeftCorner(40, 40).sum() / 2.0;
    within1 += a.bottomRightCorner(60, 60).sum() / 2.0;
    cross += a.topRightCorner(40, 60).sum();
  }
  const auto check = [&](double count, double pairs, double p) {
    const double trials = pairs * graphs;
    EXPECT_NEAR(count / trials, p, 3.0 * std::sqrt(p * (1 - p) / trials));
  };
  check(within0, 780, 0.25);
  check(within1, 1770, 0.37);
  check(cross, 2400, 0.13);
}

TEST(GenerateSbm, DeterministicAndSymmetric) {
  const Matrix a = generate_sbm(sbm1_spec(), 5);
  EXPECT_EQ(a, generate_sbm(sbm1_spec(), 5));
  EXPECT_EQ(a, a.transpose());
}

TEST(SbmSpec, RejectsBadSpecs) {
  SbmSpec s = sbm1_spec();
  s.edge_prob(0, 1) = 0.5;
  EXPECT_ANY_THROW(s.validate());
  s = sbm1_spec();
  s.edge_prob(1, 1) = 1.5;
  EXPECT_ANY_THROW(s.validate());
  s = sbm1_spec();
  s.block_sizes = {40};
  EXPECT_ANY_THROW(s.validate());
}

TEST(GenerateEr, ExtremeProbabilities) {
  EXPECT_EQ(generate_er({10, 0.0}, 3).sum(), 0.0);
  EXPECT_EQ(edges_in(generate_er({10, 1.0}, 3)), 45.0);
}

TEST(GenerateEr, Er5MeanEdgeCount) {
  const int graphs = 1000;
  double total = 0.0;
  for (int g = 0; g < graphs; ++g) total += edges_in(generate_er({20, 0.5}, 500 + g));
  // 190 pairs at p = 1/2.
  EXPECT_NEAR(total / graphs, 95.0, 3.0 * std::sqrt(190 * 0.25 / graphs));
}

TEST(GenerateFeatures, RowsHaveUnitNorm) {
  const Matrix f = generate_features(50, 16, 9);
  for (long i = 0; i < f.rows(); ++i) EXPECT_NEAR(f.row(i).norm(), 1.0, 1e-12);
}

TEST(GenerateFeatures, ScalarRowsAreSigns) {
  const Matrix f = generate_features(30, 1, 2);
  for (long i = 0; i < f.rows(); ++i) EXPECT_EQ(std::abs(f(i, 0)), 1.0);
}

TEST(GenerateFeatures, SeedsDiffer) {
  EXPECT_NE(generate_features(5, 4, 1), generate_features(5, 4, 2));
  EXPECT_EQ(generate_features(5, 4, 1), generate_features(5, 4, 1));
}

TEST(Presets, Shapes) {
  const GraphDataset sbm2 = make_dataset(preset("sbm2", 0));
  EXPECT_EQ(sbm2.size(), 200u);
  for (const auto& s : sbm2.samples) EXPECT_EQ(s.node_count(), 100);
  const auto& spec2 = std::get<SbmSpec>(preset("sbm2").model);
  EXPECT_EQ(spec2.block_sizes, (std::vector<int>{25, 25, 50}));

  const GraphDataset sbm3 = make_dataset(preset("sbm3", 0));
  for (const auto& s : sbm3.samples) EXPECT_EQ(s.node_count(), 50);

  EXPECT_EQ(std::get<ErSpec>(preset("er4").model).node_count, 100);
  EXPECT_EQ(std::get<ErSpec>(preset("er4").model).edge_prob, 0.7);
  EXPECT_EQ(std::get<ErSpec>(preset("er5").model).node_count, 20);
  EXPECT_EQ(std::get<ErSpec>(preset("er5").model).edge_prob, 0.5);
  EXPECT_THROW(preset("sbm9"), std::invalid_argument);
}

TEST(MakeDataset, DeterministicSingleGraph) {
  SynthConfig cfg = preset("sbm1", 4);
  cfg.n_graphs = 1;
  EXPECT_EQ(make_dataset(cfg), make_dataset(cfg));
}

TEST(MakeDataset, SamplesValidAndUnitBf) {
  for (const auto& name : preset_names()) {
    const GraphDataset d = make_dataset(preset(name, 8));
    EXPECT_NO_THROW(validate_dataset(d));
    EXPECT_NEAR(dataset_stats(d).b_f, 1.0, 1e-12);
    EXPECT_EQ(d.feature_dim, 16);
  }
}

TEST(MakeDataset, LabelsBalanced) {
  SynthConfig cfg = preset("er5", 21);
  cfg.n_graphs = 2000;
  int positives = 0;
  for (const auto& s : make_dataset(cfg).samples) positives += s.label == 1 ? 1 : 0;
  EXPECT_NEAR(positives / 2000.0, 0.5, 3.0 * std::sqrt(0.25 / 2000));
}

TEST(MakeDataset, GraphsDoNotDependOnCount) {
  SynthConfig small = preset("sbm3", 6);
  small.n_graphs = 3;
  SynthConfig large = small;
  large.n_graphs = 10;
  const GraphDataset a = make_dataset(small);
  const GraphDataset b = make_dataset(large);
  for (std::size_t g = 0; g < 3; ++g) EXPECT_EQ(a.samples[g], b.samples[g]);
}
