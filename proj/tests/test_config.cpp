#include <gtest/gtest.h>

#include <filesystem>

#include "gnnmf/config.hpp"

using namespace gnnmf;

namespace {

void expect_same(const ExperimentConfig& a, const ExperimentConfig& b) {
  EXPECT_EQ(a.dataset, b.dataset);
  EXPECT_EQ(a.dataset_seed, b.dataset_seed);
  EXPECT_EQ(a.betas, b.betas);
  EXPECT_EQ(a.widths, b.widths);
  EXPECT_EQ(a.seeds, b.seeds);
  EXPECT_EQ(a.models, b.models);
  EXPECT_EQ(a.filters, b.filters);
  EXPECT_EQ(a.readouts, b.readouts);
  EXPECT_EQ(a.train.learning_rate, b.train.learning_rate);
  EXPECT_EQ(a.train.momentum, b.train.momentum);
  EXPECT_EQ(a.train.alpha, b.train.alpha);
  EXPECT_EQ(a.train.batch_size, b.train.batch_size);
  EXPECT_EQ(a.train.epochs, b.train.epochs);
  EXPECT_EQ(a.delta, b.delta);
  EXPECT_EQ(a.bounded_activation, b.bounded_activation);
  EXPECT_EQ(a.record_wall_time, b.record_wall_time);
  EXPECT_EQ(a.workers, b.workers);
  EXPECT_EQ(a.init, b.init);
  EXPECT_EQ(a.activation, b.activation);
  EXPECT_EQ(a.zeta, b.zeta);
  EXPECT_EQ(a.rho, b.rho);
  EXPECT_EQ(a.kappa, b.kappa);
}

}  // namespace

TEST(KeyValues, CommentsAndBlankLines) {
  const auto kvs = parse_key_values("# header\n\n a = 1 # trailing\nb=two words\n");
  ASSERT_EQ(kvs.size(), 2u);
  EXPECT_EQ(kvs[0].key, "a");
  EXPECT_EQ(kvs[0].value, "1");
  EXPECT_EQ(kvs[0].line, 3);
  EXPECT_EQ(kvs[1].value, "two words");
}

TEST(KeyValues, Errors) {
  EXPECT_THROW(parse_key_values("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(parse_key_values("just text\n"), ConfigError);
  EXPECT_THROW(parse_key_values(" = 3\n"), ConfigError);
}

TEST(ExperimentConfigText, EmptyGivesDefaults) {
  const ExperimentConfig c = parse_experiment_config("");
  expect_same(c, ExperimentConfig{});
  EXPECT_EQ(c.train.learning_rate, 0.005);
  EXPECT_EQ(c.train.momentum, 0.9);
  EXPECT_EQ(c.train.batch_size, 128);
  EXPECT_EQ(c.train.epochs, 200);
  EXPECT_EQ(c.train.alpha, 100.0);
  EXPECT_EQ(c.widths.size(), 7u);
  EXPECT_EQ(c.seeds.size(), 10u);
}

TEST(ExperimentConfigText, AllKeys) {
  const ExperimentConfig c = parse_experiment_config(R"(
dataset = er5
dataset_seed = 3
beta_sup = 0.9
widths = 2, 8
seeds = 0..2, 7
models = gcn, mpgnn
filters = sym-norm, random-walk, mean-agg, sum-agg
readouts = mean, sum
learning_rate = 0.01
momentum = 0.5
alpha = 10
batch_size = 16
epochs = 3
delta = 0.1
bounded_activation = false
record_wall_time = false
workers = 4
init = standard
activation = sigmoid-centered
zeta = identity
rho = tanh
kappa = identity
)");
  EXPECT_EQ(c.dataset, "er5");
  EXPECT_EQ(c.dataset_seed, 3u);
  EXPECT_EQ(c.betas, std::vector<double>{0.9});
  EXPECT_EQ(c.widths, (std::vector<int>{2, 8}));
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{0, 1, 2, 7}));
  EXPECT_EQ(c.models.size(), 2u);
  EXPECT_EQ(c.filters.size(), 4u);
  EXPECT_EQ(c.readouts, (std::vector<Readout>{Readout::Mean, Readout::Sum}));
  EXPECT_EQ(c.train.learning_rate, 0.01);
  EXPECT_EQ(c.train.batch_size, 16);
  EXPECT_EQ(c.delta, 0.1);
  EXPECT_FALSE(c.bounded_activation);
  EXPECT_FALSE(c.record_wall_time);
  EXPECT_EQ(c.workers, 4);
  EXPECT_EQ(c.init, InitScheme::StandardNormal);
  EXPECT_EQ(c.activation, Nonlinearity::SigmoidCentered);
  EXPECT_EQ(c.kappa, Nonlinearity::Identity);

  const ModelConfig m = c.model_config(ModelKind::Mpgnn, FilterKind::MeanAgg, Readout::Sum, 8);
  EXPECT_EQ(m.width, 8);
  EXPECT_EQ(m.zeta, Nonlinearity::Identity);
  EXPECT_EQ(m.init, InitScheme::StandardNormal);
  EXPECT_EQ(m.unit_nonlinearity(), Nonlinearity::Identity);
}

TEST(ExperimentConfigText, RoundTrip) {
  ExperimentConfig c;
  c.dataset = "/tmp/some data.json";
  c.betas = {0.3, 0.1 + 0.2};
  c.widths = {1, 3};
  c.seeds = {5, 9};
  c.models = {ModelKind::Mpgnn};
  c.filters = {FilterKind::SumAgg, FilterKind::SymNorm};
  c.train.learning_rate = 1.0 / 3.0;
  c.delta = 0.01;
  c.rho = Nonlinearity::SigmoidCentered;
  expect_same(parse_experiment_config(experiment_config_to_text(c)), c);
  expect_same(parse_experiment_config(experiment_config_to_text(ExperimentConfig{})),
              ExperimentConfig{});
}

TEST(ExperimentConfigText, Rejections) {
  EXPECT_THROW(parse_experiment_config("colour = blue\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("widths = 4, x\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("widths = 0\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("widths =\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("widths = 4,,8\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("beta_sup = 1.0\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("seeds = 5..2\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("seeds = -1\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("filters = laplacian\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("momentum = 1\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("bounded_activation = maybe\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("delta = 0\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("workers = 0\n"), ConfigError);
}

TEST(ExperimentConfigText, ErrorNamesLine) {
  try {
    parse_experiment_config("dataset = sbm1\n\nepochs = ten\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(SynthSpec, Sbm) {
  const SynthConfig c = parse_synth_spec(
      "generator = sbm\nblock_sizes = 10, 20\nedge_prob = 0.5, 0.1; 0.1, 0.3\nn_graphs = 5\n"
      "feature_dim = 3\nname = tiny\n",
      7);
  const auto& spec = std::get<SbmSpec>(c.model);
  EXPECT_EQ(spec.block_sizes, (std::vector<int>{10, 20}));
  EXPECT_EQ(spec.edge_prob(0, 1), 0.1);
  EXPECT_EQ(spec.edge_prob(1, 1), 0.3);
  EXPECT_EQ(c.n_graphs, 5);
  EXPECT_EQ(c.feature_dim, 3);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.name, "tiny");
  const GraphDataset d = make_dataset(c);
  EXPECT_EQ(d.size(), 5u);
  EXPECT_EQ(d.samples[0].node_count(), 30);
}

TEST(SynthSpec, Er) {
  const SynthConfig c = parse_synth_spec("generator = er\nnode_count = 12\nedge_prob = 0.25\n", 1);
  EXPECT_EQ(std::get<ErSpec>(c.model).node_count, 12);
  EXPECT_EQ(std::get<ErSpec>(c.model).edge_prob, 0.25);
  EXPECT_EQ(c.n_graphs, 200);
}

TEST(SynthSpec, Rejections) {
  EXPECT_THROW(parse_synth_spec("generator = ba\n", 0), ConfigError);
  EXPECT_THROW(parse_synth_spec("generator = er\nnode_count = 3\n", 0), ConfigError);
  EXPECT_THROW(parse_synth_spec("generator = er\nnode_count = 3\nedge_prob = 2\n", 0),
               ConfigError);
  EXPECT_THROW(parse_synth_spec("generator = sbm\nblock_sizes = 2, 2\nedge_prob = 0.1, 0.2\n", 0),
               ConfigError);
  EXPECT_THROW(
      parse_synth_spec("generator = sbm\nblock_sizes = 2, 2\nedge_prob = 0.1, 0.2; 0.3, 0.1\n", 0),
      ConfigError);
  EXPECT_THROW(parse_synth_spec("generator = er\nnode_count = 3\nedge_prob = 0.5\nsize = 2\n", 0),
               ConfigError);
}

TEST(ResolveDataset, PresetAndFile) {
  const GraphDataset preset_data = resolve_dataset("er5", 4);
  EXPECT_EQ(preset_data, make_dataset(preset("er5", 4)));
  const auto path = std::filesystem::temp_directory_path() / "gnnmf_test_config_ds.json";
  save_dataset(preset_data, path);
  EXPECT_EQ(resolve_dataset(path.string(), 99), preset_data);
  std::filesystem::remove(path);
  EXPECT_ANY_THROW(resolve_dataset("/nonexistent/dir/x.json", 0));
}
