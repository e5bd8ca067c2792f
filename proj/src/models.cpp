#include "gnnmf/models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gnnmf/rng.hpp"

namespace gnnmf {

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view name, const Enum (&values)[N],
                std::string_view (*namer)(Enum), const char* what) {
  for (Enum v : values) {
    if (namer(v) == name) return v;
  }
  std::string expected;
  for (Enum v : values) {
    if (!expected.empty()) expected += ", ";
    expected += namer(v);
  }
  throw std::invalid_argument("unknown " + std::string(what) + " '" +
                              std::string(name) + "' (expected " + expected + ")");
}

constexpr ModelKind kModels[] = {ModelKind::Gcn, ModelKind::Mpgnn};
constexpr Readout kReadouts[] = {Readout::Mean, Readout::Sum};
constexpr Nonlinearity kNonlinearities[] = {
    Nonlinearity::Tanh, Nonlinearity::SigmoidCentered, Nonlinearity::Identity};
constexpr InitScheme kInits[] = {InitScheme::FanIn, InitScheme::StandardNormal};

}  // namespace

std::string_view model_name(ModelKind kind) {
  return kind == ModelKind::Gcn ? "gcn" : "mpgnn";
}

std::string_view readout_name(Readout readout) {
  return readout == Readout::Mean ? "mean" : "sum";
}

std::string_view nonlinearity_name(Nonlinearity nl) {
  switch (nl) {
    case Nonlinearity::Tanh: return "tanh";
    case Nonlinearity::SigmoidCentered: return "sigmoid-centered";
    case Nonlinearity::Identity: return "identity";
  }
  return "unknown";
}

std::string_view init_name(InitScheme init) {
  return init == InitScheme::FanIn ? "fan-in" : "standard";
}

ModelKind parse_model(std::string_view name) {
  return parse_enum(name, kModels, model_name, "model");
}
Readout parse_readout(std::string_view name) {
  return parse_enum(name, kReadouts, readout_name, "readout");
}
Nonlinearity parse_nonlinearity(std::string_view name) {
  return parse_enum(name, kNonlinearities, nonlinearity_name, "nonlinearity");
}
InitScheme parse_init(std::string_view name) {
  return parse_enum(name, kInits, init_name, "init scheme");
}

double activate(Nonlinearity nl, double x) {
  switch (nl) {
    case Nonlinearity::Tanh: return std::tanh(x);
    case Nonlinearity::SigmoidCentered: return 1.0 / (1.0 + std::exp(-x)) - 0.5;
    case Nonlinearity::Identity: return x;
  }
  throw std::logic_error("unhandled nonlinearity");
}

double activate_derivative(Nonlinearity nl, double x) {
  switch (nl) {
    case Nonlinearity::Tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Nonlinearity::SigmoidCentered: {
      const double s = 1.0 / (1.0 + std::exp(-x));
      return s * (1.0 - s);
    }
    case Nonlinearity::Identity: return 1.0;
  }
  throw std::logic_error("unhandled nonlinearity");
}

double lipschitz_constant(Nonlinearity nl) {
  return nl == Nonlinearity::SigmoidCentered ? 0.25 : 1.0;
}

void activate_inplace(Nonlinearity nl, Eigen::Ref<Matrix> x) {
  switch (nl) {
    case Nonlinearity::Tanh: {
      // tanh through the vectorized exp; Eigen evaluates double tanh one scalar at a time.
      x.array() = 1.0 - 2.0 / ((2.0 * x.array()).exp() + 1.0);
      return;
    }
    case Nonlinearity::SigmoidCentered:
      x.array() = 1.0 / (1.0 + (-x.array()).exp()) - 0.5;
      return;
    case Nonlinearity::Identity:
      return;
  }
  throw std::logic_error("unhandled nonlinearity");
}

Matrix activate(Nonlinearity nl, const Matrix& x) {
  Matrix out = x;
  activate_inplace(nl, out);
  return out;
}

std::optional<double> output_cap(Nonlinearity nl) {
  switch (nl) {
    case Nonlinearity::Tanh: return 1.0;
    case Nonlinearity::SigmoidCentered: return 0.5;
    case Nonlinearity::Identity: return std::nullopt;
  }
  return std::nullopt;
}

UnitParams UnitParams::zeros_like(const UnitParams& other) {
  UnitParams p;
  p.w1 = Matrix::Zero(other.w1.rows(), other.w1.cols());
  p.w2 = Vector::Zero(other.w2.size());
  p.w3 = Matrix::Zero(other.w3.rows(), other.w3.cols());
  return p;
}

UnitParams UnitParams::zeros(ModelKind kind, int width, int feature_dim) {
  UnitParams p;
  p.w1 = Matrix::Zero(width, feature_dim);
  p.w2 = Vector::Zero(width);
  if (kind == ModelKind::Mpgnn) p.w3 = Matrix::Zero(width, feature_dim);
  return p;
}

bool UnitParams::same_shape(const UnitParams& o) const {
  return w1.rows() == o.w1.rows() && w1.cols() == o.w1.cols() &&
         w2.size() == o.w2.size() && w3.rows() == o.w3.rows() &&
         w3.cols() == o.w3.cols();
}

UnitParams& UnitParams::operator+=(const UnitParams& o) {
  if (!same_shape(o)) throw std::invalid_argument("parameter shape mismatch");
  w1 += o.w1;
  w2 += o.w2;
  if (has_w3()) w3 += o.w3;
  return *this;
}

UnitParams& UnitParams::operator*=(double s) {
  w1 *= s;
  w2 *= s;
  w3 *= s;
  return *this;
}

Vector UnitParams::unit_squared_norms() const {
  Vector sq = w1.rowwise().squaredNorm() + w2.cwiseAbs2();
  if (has_w3()) sq += w3.rowwise().squaredNorm();
  return sq;
}

UnitParams UnitParams::concat(const UnitParams& a, const UnitParams& b) {
  if (a.feature_dim() != b.feature_dim() || a.has_w3() != b.has_w3()) {
    throw std::invalid_argument("concat: incompatible unit parameters");
  }
  UnitParams out;
  out.w1.resize(a.width() + b.width(), a.feature_dim());
  out.w1 << a.w1, b.w1;
  out.w2.resize(a.width() + b.width());
  out.w2 << a.w2, b.w2;
  if (a.has_w3()) {
    out.w3.resize(a.width() + b.width(), a.feature_dim());
    out.w3 << a.w3, b.w3;
  }
  return out;
}

UnitParams UnitParams::permute_units(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != width()) {
    throw std::invalid_argument("permute_units: size mismatch");
  }
  UnitParams out = zeros_like(*this);
  for (int i = 0; i < width(); ++i) {
    out.w1.row(i) = w1.row(perm[i]);
    out.w2(i) = w2(perm[i]);
    if (has_w3()) out.w3.row(i) = w3.row(perm[i]);
  }
  return out;
}

UnitParams init_params(const ModelConfig& config, int feature_dim,
                       std::uint64_t seed) {
  if (feature_dim < 1) throw std::invalid_argument("feature_dim must be >= 1");
  if (config.width < 1) throw std::invalid_argument("width must be >= 1");
  UnitParams p = UnitParams::zeros(config.kind, config.width, feature_dim);
  const bool fan_in = config.init == InitScheme::FanIn;
  const double in_scale = fan_in ? 1.0 / std::sqrt(static_cast<double>(feature_dim)) : 1.0;
  const double out_scale = fan_in ? 1.0 / std::sqrt(static_cast<double>(config.width)) : 1.0;
  Rng rng(seed);
  for (int i = 0; i < config.width; ++i) {
    for (int c = 0; c < feature_dim; ++c) p.w1(i, c) = in_scale * rng.normal();
  }
  for (int i = 0; i < config.width; ++i) p.w2(i) = out_scale * rng.normal();
  if (p.has_w3()) {
    for (int i = 0; i < config.width; ++i) {
      for (int c = 0; c < feature_dim; ++c) p.w3(i, c) = in_scale * rng.normal();
    }
  }
  return p;
}

double gcn_unit_output(const Vector& w1_row, double w2,
                       const Vector& filtered_row, Nonlinearity phi) {
  return w2 * activate(phi, filtered_row.dot(w1_row));
}

double mpgnn_unit_output(const Vector& w1_row, double w2, const Vector& w3_row,
                         const Vector& feature_row,
                         const Vector& aggregated_row, Nonlinearity rho,
                         Nonlinearity kappa) {
  double message = 0.0;
  for (Eigen::Index c = 0; c < aggregated_row.size(); ++c) {
    message += activate(rho, aggregated_row(c)) * w1_row(c);
  }
  return w2 * activate(kappa, feature_row.dot(w3_row) + message);
}

PreparedGraph prepare_graph(const GraphSample& sample, const ModelConfig& config) {
  PreparedGraph g;
  const Matrix filter = apply_filter(config.filter, sample);
  if (config.kind == ModelKind::Gcn) {
    g.propagated = filter * sample.features;
  } else {
    g.propagated = activate(config.rho, filter * activate(config.zeta, sample.features));
    g.self_features = sample.features;
  }
  g.readout_scale = config.readout == Readout::Mean
                        ? 1.0 / static_cast<double>(sample.node_count())
                        : 1.0;
  g.label = sample.label;
  return g;
}

std::vector<PreparedGraph> prepare_dataset(const GraphDataset& dataset,
                                           const ModelConfig& config) {
  std::vector<PreparedGraph> out;
  out.reserve(dataset.size());
  for (const auto& s : dataset.samples) out.push_back(prepare_graph(s, config));
  return out;
}

void check_shapes(const UnitParams& params, const ModelConfig& config,
                  int feature_dim) {
  const int h = params.width();
  if (h < 1) throw std::invalid_argument("params have no units");
  if (params.w1.rows() != h || params.feature_dim() != feature_dim) {
    throw std::invalid_argument("W1 shape does not match width/feature_dim");
  }
  const bool wants_w3 = config.kind == ModelKind::Mpgnn;
  if (wants_w3 != params.has_w3()) {
    throw std::invalid_argument(wants_w3 ? "MPGNN params need W3"
                                         : "GCN params must not carry W3");
  }
  if (wants_w3 && (params.w3.rows() != h || params.w3.cols() != feature_dim)) {
    throw std::invalid_argument("W3 shape does not match width/feature_dim");
  }
}

double forward_prepared(const UnitParams& params, const PreparedGraph& graph,
                        const ModelConfig& config) {
  Matrix pre = graph.propagated * params.w1.transpose();
  if (params.has_w3()) pre.noalias() += graph.self_features * params.w3.transpose();
  const Matrix act = activate(config.unit_nonlinearity(), pre);
  const double node_sum = (act * params.w2).sum();
  return graph.readout_scale * node_sum / static_cast<double>(params.width());
}

double forward_graph(const UnitParams& params, const GraphSample& sample,
                     const ModelConfig& config) {
  check_shapes(params, config, sample.feature_dim());
  return forward_prepared(params, prepare_graph(sample, config), config);
}

}  // namespace gnnmf
