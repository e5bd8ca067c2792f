#include "gnnmf/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace gnnmf {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void fail(const KeyValue& kv, const std::string& what) {
  throw ConfigError("line " + std::to_string(kv.line) + ": " + kv.key + ": " + what);
}

double to_double(const KeyValue& kv, const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty()) fail(kv, "not a number: '" + s + "'");
  return v;
}

long long to_int(const KeyValue& kv, const std::string& s) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty()) fail(kv, "not an integer: '" + s + "'");
  return v;
}

std::uint64_t to_u64(const KeyValue& kv, const std::string& s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty()) {
    fail(kv, "not a non-negative integer: '" + s + "'");
  }
  return v;
}

bool to_bool(const KeyValue& kv, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  fail(kv, "not a boolean: '" + s + "'");
}

template <typename T, typename Fn>
std::vector<T> to_list(const KeyValue& kv, Fn&& convert) {
  std::vector<T> out;
  for (const auto& item : split(kv.value, ',')) {
    if (item.empty()) fail(kv, "empty list entry");
    out.push_back(convert(item));
  }
  return out;
}

template <typename Fn>
auto wrap_parse(const KeyValue& kv, Fn&& parse) {
  return [&kv, &parse](const std::string& s) {
    try {
      return parse(s);
    } catch (const std::invalid_argument& e) {
      fail(kv, e.what());
    }
  };
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T, typename Fn>
std::string join(const std::vector<T>& items, Fn&& show) {
  std::string out;
  for (const auto& it : items) {
    if (!out.empty()) out += ", ";
    out += show(it);
  }
  return out;
}

}  // namespace

std::vector<KeyValue> parse_key_values(const std::string& text) {
  std::vector<KeyValue> out;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    KeyValue kv{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    if (kv.key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    if (!seen.insert(kv.key).second) fail(kv, "duplicate key");
    out.push_back(std::move(kv));
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (dataset.empty()) throw ConfigError("dataset must be set");
  if (betas.empty() || widths.empty() || seeds.empty() || models.empty() ||
      filters.empty() || readouts.empty()) {
    throw ConfigError("sweep lists must be nonempty");
  }
  for (double b : betas) {
    if (!(b > 0.0 && b < 1.0)) throw ConfigError("beta_sup entries must lie in (0, 1)");
  }
  for (int w : widths) {
    if (w < 1) throw ConfigError("widths must be >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  try {
    train.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ModelConfig ExperimentConfig::model_config(ModelKind kind, FilterKind filter,
                                           Readout readout, int width) const {
  ModelConfig m;
  m.kind = kind;
  m.filter = filter;
  m.readout = readout;
  m.width = width;
  m.activation = activation;
  m.zeta = zeta;
  m.rho = rho;
  m.kappa = kappa;
  m.init = init;
  return m;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig c;
  using Setter = std::function<void(const KeyValue&)>;
  const std::map<std::string, Setter> setters = {
      {"dataset", [&](const KeyValue& kv) { c.dataset = kv.value; }},
      {"dataset_seed", [&](const KeyValue& kv) { c.dataset_seed = to_u64(kv, kv.value); }},
      {"beta_sup",
       [&](const KeyValue& kv) {
         c.betas = to_list<double>(kv, [&](const std::string& s) { return to_double(kv, s); });
       }},
      {"widths",
       [&](const KeyValue& kv) {
         c.widths = to_list<int>(kv, [&](const std::string& s) {
           return static_cast<int>(to_int(kv, s));
         });
       }},
      {"seeds",
       [&](const KeyValue& kv) {
         // "a..b" expands to the inclusive range.
         std::vector<std::uint64_t> seeds;
         for (const auto& item : split(kv.value, ',')) {
           const auto dots = item.find("..");
           if (dots == std::string::npos) {
             seeds.push_back(to_u64(kv, item));
             continue;
           }
           const auto lo = to_u64(kv, trim(item.substr(0, dots)));
           const auto hi = to_u64(kv, trim(item.substr(dots + 2)));
           if (hi < lo) fail(kv, "empty seed range");
           for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
         }
         c.seeds = std::move(seeds);
       }},
      {"models",
       [&](const KeyValue& kv) {
         c.models = to_list<ModelKind>(kv, wrap_parse(kv, [](const std::string& s) {
                                         return parse_model(s);
                                       }));
       }},
      {"filters",
       [&](const KeyValue& kv) {
         c.filters = to_list<FilterKind>(kv, wrap_parse(kv, [](const std::string& s) {
                                           return parse_filter(s);
                                         }));
       }},
      {"readouts",
       [&](const KeyValue& kv) {
         c.readouts = to_list<Readout>(kv, wrap_parse(kv, [](const std::string& s) {
                                         return parse_readout(s);
                                       }));
       }},
      {"learning_rate", [&](const KeyValue& kv) { c.train.learning_rate = to_double(kv, kv.value); }},
      {"momentum", [&](const KeyValue& kv) { c.train.momentum = to_double(kv, kv.value); }},
      {"alpha", [&](const KeyValue& kv) { c.train.alpha = to_double(kv, kv.value); }},
      {"batch_size",
       [&](const KeyValue& kv) { c.train.batch_size = static_cast<int>(to_int(kv, kv.value)); }},
      {"epochs", [&](const KeyValue& kv) { c.train.epochs = static_cast<int>(to_int(kv, kv.value)); }},
      {"delta", [&](const KeyValue& kv) { c.delta = to_double(kv, kv.value); }},
      {"bounded_activation", [&](const KeyValue& kv) { c.bounded_activation = to_bool(kv, kv.value); }},
      {"record_wall_time", [&](const KeyValue& kv) { c.record_wall_time = to_bool(kv, kv.value); }},
      {"workers", [&](const KeyValue& kv) { c.workers = static_cast<int>(to_int(kv, kv.value)); }},
      {"init",
       [&](const KeyValue& kv) {
         c.init = wrap_parse(kv, [](const std::string& s) { return parse_init(s); })(kv.value);
       }},
  };
  const auto nl_setter = [&](Nonlinearity& slot) {
    return [&slot](const KeyValue& kv) {
      slot = wrap_parse(kv, [](const std::string& s) { return parse_nonlinearity(s); })(kv.value);
    };
  };
  std::map<std::string, Setter> all = setters;
  all.emplace("activation", nl_setter(c.activation));
  all.emplace("zeta", nl_setter(c.zeta));
  all.emplace("rho", nl_setter(c.rho));
  all.emplace("kappa", nl_setter(c.kappa));

  for (const auto& kv : parse_key_values(text)) {
    const auto it = all.find(kv.key);
    if (it == all.end()) fail(kv, "unknown key");
    if (kv.value.empty()) fail(kv, "missing value");
    it->second(kv);
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  try {
    return parse_experiment_config(read_text_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string experiment_config_to_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "dataset = " << c.dataset << "\n";
  out << "dataset_seed = " << c.dataset_seed << "\n";
  out << "beta_sup = " << join(c.betas, fmt_double) << "\n";
  out << "widths = " << join(c.widths, [](int w) { return std::to_string(w); }) << "\n";
  out << "seeds = " << join(c.seeds, [](std::uint64_t s) { return std::to_string(s); }) << "\n";
  out << "models = " << join(c.models, [](ModelKind m) { return std::string(model_name(m)); }) << "\n";
  out << "filters = " << join(c.filters, [](FilterKind f) { return std::string(filter_name(f)); })
      << "\n";
  out << "readouts = " << join(c.readouts, [](Readout r) { return std::string(readout_name(r)); })
      << "\n";
  out << "learning_rate = " << fmt_double(c.train.learning_rate) << "\n";
  out << "momentum = " << fmt_double(c.train.momentum) << "\n";
  out << "alpha = " << fmt_double(c.train.alpha) << "\n";
  out << "batch_size = " << c.train.batch_size << "\n";
  out << "epochs = " << c.train.epochs << "\n";
  out << "delta = " << fmt_double(c.delta) << "\n";
  out << "bounded_activation = " << (c.bounded_activation ? "true" : "false") << "\n";
  out << "record_wall_time = " << (c.record_wall_time ? "true" : "false") << "\n";
  out << "workers = " << c.workers << "\n";
  out << "init = " << init_name(c.init) << "\n";
  out << "activation = " << nonlinearity_name(c.activation) << "\n";
  out << "zeta = " << nonlinearity_name(c.zeta) << "\n";
  out << "rho = " << nonlinearity_name(c.rho) << "\n";
  out << "kappa = " << nonlinearity_name(c.kappa) << "\n";
  return out.str();
}

SynthConfig parse_synth_spec(const std::string& text, std::uint64_t seed) {
  std::map<std::string, KeyValue> kvs;
  for (auto& kv : parse_key_values(text)) kvs.emplace(kv.key, kv);
  const std::set<std::string> known = {"generator", "block_sizes", "edge_prob", "node_count",
                                       "n_graphs",  "feature_dim", "name"};
  for (const auto& [key, kv] : kvs) {
    if (!known.count(key)) fail(kv, "unknown key");
  }
  const auto require = [&](const std::string& key) -> const KeyValue& {
    const auto it = kvs.find(key);
    if (it == kvs.end()) throw ConfigError("synth spec: missing key '" + key + "'");
    return it->second;
  };

  SynthConfig cfg;
  cfg.seed = seed;
  const KeyValue& gen = require("generator");
  if (gen.value == "sbm") {
    SbmSpec spec;
    const KeyValue& sizes = require("block_sizes");
    spec.block_sizes = to_list<int>(sizes, [&](const std::string& s) {
      return static_cast<int>(to_int(sizes, s));
    });
    const KeyValue& probs = require("edge_prob");
    const auto rows = split(probs.value, ';');
    const auto b = static_cast<Eigen::Index>(spec.block_sizes.size());
    if (static_cast<Eigen::Index>(rows.size()) != b) {
      fail(probs, "expected " + std::to_string(b) + " rows separated by ';'");
    }
    spec.edge_prob.resize(b, b);
    for (Eigen::Index i = 0; i < b; ++i) {
      const auto cols = split(rows[static_cast<std::size_t>(i)], ',');
      if (static_cast<Eigen::Index>(cols.size()) != b) {
        fail(probs, "row " + std::to_string(i) + " needs " + std::to_string(b) + " entries");
      }
      for (Eigen::Index j = 0; j < b; ++j) {
        spec.edge_prob(i, j) = to_double(probs, cols[static_cast<std::size_t>(j)]);
      }
    }
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("synth spec: ") + e.what());
    }
    cfg.model = spec;
  } else if (gen.value == "er") {
    ErSpec spec;
    spec.node_count = static_cast<int>(to_int(require("node_count"), require("node_count").value));
    spec.edge_prob = to_double(require("edge_prob"), require("edge_prob").value);
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("synth spec: ") + e.what());
    }
    cfg.model = spec;
  } else {
    fail(gen, "expected 'sbm' or 'er'");
  }
  if (auto it = kvs.find("n_graphs"); it != kvs.end()) {
    cfg.n_graphs = static_cast<int>(to_int(it->second, it->second.value));
  }
  if (auto it = kvs.find("feature_dim"); it != kvs.end()) {
    cfg.feature_dim = static_cast<int>(to_int(it->second, it->second.value));
  }
  if (auto it = kvs.find("name"); it != kvs.end()) cfg.name = it->second.value;
  if (cfg.n_graphs < 1) throw ConfigError("synth spec: n_graphs must be >= 1");
  if (cfg.feature_dim < 1) throw ConfigError("synth spec: feature_dim must be >= 1");
  return cfg;
}

SynthConfig resolve_synth_source(const std::string& source, std::uint64_t seed) {
  if (is_preset(source)) return preset(source, seed);
  try {
    return parse_synth_spec(read_text_file(source), seed);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
}

GraphDataset resolve_dataset(const std::string& source, std::uint64_t dataset_seed) {
  if (is_preset(source)) return make_dataset(preset(source, dataset_seed));
  return load_dataset(source);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace gnnmf
