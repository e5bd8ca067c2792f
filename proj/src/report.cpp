#include "gnnmf/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace gnnmf {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> parse_csv_line(const std::string& line, int line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError("rows.csv line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

double parse_number(const std::string& s, int line_no, const char* column) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ParseError("rows.csv line " + std::to_string(line_no) + ": bad " + column + " '" + s +
                     "'");
  }
  return v;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::optional<double> read_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, Eigen::Index cols_hint, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = rows ? static_cast<Eigen::Index>(j.at(0).size()) : cols_hint;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError(std::string(what) + " row " + std::to_string(i) + " has wrong length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

std::string slug(std::string s) {
  for (char& c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return s;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt("%.15g", v);
}

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kRowsHeader) + "\n";
  for (const auto& r : rows) {
    out += csv_field(r.dataset) + "," + format_number(r.beta) + "," +
           std::string(model_name(r.model)) + "," + std::string(filter_name(r.filter)) + "," +
           std::string(readout_name(r.readout)) + "," + std::to_string(r.width) + "," +
           std::to_string(r.seed) + "," + format_number(r.train_risk) + "," +
           format_number(r.test_risk) + "," + format_number(r.abs_gen_error) + "," +
           format_number(r.fd_bound) + "," + format_number(r.rademacher_bound) + "," +
           format_number(r.wall_time_s) + "\n";
  }
  return out;
}

std::vector<SweepRow> rows_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError("rows.csv: empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRowsHeader) throw ParseError("rows.csv: unexpected header '" + line + "'");

  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = parse_csv_line(line, line_no);
    if (f.size() != 13) {
      throw ParseError("rows.csv line " + std::to_string(line_no) + ": expected 13 fields, got " +
                       std::to_string(f.size()));
    }
    SweepRow r;
    try {
      r.dataset = f[0];
      r.beta = parse_number(f[1], line_no, "beta");
      r.model = parse_model(f[2]);
      r.filter = parse_filter(f[3]);
      r.readout = parse_readout(f[4]);
      r.width = static_cast<int>(parse_number(f[5], line_no, "width"));
      r.seed = std::stoull(f[6]);
    } catch (const std::invalid_argument& e) {
      throw ParseError("rows.csv line " + std::to_string(line_no) + ": " + e.what());
    }
    r.train_risk = parse_number(f[7], line_no, "train_risk");
    r.test_risk = parse_number(f[8], line_no, "test_risk");
    r.abs_gen_error = parse_number(f[9], line_no, "abs_gen_error");
    r.fd_bound = parse_number(f[10], line_no, "fd_bound");
    r.rademacher_bound = parse_number(f[11], line_no, "rademacher_bound");
    r.wall_time_s = parse_number(f[12], line_no, "wall_time_s");
    r.diverged = std::isnan(r.abs_gen_error);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string summary_to_csv(const std::vector<SummaryRow>& summary) {
  std::string out =
      "dataset,beta,model,filter,readout,width,n_runs,n_completed,gen_mean,gen_std,"
      "train_risk_mean,test_risk_mean,fd_mean,fd_std,rademacher_mean,rademacher_std\n";
  for (const auto& s : summary) {
    out += csv_field(s.dataset) + "," + format_number(s.beta) + "," +
           std::string(model_name(s.model)) + "," + std::string(filter_name(s.filter)) + "," +
           std::string(readout_name(s.readout)) + "," + std::to_string(s.width) + "," +
           std::to_string(s.n_runs) + "," + std::to_string(s.n_completed) + "," +
           format_number(s.gen_mean) + "," + format_number(s.gen_std) + "," +
           format_number(s.train_risk_mean) + "," + format_number(s.test_risk_mean) + "," +
           format_number(s.fd_mean) + "," + format_number(s.fd_std) + "," +
           format_number(s.rademacher_mean) + "," + format_number(s.rademacher_std) + "\n";
  }
  return out;
}

Json bound_report_to_json(const BoundReport& r) {
  const BoundInputs& in = r.inputs;
  Json inputs = {
      {"n", in.n},
      {"alpha", in.alpha},
      {"n_max", in.n_max},
      {"b_f", in.b_f},
      {"g_max", in.g_max},
      {"readout", readout_name(in.readout)},
      {"lipschitz", {{"phi", in.lipschitz.phi},
                     {"kappa", in.lipschitz.kappa},
                     {"rho", in.lipschitz.rho},
                     {"zeta", in.lipschitz.zeta}}},
      {"m_ell_prime", in.m_ell_prime},
      {"delta", in.delta},
      {"m_phi_cap", optional_number(in.m_phi_cap)},
  };
  Json stats = {
      {"w2_max", r.stats.w2_max},
      {"w1_norm_max", r.stats.w1_norm_max},
      {"w3_norm_max", optional_number(r.stats.w3_norm_max)},
  };
  return {
      {"model", model_name(r.model)},
      {"bounded", r.bounded},
      {"variant", r.variant},
      {"m_phi", r.m_phi},
      {"output_bound", r.output_bound},
      {"m_ell", r.m_ell},
      {"fd_bound", r.fd_bound},
      {"rademacher_bound", r.rademacher_bound},
      {"inputs", std::move(inputs)},
      {"stats", std::move(stats)},
  };
}

BoundReport bound_report_from_json(const Json& j) {
  BoundReport r;
  try {
    r.model = parse_model(j.at("model").get<std::string>());
    r.bounded = j.at("bounded").get<bool>();
    r.variant = j.at("variant").get<std::string>();
    r.m_phi = j.at("m_phi").get<double>();
    r.output_bound = j.at("output_bound").get<double>();
    r.m_ell = j.at("m_ell").get<double>();
    r.fd_bound = j.at("fd_bound").get<double>();
    r.rademacher_bound = j.at("rademacher_bound").get<double>();
    const Json& in = j.at("inputs");
    r.inputs.n = in.at("n").get<int>();
    r.inputs.alpha = in.at("alpha").get<double>();
    r.inputs.n_max = in.at("n_max").get<int>();
    r.inputs.b_f = in.at("b_f").get<double>();
    r.inputs.g_max = in.at("g_max").get<double>();
    r.inputs.readout = parse_readout(in.at("readout").get<std::string>());
    const Json& l = in.at("lipschitz");
    r.inputs.lipschitz = {l.at("phi").get<double>(), l.at("kappa").get<double>(),
                          l.at("rho").get<double>(), l.at("zeta").get<double>()};
    r.inputs.m_ell_prime = in.at("m_ell_prime").get<double>();
    r.inputs.delta = in.at("delta").get<double>();
    r.inputs.m_phi_cap = read_optional(in, "m_phi_cap");
    const Json& s = j.at("stats");
    r.stats.w2_max = s.at("w2_max").get<double>();
    r.stats.w1_norm_max = s.at("w1_norm_max").get<double>();
    r.stats.w3_norm_max = read_optional(s, "w3_norm_max");
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bound report: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bound report: ") + e.what());
  }
  return r;
}

BoundReport recompute_bound_report(const Json& j) {
  const BoundReport echoed = bound_report_from_json(j);
  return compute_bounds(echoed.model, echoed.inputs, echoed.stats, echoed.bounded);
}

Json filter_report_to_json(const FilterNormReport& r) {
  return {
      {"kind", filter_name(r.kind)},
      {"inf_norm_max", r.inf_norm_max},
      {"fro_norm_max", r.fro_norm_max},
      {"g_max", r.g_max},
      {"rank_max", r.rank_max},
      {"inf_bound", optional_number(r.inf_bound)},
      {"fro_bound", optional_number(r.fro_bound)},
  };
}

Json dataset_stats_to_json(const DatasetStats& s) {
  return {{"n_graphs", s.n_graphs}, {"n_max", s.n_max}, {"d_max", s.d_max},
          {"d_min", s.d_min},       {"b_f", s.b_f},     {"feature_dim", s.feature_dim}};
}

Json run_row_to_json(const SweepRow& r) {
  Json j = {
      {"dataset", r.dataset},
      {"beta", r.beta},
      {"model", model_name(r.model)},
      {"filter", filter_name(r.filter)},
      {"readout", readout_name(r.readout)},
      {"width", r.width},
      {"seed", r.seed},
      {"train_risk", number_or_null(r.train_risk)},
      {"test_risk", number_or_null(r.test_risk)},
      {"abs_gen_error", number_or_null(r.abs_gen_error)},
      {"fd_bound", number_or_null(r.fd_bound)},
      {"rademacher_bound", number_or_null(r.rademacher_bound)},
      {"wall_time_s", r.wall_time_s},
      {"diverged", r.diverged},
  };
  if (r.diverged) j["error"] = r.error;
  if (r.bound) j["bound"] = bound_report_to_json(*r.bound);
  if (!r.loss_history.empty()) j["loss_history"] = r.loss_history;
  return j;
}

Json params_to_json(const UnitParams& p) {
  Json j = {
      {"width", p.width()},
      {"feature_dim", p.feature_dim()},
      {"w1", matrix_to_json(p.w1)},
      {"w2", std::vector<double>(p.w2.data(), p.w2.data() + p.w2.size())},
  };
  if (p.has_w3()) j["w3"] = matrix_to_json(p.w3);
  return j;
}

UnitParams params_from_json(const Json& j) {
  UnitParams p;
  try {
    const int h = j.at("width").get<int>();
    const int k = j.at("feature_dim").get<int>();
    p.w1 = matrix_from_json(j.at("w1"), k, "w1");
    const auto w2 = j.at("w2").get<std::vector<double>>();
    p.w2 = Eigen::Map<const Vector>(w2.data(), static_cast<Eigen::Index>(w2.size()));
    if (j.contains("w3") && !j.at("w3").is_null()) p.w3 = matrix_from_json(j.at("w3"), k, "w3");
    if (p.width() != h || p.w1.rows() != h || p.w1.cols() != k ||
        (p.has_w3() && (p.w3.rows() != h || p.w3.cols() != k))) {
      throw ParseError("params: shapes disagree with width/feature_dim");
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("params: ") + e.what());
  }
  return p;
}

void save_params(const UnitParams& params, const std::filesystem::path& path) {
  write_text_file(path, params_to_json(params).dump(1) + "\n");
}

UnitParams load_params(const std::filesystem::path& path) {
  try {
    return params_from_json(Json::parse(read_text_file(path)));
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Json report_json(const std::vector<SweepRow>& rows, const std::vector<SummaryRow>& summary,
                 const ReportContext& context) {
  Json j;
  if (context.config) {
    Json cfg = Json::object();
    for (const auto& kv : parse_key_values(experiment_config_to_text(*context.config))) {
      cfg[kv.key] = kv.value;
    }
    j["config"] = std::move(cfg);
  }
  if (context.stats) j["dataset_stats"] = dataset_stats_to_json(*context.stats);
  if (!context.filters.empty()) {
    Json filters = Json::array();
    for (const auto& f : context.filters) filters.push_back(filter_report_to_json(f));
    j["filters"] = std::move(filters);
  }
  Json jr = Json::array();
  for (const auto& r : rows) jr.push_back(run_row_to_json(r));
  j["rows"] = std::move(jr);
  Json js = Json::array();
  for (const auto& s : summary) {
    js.push_back({
        {"dataset", s.dataset},
        {"beta", s.beta},
        {"model", model_name(s.model)},
        {"filter", filter_name(s.filter)},
        {"readout", readout_name(s.readout)},
        {"width", s.width},
        {"n_runs", s.n_runs},
        {"n_completed", s.n_completed},
        {"gen_mean", number_or_null(s.gen_mean)},
        {"gen_std", number_or_null(s.gen_std)},
        {"fd_mean", number_or_null(s.fd_mean)},
        {"fd_std", number_or_null(s.fd_std)},
        {"rademacher_mean", number_or_null(s.rademacher_mean)},
        {"rademacher_std", number_or_null(s.rademacher_std)},
    });
  }
  j["summary"] = std::move(js);
  return j;
}

std::string render_svg(const std::vector<SummaryRow>& panel, const std::string& title) {
  constexpr double kW = 640, kH = 420, kLeft = 80, kRight = 150, kTop = 40, kBottom = 60;
  constexpr double kScale = 1e5;
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_hi = 0.0;
  for (const auto& s : panel) {
    const double x = std::log2(static_cast<double>(s.width));
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
    if (std::isfinite(s.gen_mean)) {
      const double bar = s.n_completed >= 2 ? s.gen_std : 0.0;
      y_hi = std::max(y_hi, (s.gen_mean + bar) * kScale);
    }
  }
  if (panel.empty()) x_lo = x_hi = 0.0;
  if (x_hi - x_lo < 1.0) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  y_hi = y_hi > 0.0 ? y_hi * 1.1 : 1.0;

  const double plot_w = kW - kLeft - kRight;
  const double plot_h = kH - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  const auto py = [&](double y) { return kTop + plot_h - y / y_hi * plot_h; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" viewBox=\"0 0 " << kW << " " << kH << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"13\">"
    << xml_escape(title) << "</text>\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
    << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
    << kTop + plot_h << "\" stroke=\"black\"/>\n";

  for (int e = static_cast<int>(std::ceil(x_lo)); e <= static_cast<int>(std::floor(x_hi)); ++e) {
    const double x = px(e);
    o << "<line x1=\"" << x << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << x << "\" y2=\""
      << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << x << "\" y=\"" << kTop + plot_h + 18 << "\" text-anchor=\"middle\">"
      << (1LL << std::max(0, std::min(e, 62))) << "</text>\n";
  }
  for (int t = 0; t <= 5; ++t) {
    const double v = y_hi * t / 5.0;
    const double y = py(v);
    o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\"" << y
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
      << fmt("%.3g", v) << "</text>\n";
  }
  o << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kH - 18
    << "\" text-anchor=\"middle\">hidden units h (log2 scale)</text>\n";
  o << "<text transform=\"translate(18," << kTop + plot_h / 2
    << ") rotate(-90)\" text-anchor=\"middle\">Absolute empirical generalization error (x1e5)"
       "</text>\n";

  std::vector<FilterKind> series;
  for (const auto& s : panel) {
    if (std::find(series.begin(), series.end(), s.filter) == series.end()) {
      series.push_back(s.filter);
    }
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = palette[k % 4];
    std::vector<const SummaryRow*> pts;
    for (const auto& s : panel) {
      if (s.filter == series[k] && std::isfinite(s.gen_mean)) pts.push_back(&s);
    }
    std::sort(pts.begin(), pts.end(),
              [](const SummaryRow* a, const SummaryRow* b) { return a->width < b->width; });
    if (pts.size() >= 2) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto* s : pts) {
        o << px(std::log2(static_cast<double>(s->width))) << "," << py(s->gen_mean * kScale)
          << " ";
      }
      o << "\"/>\n";
    }
    for (const auto* s : pts) {
      const double x = px(std::log2(static_cast<double>(s->width)));
      const double m = s->gen_mean * kScale;
      if (s->n_completed >= 2 && s->gen_std > 0.0) {
        const double lo = py(std::max(0.0, m - s->gen_std * kScale));
        const double hi = py(m + s->gen_std * kScale);
        o << "<line class=\"errorbar\" x1=\"" << x << "\" y1=\"" << lo << "\" x2=\"" << x
          << "\" y2=\"" << hi << "\" stroke=\"" << color << "\"/>\n";
        o << "<line class=\"errorbar\" x1=\"" << x - 4 << "\" y1=\"" << lo << "\" x2=\"" << x + 4
          << "\" y2=\"" << lo << "\" stroke=\"" << color << "\"/>\n";
        o << "<line class=\"errorbar\" x1=\"" << x - 4 << "\" y1=\"" << hi << "\" x2=\"" << x + 4
          << "\" y2=\"" << hi << "\" stroke=\"" << color << "\"/>\n";
      }
      o << "<circle cx=\"" << x << "\" cy=\"" << py(m) << "\" r=\"3\" fill=\"" << color
        << "\"/>\n";
    }
    const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
    o << "<line x1=\"" << kW - kRight + 15 << "\" y1=\"" << ly << "\" x2=\"" << kW - kRight + 35
      << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    o << "<text x=\"" << kW - kRight + 40 << "\" y=\"" << ly + 4 << "\">"
      << filter_name(series[k]) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::map<std::string, std::vector<SummaryRow>> svg_panels(const std::vector<SummaryRow>& summary) {
  std::map<std::string, std::vector<SummaryRow>> panels;
  for (const auto& s : summary) {
    const std::string key = "gen_" + slug(s.dataset) + "_beta" + format_number(s.beta) + "_" +
                            std::string(model_name(s.model)) + "_" +
                            std::string(readout_name(s.readout));
    panels[key].push_back(s);
  }
  return panels;
}

std::vector<std::filesystem::path> emit_reports(const std::vector<SweepRow>& rows,
                                                const std::vector<SummaryRow>& summary,
                                                const std::filesystem::path& out_dir,
                                                const ReportContext& context) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  const auto put = [&](const std::string& name, const std::string& text) {
    const auto path = out_dir / name;
    write_text_file(path, text);
    written.push_back(path);
  };
  put("rows.csv", rows_to_csv(rows));
  put("summary.csv", summary_to_csv(summary));
  put("report.json", report_json(rows, summary, context).dump(1) + "\n");
  for (const auto& [stem, panel] : svg_panels(summary)) {
    const auto& s = panel.front();
    const std::string title = s.dataset + ", beta_sup " + format_number(s.beta) + ", " +
                              std::string(model_name(s.model)) + ", " +
                              std::string(readout_name(s.readout)) + " readout";
    put(stem + ".svg", render_svg(panel, title));
  }
  return written;
}

}  // namespace gnnmf
