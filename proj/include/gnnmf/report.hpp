#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gnnmf/sweep.hpp"

namespace gnnmf {

using Json = nlohmann::json;

inline constexpr const char* kRowsHeader =
    "dataset,beta,model,filter,readout,width,seed,train_risk,test_risk,"
    "abs_gen_error,fd_bound,rademacher_bound,wall_time_s";

// %.15g; non-finite values print as nan / inf / -inf.
std::string format_number(double v);

std::string rows_to_csv(const std::vector<SweepRow>& rows);
// Inverse of rows_to_csv. Rows whose abs_gen_error is NaN come back diverged.
std::vector<SweepRow> rows_from_csv(const std::string& text);

std::string summary_to_csv(const std::vector<SummaryRow>& summary);

Json bound_report_to_json(const BoundReport& report);
BoundReport bound_report_from_json(const Json& j);
// Re-evaluates the bounds from the echoed inputs and stats only.
BoundReport recompute_bound_report(const Json& j);

Json filter_report_to_json(const FilterNormReport& report);
Json dataset_stats_to_json(const DatasetStats& stats);
Json run_row_to_json(const SweepRow& row);

Json params_to_json(const UnitParams& params);
UnitParams params_from_json(const Json& j);
void save_params(const UnitParams& params, const std::filesystem::path& path);
UnitParams load_params(const std::filesystem::path& path);

// Extra material echoed into report.json when available.
struct ReportContext {
  std::optional<ExperimentConfig> config;
  std::optional<DatasetStats> stats;
  std::vector<FilterNormReport> filters;
};

Json report_json(const std::vector<SweepRow>& rows, const std::vector<SummaryRow>& summary,
                 const ReportContext& context);

/// Mean |gen error| x 1e5 against log2(h), one series per filter, with
/// +-1 std bars when a point has at least two completed runs.
std::string render_svg(const std::vector<SummaryRow>& panel, const std::string& title);

// Groups summary rows by (dataset, beta, model, readout); key is the file stem.
std::map<std::string, std::vector<SummaryRow>> svg_panels(
    const std::vector<SummaryRow>& summary);

// Writes rows.csv, summary.csv, report.json and one SVG per panel into out_dir.
// Returns the paths written.
std::vector<std::filesystem::path> emit_reports(const std::vector<SweepRow>& rows,
                                                const std::vector<SummaryRow>& summary,
                                                const std::filesystem::path& out_dir,
                                                const ReportContext& context = {});

}  // namespace gnnmf
