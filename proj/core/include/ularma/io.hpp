#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ularma/diagnostics.hpp"
#include "ularma/estimation.hpp"
#include "ularma/forecast.hpp"
#include "ularma/simulate.hpp"

namespace ularma::io {

/// Bad or unreadable input data (missing file, unparseable row, support violation).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model or scenario JSON that does not match the expected schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kModelSchemaVersion = 1;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position for a header name, or for a 0-based index written as digits.
  [[nodiscard]] std::size_t column(const std::string& name_or_index) const;
};

/// RFC-4180 style reader; the first record is the header.
[[nodiscard]] CsvTable parse_csv(const std::string& text);
[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path);
[[nodiscard]] std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Shortest decimal that round-trips to the same double.
[[nodiscard]] std::string format_double(double v);

struct DatasetConfig {
  std::filesystem::path input_path;
  std::optional<std::string> value_column;
  std::optional<std::string> numerator_column;
  std::optional<std::string> denominator_column;
  std::optional<std::string> date_column;
  std::vector<std::string> covariate_columns;
  std::size_t holdout = 0;
  /// Maps y to (y (n - 1) + 0.5) / n so that 0 and 1 become admissible.
  bool squeeze = false;
};

struct IngestResult {
  /// Leading observations used for fitting.
  SeriesData train;
  /// Trailing `holdout` observations.
  std::vector<double> holdout_y;
  RowMatrix holdout_x;
  std::vector<std::string> train_dates;
  std::vector<std::string> holdout_dates;
};

/// Builds the proportion series described by `cfg` from an in-memory table.
[[nodiscard]] IngestResult ingest(const DatasetConfig& cfg, const CsvTable& table);
/// Reads cfg.input_path and ingests it. Throws InputError.
[[nodiscard]] IngestResult ingest(const DatasetConfig& cfg);

/// Model identity and estimates as stored on disk.
struct StoredModel {
  ModelSpec spec;
  ParamVector gamma;
  std::vector<std::string> covariate_names;
  std::vector<double> std_err;
  double loglik = 0.0;
  InfoCriteria criteria;
  bool converged = false;
  int iterations = 0;
  std::size_t n_obs = 0;
  Eigen::MatrixXd K_n;
};

[[nodiscard]] std::string model_to_json(const FittedModel& fit,
                                        const std::vector<std::string>& covariate_names = {});
/// Throws SchemaError on a missing or mismatched schema_version or fields.
[[nodiscard]] StoredModel model_from_json(const std::string& text);

[[nodiscard]] std::string scenario_to_json(const Scenario& scn);
[[nodiscard]] Scenario scenario_from_json(const std::string& text);

/// Coefficient table with Wald statistics: name, estimate, std_error, z, p_value.
[[nodiscard]] std::string coefficient_table_csv(const FittedModel& fit);
/// Same content, aligned for terminals.
[[nodiscard]] std::string coefficient_table_text(const FittedModel& fit);

/// Columns t, y, mu[, x1..xr].
[[nodiscard]] std::string path_csv(const SimulatedPath& path);
/// Columns horizon, point, lower, upper.
[[nodiscard]] std::string forecast_csv(const ForecastResult& fc);
/// Columns horizon, rmse, mape, mape_percent over cumulative horizons 1..H.
[[nodiscard]] std::string forecast_accuracy_csv(const std::vector<double>& actual,
                                                const std::vector<double>& point);
/// Columns coefficient, true, mean, median, sd, mean_converged, median_converged, sd_converged.
[[nodiscard]] std::string point_summary_csv(const PointMcSummary& s);
/// Columns test, rejections, evaluated, rejection_rate.
[[nodiscard]] std::string gof_summary_csv(const GofMcSummary& s);

}  // namespace ularma::io
