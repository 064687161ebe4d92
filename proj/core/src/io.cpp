#include "ularma/io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "ularma/inference.hpp"

namespace ularma::io {
namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> parse_number(const std::string& field) {
  const std::string s = trim(field);
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

struct WaldRow {
  std::string name;
  double estimate;
  double se;
  double z;
  double p;
};

std::vector<WaldRow> wald_rows(const FittedModel& fit) {
  std::vector<WaldRow> rows;
  const auto flat = fit.gamma_hat.flat();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j : fit.spec.free_indices()) {
    WaldRow r{fit.spec.coef_name(j), flat[j], fit.std_err[j], nan, nan};
    if (fit.information_invertible()) {
      try {
        const auto w = wald_test(fit, j);
        r.z = w.statistic;
        r.p = w.p_value;
      } catch (const std::domain_error&) {
        // Non-positive variance: leave z and p undefined.
      }
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name_or_index) const {
  const std::string key = trim(name_or_index);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == key) return i;
  }
  std::size_t idx = 0;
  const auto* first = key.data();
  const auto* last = key.data() + key.size();
  const auto [ptr, ec] = std::from_chars(first, last, idx);
  if (!key.empty() && ec == std::errc() && ptr == last) {
    if (idx < header.size()) return idx;
    throw InputError("column index " + key + " out of range (" + std::to_string(header.size()) +
                     " columns)");
  }
  throw InputError("no column named '" + key + "'");
}

CsvTable parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    rec.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // Skip blank lines.
    if (!(rec.size() == 1 && trim(rec[0]).empty())) records.push_back(std::move(rec));
    rec.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw InputError("unterminated quoted field in CSV");
  if (!field.empty() || !rec.empty()) end_record();
  if (records.empty()) throw InputError("CSV has no header row");

  CsvTable t;
  t.header = std::move(records.front());
  t.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
  return t;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_text(path)); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

IngestResult ingest(const DatasetConfig& cfg, const CsvTable& table) {
  const bool has_value = cfg.value_column.has_value();
  const bool has_ratio = cfg.numerator_column.has_value() || cfg.denominator_column.has_value();
  if (has_value == has_ratio) {
    throw InputError("give either a value column or a numerator/denominator pair");
  }
  if (has_ratio && !(cfg.numerator_column && cfg.denominator_column)) {
    throw InputError("numerator and denominator columns must be given together");
  }

  const std::size_t n_all = table.rows.size();
  if (n_all == 0) throw InputError("CSV has no data rows");
  if (cfg.holdout >= n_all) {
    throw InputError("holdout (" + std::to_string(cfg.holdout) + ") must be smaller than the " +
                     std::to_string(n_all) + " rows");
  }

  std::vector<std::size_t> xcols;
  for (const auto& c : cfg.covariate_columns) xcols.push_back(table.column(c));
  const auto date_col = cfg.date_column ? std::optional(table.column(*cfg.date_column)) : std::nullopt;

  auto cell = [&](std::size_t row, std::size_t col, const std::string& label) {
    const auto& rec = table.rows[row];
    const auto v = col < rec.size() ? parse_number(rec[col]) : std::nullopt;
    if (!v) {
      throw InputError("row " + std::to_string(row + 1) + ": missing or non-numeric value in column '" +
                       label + "'");
    }
    return *v;
  };

  std::vector<double> y(n_all);
  RowMatrix X(static_cast<Eigen::Index>(n_all), static_cast<Eigen::Index>(xcols.size()));
  std::vector<std::string> dates;
  if (has_value) {
    const auto vc = table.column(*cfg.value_column);
    for (std::size_t i = 0; i < n_all; ++i) y[i] = cell(i, vc, *cfg.value_column);
  } else {
    const auto nc = table.column(*cfg.numerator_column);
    const auto dc = table.column(*cfg.denominator_column);
    for (std::size_t i = 0; i < n_all; ++i) {
      const double num = cell(i, nc, *cfg.numerator_column);
      const double den = cell(i, dc, *cfg.denominator_column);
      if (den == 0.0) throw InputError("row " + std::to_string(i + 1) + ": zero denominator");
      y[i] = num / den;
    }
  }
  for (std::size_t i = 0; i < n_all; ++i) {
    if (!(y[i] >= 0.0 && y[i] <= 1.0)) {
      throw InputError("row " + std::to_string(i + 1) + ": value " + format_double(y[i]) +
                       " outside [0, 1]");
    }
    if (!cfg.squeeze && (y[i] == 0.0 || y[i] == 1.0)) {
      throw InputError("row " + std::to_string(i + 1) + ": value " + format_double(y[i]) +
                       " on the boundary (use squeeze)");
    }
    for (std::size_t c = 0; c < xcols.size(); ++c) {
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          cell(i, xcols[c], cfg.covariate_columns[c]);
    }
    if (date_col) {
      const auto& rec = table.rows[i];
      dates.push_back(*date_col < rec.size() ? trim(rec[*date_col]) : std::string());
    }
  }
  if (cfg.squeeze) {
    const double n = static_cast<double>(n_all);
    for (double& v : y) v = (v * (n - 1.0) + 0.5) / n;
  }

  const std::size_t n_train = n_all - cfg.holdout;
  IngestResult res;
  res.train.y.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n_train));
  res.train.X = X.topRows(static_cast<Eigen::Index>(n_train));
  res.holdout_y.assign(y.begin() + static_cast<std::ptrdiff_t>(n_train), y.end());
  res.holdout_x = X.bottomRows(static_cast<Eigen::Index>(cfg.holdout));
  if (date_col) {
    res.train_dates.assign(dates.begin(), dates.begin() + static_cast<std::ptrdiff_t>(n_train));
    res.holdout_dates.assign(dates.begin() + static_cast<std::ptrdiff_t>(n_train), dates.end());
  }
  return res;
}

IngestResult ingest(const DatasetConfig& cfg) {
  if (!std::filesystem::exists(cfg.input_path)) {
    throw InputError("input file '" + cfg.input_path.string() + "' does not exist");
  }
  return ingest(cfg, read_csv(cfg.input_path));
}

std::string model_to_json(const FittedModel& fit, const std::vector<std::string>& covariate_names) {
  const auto& s = fit.spec;
  json j;
  j["schema_version"] = kModelSchemaVersion;
  j["model"] = "ULARMA";
  j["p"] = s.p;
  j["q"] = s.q;
  j["r"] = s.r;
  j["link"] = to_string(s.link);
  j["free_mask"] = s.free_mask;
  j["coefficients"] = {{"alpha", fit.gamma_hat.alpha},
                       {"beta", fit.gamma_hat.beta},
                       {"phi", fit.gamma_hat.phi},
                       {"theta", fit.gamma_hat.theta}};
  json names = json::array();
  json se = json::array();
  for (std::size_t i = 0; i < s.n_coef(); ++i) {
    names.push_back(s.coef_name(i));
    se.push_back(number_or_null(fit.std_err[i]));
  }
  j["names"] = names;
  j["std_err"] = se;
  j["covariate_names"] = covariate_names;
  j["loglik"] = fit.loglik;
  j["criteria"] = {{"aic", fit.criteria.aic}, {"bic", fit.criteria.bic}, {"hqc", fit.criteria.hqc}};
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["n_obs"] = fit.n_obs;
  json K = json::array();
  for (Eigen::Index a = 0; a < fit.K_n.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < fit.K_n.cols(); ++b) row.push_back(fit.K_n(a, b));
    K.push_back(row);
  }
  j["K_n"] = K;
  j["warnings"] = fit.warnings;
  return j.dump(2) + "\n";
}

StoredModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("schema_version")) {
    throw SchemaError("model file has no schema_version");
  }
  if (!j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != kModelSchemaVersion) {
    throw SchemaError("model schema_version " + j["schema_version"].dump() + " is not supported (expected " +
                      std::to_string(kModelSchemaVersion) + ")");
  }
  try {
    StoredModel m;
    m.spec = ModelSpec::make(j.at("p").get<std::size_t>(), j.at("q").get<std::size_t>(),
                             j.at("r").get<std::size_t>(), parse_link(j.at("link").get<std::string>()));
    m.spec.free_mask = j.at("free_mask").get<std::vector<bool>>();
    m.spec.validate();
    const auto& c = j.at("coefficients");
    m.gamma.alpha = c.at("alpha").get<double>();
    m.gamma.beta = c.at("beta").get<std::vector<double>>();
    m.gamma.phi = c.at("phi").get<std::vector<double>>();
    m.gamma.theta = c.at("theta").get<std::vector<double>>();
    m.gamma.check_dims(m.spec);
    if (j.contains("covariate_names")) {
      m.covariate_names = j["covariate_names"].get<std::vector<std::string>>();
    }
    for (const auto& v : j.at("std_err")) m.std_err.push_back(number_from(v));
    m.loglik = j.at("loglik").get<double>();
    const auto& cr = j.at("criteria");
    m.criteria = {cr.at("aic").get<double>(), cr.at("bic").get<double>(), cr.at("hqc").get<double>()};
    m.converged = j.at("converged").get<bool>();
    m.iterations = j.at("iterations").get<int>();
    m.n_obs = j.at("n_obs").get<std::size_t>();
    const auto& K = j.at("K_n");
    const auto k = static_cast<Eigen::Index>(K.size());
    m.K_n.resize(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      const auto& row = K.at(static_cast<std::size_t>(a));
      if (static_cast<Eigen::Index>(row.size()) != k) throw SchemaError("K_n is not square");
      for (Eigen::Index b = 0; b < k; ++b) m.K_n(a, b) = row.at(static_cast<std::size_t>(b)).get<double>();
    }
    return m;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("model file does not match the schema: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("model file is inconsistent: ") + e.what());
  }
}

std::string scenario_to_json(const Scenario& scn) {
  json j;
  j["p"] = scn.spec.p;
  j["q"] = scn.spec.q;
  j["link"] = to_string(scn.spec.link);
  j["alpha"] = scn.gamma_true.alpha;
  j["beta"] = scn.gamma_true.beta;
  j["phi"] = scn.gamma_true.phi;
  j["theta"] = scn.gamma_true.theta;
  j["n"] = scn.n;
  j["burnin"] = scn.burnin;
  j["covariate_rule"] = scn.covariate_rule == CovariateRule::sinusoid ? "sinusoid" : "none";
  j["n_replicas"] = scn.n_replicas;
  j["seed"] = scn.seed;
  return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    Scenario s;
    const auto rule = j.value("covariate_rule", std::string("none"));
    if (rule == "sinusoid") {
      s.covariate_rule = CovariateRule::sinusoid;
    } else if (rule != "none") {
      throw SchemaError("unknown covariate_rule '" + rule + "'");
    }
    ParamVector g;
    g.alpha = j.at("alpha").get<double>();
    g.beta = j.value("beta", std::vector<double>{});
    g.phi = j.value("phi", std::vector<double>{});
    g.theta = j.value("theta", std::vector<double>{});
    const auto p = j.value("p", g.phi.size());
    const auto q = j.value("q", g.theta.size());
    const Link link = parse_link(j.value("link", std::string("logit")));
    s.spec = ModelSpec::make(p, q, g.beta.size(), link);
    s.gamma_true = g;
    s.n = j.value("n", s.n);
    s.burnin = j.value("burnin", s.burnin);
    s.n_replicas = j.value("n_replicas", s.n_replicas);
    s.seed = j.value("seed", s.seed);
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("scenario file does not match the schema: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("scenario file is inconsistent: ") + e.what());
  }
}

std::string coefficient_table_csv(const FittedModel& fit) {
  std::string out = "name,estimate,std_error,z,p_value\n";
  for (const auto& r : wald_rows(fit)) {
    out += r.name + "," + format_double(r.estimate) + "," + format_double(r.se) + "," +
           format_double(r.z) + "," + format_double(r.p) + "\n";
  }
  return out;
}

std::string coefficient_table_text(const FittedModel& fit) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s %12s %12s %9s %9s\n", "", "estimate", "std.error", "z",
                "p-value");
  out += buf;
  for (const auto& r : wald_rows(fit)) {
    std::snprintf(buf, sizeof buf, "%-10s %12.6f %12.6f %9.3f %9.4f\n", r.name.c_str(), r.estimate,
                  r.se, r.z, r.p);
    out += buf;
  }
  return out;
}

std::string path_csv(const SimulatedPath& path) {
  const auto r = path.data.n_covariates();
  std::string out = "t,y,mu";
  for (std::size_t l = 0; l < r; ++l) out += ",x" + std::to_string(l + 1);
  out += "\n";
  for (std::size_t t = 0; t < path.data.size(); ++t) {
    out += std::to_string(t + 1) + "," + format_double(path.data.y[t]) + "," + format_double(path.mu[t]);
    for (std::size_t l = 0; l < r; ++l) {
      out += "," + format_double(path.data.X(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(l)));
    }
    out += "\n";
  }
  return out;
}

std::string forecast_csv(const ForecastResult& fc) {
  std::string out = "horizon,point,lower,upper\n";
  const bool bounds = fc.lower.size() == fc.point.size();
  for (std::size_t k = 0; k < fc.point.size(); ++k) {
    out += std::to_string(k + 1) + "," + format_double(fc.point[k]) + "," +
           (bounds ? format_double(fc.lower[k]) : std::string()) + "," +
           (bounds ? format_double(fc.upper[k]) : std::string()) + "\n";
  }
  return out;
}

std::string forecast_accuracy_csv(const std::vector<double>& actual, const std::vector<double>& point) {
  if (actual.size() != point.size() || actual.empty()) {
    throw std::invalid_argument("forecast_accuracy_csv: series must be non-empty and equally long");
  }
  std::string out = "horizon,rmse,mape,mape_percent\n";
  for (std::size_t h = 1; h <= actual.size(); ++h) {
    const auto m = accuracy_metrics(std::span(actual).first(h), std::span(point).first(h));
    out += std::to_string(h) + "," + format_double(m.rmse) + "," + format_double(m.mape) + "," +
           format_double(100.0 * m.mape) + "\n";
  }
  return out;
}

std::string point_summary_csv(const PointMcSummary& s) {
  std::string out =
      "coefficient,true,mean,median,sd,mean_converged,median_converged,sd_converged\n";
  for (std::size_t i = 0; i < s.names.size(); ++i) {
    const auto& a = s.all[i];
    const auto& c = s.converged_only[i];
    out += csv_escape(s.names[i]) + "," + format_double(s.truth[i]) + "," + format_double(a.mean) +
           "," + format_double(a.median) + "," + format_double(a.sd) + "," + format_double(c.mean) +
           "," + format_double(c.median) + "," + format_double(c.sd) + "\n";
  }
  return out;
}

std::string gof_summary_csv(const GofMcSummary& s) {
  std::string out = "test,rejections,evaluated,rejection_rate\n";
  for (std::size_t i = 0; i < s.tests.size(); ++i) {
    out += to_string(s.tests[i]) + "," + std::to_string(s.rejections[i]) + "," +
           std::to_string(s.evaluated) + "," + format_double(s.rejection_rate[i]) + "\n";
  }
  return out;
}

}  // namespace ularma::io
