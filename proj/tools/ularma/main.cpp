// ularma: fit, select, forecast and diagnose ULARMA models on CSV data, and
// run simulation studies from scenario files.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ularma/diagnostics.hpp"
#include "ularma/estimation.hpp"
#include "ularma/forecast.hpp"
#include "ularma/inference.hpp"
#include "ularma/io.hpp"
#include "ularma/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kMissingFile = 3,
  kSchema = 4,
  kData = 5,
  kNotConverged = 6,
};

struct MissingFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataFlags {
  std::string data;
  std::string column;
  std::string numerator;
  std::string denominator;
  std::string date_column;
  std::vector<std::string> covariates;
  std::size_t holdout = 0;
  bool squeeze = false;

  void attach(CLI::App* app) {
    app->add_option("--data", data, "Input CSV with a header row")->required();
    app->add_option("--column", column, "Proportion column (name or 0-based index)");
    app->add_option("--numerator", numerator, "Numerator column for a ratio series");
    app->add_option("--denominator", denominator, "Denominator column for a ratio series");
    app->add_option("--date-column", date_column, "Column carried through to outputs");
    app->add_option("--covariates", covariates, "Covariate columns")->delimiter(',');
    app->add_option("--holdout", holdout, "Trailing observations reserved for evaluation");
    app->add_flag("--squeeze", squeeze, "Map y to (y(n-1)+0.5)/n so boundary values are admissible");
  }

  [[nodiscard]] ularma::io::IngestResult load() const {
    require_file(data);
    ularma::io::DatasetConfig cfg;
    cfg.input_path = data;
    if (!column.empty()) cfg.value_column = column;
    if (!numerator.empty()) cfg.numerator_column = numerator;
    if (!denominator.empty()) cfg.denominator_column = denominator;
    if (!date_column.empty()) cfg.date_column = date_column;
    cfg.covariate_columns = covariates;
    cfg.holdout = holdout;
    cfg.squeeze = squeeze;
    return ularma::io::ingest(cfg);
  }

  static void require_file(const std::string& path) {
    if (!fs::exists(path)) throw MissingFile("file '" + path + "' does not exist");
  }
};

struct Common {
  std::string out = ".";
  std::uint64_t seed = 20240101;
  std::size_t jobs = 1;
};

fs::path out_path(const Common& c, const std::string& name) {
  fs::create_directories(c.out);
  return fs::path(c.out) / name;
}

void write(const fs::path& p, const std::string& text) {
  ularma::io::write_text(p, text);
  std::cerr << "wrote " << p.string() << "\n";
}

ularma::FittedModel load_model(const std::string& path, const ularma::io::IngestResult& in) {
  DataFlags::require_file(path);
  const auto stored = ularma::io::model_from_json(ularma::io::read_text(path));
  if (stored.spec.r != in.train.n_covariates()) {
    throw ularma::io::SchemaError("model has " + std::to_string(stored.spec.r) +
                                  " covariates but the data selects " +
                                  std::to_string(in.train.n_covariates()));
  }
  auto fit = ularma::fitted_model_at(stored.spec, stored.gamma, in.train, stored.converged);
  fit.iterations = stored.iterations;
  return fit;
}

void report_fit(const ularma::FittedModel& fit) {
  std::cout << "ULARMA(" << fit.spec.p << "," << fit.spec.q << ") link=" << to_string(fit.spec.link)
            << " n=" << fit.n_obs << "\n"
            << ularma::io::coefficient_table_text(fit) << "loglik " << fit.loglik << "  AIC "
            << fit.criteria.aic << "  BIC " << fit.criteria.bic << "  HQC " << fit.criteria.hqc
            << "\n";
  for (const auto& w : fit.warnings) std::cerr << "warning: " << w << "\n";
}

int finish_fit(const ularma::FittedModel& fit) {
  if (!fit.converged) {
    std::cerr << "error: estimation did not converge (outputs written)\n";
    return kNotConverged;
  }
  return kOk;
}

json metrics_json(const ularma::AccuracyMetrics& m) {
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return {{"rmse", num(m.rmse)}, {"mape", num(m.mape)}, {"mda", num(m.mda)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ULARMA models for time series on (0, 1)"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--out", common.out, "Output directory")->capture_default_str();
  app.add_option("--seed", common.seed, "Random seed")->capture_default_str();
  app.add_option("--jobs", common.jobs, "Worker threads (0 = all cores)")->capture_default_str();

  int code = kOk;

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Estimate a ULARMA(p, q) model");
  DataFlags fit_data;
  fit_data.attach(fit_cmd);
  std::size_t fit_p = 1;
  std::size_t fit_q = 1;
  std::string fit_link = "logit";
  fit_cmd->add_option("--p", fit_p, "AR order")->capture_default_str();
  fit_cmd->add_option("--q", fit_q, "MA order")->capture_default_str();
  fit_cmd->add_option("--link", fit_link, "logit | loglog | cloglog")->capture_default_str();
  fit_cmd->callback([&] {
    const auto in = fit_data.load();
    const auto spec = ularma::ModelSpec::make(fit_p, fit_q, in.train.n_covariates(),
                                              ularma::parse_link(fit_link));
    const auto fm = ularma::fit(spec, in.train);
    report_fit(fm);
    write(out_path(common, "model.json"), ularma::io::model_to_json(fm, fit_data.covariates));
    write(out_path(common, "coefficients.csv"), ularma::io::coefficient_table_csv(fm));
    code = finish_fit(fm);
  });

  // select
  auto* sel_cmd = app.add_subcommand("select", "Stepwise Wald selection from ULARMA(pmax, qmax)");
  DataFlags sel_data;
  sel_data.attach(sel_cmd);
  std::size_t pmax = 2;
  std::size_t qmax = 2;
  std::string sel_link = "logit";
  ularma::StepwiseOptions sel_opts;
  bool drop_intercept = false;
  sel_cmd->add_option("--pmax", pmax)->capture_default_str();
  sel_cmd->add_option("--qmax", qmax)->capture_default_str();
  sel_cmd->add_option("--link", sel_link)->capture_default_str();
  sel_cmd->add_option("--drop", sel_opts.drop, "Backward p-value threshold")->capture_default_str();
  sel_cmd->add_option("--add", sel_opts.add, "Forward p-value threshold")->capture_default_str();
  sel_cmd->add_option("--max-rounds", sel_opts.max_rounds)->capture_default_str();
  sel_cmd->add_flag("--drop-intercept", drop_intercept, "Allow the intercept to be eliminated");
  sel_cmd->callback([&] {
    const auto in = sel_data.load();
    sel_opts.keep_intercept = !drop_intercept;
    const auto res = ularma::stepwise_select(in.train, pmax, qmax, ularma::parse_link(sel_link), sel_opts);
    std::string trace;
    for (const auto& ev : res.trace) trace += ev.to_string() + "\n";
    if (res.hit_cycle_guard) trace += "stopped by cycle guard\n";
    std::cout << trace;
    report_fit(res.model);
    write(out_path(common, "selection_trace.txt"), trace);
    write(out_path(common, "model.json"), ularma::io::model_to_json(res.model, sel_data.covariates));
    write(out_path(common, "coefficients.csv"), ularma::io::coefficient_table_csv(res.model));
    code = finish_fit(res.model);
  });

  // forecast
  auto* fc_cmd = app.add_subcommand("forecast", "Point forecasts and bootstrap prediction intervals");
  DataFlags fc_data;
  fc_data.attach(fc_cmd);
  std::string fc_model;
  std::size_t fc_h = 0;
  std::size_t fc_B = 1000;
  double fc_delta = 0.1;
  fc_cmd->set_help_flag("--help", "Print this help message and exit");
  fc_cmd->add_option("--model", fc_model, "model.json from fit or select")->required();
  fc_cmd->add_option("--h", fc_h, "Horizon (default: holdout length, else 1)");
  fc_cmd->add_option("--B", fc_B, "Bootstrap paths")->capture_default_str();
  fc_cmd->add_option("--delta", fc_delta, "Miscoverage of the prediction interval")->capture_default_str();
  fc_cmd->callback([&] {
    const auto in = fc_data.load();
    const auto fm = load_model(fc_model, in);
    const std::size_t h = fc_h > 0 ? fc_h : std::max<std::size_t>(in.holdout_y.size(), 1);
    ularma::RowMatrix new_x;
    if (fm.spec.r > 0) {
      if (static_cast<std::size_t>(in.holdout_x.rows()) < h) {
        throw std::invalid_argument("covariate model needs --holdout >= h rows of future covariates");
      }
      new_x = in.holdout_x.topRows(static_cast<Eigen::Index>(h));
    }
    const auto fc = ularma::bootstrap_pi(fm, in.train, h, fc_B, fc_delta, common.seed, new_x, common.jobs);
    write(out_path(common, "forecast.csv"), ularma::io::forecast_csv(fc));
    const std::size_t m = std::min(h, in.holdout_y.size());
    if (m > 0) {
      const std::vector<double> actual(in.holdout_y.begin(), in.holdout_y.begin() + static_cast<std::ptrdiff_t>(m));
      const std::vector<double> point(fc.point.begin(), fc.point.begin() + static_cast<std::ptrdiff_t>(m));
      const auto table = ularma::io::forecast_accuracy_csv(actual, point);
      std::cout << table;
      write(out_path(common, "accuracy.csv"), table);
    }
  });

  // diagnose
  auto* dg_cmd = app.add_subcommand("diagnose", "Residual tests, SRCP and in-sample accuracy");
  DataFlags dg_data;
  dg_data.attach(dg_cmd);
  std::string dg_model;
  ularma::DlOptions dl;
  std::string multiplier = "mammen";
  bool keep_first = false;
  dg_cmd->add_option("--model", dg_model, "model.json from fit or select")->required();
  dg_cmd->add_option("--B", dl.B, "Wild bootstrap draws for the DL tests")->capture_default_str();
  dg_cmd->add_option("--lags", dl.lags, "Lagged residuals in the DL conditioning set")->capture_default_str();
  dg_cmd->add_option("--multiplier", multiplier, "mammen | normal")->capture_default_str();
  dg_cmd->add_flag("--keep-first", keep_first, "Keep the t = 1 residual");
  dg_cmd->callback([&] {
    const auto in = dg_data.load();
    const auto fm = load_model(dg_model, in);
    if (multiplier != "mammen" && multiplier != "normal") {
      throw CLI::ValidationError("--multiplier", "expected mammen or normal");
    }
    dl.multiplier = multiplier == "normal" ? ularma::Multiplier::normal : ularma::Multiplier::mammen;
    dl.seed = common.seed;
    const auto res = ularma::residuals(fm, in.train, !keep_first);

    json report;
    report["model"] = {{"p", fm.spec.p}, {"q", fm.spec.q}, {"link", to_string(fm.spec.link)},
                       {"n", fm.n_obs}, {"loglik", fm.loglik}};
    report["criteria"] = {{"aic", fm.criteria.aic}, {"bic", fm.criteria.bic}, {"hqc", fm.criteria.hqc}};
    report["residuals"] = {{"drop_first", res.drop_first}, {"count", res.simple.size()},
                           {"capped_quantile", res.capped}};
    const auto cp = ularma::dl_test(res.simple, ularma::DlStatistic::cp, dl);
    const auto kp = ularma::dl_test(res.simple, ularma::DlStatistic::kp, dl);
    const auto ks = ularma::ks_normality(res.quantile);
    report["tests"] = json::array(
        {{{"test", "DL-Cp"}, {"statistic", cp.statistic}, {"p_value", cp.p_value}, {"B", dl.B}},
         {{"test", "DL-KS"}, {"statistic", kp.statistic}, {"p_value", kp.p_value}, {"B", dl.B}},
         {{"test", "KS"}, {"null", "lilliefors"}, {"statistic", ks.statistic}, {"p_value", ks.p_value}}});
    const bool has_ar = std::any_of(fm.gamma_hat.phi.begin(), fm.gamma_hat.phi.end(),
                                    [](double v) { return v != 0.0; });
    if (has_ar) {
      const auto s = ularma::srcp(fm.gamma_hat.phi);
      report["srcp"] = {{"value", s.value}, {"root_re", s.root.real()}, {"root_im", s.root.imag()},
                        {"residual", s.residual}, {"near_unit_root", s.near_unit_root},
                        {"threshold", ularma::kSrcpAdvisoryThreshold}};
      if (s.near_unit_root) std::cerr << "advisory: SRCP " << s.value << " below 1.05\n";
    } else {
      report["srcp"] = nullptr;
    }
    report["in_sample"] = metrics_json(ularma::accuracy_metrics(in.train.y, fm.fitted_mu));
    if (res.capped > 0) {
      std::cerr << "warning: " << res.capped << " quantile residuals capped at +/-"
                << ularma::kQuantileResidualCap << "\n";
    }

    std::string csv = "t,simple,quantile\n";
    const std::size_t offset = res.drop_first ? 2 : 1;
    for (std::size_t i = 0; i < res.simple.size(); ++i) {
      csv += std::to_string(i + offset) + "," + ularma::io::format_double(res.simple[i]) + "," +
             ularma::io::format_double(res.quantile[i]) + "\n";
    }
    std::cout << report.dump(2) << "\n";
    write(out_path(common, "diagnostics.json"), report.dump(2) + "\n");
    write(out_path(common, "residuals.csv"), csv);
  });

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate one path from a scenario file");
  std::string sim_scenario;
  std::size_t sim_replica = 0;
  sim_cmd->add_option("--scenario", sim_scenario, "Scenario JSON")->required();
  sim_cmd->add_option("--replica", sim_replica, "Replica stream index")->capture_default_str();
  sim_cmd->callback([&] {
    DataFlags::require_file(sim_scenario);
    auto scn = ularma::io::scenario_from_json(ularma::io::read_text(sim_scenario));
    if (app.get_option("--seed")->count() > 0) scn.seed = common.seed;
    const auto path = ularma::simulate_replica(scn, sim_replica);
    write(out_path(common, "path.csv"), ularma::io::path_csv(path));
  });

  // mc
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo point-estimate and goodness-of-fit study");
  std::string mc_scenario;
  std::size_t mc_replicas = 0;
  std::vector<std::string> mc_tests = {"DL-Cp", "DL-KS", "KS"};
  ularma::GofMcOptions gof_opts;
  bool skip_gof = false;
  mc_cmd->add_option("--scenario", mc_scenario, "Scenario JSON")->required();
  mc_cmd->add_option("--replicas", mc_replicas, "Override the scenario's replica count");
  mc_cmd->add_option("--tests", mc_tests, "Goodness-of-fit tests")->delimiter(',')->capture_default_str();
  mc_cmd->add_option("--level", gof_opts.level)->capture_default_str();
  mc_cmd->add_option("--B", gof_opts.dl_bootstrap, "Wild bootstrap draws per DL test")->capture_default_str();
  mc_cmd->add_flag("--point-only", skip_gof, "Skip the goodness-of-fit study");
  mc_cmd->callback([&] {
    DataFlags::require_file(mc_scenario);
    auto scn = ularma::io::scenario_from_json(ularma::io::read_text(mc_scenario));
    if (app.get_option("--seed")->count() > 0) scn.seed = common.seed;
    if (mc_replicas > 0) scn.n_replicas = mc_replicas;
    const auto pt = ularma::run_point_mc(scn, common.jobs);
    const auto table = ularma::io::point_summary_csv(pt);
    std::cout << table << "converged " << pt.n_converged << "/" << pt.replicas << ", failed "
              << pt.n_failed << "\n";
    write(out_path(common, "point_summary.csv"), table);
    if (!skip_gof) {
      std::vector<ularma::GofTest> tests;
      for (const auto& t : mc_tests) tests.push_back(ularma::parse_gof_test(t));
      const auto gof = ularma::run_gof_mc(scn, tests, common.jobs, gof_opts);
      const auto gt = ularma::io::gof_summary_csv(gof);
      std::cout << gt;
      write(out_path(common, "gof_summary.csv"), gt);
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const MissingFile& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMissingFile;
  } catch (const ularma::io::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSchema;
  } catch (const ularma::io::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return code;
}
