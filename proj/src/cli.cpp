#include "autotune/cli.hpp"

#include "autotune/autotune.hpp"
#include "autotune/benchmark.hpp"
#include "autotune/csv.hpp"
#include "autotune/diagnostics.hpp"
#include "autotune/errors.hpp"
#include "autotune/simulate.hpp"
#include "autotune/var.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace autotune {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

#ifndef AUTOTUNE_VERSION
#define AUTOTUNE_VERSION "unknown"
#endif

struct FitFlags {
  double alpha = 0.01;
  std::string norm = "l2";
  double tol = 1e-3;
  int max_sweeps = 1000;
  bool active = false;
  bool no_standardize = false;
  std::optional<long long> max_support;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--alpha", alpha, "F-test significance level")->capture_default_str();
    cmd.add_option("--norm", norm, "partial-residual dispersion: l2 (SD) or l1")
        ->check(CLI::IsMember({"l1", "l2"}))
        ->capture_default_str();
    cmd.add_option("--tol", tol, "relative l1 convergence threshold")->capture_default_str();
    cmd.add_option("--max-sweeps", max_sweeps, "coordinate-descent sweep budget")->capture_default_str();
    cmd.add_option("--max-support", max_support, "cap on the F-test support size");
    cmd.add_flag("--active", active, "use active-set screening");
    cmd.add_flag("--no-standardize", no_standardize, "fit on the raw design");
  }

  FitConfig config() const {
    FitConfig cfg;
    cfg.alpha = alpha;
    cfg.ranking_norm = norm == "l1" ? RankingNorm::kDispersionL1 : RankingNorm::kDispersionL2;
    cfg.tol = tol;
    cfg.max_sweeps = max_sweeps;
    cfg.active_set = active;
    cfg.standardize = !no_standardize;
    if (max_support) cfg.max_support = static_cast<Index>(*max_support);
    return cfg;
  }

  json echo() const {
    json j{{"alpha", alpha}, {"norm", norm},     {"tol", tol},
           {"max_sweeps", max_sweeps}, {"active", active}, {"standardize", !no_standardize}};
    j["max_support"] = max_support ? json(*max_support) : json(nullptr);
    return j;
  }
};

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json manifest(const std::string& command, json config, std::optional<std::uint64_t> seed, const Stopwatch& clock) {
  return {{"command", command},
          {"config", std::move(config)},
          {"seed", seed ? json(*seed) : json(nullptr)},
          {"version", AUTOTUNE_VERSION},
          {"wall_time_ms", clock.elapsed_ms()}};
}

std::vector<long long> one_based(const std::vector<Index>& idx, std::size_t limit = SIZE_MAX) {
  std::vector<long long> out;
  for (std::size_t i = 0; i < idx.size() && i < limit; ++i) out.push_back(static_cast<long long>(idx[i]) + 1);
  return out;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

struct LoadedRegression {
  Dataset data;
  std::vector<std::string> predictors;
  std::string response;
};

LoadedRegression load_regression(const std::string& path, const std::string& response_name) {
  const CsvTable table = read_csv(path);
  const Index cols = table.values.cols();
  if (cols < 2) throw InputError(path + ": need at least one predictor column and a response column");
  const Index response = response_name.empty() ? cols - 1 : table.column(response_name);

  std::vector<Index> keep;
  std::vector<std::string> names;
  for (Index j = 0; j < cols; ++j) {
    if (j == response) continue;
    keep.push_back(j);
    names.push_back(table.header.empty() ? "x" + std::to_string(j + 1)
                                         : table.header[static_cast<std::size_t>(j)]);
  }
  Eigen::MatrixXd x = table.values(Eigen::all, keep);
  Eigen::VectorXd y = table.values.col(response);
  const std::string yname = table.header.empty() ? "y" : table.header[static_cast<std::size_t>(response)];
  return {Dataset(std::move(x), std::move(y)), std::move(names), yname};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory '" + dir + "': " + ec.message());
  return fs::path(dir);
}

json fit_to_json(const AutotuneFit& fit, std::size_t ranking_head) {
  return {{"beta", to_vector(fit.beta)},
          {"intercept", fit.intercept},
          {"sigma2", fit.sigma2},
          {"lambda", fit.lambda},
          {"lambda0", fit.lambda0},
          {"support_set", one_based(fit.support_set)},
          {"ranking_head", one_based(fit.ranking, ranking_head)},
          {"lambda_trace", fit.lambda_trace},
          {"sweeps", fit.sweeps},
          {"converged", fit.converged},
          {"saturated", fit.saturated},
          {"r2_curve", {{"cumulative", fit.r2_curve.cumulative}, {"adjusted", fit.r2_curve.adjusted}}}};
}

// ---- fit -------------------------------------------------------------------

struct FitCommand {
  std::string data;
  std::string response;
  std::string out;
  std::size_t ranking_head = 20;
  FitFlags flags;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("fit", "fit an autotune Lasso regression on a CSV file");
    cmd->add_option("--data", data, "CSV file; the last column is the response by default")->required();
    cmd->add_option("--response", response, "name of the response column (needs a header)");
    cmd->add_option("--out", out, "write the JSON result here instead of stdout");
    cmd->add_option("--ranking-head", ranking_head, "number of ranked predictors to report")->capture_default_str();
    flags.add_to(*cmd);
  }

  int run(std::ostream& os) const {
    const Stopwatch clock;
    const LoadedRegression loaded = load_regression(data, response);
    const AutotuneFit fit = autotune_fit(loaded.data, flags.config());

    json result = fit_to_json(fit, ranking_head);
    result["predictors"] = loaded.predictors;
    result["response"] = loaded.response;
    json config = flags.echo();
    config["data"] = data;
    config["response"] = loaded.response;
    result["manifest"] = manifest("fit", config, std::nullopt, clock);

    const std::string text = result.dump(2) + "\n";
    if (out.empty()) {
      os << text;
    } else {
      write_text(out, text);
    }
    return kExitOk;
  }
};

// ---- var-fit ---------------------------------------------------------------

struct VarFitCommand {
  std::string data;
  long long lags = 1;
  int jobs = 1;
  std::string out_dir = ".";
  FitFlags flags;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("var-fit", "fit a VAR(d) by columnwise autotune Lasso");
    cmd->add_option("--data", data, "CSV with one row per time point (ascending)")->required();
    cmd->add_option("--lags", lags, "VAR order d")->capture_default_str();
    cmd->add_option("--jobs", jobs, "columns fitted concurrently")->capture_default_str();
    cmd->add_option("--out-dir", out_dir, "directory for var_fit.json and phi.csv")->capture_default_str();
    flags.add_to(*cmd);
  }

  int run(std::ostream& os) const {
    const Stopwatch clock;
    const CsvTable table = read_csv(data);
    SeriesData series{table.values, static_cast<Index>(lags)};
    const VarFit fit = var_autotune_fit(series, flags.config(), jobs);

    const fs::path dir = ensure_dir(out_dir);
    std::ostringstream phi;
    const Index p = fit.phi.cols();
    std::vector<std::string> header;
    for (Index i = 0; i < p; ++i) {
      header.push_back(table.header.empty() ? "z" + std::to_string(i + 1) : table.header[static_cast<std::size_t>(i)]);
    }
    write_csv(phi, fit.phi, header);
    write_text(dir / "phi.csv", phi.str());

    json columns = json::array();
    for (Index i = 0; i < p; ++i) {
      const AutotuneFit& c = fit.per_column[static_cast<std::size_t>(i)];
      columns.push_back({{"index", i + 1},
                         {"name", header[static_cast<std::size_t>(i)]},
                         {"sigma2", c.sigma2},
                         {"lambda", c.lambda},
                         {"lambda0", c.lambda0},
                         {"intercept", c.intercept},
                         {"support_set", one_based(c.support_set)},
                         {"lambda_trace", c.lambda_trace},
                         {"sweeps", c.sweeps},
                         {"converged", c.converged},
                         {"saturated", c.saturated}});
    }
    json config = flags.echo();
    config["data"] = data;
    config["lags"] = lags;
    config["jobs"] = jobs;
    json result{{"lags", lags},
                {"p", p},
                {"n", table.values.rows() - lags},
                {"columns", columns},
                {"phi_csv", (dir / "phi.csv").string()}};
    result["manifest"] = manifest("var-fit", config, std::nullopt, clock);
    const std::string text = result.dump(2) + "\n";
    write_text(dir / "var_fit.json", text);
    os << text;
    return kExitOk;
  }
};

// ---- simulate --------------------------------------------------------------

struct SimulateCommand {
  std::string kind = "reg";
  std::optional<long long> n, p;
  long long s = 5;
  double rho = 0.35;
  std::optional<std::string> snr;
  int beta_type = 1;
  std::string dgp = "diagonal";
  long long burn_in = 1000;
  std::uint64_t seed = 1;
  std::string out_dir;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("simulate", "write a simulated dataset and its ground truth");
    cmd->add_option("--kind", kind, "reg or var")->check(CLI::IsMember({"reg", "var"}))->capture_default_str();
    cmd->add_option("--n", n, "observations (reg: rows; var: design rows), default 80 / 200");
    cmd->add_option("--p", p, "predictors or series components, default 750 / 10");
    cmd->add_option("--s", s, "nonzero coefficients (reg)")->capture_default_str();
    cmd->add_option("--rho", rho, "AR(1) predictor correlation (reg)")->capture_default_str();
    cmd->add_option("--snr", snr, "signal-to-noise ratio; var accepts a comma list per component");
    cmd->add_option("--beta-type", beta_type, "coefficient pattern 1-5 (reg)")->capture_default_str();
    cmd->add_option("--dgp", dgp, "diagonal or block2x2 (var)")->capture_default_str();
    cmd->add_option("--burn-in", burn_in, "discarded warm-up steps (var)")->capture_default_str();
    cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    cmd->add_option("--out-dir", out_dir, "directory for data.csv and truth.json")->required();
  }

  int run(std::ostream& os) const {
    const Stopwatch clock;
    const fs::path dir = ensure_dir(out_dir);
    json truth;
    json spec_echo;
    std::ostringstream csv;
    if (kind == "reg") {
      RegSimSpec spec;
      spec.n = static_cast<Index>(n.value_or(80));
      spec.p = static_cast<Index>(p.value_or(750));
      spec.s = static_cast<Index>(s);
      spec.rho = rho;
      spec.snr = snr ? parse_number(*snr) : 2.0;
      spec.beta_type = beta_type;
      spec.seed = seed;
      const RegSimulation sim = simulate_regression(spec);
      Eigen::MatrixXd table(spec.n, spec.p + 1);
      table << sim.data.x(), sim.data.y();
      std::vector<std::string> header;
      for (Index j = 0; j < spec.p; ++j) header.push_back("x" + std::to_string(j + 1));
      header.push_back("y");
      write_csv(csv, table, header);
      spec_echo = {{"n", spec.n},     {"p", spec.p},     {"s", spec.s},
                   {"rho", spec.rho}, {"snr", spec.snr}, {"beta_type", spec.beta_type}};
      truth = {{"kind", "reg"}, {"beta", to_vector(sim.beta)}, {"sigma2", sim.sigma2}, {"rho", sim.rho}};
    } else {
      VarSimSpec spec;
      spec.n = static_cast<Index>(n.value_or(200));
      spec.p = static_cast<Index>(p.value_or(10));
      spec.dgp = parse_var_dgp(dgp);
      spec.burn_in = static_cast<Index>(burn_in);
      spec.seed = seed;
      spec.snr.clear();
      std::istringstream list(snr.value_or("2.5"));
      for (std::string item; std::getline(list, item, ',');) spec.snr.push_back(parse_number(item));
      const VarSimulation sim = simulate_var(spec);
      std::vector<std::string> header;
      for (Index j = 0; j < spec.p; ++j) header.push_back("z" + std::to_string(j + 1));
      write_csv(csv, sim.series.values, header);
      json a = json::array();
      for (Index i = 0; i < spec.p; ++i) {
        a.push_back(std::vector<double>(sim.transition.row(i).begin(), sim.transition.row(i).end()));
      }
      spec_echo = {{"n", spec.n},   {"p", spec.p},   {"dgp", to_string(spec.dgp)},
                   {"snr", spec.snr}, {"burn_in", spec.burn_in}};
      truth = {{"kind", "var"}, {"A", a}, {"sigma_eps", to_vector(sim.noise_var)}, {"lags", 1}};
    }
    truth["spec"] = spec_echo;
    json config = spec_echo;
    config["kind"] = kind;
    config["out_dir"] = out_dir;
    truth["manifest"] = manifest("simulate", config, seed, clock);
    write_text(dir / "data.csv", csv.str());
    write_text(dir / "truth.json", truth.dump(2) + "\n");
    os << (dir / "data.csv").string() << "\n" << (dir / "truth.json").string() << "\n";
    return kExitOk;
  }
};

// ---- benchmark -------------------------------------------------------------

struct BenchmarkCommand {
  std::string grid;
  std::string methods = "autotune,cvmin,cv1se,aic,bic";
  int reps = 1;
  std::uint64_t seed = 1;
  int jobs = 1;
  int cv_folds = 10;
  int tscv_folds = 5;
  std::string out_dir = ".";
  FitFlags flags;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("benchmark", "compare tuning methods on simulated data");
    cmd->add_option("--grid", grid, "key=value grid file")->required();
    cmd->add_option("--methods", methods, "comma list of autotune,cvmin,cv1se,aic,bic,tscv,truth")
        ->capture_default_str();
    cmd->add_option("--reps", reps, "replications per spec")->capture_default_str();
    cmd->add_option("--seed", seed, "base seed; replication r uses seed + r")->capture_default_str();
    cmd->add_option("--jobs", jobs, "replications run concurrently")->capture_default_str();
    cmd->add_option("--cv-folds", cv_folds, "K for cvmin/cv1se")->capture_default_str();
    cmd->add_option("--tscv-folds", tscv_folds, "K for tscv (2K time blocks)")->capture_default_str();
    cmd->add_option("--out-dir", out_dir, "directory for raw.csv and summary.csv")->capture_default_str();
    flags.add_to(*cmd);
  }

  int run(std::ostream& os) const {
    const Stopwatch clock;
    const std::vector<Method> parsed = parse_method_list(methods);
    std::ifstream in(grid);
    if (!in) throw InputError("cannot open '" + grid + "'");
    const std::vector<BenchSpec> specs = parse_grid(in);

    BenchmarkOptions opts;
    opts.reps = reps;
    opts.base_seed = seed;
    opts.jobs = jobs;
    opts.cv_folds = cv_folds;
    opts.tscv_folds = tscv_folds;
    opts.fit = flags.config();
    const auto rows = run_benchmark(specs, parsed, opts);

    const fs::path dir = ensure_dir(out_dir);
    std::ostringstream raw, summary;
    write_raw_csv(raw, rows);
    write_summary_csv(summary, aggregate(rows));
    write_text(dir / "raw.csv", raw.str());
    write_text(dir / "summary.csv", summary.str());

    json config = flags.echo();
    config["grid"] = grid;
    config["methods"] = methods;
    config["reps"] = reps;
    config["cv_folds"] = cv_folds;
    config["tscv_folds"] = tscv_folds;
    json result{{"raw_csv", (dir / "raw.csv").string()},
                {"summary_csv", (dir / "summary.csv").string()},
                {"rows", rows.size()},
                {"specs", specs.size()}};
    result["manifest"] = manifest("benchmark", config, seed, clock);
    os << result.dump(2) << "\n";
    return kExitOk;
  }
};

// ---- diagnose --------------------------------------------------------------

struct DiagnoseCommand {
  std::string data;
  std::string response;
  long long max_rank = -1;
  FitFlags flags;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("diagnose", "R^2 curves along the partial-residual ranking (CSV)");
    cmd->add_option("--data", data, "CSV file; the last column is the response by default")->required();
    cmd->add_option("--response", response, "name of the response column (needs a header)");
    cmd->add_option("--max-rank", max_rank, "number of ranked predictors to report (default min(p, n-2))");
    flags.add_to(*cmd);
  }

  int run(std::ostream& os) const {
    const LoadedRegression loaded = load_regression(data, response);
    const Diagnostics diag = diagnose(loaded.data, flags.config(), static_cast<Index>(max_rank));
    os << "rank,predictor,dispersion,in_support,cumulative_r2,adjusted_r2\n";
    for (const DiagnosticRow& r : diag.rows) {
      os << r.rank << ',' << r.predictor + 1 << ',' << format_number(r.dispersion) << ',' << (r.in_support ? 1 : 0)
         << ',' << format_number(r.cumulative_r2) << ',' << format_number(r.adjusted_r2) << '\n';
    }
    return kExitOk;
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"autotune: Lasso with data-driven penalty tuning"};
  app.set_version_flag("--version", std::string(AUTOTUNE_VERSION));
  app.require_subcommand(1);

  FitCommand fit;
  VarFitCommand var_fit;
  SimulateCommand simulate;
  BenchmarkCommand benchmark;
  DiagnoseCommand diag;
  fit.add_to(app);
  var_fit.add_to(app);
  simulate.add_to(app);
  benchmark.add_to(app);
  diag.add_to(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (app.got_subcommand("fit")) return fit.run(out);
    if (app.got_subcommand("var-fit")) return var_fit.run(out);
    if (app.got_subcommand("simulate")) return simulate.run(out);
    if (app.got_subcommand("benchmark")) return benchmark.run(out);
    if (app.got_subcommand("diagnose")) return diag.run(out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInput;
}

}  // namespace autotune
