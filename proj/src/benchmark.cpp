#include "autotune/benchmark.hpp"

#include "autotune/autotune.hpp"
#include "autotune/csv.hpp"
#include "autotune/errors.hpp"
#include "autotune/metrics.hpp"
#include "autotune/parallel.hpp"
#include "autotune/random.hpp"
#include "autotune/tuners.hpp"
#include "autotune/var.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

namespace autotune {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct MethodResult {
  Eigen::VectorXd beta;  // regression: coefficients; VAR: vec(Phi)
  double sigma2_hat = kNaN;
  Index lambda_visits = 0;
};

MethodResult fit_regression(Method method, const RegSimulation& sim, const BenchmarkOptions& opts,
                            std::uint64_t seed) {
  const Dataset& data = sim.data;
  MethodResult out;
  const auto tuned = [&](const TunedLasso& t, Index fits) {
    out.beta = t.beta;
    out.sigma2_hat = t.sigma2_residual;
    out.lambda_visits = t.grid.count() * fits;
  };
  switch (method) {
    case Method::kAutotune: {
      const AutotuneFit fit = autotune_fit(data, opts.fit);
      out.beta = fit.beta;
      out.sigma2_hat = fit.sigma2;
      out.lambda_visits = static_cast<Index>(fit.lambda_trace.size());
      break;
    }
    case Method::kCvMin:
    case Method::kCvOneSe:
      tuned(cv_lasso(data, opts.cv_folds, method == Method::kCvMin ? CvRule::kMin : CvRule::kOneSe,
                     derive_seed(seed, 1)),
            opts.cv_folds + 1);
      break;
    case Method::kAic:
    case Method::kBic:
      tuned(ic_lasso(data, method == Method::kAic ? InfoCriterion::kAic : InfoCriterion::kBic), 1);
      break;
    case Method::kTscv:
      tuned(tscv_lasso(data.y(), data.x(), opts.tscv_folds), opts.tscv_folds + 1);
      break;
    case Method::kTruth:
      out.beta = sim.beta;
      out.sigma2_hat = sample_variance(data.y() - data.x() * sim.beta);
      break;
  }
  return out;
}

MethodResult fit_var(Method method, const VarSimulation& sim, const BenchmarkOptions& opts, std::uint64_t seed) {
  const VarDesign design = build_var_design(sim.series);
  const Index p = design.y.cols();
  MethodResult out;
  if (method == Method::kTruth) {
    const Eigen::MatrixXd phi = sim.transition.transpose();
    out.beta = phi.reshaped();
    double s = 0.0;
    for (Index i = 0; i < p; ++i) s += sample_variance(design.y.col(i) - design.x * phi.col(i));
    out.sigma2_hat = s / static_cast<double>(p);
    return out;
  }
  if (method == Method::kAutotune) {
    const VarFit fit = var_autotune_fit(sim.series, opts.fit);
    out.beta = fit.phi.reshaped();
    out.sigma2_hat = fit.sigma2.mean();
    for (const auto& col : fit.per_column) out.lambda_visits += static_cast<Index>(col.lambda_trace.size());
    return out;
  }
  Eigen::MatrixXd phi(design.x.cols(), p);
  double s = 0.0;
  for (Index i = 0; i < p; ++i) {
    const Dataset column(design.x, design.y.col(i));
    TunedLasso t;
    Index fits = 1;
    switch (method) {
      case Method::kCvMin:
      case Method::kCvOneSe:
        t = cv_lasso(column, opts.cv_folds, method == Method::kCvMin ? CvRule::kMin : CvRule::kOneSe,
                     derive_seed(seed, 100 + static_cast<std::uint64_t>(i)));
        fits = opts.cv_folds + 1;
        break;
      case Method::kAic:
      case Method::kBic:
        t = ic_lasso(column, method == Method::kAic ? InfoCriterion::kAic : InfoCriterion::kBic);
        break;
      case Method::kTscv:
        t = tscv_lasso(column.y(), column.x(), opts.tscv_folds);
        fits = opts.tscv_folds + 1;
        break;
      default:
        break;
    }
    phi.col(i) = t.beta;
    s += t.sigma2_residual;
    out.lambda_visits += t.grid.count() * fits;
  }
  out.beta = phi.reshaped();
  out.sigma2_hat = s / static_cast<double>(p);
  return out;
}

void score(MetricsReport& row, const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_true,
           double rho, double sigma2, bool regression) {
  row.rmse = rmse(beta_hat, beta_true);
  row.rte = regression ? rte(beta_hat, beta_true, rho, sigma2) : kNaN;
  row.pve = regression ? pve(beta_hat, beta_true, rho, sigma2) : kNaN;
  const std::size_t m = static_cast<std::size_t>(beta_hat.size());
  std::vector<double> scores(m);
  std::unique_ptr<bool[]> truth(new bool[m]);
  bool any_pos = false, any_neg = false;
  for (std::size_t j = 0; j < m; ++j) {
    scores[j] = std::abs(beta_hat[static_cast<Index>(j)]);
    truth[j] = beta_true[static_cast<Index>(j)] != 0.0;
    (truth[j] ? any_pos : any_neg) = true;
  }
  row.auroc = any_pos && any_neg ? auroc(scores, std::span<const bool>(truth.get(), m)) : kNaN;
  const auto est = support_of(beta_hat);
  const auto tru = support_of(beta_true);
  row.mcc = mcc(est, tru, beta_hat.size());
}

std::vector<MetricsReport> run_unit(Index spec_id, const BenchSpec& spec, int rep,
                                    const std::vector<Method>& methods, const BenchmarkOptions& opts) {
  const std::uint64_t seed = opts.base_seed + static_cast<std::uint64_t>(rep);
  std::vector<MetricsReport> rows;
  const std::string label = describe(spec);

  std::function<MethodResult(Method)> fit;
  Eigen::VectorXd beta_true;
  double rho = 0.0, sigma2 = 0.0, sigma2_emp = 0.0;
  bool regression = true;
  std::optional<RegSimulation> reg;
  std::optional<VarSimulation> var;
  std::string sim_error;
  try {
    if (const auto* rs = std::get_if<RegSimSpec>(&spec)) {
      RegSimSpec s = *rs;
      s.seed = seed;
      reg.emplace(simulate_regression(s));
      beta_true = reg->beta;
      rho = reg->rho;
      sigma2 = reg->sigma2;
      sigma2_emp = sample_variance(reg->data.y() - reg->data.x() * reg->beta);
      fit = [&](Method m) { return fit_regression(m, *reg, opts, seed); };
    } else {
      VarSimSpec s = std::get<VarSimSpec>(spec);
      s.seed = seed;
      var.emplace(simulate_var(s));
      regression = false;
      const Eigen::MatrixXd phi = var->transition.transpose();
      beta_true = phi.reshaped();
      const VarDesign design = build_var_design(var->series);
      for (Index i = 0; i < design.y.cols(); ++i) {
        sigma2_emp += sample_variance(design.y.col(i) - design.x * phi.col(i));
      }
      sigma2_emp /= static_cast<double>(design.y.cols());
      fit = [&](Method m) { return fit_var(m, *var, opts, seed); };
    }
  } catch (const std::exception& e) {
    sim_error = e.what();
  }

  for (const Method m : methods) {
    MetricsReport row;
    row.spec_id = spec_id;
    row.spec = label;
    row.method = to_string(m);
    row.rep = rep;
    row.seed = seed;
    if (!sim_error.empty()) {
      row.ok = false;
      row.error = sim_error;
      rows.push_back(std::move(row));
      continue;
    }
    try {
      const auto start = std::chrono::steady_clock::now();
      const MethodResult res = fit(m);
      const auto stop = std::chrono::steady_clock::now();
      row.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      row.lambda_visits = res.lambda_visits;
      row.sigma2_hat = res.sigma2_hat;
      row.sigma2_err = res.sigma2_hat - sigma2_emp;
      score(row, res.beta, beta_true, rho, sigma2, regression);
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

MetricSummary summarize(const std::vector<double>& v) {
  MetricSummary s;
  std::vector<double> finite;
  for (const double x : v) {
    if (!std::isnan(x)) finite.push_back(x);
  }
  if (finite.empty()) return {kNaN, kNaN};
  double sum = 0.0;
  for (const double x : finite) sum += x;
  s.mean = sum / static_cast<double>(finite.size());
  if (finite.size() < 2) {
    s.se = kNaN;
    return s;
  }
  double ss = 0.0;
  for (const double x : finite) ss += (x - s.mean) * (x - s.mean);
  const double m = static_cast<double>(finite.size());
  s.se = std::sqrt(ss / (m - 1.0) / m);
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

std::vector<BenchSpec> expand_grid(const std::map<std::string, std::vector<std::string>>& kv) {
  const auto values = [&](const std::string& key, const std::string& fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? std::vector<std::string>{fallback} : it->second;
  };
  const auto kind = values("kind", "reg");
  if (kind.size() != 1) throw InputError("grid key 'kind' takes a single value");

  static const std::vector<std::string> reg_keys{"kind", "n", "p", "s", "rho", "snr", "beta_type"};
  static const std::vector<std::string> var_keys{"kind", "n", "p", "dgp", "snr", "burn_in"};
  const auto& allowed = kind[0] == "var" ? var_keys : reg_keys;
  for (const auto& [key, _] : kv) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InputError("unknown grid key '" + key + "' for kind " + kind[0]);
    }
  }

  std::vector<BenchSpec> out;
  if (kind[0] == "reg") {
    for (const auto& n : values("n", "80"))
      for (const auto& p : values("p", "750"))
        for (const auto& s : values("s", "5"))
          for (const auto& rho : values("rho", "0.35"))
            for (const auto& snr : values("snr", "2"))
              for (const auto& bt : values("beta_type", "1")) {
                RegSimSpec spec;
                spec.n = parse_int(n);
                spec.p = parse_int(p);
                spec.s = parse_int(s);
                spec.rho = parse_number(rho);
                spec.snr = parse_number(snr);
                spec.beta_type = static_cast<int>(parse_int(bt));
                spec.validate();
                out.emplace_back(spec);
              }
  } else if (kind[0] == "var") {
    for (const auto& n : values("n", "200"))
      for (const auto& p : values("p", "10"))
        for (const auto& dgp : values("dgp", "diagonal"))
          for (const auto& snr : values("snr", "2.5"))
            for (const auto& burn : values("burn_in", "1000")) {
              VarSimSpec spec;
              spec.n = parse_int(n);
              spec.p = parse_int(p);
              spec.dgp = parse_var_dgp(dgp);
              spec.snr = {parse_number(snr)};
              spec.burn_in = parse_int(burn);
              spec.validate();
              out.emplace_back(spec);
            }
  } else {
    throw InputError("grid kind must be reg or var");
  }
  return out;
}

}  // namespace

Method parse_method(const std::string& name) {
  static const std::map<std::string, Method> table{
      {"autotune", Method::kAutotune}, {"cvmin", Method::kCvMin}, {"cv1se", Method::kCvOneSe},
      {"aic", Method::kAic},           {"bic", Method::kBic},     {"tscv", Method::kTscv},
      {"truth", Method::kTruth}};
  const auto it = table.find(name);
  if (it == table.end()) throw InputError("unknown method '" + name + "'");
  return it->second;
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kAutotune: return "autotune";
    case Method::kCvMin: return "cvmin";
    case Method::kCvOneSe: return "cv1se";
    case Method::kAic: return "aic";
    case Method::kBic: return "bic";
    case Method::kTscv: return "tscv";
    case Method::kTruth: return "truth";
  }
  return "unknown";
}

std::vector<Method> parse_method_list(const std::string& csv) {
  std::vector<Method> out;
  for (const auto& name : split(csv, ',')) {
    if (!name.empty()) out.push_back(parse_method(name));
  }
  if (out.empty()) throw InputError("no methods given");
  return out;
}

std::string describe(const BenchSpec& spec) {
  std::ostringstream os;
  if (const auto* r = std::get_if<RegSimSpec>(&spec)) {
    os << "reg n=" << r->n << " p=" << r->p << " s=" << r->s << " rho=" << format_number(r->rho)
       << " snr=" << format_number(r->snr) << " beta_type=" << r->beta_type;
  } else {
    const auto& v = std::get<VarSimSpec>(spec);
    os << "var dgp=" << to_string(v.dgp) << " p=" << v.p << " n=" << v.n << " snr=";
    for (std::size_t i = 0; i < v.snr.size(); ++i) os << (i ? "/" : "") << format_number(v.snr[i]);
  }
  return os.str();
}

std::vector<MetricsReport> run_benchmark(const std::vector<BenchSpec>& specs, const std::vector<Method>& methods,
                                         const BenchmarkOptions& opts) {
  if (opts.reps < 1) throw InputError("reps must be at least 1");
  const std::size_t reps = static_cast<std::size_t>(opts.reps);
  const std::size_t units = specs.size() * reps;
  std::vector<std::vector<MetricsReport>> results(units);
  parallel_for(units, opts.jobs, [&](std::size_t u) {
    const std::size_t s = u / reps;
    const int rep = static_cast<int>(u % reps);
    results[u] = run_unit(static_cast<Index>(s), specs[s], rep, methods, opts);
  });
  std::vector<MetricsReport> rows;
  for (auto& r : results) {
    for (auto& row : r) rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<MetricsReport>& rows) {
  std::map<std::pair<Index, std::string>, std::vector<const MetricsReport*>> groups;
  std::vector<std::pair<Index, std::string>> order;
  for (const auto& row : rows) {
    const auto key = std::make_pair(row.spec_id, row.method);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&row);
  }
  // Rows arrive grouped by spec, so first-seen order is already sorted by spec.
  std::vector<AggregateRow> out;
  for (const auto& key : order) {
    const auto& members = groups[key];
    AggregateRow agg;
    agg.spec_id = key.first;
    agg.method = key.second;
    agg.spec = members.front()->spec;
    std::vector<double> rmse_v, rte_v, pve_v, auroc_v, mcc_v, sig_v, time_v, visit_v;
    for (const auto* r : members) {
      if (!r->ok) {
        ++agg.failures;
        continue;
      }
      ++agg.count;
      rmse_v.push_back(r->rmse);
      rte_v.push_back(r->rte);
      pve_v.push_back(r->pve);
      auroc_v.push_back(r->auroc);
      mcc_v.push_back(r->mcc);
      sig_v.push_back(r->sigma2_err);
      time_v.push_back(r->runtime_ms);
      visit_v.push_back(static_cast<double>(r->lambda_visits));
    }
    agg.rmse = summarize(rmse_v);
    agg.rte = summarize(rte_v);
    agg.pve = summarize(pve_v);
    agg.auroc = summarize(auroc_v);
    agg.mcc = summarize(mcc_v);
    agg.sigma2_err = summarize(sig_v);
    agg.runtime_ms = summarize(time_v);
    agg.lambda_visits = summarize(visit_v);
    out.push_back(std::move(agg));
  }
  return out;
}

std::vector<BenchSpec> parse_grid(std::istream& in) {
  std::vector<BenchSpec> specs;
  std::map<std::string, std::vector<std::string>> block;
  const auto flush = [&] {
    if (block.empty()) return;
    for (auto& s : expand_grid(block)) specs.push_back(std::move(s));
    block.clear();
  };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) {
      flush();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("grid line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    auto vals = split(line.substr(eq + 1), ',');
    if (key.empty() || vals.empty()) throw InputError("grid line " + std::to_string(line_no) + ": empty key or value");
    block[key] = std::move(vals);
  }
  flush();
  if (specs.empty()) throw InputError("grid file defines no specs");
  return specs;
}

void write_raw_csv(std::ostream& out, const std::vector<MetricsReport>& rows) {
  out << "spec_id,spec,method,rep,seed,rmse,rte,pve,auroc,mcc,sigma2_hat,sigma2_err,runtime_ms,lambda_visits,status\n";
  for (const auto& r : rows) {
    out << r.spec_id << ',' << csv_quote(r.spec) << ',' << r.method << ',' << r.rep << ',' << r.seed << ','
        << format_number(r.rmse) << ',' << format_number(r.rte) << ',' << format_number(r.pve) << ','
        << format_number(r.auroc) << ',' << format_number(r.mcc) << ',' << format_number(r.sigma2_hat) << ','
        << format_number(r.sigma2_err) << ',' << format_number(r.runtime_ms) << ',' << r.lambda_visits << ','
        << csv_quote(r.ok ? "ok" : "error: " + r.error) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "spec_id,spec,method,count,failures";
  for (const char* name : {"rmse", "rte", "pve", "auroc", "mcc", "sigma2_err", "runtime_ms", "lambda_visits"}) {
    out << ',' << name << "_mean," << name << "_se";
  }
  out << '\n';
  for (const auto& a : rows) {
    out << a.spec_id << ',' << csv_quote(a.spec) << ',' << a.method << ',' << a.count << ',' << a.failures;
    for (const MetricSummary* m : {&a.rmse, &a.rte, &a.pve, &a.auroc, &a.mcc, &a.sigma2_err, &a.runtime_ms,
                                   &a.lambda_visits}) {
      out << ',' << format_number(m->mean) << ',' << format_number(m->se);
    }
    out << '\n';
  }
}

}  // namespace autotune
