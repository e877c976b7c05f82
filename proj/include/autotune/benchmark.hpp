#pragma once

#include "autotune/model.hpp"
#include "autotune/simulate.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace autotune {

enum class Method { kAutotune, kCvMin, kCvOneSe, kAic, kBic, kTscv, kTruth };

Method parse_method(const std::string& name);
std::string to_string(Method m);
std::vector<Method> parse_method_list(const std::string& csv);

using BenchSpec = std::variant<RegSimSpec, VarSimSpec>;

std::string describe(const BenchSpec& spec);

// One benchmark row: a method scored on one simulated replication.
struct MetricsReport {
  Index spec_id = 0;
  std::string spec;
  std::string method;
  int rep = 0;
  std::uint64_t seed = 0;
  double rmse = 0.0;
  double rte = 0.0;
  double pve = 0.0;
  double auroc = 0.0;
  double mcc = 0.0;
  double sigma2_hat = 0.0;
  double sigma2_err = 0.0;  // sigma2_hat - sample variance of Y - X beta_true
  double runtime_ms = 0.0;
  Index lambda_visits = 0;
  bool ok = true;
  std::string error;
};

struct BenchmarkOptions {
  int reps = 1;
  std::uint64_t base_seed = 1;
  int jobs = 1;
  int cv_folds = 10;
  int tscv_folds = 5;
  FitConfig fit;
};

/**
 * Simulates every (spec, rep) with seed base_seed + rep, runs every method on
 * the same draw and scores it. Failures are recorded in the row, not thrown.
 * Rows come back ordered by (spec, rep, method) whatever `jobs` is.
 */
std::vector<MetricsReport> run_benchmark(const std::vector<BenchSpec>& specs, const std::vector<Method>& methods,
                                         const BenchmarkOptions& opts);

struct MetricSummary {
  double mean = 0.0;
  double se = 0.0;
};

struct AggregateRow {
  Index spec_id = 0;
  std::string spec;
  std::string method;
  int count = 0;
  int failures = 0;
  MetricSummary rmse, rte, pve, auroc, mcc, sigma2_err, runtime_ms, lambda_visits;
};

// Mean and standard error per (spec, method) over successful rows; NaN
// metric values (e.g. undefined AUROC) are left out of their own column.
std::vector<AggregateRow> aggregate(const std::vector<MetricsReport>& rows);

// key=value lines (values comma-separated lists); blank lines separate grids;
// each grid expands to the cartesian product of its lists.
std::vector<BenchSpec> parse_grid(std::istream& in);

void write_raw_csv(std::ostream& out, const std::vector<MetricsReport>& rows);
void write_summary_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

}  // namespace autotune
