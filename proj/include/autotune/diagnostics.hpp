#pragma once

#include "autotune/model.hpp"

#include <vector>

namespace autotune {

struct DiagnosticRow {
  Index rank = 0;       // 1-based
  Index predictor = 0;  // original column index (0-based)
  double dispersion = 0.0;
  bool in_support = false;
  double cumulative_r2 = 0.0;
  double adjusted_r2 = 0.0;
};

struct Diagnostics {
  AutotuneFit fit;
  std::vector<DiagnosticRow> rows;
};

// Fits autotune, re-ranks predictors by partial-residual dispersion at the
// final coefficients and tracks R^2 of least-squares models built along that
// ranking, up to max_rank predictors (default min(p, n - 2)).
Diagnostics diagnose(const Dataset& data, const FitConfig& cfg, Index max_rank = -1);

// (R^2_k / k) / ((R^2_{k+w} - R^2_k) / w) from a cumulative curve indexed by
// model size (entry 0 = null model). Infinite when the later window is flat.
double elbow_slope_ratio(const std::vector<double>& cumulative, Index k, Index window);

}  // namespace autotune
