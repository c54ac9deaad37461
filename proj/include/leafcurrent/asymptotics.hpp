#pragma once

#include <string>
#include <utility>
#include <vector>

#include "leafcurrent/geometry.hpp"
#include "leafcurrent/quadrature.hpp"

namespace leafcurrent {

// Empirical checks of the behaviour of Z'(r) = Phi(zeta* + r) near r = 0 and
// r = inf, and of the kernel integral I(x') against |x'|^{-1+1/gamma}.
// Constants are reported, never assumed.

enum class LemmaId { UV1, UV2, KernelUpper, KernelLower };

const char* to_string(LemmaId id);

struct LemmaRow {
  double x = 0.0;           ///< r or x'
  double value = 0.0;       ///< raw quantity at x
  double normalized = 0.0;  ///< value after the expected scaling is divided out
};

struct LemmaReport {
  LemmaId lemma_id = LemmaId::UV1;
  std::string grid;
  std::vector<double> fitted_exponents;
  double empirical_constant = 0.0;
  bool pass = false;
  std::string details;
  /// Named auxiliary numbers (fit coefficients, limits, residual bounds).
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<LemmaRow> rows;

  double metric(const std::string& name) const;
};

struct LemmaThresholds {
  double slope_rel = 0.01;        ///< UV2 slope vs gamma
  double uv1_infimum = 1e-6;      ///< UV1 distance-ratio infimum
  double upper_variation = 0.2;   ///< KernelUpper spread over the last decade
  double lower_infimum = 1e-4;    ///< KernelLower infimum
};

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

/// Behaviour near the edge: fits U' + rho = c1 r + c2 r^2 and
/// V' = beta r + d r^2 on `r_grid` (subset of (0, 0.1]), then scans
/// r in (0, N] x x' in [-3 rho, 3 rho] for the infimum of
/// |x' - Z'|^2 / (r^2 + (x' + rho)^2).
LemmaReport check_uv1(const Hyperbolicity& h, const std::vector<double>& r_grid, double N,
                      const LemmaThresholds& th = {});

/// |x' - Z'(r)|^2 / (r^2 + (x' + rho)^2)
double uv1_ratio(const Hyperbolicity& h, double r, double x_p);

/// gamma^2 rho^{2 - 2/gamma} = |dZ'/dr (0)|^2, the r -> 0 limit of uv1_ratio at x' = -rho.
double uv1_limit(const Hyperbolicity& h);

/// Behaviour for large r on `r_grid` (subset of [10, 1e4]): log-log slope
/// of U' against r, and the residual ratios |U' - r^gamma| / r^{gamma-1}
/// and |V' - gamma r^{gamma-1}| / r^{gamma-2}.
LemmaReport check_uv2(const Hyperbolicity& h, const std::vector<double>& r_grid,
                      const LemmaThresholds& th = {});

/// Dense default grid for check_uv2: 61 log-spaced points on [10, 1e4].
std::vector<double> default_uv2_grid();

/// I(x') |x'|^{1-1/gamma} with r_lo = 0 over |x'| >= 2 rho, both signs.
/// The constant is the supremum. Metrics spread_* and growth_* describe the
/// last decade of each sign; pass if neither sign grows by the threshold.
LemmaReport check_kernel_upper(const Hyperbolicity& h, const std::vector<double>& xp_grid,
                               const QuadratureSpec& q, const LemmaThresholds& th = {},
                               int threads = 1);

/// +- rho 2^k for k = 1..13, then +- 1e4 rho.
std::vector<double> default_upper_grid(const Hyperbolicity& h);

/// I(x'; r_lo = 1/b) x'^{1-1/gamma} over x' >= 1; the constant is the
/// infimum.
LemmaReport check_kernel_lower(const Hyperbolicity& h, const std::vector<double>& xp_grid,
                               const QuadratureSpec& q, const LemmaThresholds& th = {},
                               int threads = 1);

/// 41 log-spaced points on [1, 1e4].
std::vector<double> default_lower_grid();

/// Kernel integral over the window [x'^{1/gamma}, x'^{1/gamma} + 1].
Estimate window_integral(const Hyperbolicity& h, double x_p, const QuadratureSpec& q);

/// max of |U' - x'| / V' over n points of the same window.
double window_offset_ratio(const Hyperbolicity& h, double x_p, int n = 101);

}  // namespace leafcurrent
