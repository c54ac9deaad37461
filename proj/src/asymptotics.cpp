#include "leafcurrent/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "leafcurrent/harmonic_extension.hpp"
#include "leafcurrent/parallel.hpp"

namespace leafcurrent {

namespace {

// Least squares y ~ c1 x + c2 x^2, with x rescaled to [0, 1] for conditioning.
std::pair<double, double> fit_linear_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
  const double xs = *std::max_element(x.begin(), x.end());
  double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double p = x[i] / xs;
    const double p2 = p * p;
    s11 += p * p;
    s12 += p * p2;
    s22 += p2 * p2;
    t1 += p * y[i];
    t2 += p2 * y[i];
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(std::abs(det) > 0.0)) throw std::invalid_argument("fit needs at least two distinct points");
  const double c1 = (t1 * s22 - t2 * s12) / det;
  const double c2 = (s11 * t2 - s12 * t1) / det;
  return {c1 / xs, c2 / (xs * xs)};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct KernelRow {
  double value = 0.0;
  double error = 0.0;
  std::string failure;
};

std::vector<KernelRow> kernel_rows(const Hyperbolicity& h, const std::vector<double>& xs,
                                   double r_lo, const QuadratureSpec& q, int threads) {
  return parallel_map(xs, threads, [&](double x) {
    KernelRow row;
    try {
      const Estimate e = kernel_integral(h, x, r_lo, q);
      row.value = e.value;
      row.error = e.error;
    } catch (const QuadratureFailure& f) {
      row.value = f.partial().value;
      row.error = f.partial().error;
      row.failure = f.what();
    }
    return row;
  });
}

}  // namespace

const char* to_string(LemmaId id) {
  switch (id) {
    case LemmaId::UV1:
      return "UV1";
    case LemmaId::UV2:
      return "UV2";
    case LemmaId::KernelUpper:
      return "KernelUpper";
    case LemmaId::KernelLower:
      return "KernelLower";
  }
  return "unknown";
}

double LemmaReport::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics)
    if (k == name) return v;
  throw std::out_of_range("LemmaReport: no metric " + name);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need matching samples");
  double mx = 0, my = 0;
  const double n = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::domain_error("loglog_slope: samples must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw std::invalid_argument("log_grid: need 0 < lo < hi, n >= 2");
  std::vector<double> g(n);
  const double step = std::log(hi / lo) / (n - 1);
  for (int k = 0; k < n; ++k) g[k] = lo * std::exp(step * k);
  g.front() = lo;
  g.back() = hi;
  return g;
}

double uv1_ratio(const Hyperbolicity& h, double r, double x_p) {
  const cplx Zp = primed_image(h, r);
  const double num = std::norm(cplx(x_p, 0.0) - Zp);
  const double d = x_p + h.rho;
  return num / (r * r + d * d);
}

double uv1_limit(const Hyperbolicity& h) {
  return h.gamma * h.gamma * std::pow(h.rho, 2.0 - 2.0 / h.gamma);
}

LemmaReport check_uv1(const Hyperbolicity& h, const std::vector<double>& r_grid, double N,
                      const LemmaThresholds& th) {
  if (r_grid.size() < 3) throw std::invalid_argument("check_uv1: need at least three r values");
  for (double r : r_grid)
    if (!(r > 0.0 && r <= 0.1)) throw std::invalid_argument("check_uv1: r grid must lie in (0, 0.1]");
  if (!(N > 0.0)) throw std::invalid_argument("check_uv1: N must be positive");

  LemmaReport rep;
  rep.lemma_id = LemmaId::UV1;

  std::vector<double> du, dv;
  double cu = 0.0, cv = 0.0;
  for (double r : r_grid) {
    const cplx Zp = primed_image(h, r);
    du.push_back(Zp.real() + h.rho);
    dv.push_back(Zp.imag());
    cu = std::max(cu, std::abs(Zp.real() + h.rho) / r);
    cv = std::max(cv, std::abs(Zp.imag() - h.beta * r) / (r * r));
    rep.rows.push_back({r, Zp.imag(), Zp.imag() / (h.beta * r)});
  }
  const auto [c1, c2] = fit_linear_quadratic(r_grid, du);
  const auto [beta_fit, d2] = fit_linear_quadratic(r_grid, dv);
  std::vector<double> abs_du(du.size());
  std::transform(du.begin(), du.end(), abs_du.begin(), [](double x) { return std::abs(x); });
  rep.fitted_exponents = {loglog_slope(r_grid, abs_du), loglog_slope(r_grid, dv)};

  // Distance inequality on r in (0, N] x x' in [-3 rho, 3 rho].
  const auto rs = log_grid(N * 1e-6, N, 121);
  double inf = std::numeric_limits<double>::infinity();
  double inf_r = 0.0, inf_x = 0.0;
  for (int k = 0; k <= 120; ++k) {
    const double x = -3.0 * h.rho + k * (6.0 * h.rho / 120.0);
    for (double r : rs) {
      const double q = uv1_ratio(h, r, x);
      if (q < inf) {
        inf = q;
        inf_r = r;
        inf_x = x;
      }
    }
  }
  rep.empirical_constant = inf;
  rep.metrics = {{"u_linear_coeff", c1},
                 {"u_quadratic_coeff", c2},
                 {"beta_fit", beta_fit},
                 {"v_quadratic_coeff", d2},
                 {"beta", h.beta},
                 {"C_u", cu},
                 {"C_v", cv},
                 {"infimum", inf},
                 {"infimum_r", inf_r},
                 {"infimum_x", inf_x},
                 {"ratio_at_minus_rho_r1e-3", uv1_ratio(h, 1e-3, -h.rho)},
                 {"ratio_at_minus_rho_r1e-4", uv1_ratio(h, 1e-4, -h.rho)},
                 {"ratio_limit", uv1_limit(h)}};
  const bool beta_ok = std::abs(beta_fit - h.beta) <= 0.01 * h.beta;
  rep.pass = beta_ok && inf > th.uv1_infimum;
  rep.grid = "r in [" + fmt(r_grid.front()) + ", " + fmt(r_grid.back()) + "] (" +
             std::to_string(r_grid.size()) + " pts); box r in [" + fmt(rs.front()) + ", " + fmt(N) +
             "] x x' in [-3 rho, 3 rho], 121 x 121";
  rep.details = "beta fit " + fmt(beta_fit) + " vs " + fmt(h.beta) + ", |U'+rho| <= " + fmt(cu) +
                " r, |V'-beta r| <= " + fmt(cv) + " r^2, distance-ratio infimum " + fmt(inf) +
                (rep.pass ? "" : " (FAIL)");
  return rep;
}

std::vector<double> default_uv2_grid() { return log_grid(10.0, 1e4, 61); }

LemmaReport check_uv2(const Hyperbolicity& h, const std::vector<double>& r_grid,
                      const LemmaThresholds& th) {
  if (r_grid.size() < 2) throw std::invalid_argument("check_uv2: need at least two r values");
  for (double r : r_grid)
    if (!(r >= 10.0 && r <= 1e4)) throw std::invalid_argument("check_uv2: r grid must lie in [10, 1e4]");

  LemmaReport rep;
  rep.lemma_id = LemmaId::UV2;
  const double g = h.gamma;
  std::vector<double> up;
  double ru = 0.0, rv = 0.0;
  bool positive = true;
  for (double r : r_grid) {
    const cplx Zp = primed_image(h, r);
    positive = positive && Zp.real() > 0.0;
    up.push_back(Zp.real());
    ru = std::max(ru, std::abs(Zp.real() - std::pow(r, g)) / std::pow(r, g - 1.0));
    rv = std::max(rv, std::abs(Zp.imag() - g * std::pow(r, g - 1.0)) / std::pow(r, g - 2.0));
    rep.rows.push_back({r, Zp.real(), Zp.real() / std::pow(r, g)});
  }
  const double slope = positive ? loglog_slope(r_grid, up) : std::numeric_limits<double>::quiet_NaN();
  rep.fitted_exponents = {slope};
  rep.empirical_constant = std::max(ru, rv);
  rep.metrics = {{"slope", slope}, {"gamma", g}, {"residual_u", ru}, {"residual_v", rv}};
  const double rel = std::abs(slope - g) / g;
  rep.pass = positive && rel <= th.slope_rel && std::isfinite(ru) && std::isfinite(rv);
  rep.grid = "r in [" + fmt(r_grid.front()) + ", " + fmt(r_grid.back()) + "], " +
             std::to_string(r_grid.size()) + " log-spaced";
  rep.details = "slope " + fmt(slope) + " vs gamma " + fmt(g) + " (rel " + fmt(rel) + "), |U'-r^g|/r^(g-1) <= " +
                fmt(ru) + ", |V'-g r^(g-1)|/r^(g-2) <= " + fmt(rv) + (positive ? "" : ", U' not positive");
  return rep;
}

std::vector<double> default_upper_grid(const Hyperbolicity& h) {
  std::vector<double> g;
  for (int sign : {-1, 1}) {
    for (int k = 1; k <= 13; ++k) g.push_back(sign * h.rho * std::ldexp(1.0, k));
    g.push_back(sign * h.rho * 1e4);
  }
  return g;
}

LemmaReport check_kernel_upper(const Hyperbolicity& h, const std::vector<double>& xp_grid,
                               const QuadratureSpec& q, const LemmaThresholds& th, int threads) {
  if (xp_grid.empty()) throw std::invalid_argument("check_kernel_upper: empty grid");
  for (double x : xp_grid)
    if (!(std::abs(x) >= 2.0 * h.rho * (1.0 - 1e-12)))
      throw std::invalid_argument("check_kernel_upper: need |x'| >= 2 rho");

  LemmaReport rep;
  rep.lemma_id = LemmaId::KernelUpper;
  const double e = 1.0 - 1.0 / h.gamma;
  const auto rows = kernel_rows(h, xp_grid, 0.0, q, threads);
  std::string failures;
  double sup = 0.0;
  for (size_t i = 0; i < xp_grid.size(); ++i) {
    const double n = rows[i].value * std::pow(std::abs(xp_grid[i]), e);
    rep.rows.push_back({xp_grid[i], rows[i].value, n});
    sup = std::max(sup, n);
    if (!rows[i].failure.empty()) failures += (failures.empty() ? "" : "; ") + rows[i].failure;
  }
  rep.empirical_constant = sup;

  // Spread (max - min)/min and growth max/first - 1 over the last decade of
  // each sign. Only growth contradicts boundedness; for x' < 0 the
  // normalized value tends to 0.
  bool bounded = true;
  std::string spread_text;
  for (int sign : {-1, 1}) {
    std::vector<const LemmaRow*> branch;
    double xmax = 0.0;
    for (const auto& row : rep.rows)
      if (row.x * sign > 0) xmax = std::max(xmax, std::abs(row.x));
    for (const auto& row : rep.rows)
      if (row.x * sign > 0 && std::abs(row.x) >= xmax / 10.0 * (1.0 - 1e-12)) branch.push_back(&row);
    if (branch.empty()) continue;
    std::sort(branch.begin(), branch.end(),
              [](const LemmaRow* l, const LemmaRow* r) { return std::abs(l->x) < std::abs(r->x); });
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const LemmaRow* row : branch) {
      lo = std::min(lo, row->normalized);
      hi = std::max(hi, row->normalized);
    }
    const double inf = std::numeric_limits<double>::infinity();
    const double first = branch.front()->normalized;
    const double spread = branch.size() >= 2 && lo > 0.0 ? (hi - lo) / lo : inf;
    const double growth = branch.size() >= 2 && first > 0.0 ? hi / first - 1.0 : inf;
    const std::string tag = sign < 0 ? "negative" : "positive";
    rep.metrics.emplace_back("spread_" + tag, spread);
    rep.metrics.emplace_back("growth_" + tag, growth);
    spread_text += " x'" + std::string(sign < 0 ? "<0" : ">0") + " spread " + fmt(spread) + " growth " + fmt(growth);
    bounded = bounded && growth < th.upper_variation;
  }
  // Tail exponent of I itself; -1 + 1/gamma is expected.
  std::vector<double> ax, iv;
  for (const auto& row : rep.rows)
    if (row.x > 0 && row.value > 0) {
      ax.push_back(row.x);
      iv.push_back(row.value);
    }
  if (ax.size() >= 2) rep.fitted_exponents.push_back(loglog_slope(ax, iv));
  rep.metrics.emplace_back("supremum", sup);
  rep.pass = bounded && failures.empty();
  rep.grid = std::to_string(xp_grid.size()) + " points, |x'| up to " + fmt(rep.rows.empty() ? 0.0 : [&] {
               double m = 0;
               for (double x : xp_grid) m = std::max(m, std::abs(x));
               return m;
             }());
  rep.details = "sup I |x'|^(1-1/g) = " + fmt(sup) + "; last decade" + spread_text +
                (failures.empty() ? "" : "; " + failures);
  return rep;
}

std::vector<double> default_lower_grid() { return log_grid(1.0, 1e4, 41); }

LemmaReport check_kernel_lower(const Hyperbolicity& h, const std::vector<double>& xp_grid,
                               const QuadratureSpec& q, const LemmaThresholds& th, int threads) {
  if (xp_grid.empty()) throw std::invalid_argument("check_kernel_lower: empty grid");
  for (double x : xp_grid)
    if (!(x >= 1.0)) throw std::invalid_argument("check_kernel_lower: need x' >= 1");

  LemmaReport rep;
  rep.lemma_id = LemmaId::KernelLower;
  const double e = 1.0 - 1.0 / h.gamma;
  const auto rows = kernel_rows(h, xp_grid, 1.0 / h.b, q, threads);
  std::string failures;
  double inf = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < xp_grid.size(); ++i) {
    const double n = rows[i].value * std::pow(xp_grid[i], e);
    rep.rows.push_back({xp_grid[i], rows[i].value, n});
    inf = std::min(inf, n);
    if (!rows[i].failure.empty()) failures += (failures.empty() ? "" : "; ") + rows[i].failure;
  }
  std::vector<double> ax, iv;
  for (const auto& row : rep.rows) {
    ax.push_back(row.x);
    iv.push_back(row.value);
  }
  if (ax.size() >= 2) rep.fitted_exponents.push_back(loglog_slope(ax, iv));
  rep.empirical_constant = inf;
  rep.metrics = {{"infimum", inf}};
  rep.pass = failures.empty() && inf > th.lower_infimum;
  rep.grid = std::to_string(xp_grid.size()) + " points, x' in [" + fmt(xp_grid.front()) + ", " +
             fmt(xp_grid.back()) + "], r >= 1/b";
  rep.details = "inf I x'^(1-1/g) = " + fmt(inf) + (failures.empty() ? "" : "; " + failures);
  return rep;
}

Estimate window_integral(const Hyperbolicity& h, double x_p, const QuadratureSpec& q) {
  if (!(x_p > 0.0)) throw std::invalid_argument("window_integral: need x' > 0");
  const double lo = std::pow(x_p, 1.0 / h.gamma);
  return kernel_integral_window(h, x_p, lo, lo + 1.0, q);
}

double window_offset_ratio(const Hyperbolicity& h, double x_p, int n) {
  if (!(x_p > 0.0) || n < 2) throw std::invalid_argument("window_offset_ratio: need x' > 0, n >= 2");
  const double lo = std::pow(x_p, 1.0 / h.gamma);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const cplx Zp = primed_image(h, lo + static_cast<double>(k) / (n - 1));
    worst = std::max(worst, std::abs(Zp.real() - x_p) / Zp.imag());
  }
  return worst;
}

}  // namespace leafcurrent
