#include "leafcurrent/harmonic_extension.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace leafcurrent {

namespace {

constexpr double kPi = std::numbers::pi;
// Below this V / max(1, |U|) the kernel is treated as a nascent delta.
constexpr double kNearBoundary = 0.1;

double kernel(double V, double y) { return V / (V * V + y * y); }

}  // namespace

QuadResult poisson_extend_raw(const BoundaryData& bd, double U, double V, const QuadratureSpec& q) {
  if (!(V > 0.0) || !std::isfinite(U) || !std::isfinite(V))
    throw std::domain_error("poisson_extend: need a finite point with V > 0");
  const double g = bd.gamma();
  const double tau0 = std::pow(std::abs(U), 1.0 / g);
  const bool split = V < kNearBoundary * std::max(1.0, std::abs(U));
  const double c = split ? bd.at(U) : 0.0;

  // Both half-lines folded onto tau >= 0.
  auto f = [&](double tau) {
    if (tau <= 0.0) return 0.0;
    const double x = std::pow(tau, g);
    const double jac = g * x / tau;
    return jac * (bd.at_tau(tau) - c) * (kernel(V, U - x) + kernel(V, U + x));
  };

  std::vector<double> pts{0.0};
  if (tau0 > 0.0) {
    // Kernel peak width in tau around tau0.
    const double width = V / (g * std::pow(tau0, g - 1.0));
    // The data lives near tau = O(1) while the kernel peaks at tau0; cover
    // the gap geometrically so no piece hides a narrow feature.
    for (double p = 1.0; p < 0.5 * (tau0 - width); p *= 4.0) pts.push_back(p);
    if (split && width < 0.25 * tau0) {
      pts.push_back(tau0 - width);
      pts.push_back(tau0);
      pts.push_back(tau0 + width);
    } else {
      pts.push_back(tau0);
    }
  }
  pts.push_back(2.0 * tau0 + 1.0);
  pts.push_back(kInfinity);

  QuadResult r = integrate_pieces(f, pts, q);
  r.value /= kPi;
  r.error /= kPi;
  r.value += c;
  // Round-off in the subtracted form can leave a tiny negative value.
  if (r.value < 0.0 && -r.value <= r.error + 1e-15 * c) r.value = 0.0;
  return r;
}

Estimate poisson_extend(const BoundaryData& bd, double U, double V, const QuadratureSpec& q) {
  return require_converged(poisson_extend_raw(bd, U, V, q), "poisson_extend");
}

Estimate h_on_sector(const Hyperbolicity& h, const BoundaryData& bd, cplx zeta,
                     const QuadratureSpec& q) {
  if (!in_sector(h, zeta)) throw std::domain_error("h_on_sector: zeta outside the open sector");
  const cplx Z = phi(h, zeta);
  return poisson_extend(bd, Z.real(), Z.imag(), q);
}

QuadResult h_at_rs_raw(const Hyperbolicity& h, const BoundaryData& bd, double r, double s,
                       const QuadratureSpec& q) {
  const cplx Zp = primed_image(h, r);
  const double scale = std::pow(s, h.gamma);
  return poisson_extend_raw(bd, scale * Zp.real(), scale * Zp.imag(), q);
}

double mean_value_residual(const BoundaryData& bd, cplx Z0, double radius, int n_samples,
                           const QuadratureSpec& q) {
  if (!(radius >= 0.0) || !(Z0.imag() - radius > 0.0))
    throw std::domain_error("mean_value_residual: disc must lie in the upper half-plane");
  if (n_samples < 1) throw std::invalid_argument("mean_value_residual: need at least one sample");
  const double centre = poisson_extend(bd, Z0.real(), Z0.imag(), q).value;
  double sum = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    const cplx p = Z0 + std::polar(radius, 2.0 * kPi * k / n_samples);
    sum += poisson_extend(bd, p.real(), p.imag(), q).value;
  }
  return std::abs(centre - sum / n_samples);
}

std::vector<double> primed_crossings(const Hyperbolicity& h, double x_p, double r_lo, double r_max) {
  std::vector<double> out;
  if (!(r_max > r_lo)) return out;
  auto g = [&](double r) { return primed_image(h, r).real() - x_p; };
  // Geometric grid from r_lo: U' varies on the scale of r itself.
  const double start = std::max(r_lo, 1e-6);
  std::vector<double> grid{r_lo};
  for (double r = start; r < r_max; r *= 1.05) grid.push_back(r);
  grid.push_back(r_max);
  double prev = g(grid.front());
  for (size_t i = 1; i < grid.size(); ++i) {
    const double cur = g(grid[i]);
    if (!(grid[i] > grid[i - 1])) continue;
    if ((prev < 0.0) != (cur < 0.0)) {
      double lo = grid[i - 1];
      double hi = grid[i];
      double glo = prev;
      for (int it = 0; it < 100 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  return out;
}

namespace {

QuadResult kernel_integral_raw(const Hyperbolicity& h, double x_p, double r_lo, double r_hi,
                               const QuadratureSpec& q) {
  auto f = [&](double r) {
    const cplx Zp = primed_image(h, r);
    return kernel(Zp.imag(), Zp.real() - x_p);
  };
  // U'(r) ~ r^gamma, so every crossing of U' = x' sits below this bound.
  const double r_cross_max = std::max({r_lo + 1.0, 2.0 * std::pow(std::abs(x_p) + h.rho, 1.0 / h.gamma) + 2.0});
  const double r_finite = std::isinf(r_hi) ? r_cross_max : std::min(r_hi, r_cross_max);
  std::vector<double> pts{r_lo};
  auto add = [&](double p) {
    if (p > pts.back() && p < r_finite) pts.push_back(p);
  };
  for (double c : primed_crossings(h, x_p, r_lo, r_finite)) {
    // The peak has width ~ V'/|dU'/dr|, comparable to 1 for large r.
    const double w = std::min(0.5, 0.25 * c);
    add(c - w);
    add(c);
    add(c + w);
  }
  if (r_finite > pts.back()) pts.push_back(r_finite);
  if (std::isinf(r_hi)) pts.push_back(kInfinity);
  return integrate_pieces(f, pts, q);
}

}  // namespace

Estimate kernel_integral(const Hyperbolicity& h, double x_p, double r_lo, const QuadratureSpec& q) {
  if (!(r_lo >= 0.0)) throw std::domain_error("kernel_integral: r_lo must be nonnegative");
  return require_converged(kernel_integral_raw(h, x_p, r_lo, kInfinity, q), "kernel_integral");
}

Estimate kernel_integral_window(const Hyperbolicity& h, double x_p, double r_lo, double r_hi,
                                const QuadratureSpec& q) {
  if (!(r_lo >= 0.0) || !(r_hi >= r_lo)) throw std::domain_error("kernel_integral_window: bad window");
  return require_converged(kernel_integral_raw(h, x_p, r_lo, r_hi, q), "kernel_integral_window");
}

}  // namespace leafcurrent
