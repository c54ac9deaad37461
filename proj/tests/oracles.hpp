#pragma once

// Reference values fixed ahead of the implementation: closed forms derived by
// hand, and numbers computed once with independent arbitrary-precision or
// double-precision quadrature outside this code base.

#include <cmath>
#include <numbers>

namespace oracle {

constexpr double pi = std::numbers::pi;

/// (1/pi) int (1 - |x|)_+ V / (V^2 + (U - x)^2) dx, integrated piecewise by
/// hand: each linear piece alpha + beta x gives
/// (alpha + beta U) atan(y/V) + (beta V / 2) log(V^2 + y^2), y = x - U.
inline double tent_poisson(double U, double V) {
  auto piece = [&](double alpha, double beta, double x0, double x1) {
    auto F = [&](double x) {
      const double y = x - U;
      return (alpha + beta * U) * std::atan(y / V) + 0.5 * beta * V * std::log(V * V + y * y);
    };
    return F(x1) - F(x0);
  };
  return (piece(1.0, 1.0, -1.0, 0.0) + piece(1.0, -1.0, 0.0, 1.0)) / pi;
}

/// tent_poisson(0, 1) = 1/2 - log(2)/pi
constexpr double kTentAtI = 0.2793643998473484;

/// For a = 0, b = 1 the primed curve is Z'(r) = (i + r)^2 and, with w = r^2,
/// I(x') = int dw / ((w - (x' - 1))^2 + 4x') from r_lo^2 to infinity.
inline double kernel_a0(double x_p, double r_lo) {
  const double w0 = r_lo * r_lo;
  if (x_p > 0) {
    const double s = 2.0 * std::sqrt(x_p);
    return (pi / 2 - std::atan((w0 - (x_p - 1)) / s)) / s;
  }
  // Both roots of the quadratic are <= 0.
  const double q = 2.0 * std::sqrt(-x_p);
  const double w1 = x_p - 1 + q, w2 = x_p - 1 - q;
  return std::log((w0 - w2) / (w0 - w1)) / (w1 - w2);
}

/// I(4) at a = 0 with r_lo = 0: (1/4)(pi/2 + atan(3/4)).
constexpr double kKernelA0At4 = 0.55357435889704525;

/// Boundary data for epsilon = delta^p: H~(+-tau^gamma) = (A/gamma) p e^{-p tau}.
inline double power_data(double A, double gamma, double p, double tau) {
  return A / gamma * p * std::exp(-p * tau);
}

/// Mass on delta D^2, power:0.5, A = 10, default tolerances. Values
/// confirmed by an independent double-precision nested quadrature with no
/// absolute floors.
constexpr double kMassA0Delta01 = 0.01366436692247553;
constexpr double kMassA1Delta05 = 1.4098307278157767;

/// Mass on delta D^2 for data (1/pi)/(1 + x^2), whose extension is
/// (1/pi)(V + 1)/((V + 1)^2 + U^2); computed with 30-digit quadrature of the
/// closed-form extension.
constexpr double kKernelDataMassA0 = 0.0263291355242374;
constexpr double kKernelDataMassA1 = 0.0724346871365464;

}  // namespace oracle
