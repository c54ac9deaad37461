#pragma once

#include <string>
#include <vector>

#include "leafcurrent/epsilon_profiles.hpp"
#include "leafcurrent/geometry.hpp"
#include "leafcurrent/quadrature.hpp"

namespace leafcurrent {

// Edge integrals over the boundary of the exhaustion
// Q_s = {lambda < bu + av <= s, lambda < v <= s}. The horizontal edge is
// E_s = {lambda < bu + av <= s, v = s}, where bu + av = b s r; the vertical
// edge E'_s lies on {bu + av = s}. All functions return 0 when s <= lambda
// and throw std::invalid_argument for lambda <= 0.

/// int_{E_s} H e^{-(bu+av)} du = int_{lambda/(bs)}^{1/b} H e^{-bsr} s dr.
Estimate edge_flux(const Hyperbolicity& h, const BoundaryData& bd, double s, double lambda,
                   const QuadratureSpec& q);

/// int_{E_s} H (sr)^{-1} du = int_{lambda/(bs)}^{1/b} H r^{-1} dr.
/// Stands in for the dH edge term, which Harnack bounds by (sr)^{-1} H.
Estimate edge_gradient_term(const Hyperbolicity& h, const BoundaryData& bd, double s,
                            double lambda, const QuadratureSpec& q);

/// int over E'_s of H e^{-v} |d zeta|, with v = sigma in (lambda, s],
/// u = (s - a sigma)/b and |d zeta| = |zeta*| d sigma.
Estimate vertical_edge_flux(const Hyperbolicity& h, const BoundaryData& bd, double s,
                            double lambda, const QuadratureSpec& q);

/// Part of edge_flux coming from boundary points |x| >= 2 rho s^gamma:
/// (1/pi) int_{|x| >= 2 rho s^gamma} H~(x) s^{1-gamma}
///   int_{lambda/(bs)}^{1/b} e^{-bsr} V'/(V'^2 + (U' - x')^2) dr dx.
Estimate far_field_flux(const Hyperbolicity& h, const BoundaryData& bd, double s, double lambda,
                        const QuadratureSpec& q);

/// int_{|x| >= 2 rho s^gamma} H~(x) |x|^{-1+1/gamma} dx, both half-lines.
/// For profile data this equals 2 A epsilon(exp(-(2 rho)^{1/gamma} s)).
Estimate far_field_envelope(const Hyperbolicity& h, const BoundaryData& bd,
                            const EpsilonProfile& ep, double s, const QuadratureSpec& q);

/// True if the last three values strictly decrease and
/// values.back() < factor * values.front().
bool decays(const std::vector<double>& values, double factor = 1e-3);

bool strictly_decreasing(const std::vector<double>& values);

struct FluxReport {
  double lambda = 1.0;
  std::vector<double> s_values;
  std::vector<double> flux;
  std::vector<double> grad;
  std::vector<double> vertical;
  std::vector<double> flux_err;
  std::vector<double> grad_err;
  std::vector<double> vertical_err;
  bool flux_decays = false;
  bool grad_decays = false;
  bool vertical_decays = false;
  bool converged = true;
  std::string note;

  /// Decay of both horizontal-edge integrals.
  bool pass() const { return converged && flux_decays && grad_decays; }
};

/// Evaluates the three edge integrals at every s (in parallel, results in
/// input order). A failed quadrature keeps its partial value and clears
/// `converged`.
FluxReport flux_scan(const Hyperbolicity& h, const BoundaryData& bd,
                     const std::vector<double>& s_values, double lambda, const QuadratureSpec& q,
                     int threads = 1);

inline const std::vector<double>& default_s_scan() {
  static const std::vector<double> scan{5.0, 10.0, 20.0, 40.0, 80.0};
  return scan;
}

}  // namespace leafcurrent
