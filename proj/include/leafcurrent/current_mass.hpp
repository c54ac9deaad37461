#pragma once

#include <string>
#include <vector>

#include "leafcurrent/epsilon_profiles.hpp"
#include "leafcurrent/geometry.hpp"
#include "leafcurrent/quadrature.hpp"

namespace leafcurrent {

/// Density of pi*(dd^c |z|^2) against du dv:
/// (2/pi) ((a^2 + b^2) e^{-2(bu+av)} + e^{-2v}).
double trace_density(const Hyperbolicity& h, cplx zeta);

/// Trace mass of T = pi_*(H[S]) on the bidisc delta D^2, i.e. the integral
/// of H pi*(dd^c |z|^2) over {v > t, bu + av > t}, t = -log delta.
struct MassReport {
  double delta = 0.0;
  double t = 0.0;
  double mass = 0.0;
  double err = 0.0;
  double ratio_lelong = 0.0;  ///< mass / delta^2
  double ratio_sharp = 0.0;   ///< mass / (delta^2 epsilon(delta))
  double half_sector_1 = 0.0;  ///< part over {br >= 1}
  double half_sector_2 = 0.0;  ///< part over {br <= 1}
  bool converged = true;
  std::string note;
};

enum class MassSplit {
  HalfSectors,  ///< inner integral split at br = 1
  FullRegion,   ///< one inner integral over the whole slice
};

/// Iterated adaptive quadrature in (w, s) = (s r, v), du dv = dw ds.
/// Throws QuadratureFailure (partial value attached) and std::domain_error
/// for delta outside (0, 1).
MassReport mass_bidisc(const Hyperbolicity& h, const BoundaryData& bd, const EpsilonProfile& ep,
                       double delta, const QuadratureSpec& q,
                       MassSplit split = MassSplit::HalfSectors);

/// Integral of H (2/pi) e^{-2v} over the half-sector {br >= 1} of the
/// bidisc preimage: the first lower bound used for the sharpness estimate.
Estimate mass_lower_chain(const Hyperbolicity& h, const BoundaryData& bd, double delta,
                          const QuadratureSpec& q);

/// One report per delta (sorted descending). Failed deltas are kept with
/// converged = false and the partial value.
std::vector<MassReport> mass_scan(const Hyperbolicity& h, const BoundaryData& bd,
                                  const EpsilonProfile& ep, const std::vector<double>& deltas,
                                  const QuadratureSpec& q, int threads = 1);

inline const std::vector<double>& default_delta_scan() {
  static const std::vector<double> scan{0.5, 0.3, 0.1, 0.05, 0.02};
  return scan;
}

}  // namespace leafcurrent
