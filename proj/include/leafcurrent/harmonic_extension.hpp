#pragma once

#include "leafcurrent/epsilon_profiles.hpp"
#include "leafcurrent/geometry.hpp"
#include "leafcurrent/quadrature.hpp"

namespace leafcurrent {

/// Poisson extension (1/pi) int H~(x) V / (V^2 + (U - x)^2) dx of even boundary
/// data to the upper half-plane, integrated in tau with x = +-tau^gamma.
/// Points close to the real axis subtract H~(U) times the kernel and add
/// its exact integral back. Throws std::domain_error for V <= 0 and
/// QuadratureFailure when the tolerance is not reached.
Estimate poisson_extend(const BoundaryData& bd, double U, double V, const QuadratureSpec& q);

/// Non-throwing variant for use inside other integrands.
QuadResult poisson_extend_raw(const BoundaryData& bd, double U, double V, const QuadratureSpec& q);

/// H = H~ o Phi on the sector.
Estimate h_on_sector(const Hyperbolicity& h, const BoundaryData& bd, cplx zeta,
                     const QuadratureSpec& q);

/// H at zeta = s (zeta* + r), using the rescaled image Z' = Phi(zeta* + r).
QuadResult h_at_rs_raw(const Hyperbolicity& h, const BoundaryData& bd, double r, double s,
                       const QuadratureSpec& q);

/// |H~(Z0) - mean of H~ over n equispaced points of the circle |Z - Z0| = radius|.
double mean_value_residual(const BoundaryData& bd, cplx Z0, double radius, int n_samples,
                           const QuadratureSpec& q);

/// I(x') = int_{r_lo}^{inf} V'/(V'^2 + (U' - x')^2) dr along Z'(r) = Phi(zeta* + r).
/// The integrand decays like gamma r^(-gamma-1); the semi-infinite piece is
/// mapped onto a finite interval. Throws QuadratureFailure.
Estimate kernel_integral(const Hyperbolicity& h, double x_p, double r_lo, const QuadratureSpec& q);

/// Same integral over a finite window [r_lo, r_hi].
Estimate kernel_integral_window(const Hyperbolicity& h, double x_p, double r_lo, double r_hi,
                                const QuadratureSpec& q);

/// Values of r >= r_lo (up to r_max) where U'(r) = x', sorted.
std::vector<double> primed_crossings(const Hyperbolicity& h, double x_p, double r_lo, double r_max);

}  // namespace leafcurrent
