#pragma once

#include <complex>

namespace leafcurrent {

using cplx = std::complex<double>;

/// Linearized hyperbolic singularity F = eta z1 d/dz1 + z2 d/dz2 with
/// eta = a + ib, b > 0, together with the constants of the sector
/// S = {v > 0, bu + av > 0} and of the power map zeta -> zeta^gamma.
struct Hyperbolicity {
  double a = 0.0;
  double b = 1.0;
  cplx eta{0.0, 1.0};
  double u_star = 0.0;  ///< zeta* = u_star + i lies on the edge bu + av = 0
  double theta = 0.0;   ///< opening angle of S
  double gamma = 2.0;   ///< pi / theta
  double rho = 1.0;     ///< |zeta*|^gamma
  double beta = 2.0;    ///< V'(r) = beta r + O(r^2) near the edge

  cplx zeta_star() const { return {u_star, 1.0}; }
};

/// Throws std::invalid_argument for b <= 0 or non-finite input. Callers
/// with b < 0 swap (z1, z2) and replace eta by 1/eta first.
Hyperbolicity make_hyperbolicity(double a, double b);

/// eta -> 1/eta, the parameter after exchanging z1 and z2.
cplx swapped_eta(double a, double b);

bool in_sector(const Hyperbolicity& h, cplx zeta);
bool in_closed_sector(const Hyperbolicity& h, cplx zeta);

/// zeta^gamma on the closed sector, argument taken in [0, theta].
/// Throws std::domain_error outside the closed sector or at 0.
cplx phi(const Hyperbolicity& h, cplx zeta);

/// zeta^gamma with no domain check; valid for Im zeta >= 0.
cplx power_map(double gamma, cplx zeta);

/// Z'(r) = Phi(zeta* + r), the rescaled image of the horizontal line through zeta*.
cplx primed_image(const Hyperbolicity& h, double r);

struct LeafPoint {
  cplx z1;
  cplx z2;
};

/// Point of the leaf L_alpha: z1 = alpha e^{i eta (zeta + log|alpha|/b)},
/// z2 = e^{i (zeta + log|alpha|/b)}. alpha = 1 is the leaf carrying T.
LeafPoint leaf_point(const Hyperbolicity& h, cplx zeta, cplx alpha = 1.0);

/// |d pi/d zeta - i F(pi(zeta))| for the alpha = 1 leaf.
double tangency_residual(const Hyperbolicity& h, cplx zeta);

/// A point of S in every coordinate system used by the mass estimates.
struct SectorCoords {
  double u = 0.0, v = 0.0;  ///< zeta = u + iv
  double r = 0.0, s = 0.0;  ///< s = v, r = u/s - u_star
  double U = 0.0, V = 0.0;  ///< Z = Phi(zeta)
  double U_p = 0.0, V_p = 0.0;  ///< s^-gamma Z = Phi(zeta* + r)

  cplx zeta() const { return {u, v}; }
  cplx Z() const { return {U, V}; }
};

SectorCoords coords_from_uv(const Hyperbolicity& h, double u, double v);
SectorCoords coords_from_rs(const Hyperbolicity& h, double r, double s);

/// Euclidean distance from zeta to the edge line bu + av = 0.
double edge_distance(const Hyperbolicity& h, cplx zeta);

/// pi^{-1}(delta D^2) = {v > t, bu + av > t}, t = -log delta.
struct BidiscPreimage {
  double delta = 0.5;
  double t = 0.0;

  bool contains(const Hyperbolicity& h, cplx zeta) const;
};

BidiscPreimage preimage_region(double delta);

}  // namespace leafcurrent
