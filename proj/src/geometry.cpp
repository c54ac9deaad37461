#include "leafcurrent/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace leafcurrent {

Hyperbolicity make_hyperbolicity(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("hyperbolicity parameters must be finite");
  if (!(b > 0.0))
    throw std::invalid_argument("b must be positive; swap (z1, z2) and invert eta when b < 0");

  Hyperbolicity h;
  h.a = a;
  h.b = b;
  h.eta = {a, b};
  h.u_star = -a / b;
  h.theta = std::atan2(1.0, h.u_star);
  h.gamma = (a == 0.0) ? 2.0 : std::numbers::pi / h.theta;
  h.rho = std::pow(std::hypot(h.u_star, 1.0), h.gamma);
  // d/dr Phi(zeta* + r) at r = 0 is gamma zeta*^(gamma-1) = -gamma rho / zeta*,
  // whose imaginary part is gamma rho / |zeta*|^2.
  h.beta = h.gamma * std::pow(h.rho, 1.0 - 2.0 / h.gamma);
  return h;
}

cplx swapped_eta(double a, double b) { return 1.0 / cplx(a, b); }

bool in_sector(const Hyperbolicity& h, cplx zeta) {
  return zeta.imag() > 0.0 && h.b * zeta.real() + h.a * zeta.imag() > 0.0;
}

bool in_closed_sector(const Hyperbolicity& h, cplx zeta) {
  const double slack = 1e-12 * std::abs(zeta) * (std::abs(h.a) + h.b);
  return zeta.imag() >= 0.0 && h.b * zeta.real() + h.a * zeta.imag() >= -slack;
}

cplx power_map(double gamma, cplx zeta) {
  const double arg = std::atan2(zeta.imag(), zeta.real());
  return std::polar(std::pow(std::abs(zeta), gamma), gamma * arg);
}

cplx phi(const Hyperbolicity& h, cplx zeta) {
  if (zeta == cplx(0.0, 0.0)) throw std::domain_error("phi: zeta = 0 is the sector's vertex");
  if (!in_closed_sector(h, zeta)) throw std::domain_error("phi: zeta outside the closed sector");
  double arg = std::atan2(zeta.imag(), zeta.real());
  arg = std::clamp(arg, 0.0, h.theta);
  return std::polar(std::pow(std::abs(zeta), h.gamma), h.gamma * arg);
}

cplx primed_image(const Hyperbolicity& h, double r) {
  return power_map(h.gamma, h.zeta_star() + r);
}

LeafPoint leaf_point(const Hyperbolicity& h, cplx zeta, cplx alpha) {
  if (alpha == cplx(0.0, 0.0)) throw std::invalid_argument("leaf_point: alpha must be nonzero");
  const cplx i(0.0, 1.0);
  const cplx shifted = zeta + std::log(std::abs(alpha)) / h.b;
  return {alpha * std::exp(i * h.eta * shifted), std::exp(i * shifted)};
}

double tangency_residual(const Hyperbolicity& h, cplx zeta) {
  const cplx i(0.0, 1.0);
  const LeafPoint p = leaf_point(h, zeta);
  // Derivative of (e^{i eta zeta}, e^{i zeta}) written out independently of F.
  const cplx d1 = i * h.eta * std::exp(i * h.eta * zeta);
  const cplx d2 = i * std::exp(i * zeta);
  const cplx f1 = h.eta * p.z1;
  const cplx f2 = p.z2;
  return std::hypot(std::abs(d1 - i * f1), std::abs(d2 - i * f2));
}

SectorCoords coords_from_uv(const Hyperbolicity& h, double u, double v) {
  if (!(v > 0.0) || !std::isfinite(u) || !std::isfinite(v))
    throw std::domain_error("coords_from_uv: v must be positive");
  SectorCoords c;
  c.u = u;
  c.v = v;
  c.s = v;
  c.r = u / v - h.u_star;
  const cplx Z = power_map(h.gamma, {u, v});
  c.U = Z.real();
  c.V = Z.imag();
  const cplx Zp = primed_image(h, c.r);
  c.U_p = Zp.real();
  c.V_p = Zp.imag();
  return c;
}

SectorCoords coords_from_rs(const Hyperbolicity& h, double r, double s) {
  if (!(s > 0.0) || !std::isfinite(r) || !std::isfinite(s))
    throw std::domain_error("coords_from_rs: s must be positive");
  SectorCoords c;
  c.r = r;
  c.s = s;
  c.v = s;
  c.u = s * (r + h.u_star);
  const cplx Zp = primed_image(h, r);
  c.U_p = Zp.real();
  c.V_p = Zp.imag();
  const double scale = std::pow(s, h.gamma);
  c.U = scale * c.U_p;
  c.V = scale * c.V_p;
  return c;
}

double edge_distance(const Hyperbolicity& h, cplx zeta) {
  return std::abs(h.b * zeta.real() + h.a * zeta.imag()) / std::hypot(h.a, h.b);
}

bool BidiscPreimage::contains(const Hyperbolicity& h, cplx zeta) const {
  return zeta.imag() > t && h.b * zeta.real() + h.a * zeta.imag() > t;
}

BidiscPreimage preimage_region(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("preimage_region: delta must lie in (0, 1)");
  return {delta, -std::log(delta)};
}

}  // namespace leafcurrent
