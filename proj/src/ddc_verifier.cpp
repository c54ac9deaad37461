#include "leafcurrent/ddc_verifier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "leafcurrent/harmonic_extension.hpp"
#include "leafcurrent/parallel.hpp"

namespace leafcurrent {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("edge integrals: lambda must be positive and finite");
}

// lo, 2 lo, 4 lo, ... up to hi. The integrands vary on the scale of r itself
// near the lower end.
std::vector<double> doubling_points(double lo, double hi) {
  std::vector<double> pts{lo};
  for (double r = 2.0 * lo; r < hi; r *= 2.0) pts.push_back(r);
  pts.push_back(hi);
  return pts;
}

// int over the horizontal edge of H(r, s) * weight(r) dr.
Estimate horizontal_edge(const Hyperbolicity& h, const BoundaryData& bd, double s, double lambda,
                         const QuadratureSpec& q, const std::function<double(double)>& weight,
                         const char* what) {
  check_lambda(lambda);
  if (s <= lambda) return {};
  const QuadratureSpec qi = q.inner();
  NestedErrorTracker inner(qi.tol_abs / qi.tol_rel);
  auto f = [&](double r) {
    const QuadResult H = h_at_rs_raw(h, bd, r, s, qi);
    inner.record(H);
    return H.value * weight(r);
  };
  const auto pts = doubling_points(lambda / (h.b * s), 1.0 / h.b);
  const QuadResult r = integrate_pieces(f, pts, q);
  Estimate e = require_converged(r, what);
  if (inner.failures() > 0)
    throw QuadratureFailure(std::string(what) + " (Poisson evaluations)", {r.value, r.error, QuadStatus::Other});
  e.error += inner.worst_relative() * std::abs(e.value);
  return e;
}

}  // namespace

Estimate edge_flux(const Hyperbolicity& h, const BoundaryData& bd, double s, double lambda,
                   const QuadratureSpec& q) {
  return horizontal_edge(h, bd, s, lambda, q, [&](double r) { return std::exp(-h.b * s * r) * s; },
                         "edge_flux");
}

Estimate edge_gradient_term(const Hyperbolicity& h, const BoundaryData& bd, double s,
                            double lambda, const QuadratureSpec& q) {
  return horizontal_edge(h, bd, s, lambda, q, [](double r) { return 1.0 / r; }, "edge_gradient_term");
}

Estimate vertical_edge_flux(const Hyperbolicity& h, const BoundaryData& bd, double s,
                            double lambda, const QuadratureSpec& q) {
  check_lambda(lambda);
  if (s <= lambda) return {};
  const QuadratureSpec qi = q.inner();
  NestedErrorTracker inner(qi.tol_abs / qi.tol_rel);
  const double arc = std::abs(h.zeta_star());
  auto f = [&](double sigma) {
    const cplx Z = phi(h, {(s - h.a * sigma) / h.b, sigma});
    const QuadResult H = poisson_extend_raw(bd, Z.real(), Z.imag(), qi);
    inner.record(H);
    return H.value * std::exp(-sigma) * arc;
  };
  // e^{-sigma} lives on the unit scale; the rest of the edge is a thin tail.
  std::vector<double> pts{lambda};
  for (double d = 1.0; lambda + d < s; d *= 4.0) pts.push_back(lambda + d);
  pts.push_back(s);
  const QuadResult r = integrate_pieces(f, pts, q);
  Estimate e = require_converged(r, "vertical_edge_flux");
  if (inner.failures() > 0)
    throw QuadratureFailure("vertical_edge_flux (Poisson evaluations)", {r.value, r.error, QuadStatus::Other});
  e.error += inner.worst_relative() * std::abs(e.value);
  return e;
}

Estimate far_field_flux(const Hyperbolicity& h, const BoundaryData& bd, double s, double lambda,
                        const QuadratureSpec& q) {
  check_lambda(lambda);
  if (s <= lambda) return {};
  const double g = h.gamma;
  const double sg = std::pow(s, g);
  const auto r_pts = doubling_points(lambda / (h.b * s), 1.0 / h.b);
  const QuadratureSpec qi = q.inner();
  NestedErrorTracker inner(qi.tol_abs / qi.tol_rel);

  // r-integral of e^{-bsr} times the Poisson kernel at Z'(r) and x'.
  auto J = [&](double x_p) {
    auto k = [&](double r) {
      const cplx Zp = primed_image(h, r);
      const double dx = Zp.real() - x_p;
      return std::exp(-h.b * s * r) * Zp.imag() / (Zp.imag() * Zp.imag() + dx * dx);
    };
    const QuadResult res = integrate_pieces(k, r_pts, qi);
    inner.record(res);
    return res.value;
  };
  auto f = [&](double tau) {
    const double x = std::pow(tau, g);
    const double hx = bd.at_tau(tau);
    if (hx == 0.0) return 0.0;
    const double jac = g * x / tau;
    return jac * hx * std::pow(s, 1.0 - g) * (J(x / sg) + J(-x / sg)) / std::numbers::pi;
  };
  const double tau_x = std::pow(2.0 * h.rho, 1.0 / g) * s;
  const double pts[] = {tau_x, tau_x + 10.0, kInfinity};
  const QuadResult r = integrate_pieces(f, pts, q);
  Estimate e = require_converged(r, "far_field_flux");
  if (inner.failures() > 0)
    throw QuadratureFailure("far_field_flux (inner r-integrals)", {r.value, r.error, QuadStatus::Other});
  e.error += inner.worst_relative() * std::abs(e.value);
  return e;
}

Estimate far_field_envelope(const Hyperbolicity& h, const BoundaryData& bd,
                            const EpsilonProfile& ep, double s, const QuadratureSpec& q) {
  const double t = std::pow(2.0 * h.rho, 1.0 / h.gamma) * s;
  const IdentityCheck c = boundary_identity(bd, ep, t, q);
  return {c.lhs + c.lhs_negative, c.error};
}

bool strictly_decreasing(const std::vector<double>& values) {
  for (size_t i = 1; i < values.size(); ++i)
    if (!(values[i] < values[i - 1])) return false;
  return true;
}

bool decays(const std::vector<double>& values, double factor) {
  const size_t n = values.size();
  if (n < 3) return false;
  if (!(values[n - 1] < values[n - 2] && values[n - 2] < values[n - 3])) return false;
  return values.back() < factor * values.front();
}

FluxReport flux_scan(const Hyperbolicity& h, const BoundaryData& bd,
                     const std::vector<double>& s_values, double lambda, const QuadratureSpec& q,
                     int threads) {
  check_lambda(lambda);
  struct Row {
    Estimate flux, grad, vert;
    std::string note;
  };
  auto guarded = [](auto&& fn, std::string& note) -> Estimate {
    try {
      return fn();
    } catch (const QuadratureFailure& e) {
      if (!note.empty()) note += "; ";
      note += e.what();
      return e.partial().estimate();
    }
  };
  const auto rows = parallel_map(s_values, threads, [&](double s) {
    Row row;
    row.flux = guarded([&] { return edge_flux(h, bd, s, lambda, q); }, row.note);
    row.grad = guarded([&] { return edge_gradient_term(h, bd, s, lambda, q); }, row.note);
    row.vert = guarded([&] { return vertical_edge_flux(h, bd, s, lambda, q); }, row.note);
    return row;
  });

  FluxReport rep;
  rep.lambda = lambda;
  rep.s_values = s_values;
  for (const Row& row : rows) {
    rep.flux.push_back(row.flux.value);
    rep.grad.push_back(row.grad.value);
    rep.vertical.push_back(row.vert.value);
    rep.flux_err.push_back(row.flux.error);
    rep.grad_err.push_back(row.grad.error);
    rep.vertical_err.push_back(row.vert.error);
    if (!row.note.empty()) {
      rep.converged = false;
      if (!rep.note.empty()) rep.note += "; ";
      rep.note += row.note;
    }
  }
  rep.flux_decays = decays(rep.flux);
  rep.grad_decays = decays(rep.grad);
  rep.vertical_decays = decays(rep.vertical);
  return rep;
}

}  // namespace leafcurrent
