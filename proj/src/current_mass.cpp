#include "leafcurrent/current_mass.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "leafcurrent/harmonic_extension.hpp"
#include "leafcurrent/parallel.hpp"

namespace leafcurrent {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

struct MassTerms {
  bool edge_term = true;  // (a^2+b^2) e^{-2(bu+av)}
  bool axis_term = true;  // e^{-2v}
};

// Inner integral over w = s r for one horizontal slice v = s.
class SliceIntegrator {
 public:
  SliceIntegrator(const Hyperbolicity& h, const BoundaryData& bd, const QuadratureSpec& q)
      : h_(h), bd_(bd), q_middle_(q.inner()), q_poisson_(q.inner(0.001)) {
    // Slices decay only algebraically in s near the edge bu + av = 0, so an
    // absolute floor per slice adds up over a long outer range. Keep the
    // floors far below the outer one.
    q_middle_.tol_abs = q.tol_abs * 1e-6;
    q_poisson_.tol_abs = q.tol_abs * 1e-8;
    middle_ = NestedErrorTracker(q_middle_.tol_abs / q_middle_.tol_rel);
    poisson_ = NestedErrorTracker(q_poisson_.tol_abs / q_poisson_.tol_rel);
  }

  QuadResult slice(double s, double w_lo, double w_hi, MassTerms terms) {
    if (!(w_hi > w_lo)) return {};
    const double ab2 = h_.a * h_.a + h_.b * h_.b;
    const double axis = terms.axis_term ? std::exp(-2.0 * s) : 0.0;
    // Worst relative Poisson error among the points of the current piece.
    // The integrand is nonnegative, so this times the piece value bounds the
    // error the piece inherits. Far out on slowly decaying data GSL stalls
    // short of the inner tolerance (roundoff, or the slow-convergence flag on
    // power-law tails); such values are kept and charged here unless their
    // own estimate is useless.
    double piece_rel = 0.0;
    auto f = [&](double w) {
      const double dens =
          kTwoOverPi * ((terms.edge_term ? ab2 * std::exp(-2.0 * h_.b * w) : 0.0) + axis);
      if (dens == 0.0) return 0.0;
      QuadResult H = h_at_rs_raw(h_, bd_, w / s, s, q_poisson_);
      if ((H.status == QuadStatus::Roundoff || H.status == QuadStatus::Divergent) &&
          H.error <= 1e-3 * std::abs(H.value))
        H.status = QuadStatus::Ok;
      poisson_.record(H);
      if (H.value > 0.0) piece_rel = std::max(piece_rel, H.error / H.value);
      return H.value * dens;
    };
    auto piece = [&](double lo, double hi) {
      piece_rel = 0.0;
      QuadResult p = integrate(f, lo, hi, q_middle_);
      p.error += piece_rel * std::abs(p.value);
      return p;
    };
    // The edge density concentrates within 1/b of w_lo, and H varies on the
    // scale |zeta| ~ w + s. Pieces from w_lo with geometrically growing
    // widths resolve both, even when the slice spans many decades. On an
    // infinite slice H decays only like r^{-gamma-1}: keep going until a
    // piece beyond the knee is negligible, then the mapped tail.
    const double knee = 1.0 + s;
    const bool infinite = std::isinf(w_hi);
    QuadResult r;
    double lo = w_lo;
    double d = 0.5;
    for (int i = 0;; ++i, d *= 4.0) {
      const double hi = w_lo + d;
      if (hi >= w_hi) {
        r += piece(lo, w_hi);
        break;
      }
      const QuadResult p = piece(lo, hi);
      r += p;
      lo = hi;
      if (infinite && ((d > knee && std::abs(p.value) <= 1e-3 * q_middle_.tol_rel * std::abs(r.value)) || i >= 40)) {
        r += piece(lo, kInfinity);
        break;
      }
    }
    accept_within_tolerance(r, q_middle_);
    middle_.record(r);
    return r;
  }

  /// Relative error inherited by an outer integral of slice values. Poisson
  /// errors are already inside the slice errors.
  double inherited_relative_error() const { return middle_.worst_relative(); }
  int failures() const { return middle_.failures() + poisson_.failures(); }

 private:
  const Hyperbolicity& h_;
  const BoundaryData& bd_;
  QuadratureSpec q_middle_;
  QuadratureSpec q_poisson_;
  NestedErrorTracker middle_;
  NestedErrorTracker poisson_;
};

QuadResult outer_integral(const std::function<double(double)>& slice_value, double t,
                          const QuadratureSpec& q) {
  // Slices over {br <= 1} decay only like s^{-gamma-1}: near the edge H is
  // the far field of the Poisson kernel while e^{-2bw} does not depend on s.
  // Unit-scale pieces, decades until negligible, then the mapped tail.
  const double pts[] = {t, t + 0.25, t + 1.0, t + 2.0, t + 4.0};
  QuadResult total = integrate_pieces(slice_value, pts, q);
  double k = 4.0;
  for (int i = 0; i < 16; ++i) {
    const QuadResult decade = integrate(slice_value, t + k, t + 10.0 * k, q);
    total += decade;
    k *= 10.0;
    if (i >= 2 && std::abs(decade.value) <= 1e-3 * q.tol_rel * std::abs(total.value)) break;
  }
  total += integrate(slice_value, t + k, kInfinity, q);
  accept_within_tolerance(total, q);
  return total;
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("mass: delta must lie in (0, 1)");
}

}  // namespace

double trace_density(const Hyperbolicity& h, cplx zeta) {
  const double u = zeta.real();
  const double v = zeta.imag();
  const double ab2 = h.a * h.a + h.b * h.b;
  return kTwoOverPi * (ab2 * std::exp(-2.0 * (h.b * u + h.a * v)) + std::exp(-2.0 * v));
}

MassReport mass_bidisc(const Hyperbolicity& h, const BoundaryData& bd, const EpsilonProfile& ep,
                       double delta, const QuadratureSpec& q, MassSplit split) {
  check_delta(delta);
  q.validate();
  const double t = -std::log(delta);
  const double w_lo = t / h.b;  // bu + av = b w > t

  SliceIntegrator slices(h, bd, q);
  QuadResult part1;
  QuadResult part2;
  QuadResult total;
  if (split == MassSplit::HalfSectors) {
    // {br >= 1} <=> w >= s/b; for s > t this edge lies above w_lo.
    part1 = outer_integral([&](double s) { return slices.slice(s, s / h.b, kInfinity, {}).value; }, t, q);
    part2 = outer_integral([&](double s) { return slices.slice(s, w_lo, s / h.b, {}).value; }, t, q);
    total = part1;
    total += part2;
    // The tolerance is requested for the mass, not for each half.
    accept_within_tolerance(total, q);
  } else {
    total = outer_integral([&](double s) { return slices.slice(s, w_lo, kInfinity, {}).value; }, t, q);
  }

  MassReport rep;
  rep.delta = delta;
  rep.t = t;
  rep.mass = total.value;
  rep.err = total.error + slices.inherited_relative_error() * std::abs(total.value);
  rep.half_sector_1 = part1.value;
  rep.half_sector_2 = part2.value;
  rep.ratio_lelong = rep.mass / (delta * delta);
  rep.ratio_sharp = rep.mass / (delta * delta * ep.eval(delta));
  rep.converged = total.ok() && slices.failures() == 0;
  if (!rep.converged) {
    rep.note = std::string("outer ") + to_string(total.status) + ", " +
               std::to_string(slices.failures()) + " inner failures";
    throw QuadratureFailure("mass_bidisc(delta=" + std::to_string(delta) + ")",
                            QuadResult{rep.mass, rep.err, total.ok() ? QuadStatus::Other : total.status});
  }
  return rep;
}

Estimate mass_lower_chain(const Hyperbolicity& h, const BoundaryData& bd, double delta,
                          const QuadratureSpec& q) {
  check_delta(delta);
  const double t = -std::log(delta);
  SliceIntegrator slices(h, bd, q);
  const MassTerms axis_only{false, true};
  const QuadResult r =
      outer_integral([&](double s) { return slices.slice(s, s / h.b, kInfinity, axis_only).value; }, t, q);
  Estimate e = require_converged(r, "mass_lower_chain");
  e.error += slices.inherited_relative_error() * std::abs(e.value);
  return e;
}

std::vector<MassReport> mass_scan(const Hyperbolicity& h, const BoundaryData& bd,
                                  const EpsilonProfile& ep, const std::vector<double>& deltas,
                                  const QuadratureSpec& q, int threads) {
  for (size_t i = 1; i < deltas.size(); ++i)
    if (!(deltas[i] < deltas[i - 1])) throw std::invalid_argument("mass_scan: deltas must be sorted descending");
  return parallel_map(deltas, threads, [&](double delta) {
    try {
      return mass_bidisc(h, bd, ep, delta, q);
    } catch (const QuadratureFailure& f) {
      MassReport rep;
      rep.delta = delta;
      rep.t = -std::log(delta);
      rep.mass = f.partial().value;
      rep.err = f.partial().error;
      rep.ratio_lelong = rep.mass / (delta * delta);
      rep.ratio_sharp = rep.mass / (delta * delta * ep.eval(delta));
      rep.converged = false;
      rep.note = f.what();
      return rep;
    }
  });
}

}  // namespace leafcurrent
