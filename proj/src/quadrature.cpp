#include "leafcurrent/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <sstream>

namespace leafcurrent {

namespace {

void disable_gsl_abort() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};
using Workspace = std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter>;

// GSL is C; exceptions thrown by the integrand must not unwind through it.
struct Trampoline {
  const Integrand* f;
  std::exception_ptr error;
};

double call_integrand(double x, void* params) {
  auto* t = static_cast<Trampoline*>(params);
  if (t->error) return 0.0;
  try {
    return (*t->f)(x);
  } catch (...) {
    t->error = std::current_exception();
    return 0.0;
  }
}

QuadStatus from_gsl(int code) {
  switch (code) {
    case GSL_SUCCESS:
      return QuadStatus::Ok;
    case GSL_EMAXITER:
      return QuadStatus::MaxSubdivisions;
    case GSL_EROUND:
      return QuadStatus::Roundoff;
    case GSL_ESING:
      return QuadStatus::Singular;
    case GSL_EDIVERGE:
      return QuadStatus::Divergent;
    default:
      return QuadStatus::Other;
  }
}

int severity(QuadStatus s) { return static_cast<int>(s); }


}  // namespace

void QuadratureSpec::validate() const {
  if (!(tol_rel > 0.0) || !(tol_abs > 0.0) || !std::isfinite(tol_rel) || !std::isfinite(tol_abs))
    throw std::invalid_argument("quadrature tolerances must be positive and finite");
  if (max_subdivisions < 8) throw std::invalid_argument("max_subdivisions must be at least 8");
  if (!(tail_cutoff_t > 0.0)) throw std::invalid_argument("tail_cutoff_t must be positive");
}

QuadratureSpec QuadratureSpec::inner(double factor) const {
  QuadratureSpec q = *this;
  // GSL cannot go much below ~50 ulp relative accuracy with GK21.
  q.tol_rel = std::max(tol_rel * factor, 1e-13);
  q.tol_abs = tol_abs * factor;
  return q;
}

QuadratureSpec QuadratureSpec::scaled(double factor) const {
  QuadratureSpec q = *this;
  q.tol_rel = tol_rel * factor;
  q.tol_abs = tol_abs * factor;
  return q;
}

const char* to_string(QuadStatus status) {
  switch (status) {
    case QuadStatus::Ok:
      return "ok";
    case QuadStatus::MaxSubdivisions:
      return "max-subdivisions";
    case QuadStatus::Roundoff:
      return "roundoff";
    case QuadStatus::Singular:
      return "singular";
    case QuadStatus::Divergent:
      return "divergent";
    case QuadStatus::Other:
      return "failed";
  }
  return "unknown";
}

QuadResult& QuadResult::operator+=(const QuadResult& other) {
  value += other.value;
  error += other.error;
  if (severity(other.status) > severity(status)) status = other.status;
  return *this;
}

QuadratureFailure::QuadratureFailure(const std::string& context, QuadResult partial)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << context << ": quadrature did not converge (" << to_string(partial.status)
           << ", value " << partial.value << ", error estimate " << partial.error << ")";
        return os.str();
      }()),
      partial_(partial) {}

// QUADPACK's roundoff and divergence heuristics also fire on results whose
// error estimate already meets the request; those count as converged.
void accept_within_tolerance(QuadResult& r, const QuadratureSpec& q) {
  if (r.status != QuadStatus::MaxSubdivisions && r.status != QuadStatus::Other &&
      r.error <= std::max(q.tol_abs, q.tol_rel * std::abs(r.value)))
    r.status = QuadStatus::Ok;
  if (!std::isfinite(r.value)) r.status = QuadStatus::Other;
}

Estimate require_converged(const QuadResult& r, const std::string& context) {
  if (!r.ok()) throw QuadratureFailure(context, r);
  return r.estimate();
}

QuadResult integrate(const Integrand& f, double lo, double hi, const QuadratureSpec& q) {
  if (!(hi > lo)) return {};
  disable_gsl_abort();

  const auto limit = static_cast<size_t>(q.max_subdivisions);
  Workspace ws(gsl_integration_workspace_alloc(limit));
  if (!ws) throw std::bad_alloc();

  Trampoline tramp{&f, nullptr};
  gsl_function gf{&call_integrand, &tramp};
  double value = 0.0;
  double error = 0.0;
  int code = 0;
  if (std::isinf(hi)) {
    code = gsl_integration_qagiu(&gf, lo, q.tol_abs, q.tol_rel, limit, ws.get(), &value, &error);
  } else {
    code = gsl_integration_qags(&gf, lo, hi, q.tol_abs, q.tol_rel, limit, ws.get(), &value, &error);
  }
  if (tramp.error) std::rethrow_exception(tramp.error);

  QuadResult r{value, error, from_gsl(code)};
  accept_within_tolerance(r, q);
  return r;
}

QuadResult integrate_pieces(const Integrand& f, std::span<const double> points,
                            const QuadratureSpec& q) {
  QuadResult total;
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1] > points[i])) continue;
    total += integrate(f, points[i], points[i + 1], q);
  }
  // The request applies to the whole integral, not to each piece.
  accept_within_tolerance(total, q);
  return total;
}

void NestedErrorTracker::record(const QuadResult& r) {
  ++calls_;
  if (!r.ok()) ++failures_;
  const double mag = std::abs(r.value);
  if (mag > abs_floor_ && mag > 0.0) worst_rel_ = std::max(worst_rel_, r.error / mag);
}

void NestedErrorTracker::merge(const NestedErrorTracker& other) {
  worst_rel_ = std::max(worst_rel_, other.worst_rel_);
  failures_ += other.failures_;
  calls_ += other.calls_;
}

}  // namespace leafcurrent
