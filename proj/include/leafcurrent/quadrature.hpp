#pragma once

#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace leafcurrent {

/// Tolerances and limits shared by every 1D integral in the library.
/// Nested integrals derive tighter specs for their inner levels via
/// `inner()`.
struct QuadratureSpec {
  double tol_rel = 1e-8;
  double tol_abs = 1e-12;
  int max_subdivisions = 2000;
  /// Truncation point for integrals in the tau-variable whose tail is
  /// known in closed form.
  double tail_cutoff_t = 60.0;

  void validate() const;

  /// Spec for an integrand nested inside an integral using this spec.
  QuadratureSpec inner(double factor = 0.1) const;
  /// Same spec with both tolerances multiplied by `factor`.
  QuadratureSpec scaled(double factor) const;

  bool operator==(const QuadratureSpec&) const = default;
};

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

enum class QuadStatus { Ok, MaxSubdivisions, Roundoff, Singular, Divergent, Other };

const char* to_string(QuadStatus status);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  QuadStatus status = QuadStatus::Ok;

  bool ok() const { return status == QuadStatus::Ok; }
  Estimate estimate() const { return {value, error}; }

  /// Sum of two independent pieces; the worse status wins.
  QuadResult& operator+=(const QuadResult& other);
};

/// Raised when an adaptive integral could not reach its tolerance. Carries
/// the partial value and the error estimate that was reached.
class QuadratureFailure : public std::runtime_error {
 public:
  QuadratureFailure(const std::string& context, QuadResult partial);

  const QuadResult& partial() const { return partial_; }

 private:
  QuadResult partial_;
};

/// Throws QuadratureFailure unless `r.ok()`.
Estimate require_converged(const QuadResult& r, const std::string& context);

using Integrand = std::function<double(double)>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Adaptive Gauss-Kronrod integration of f over [lo, hi]. `hi` may be
/// +infinity, in which case the interval is mapped onto (0, 1].
/// An empty or reversed interval integrates to zero.
QuadResult integrate(const Integrand& f, double lo, double hi, const QuadratureSpec& q);

/// Integrates piecewise over consecutive breakpoints (sorted ascending; the
/// last one may be +infinity). Duplicate points are skipped. The status is
/// judged against the tolerance of the summed result.
QuadResult integrate_pieces(const Integrand& f, std::span<const double> points,
                            const QuadratureSpec& q);

/// Marks a result converged when its summed error meets the request,
/// whatever QUADPACK's heuristics flagged on the pieces.
void accept_within_tolerance(QuadResult& r, const QuadratureSpec& q);

/// Worst relative error seen across a family of nested integrals. Used to
/// fold inner quadrature error into the error bound of an outer integral
/// with a nonnegative integrand.
class NestedErrorTracker {
 public:
  void record(const QuadResult& r);

  /// Relative error bound of the inner integrals, ignoring values that are
  /// at or below the absolute tolerance floor.
  double worst_relative() const { return worst_rel_; }
  int failures() const { return failures_; }
  long calls() const { return calls_; }
  void merge(const NestedErrorTracker& other);

  explicit NestedErrorTracker(double abs_floor = 0.0) : abs_floor_(abs_floor) {}

 private:
  double abs_floor_ = 0.0;
  double worst_rel_ = 0.0;
  int failures_ = 0;
  long calls_ = 0;
};

}  // namespace leafcurrent
