#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "leafcurrent/quadrature.hpp"

namespace leafcurrent {

struct ProfileSample {
  double delta;
  double epsilon;
};

/// The modulus function epsilon on (0, 1] together with the amplitude A.
/// Every profile is smooth on (0, 1], strictly increasing, concave and
/// tends to 0 at 0. Immutable and cheap to copy.
class EpsilonProfile {
 public:
  enum class Kind { Power, LogPower, Tabulated };

  /// epsilon(delta) = delta^p, 0 < p <= 1.
  static EpsilonProfile power(double p, double amplitude = 10.0);

  /// epsilon(delta) = log(e/delta)^-alpha below the point where that formula
  /// stops being concave, continued by its tangent line above it.
  static EpsilonProfile log_power(double alpha, double amplitude = 10.0);

  /// Smooth concave increasing majorant of tabulated samples.
  static EpsilonProfile concave_majorant(std::span<const ProfileSample> samples,
                                         double amplitude = 10.0);

  double eval(double delta) const;
  double deriv(double delta) const;

  /// epsilon(e^-tau), evaluated without underflow for large tau.
  double eval_tau(double tau) const;
  /// e^-tau epsilon'(e^-tau). Its integral over [t, inf) is epsilon(e^-t).
  double weight(double tau) const;

  double amplitude() const { return amplitude_; }
  Kind kind() const;
  /// Power exponent p or log-power alpha; 0 for tabulated profiles.
  double parameter() const;
  /// For LogPower: the delta above which the profile is the tangent line.
  double concavity_cap() const;
  /// For Tabulated: max over the input samples of (output - input) / input.
  double majorant_gap() const;

  /// Short spec string, e.g. "power:0.5", "logpower:1", "table".
  std::string describe() const;

  struct Model;

 private:
  EpsilonProfile(std::shared_ptr<const Model> model, double amplitude);

  std::shared_ptr<const Model> model_;
  double amplitude_ = 10.0;
};

/// Largest delta such that the raw function with derivative `raw_deriv` is
/// concave on (0, delta], located by bisection on a finite-difference test of
/// delta -> raw_deriv(delta). Returns 1 if concave on the whole interval.
double detect_concavity_cap(const std::function<double(double)>& raw_deriv);

/// Reads a two-column CSV (delta, epsilon) with a header row.
std::vector<ProfileSample> load_profile_samples(const std::string& path);

/// Builds a profile from "power:P", "logpower:ALPHA" or "table:PATH".
EpsilonProfile parse_profile(const std::string& spec, double amplitude);

struct AdmissibilityCheck {
  bool positive = true;
  bool increasing = true;
  bool concave = true;
  bool vanishes_at_zero = true;

  bool ok() const { return positive && increasing && concave && vanishes_at_zero; }
};

/// Grid checks of the admissibility conditions on n log-spaced points of (0, 1].
AdmissibilityCheck check_admissible(const EpsilonProfile& ep, int n = 200);

/// Poisson boundary data on the real line, even in x:
/// H~(+-tau^gamma) = gamma^-1 A e^-tau epsilon'(e^-tau) for profile data.
class BoundaryData {
 public:
  static BoundaryData from_profile(const EpsilonProfile& ep, double gamma);

  /// Arbitrary even data x -> f(|x|), for checks against known extensions.
  static BoundaryData from_even_function(double gamma, std::function<double(double)> f_of_abs_x,
                                         std::string label);

  /// H~(x)
  double at(double x) const;
  /// H~(+-tau^gamma)
  double at_tau(double tau) const;
  double gamma() const { return gamma_; }
  const std::string& label() const { return label_; }

 private:
  BoundaryData(double gamma, std::function<double(double)> tau_fn, std::string label);

  double gamma_ = 2.0;
  std::function<double(double)> at_tau_;
  std::string label_;
};

struct IdentityCheck {
  double lhs = 0.0;           ///< integral over x >= t^gamma
  double lhs_negative = 0.0;  ///< integral over x <= -t^gamma
  double rhs = 0.0;           ///< A epsilon(e^-t)
  double error = 0.0;
};

/// Both sides of int_{x >= t^gamma} H~(x) x^(-1+1/gamma) dx = A epsilon(e^-t),
/// integrated in the variable x = tau^gamma. Throws QuadratureFailure.
IdentityCheck boundary_identity(const BoundaryData& bd, const EpsilonProfile& ep, double t,
                                const QuadratureSpec& q);

}  // namespace leafcurrent
