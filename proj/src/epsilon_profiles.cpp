#include "leafcurrent/epsilon_profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <variant>

namespace leafcurrent {

namespace {

struct PowerLaw {
  double p;
};

struct LogPowerLaw {
  double alpha;
  double cap_delta;  // tangent-line continuation above this point
  double cap_tau;
  double cap_value;
  double cap_slope;
};

// Piecewise-linear concave hull with quadratic corner rounding, lifted by a
// linear term so that it dominates the input samples.
struct ConcaveTable {
  std::vector<double> x;      // hull vertices, x[0] = 0
  std::vector<double> y;
  std::vector<double> slope;  // slope[k] on [x[k], x[k+1]]; last one extends to the right
  std::vector<double> half;   // rounding half-width at vertex k (0 at the ends)
  double lift = 0.0;          // added slope (domination + strictness)
  double gap = 0.0;

  double base_value(double d) const;
  double base_deriv(double d) const;
};

double ConcaveTable::base_value(double d) const {
  const size_t n = x.size();
  size_t k = static_cast<size_t>(std::upper_bound(x.begin(), x.end(), d) - x.begin());
  k = (k == 0) ? 0 : k - 1;
  k = std::min(k, n - 1);
  for (size_t j : {k, k + 1}) {
    if (j == 0 || j >= n || half[j] <= 0.0) continue;
    const double hw = half[j];
    if (std::abs(d - x[j]) < hw) {
      const double dm = slope[j - 1] - slope[j];
      const double w = d - x[j] + hw;
      return y[j] + slope[j - 1] * (d - x[j]) - dm * w * w / (4.0 * hw);
    }
  }
  return y[k] + slope[k] * (d - x[k]);
}

double ConcaveTable::base_deriv(double d) const {
  const size_t n = x.size();
  size_t k = static_cast<size_t>(std::upper_bound(x.begin(), x.end(), d) - x.begin());
  k = (k == 0) ? 0 : k - 1;
  k = std::min(k, n - 1);
  for (size_t j : {k, k + 1}) {
    if (j == 0 || j >= n || half[j] <= 0.0) continue;
    const double hw = half[j];
    if (std::abs(d - x[j]) < hw) {
      const double dm = slope[j - 1] - slope[j];
      return slope[j - 1] - dm * (d - x[j] + hw) / (2.0 * hw);
    }
  }
  return slope[k];
}

double log_power_raw(double alpha, double tau) { return std::pow(1.0 + tau, -alpha); }

}  // namespace

struct EpsilonProfile::Model {
  std::variant<PowerLaw, LogPowerLaw, ConcaveTable> law;
};

EpsilonProfile::EpsilonProfile(std::shared_ptr<const Model> model, double amplitude)
    : model_(std::move(model)), amplitude_(amplitude) {
  if (!(amplitude_ > 0.0) || !std::isfinite(amplitude_))
    throw std::invalid_argument("amplitude A must be positive and finite");
}

EpsilonProfile EpsilonProfile::power(double p, double amplitude) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("power profile needs 0 < p <= 1");
  return {std::make_shared<Model>(Model{PowerLaw{p}}), amplitude};
}

double detect_concavity_cap(const std::function<double(double)>& raw_deriv) {
  // Concave near delta iff raw_deriv is non-increasing there. Work in
  // tau = -log(delta) and bisect on the sign of a centred difference.
  auto concave_at = [&](double tau) {
    const double step = 1e-6 * (1.0 + tau);
    const double lo = raw_deriv(std::exp(-(tau + step)));
    const double hi = raw_deriv(std::exp(-(tau - step)));
    return hi <= lo;
  };
  if (concave_at(0.0)) return 1.0;
  double bad = 0.0;
  double good = 1.0;
  while (!concave_at(good)) {
    bad = good;
    good *= 2.0;
    if (good > 700.0) throw std::runtime_error("detect_concavity_cap: profile is not concave near 0");
  }
  for (int i = 0; i < 200 && good - bad > 1e-13 * (1.0 + good); ++i) {
    const double mid = 0.5 * (bad + good);
    (concave_at(mid) ? good : bad) = mid;
  }
  return std::exp(-good);
}

EpsilonProfile EpsilonProfile::log_power(double alpha, double amplitude) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("log-power profile needs alpha > 0");
  auto raw_deriv = [alpha](double d) { return alpha * std::pow(1.0 - std::log(d), -alpha - 1.0) / d; };
  LogPowerLaw law{};
  law.alpha = alpha;
  law.cap_delta = detect_concavity_cap(raw_deriv);
  law.cap_tau = -std::log(law.cap_delta);
  law.cap_value = log_power_raw(alpha, law.cap_tau);
  law.cap_slope = raw_deriv(law.cap_delta);
  return {std::make_shared<Model>(Model{law}), amplitude};
}

EpsilonProfile EpsilonProfile::concave_majorant(std::span<const ProfileSample> samples,
                                                double amplitude) {
  if (samples.size() < 2) throw std::invalid_argument("concave_majorant: need at least 2 samples");
  double peak = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!(s.delta > 0.0 && s.delta <= 1.0) || !(s.epsilon > 0.0) || !std::isfinite(s.epsilon))
      throw std::invalid_argument("concave_majorant: samples need delta in (0,1] and epsilon > 0");
    if (i > 0 && !(s.delta > samples[i - 1].delta))
      throw std::invalid_argument("concave_majorant: delta grid must be strictly increasing");
    peak = std::max(peak, s.epsilon);
  }

  // Upper hull of the origin and the samples (monotone chain).
  std::vector<ProfileSample> hull{{0.0, 0.0}};
  for (const auto& s : samples) {
    while (hull.size() >= 2) {
      const auto& p = hull[hull.size() - 2];
      const auto& q = hull.back();
      const double cross = (q.delta - p.delta) * (s.epsilon - p.epsilon) -
                           (q.epsilon - p.epsilon) * (s.delta - p.delta);
      if (cross >= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(s);
  }
  // Keep the non-decreasing part; beyond the maximum the envelope is flat.
  auto top = std::max_element(hull.begin(), hull.end(),
                              [](const auto& l, const auto& r) { return l.epsilon < r.epsilon; });
  hull.erase(top + 1, hull.end());

  ConcaveTable t;
  for (const auto& v : hull) {
    t.x.push_back(v.delta);
    t.y.push_back(v.epsilon);
  }
  const size_t n = t.x.size();
  t.slope.resize(n);
  for (size_t k = 0; k + 1 < n; ++k) t.slope[k] = (t.y[k + 1] - t.y[k]) / (t.x[k + 1] - t.x[k]);
  t.slope[n - 1] = 0.0;
  t.half.assign(n, 0.0);
  for (size_t k = 1; k < n; ++k) {
    const double left = t.x[k] - t.x[k - 1];
    const double right = (k + 1 < n) ? t.x[k + 1] - t.x[k] : std::max(1.0 - t.x[k], left);
    t.half[k] = 0.05 * std::min(left, right > 0.0 ? right : left);
  }

  double lift = 0.0;
  for (const auto& s : samples) lift = std::max(lift, (s.epsilon - t.base_value(s.delta)) / s.delta);
  t.lift = lift + 1e-6 * peak;
  double gap = 0.0;
  for (const auto& s : samples)
    gap = std::max(gap, (t.base_value(s.delta) + t.lift * s.delta - s.epsilon) / s.epsilon);
  t.gap = gap;
  return {std::make_shared<Model>(Model{std::move(t)}), amplitude};
}

double EpsilonProfile::eval(double delta) const {
  if (delta <= 0.0) return 0.0;
  return std::visit(
      [delta](const auto& law) -> double {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, PowerLaw>) {
          return std::pow(delta, law.p);
        } else if constexpr (std::is_same_v<L, LogPowerLaw>) {
          if (delta <= law.cap_delta) return log_power_raw(law.alpha, -std::log(delta));
          return law.cap_value + law.cap_slope * (delta - law.cap_delta);
        } else {
          return law.base_value(delta) + law.lift * delta;
        }
      },
      model_->law);
}

double EpsilonProfile::deriv(double delta) const {
  if (!(delta > 0.0)) throw std::domain_error("epsilon' is only defined on (0, 1]");
  return std::visit(
      [delta](const auto& law) -> double {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, PowerLaw>) {
          return law.p * std::pow(delta, law.p - 1.0);
        } else if constexpr (std::is_same_v<L, LogPowerLaw>) {
          if (delta <= law.cap_delta)
            return law.alpha * std::pow(1.0 - std::log(delta), -law.alpha - 1.0) / delta;
          return law.cap_slope;
        } else {
          return law.base_deriv(delta) + law.lift;
        }
      },
      model_->law);
}

double EpsilonProfile::eval_tau(double tau) const {
  return std::visit(
      [tau, this](const auto& law) -> double {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, PowerLaw>) {
          return std::exp(-law.p * tau);
        } else if constexpr (std::is_same_v<L, LogPowerLaw>) {
          if (tau >= law.cap_tau) return log_power_raw(law.alpha, tau);
          return law.cap_value + law.cap_slope * (std::exp(-tau) - law.cap_delta);
        } else {
          return eval(std::exp(-tau));
        }
      },
      model_->law);
}

double EpsilonProfile::weight(double tau) const {
  return std::visit(
      [tau, this](const auto& law) -> double {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, PowerLaw>) {
          return law.p * std::exp(-law.p * tau);
        } else if constexpr (std::is_same_v<L, LogPowerLaw>) {
          if (tau >= law.cap_tau) return law.alpha * std::pow(1.0 + tau, -law.alpha - 1.0);
          return std::exp(-tau) * law.cap_slope;
        } else {
          const double d = std::exp(-tau);
          return d > 0.0 ? d * deriv(d) : 0.0;
        }
      },
      model_->law);
}

EpsilonProfile::Kind EpsilonProfile::kind() const {
  switch (model_->law.index()) {
    case 0:
      return Kind::Power;
    case 1:
      return Kind::LogPower;
    default:
      return Kind::Tabulated;
  }
}

double EpsilonProfile::parameter() const {
  if (auto* p = std::get_if<PowerLaw>(&model_->law)) return p->p;
  if (auto* l = std::get_if<LogPowerLaw>(&model_->law)) return l->alpha;
  return 0.0;
}

double EpsilonProfile::concavity_cap() const {
  if (auto* l = std::get_if<LogPowerLaw>(&model_->law)) return l->cap_delta;
  return 1.0;
}

double EpsilonProfile::majorant_gap() const {
  if (auto* t = std::get_if<ConcaveTable>(&model_->law)) return t->gap;
  return 0.0;
}

std::string EpsilonProfile::describe() const {
  std::ostringstream os;
  switch (kind()) {
    case Kind::Power:
      os << "power:" << parameter();
      break;
    case Kind::LogPower:
      os << "logpower:" << parameter();
      break;
    case Kind::Tabulated:
      os << "table";
      break;
  }
  return os.str();
}

std::vector<ProfileSample> load_profile_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile table '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("profile table '" + path + "' is empty");
  std::vector<ProfileSample> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'delta,epsilon'");
    try {
      out.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    } catch (const std::logic_error&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return out;
}

EpsilonProfile parse_profile(const std::string& spec, double amplitude) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto number = [&](double fallback) {
    if (arg.empty()) return fallback;
    try {
      size_t used = 0;
      const double v = std::stod(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
      return v;
    } catch (const std::logic_error&) {
      throw std::invalid_argument("profile '" + spec + "': bad parameter");
    }
  };
  if (kind == "power") return EpsilonProfile::power(number(0.5), amplitude);
  if (kind == "logpower") return EpsilonProfile::log_power(number(1.0), amplitude);
  if (kind == "table") {
    const auto samples = load_profile_samples(arg);
    return EpsilonProfile::concave_majorant(samples, amplitude);
  }
  throw std::invalid_argument("unknown profile '" + spec + "' (power:P, logpower:ALPHA, table:PATH)");
}

AdmissibilityCheck check_admissible(const EpsilonProfile& ep, int n) {
  AdmissibilityCheck c;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = std::pow(10.0, -8.0 * (n - 1 - i) / (n - 1));
  double prev_val = -1.0;
  double prev_der = std::numeric_limits<double>::infinity();
  for (double d : grid) {
    const double v = ep.eval(d);
    const double der = ep.deriv(d);
    if (!(v > 0.0)) c.positive = false;
    if (!(der > 0.0) || !(v > prev_val)) c.increasing = false;
    if (der > prev_der * (1.0 + 1e-12)) c.concave = false;
    prev_val = v;
    prev_der = der;
  }
  if (!(ep.eval(1e-8) <= 1e-3 * ep.eval(1.0))) c.vanishes_at_zero = false;
  return c;
}

BoundaryData::BoundaryData(double gamma, std::function<double(double)> tau_fn, std::string label)
    : gamma_(gamma), at_tau_(std::move(tau_fn)), label_(std::move(label)) {
  if (!(gamma_ > 1.0)) throw std::invalid_argument("boundary data needs gamma > 1");
}

BoundaryData BoundaryData::from_profile(const EpsilonProfile& ep, double gamma) {
  const double scale = ep.amplitude() / gamma;
  return {gamma, [ep, scale](double tau) { return scale * ep.weight(tau); }, ep.describe()};
}

BoundaryData BoundaryData::from_even_function(double gamma, std::function<double(double)> f,
                                              std::string label) {
  return {gamma, [f = std::move(f), gamma](double tau) { return f(std::pow(tau, gamma)); },
          std::move(label)};
}

double BoundaryData::at(double x) const { return at_tau_(std::pow(std::abs(x), 1.0 / gamma_)); }

double BoundaryData::at_tau(double tau) const { return at_tau_(tau); }

IdentityCheck boundary_identity(const BoundaryData& bd, const EpsilonProfile& ep, double t,
                                const QuadratureSpec& q) {
  if (!(t >= 0.0)) throw std::domain_error("boundary_identity: t must be nonnegative");
  const double g = bd.gamma();
  const double power = -1.0 + 1.0 / g;
  // x = +-tau^gamma, dx = gamma tau^(gamma-1) dtau
  auto positive = [&](double tau) {
    if (tau <= 0.0) return 0.0;
    const double x = std::pow(tau, g);
    return bd.at(x) * std::pow(x, power) * g * std::pow(tau, g - 1.0);
  };
  auto negative = [&](double tau) {
    if (tau <= 0.0) return 0.0;
    const double x = -std::pow(tau, g);
    return bd.at(x) * std::pow(-x, power) * g * std::pow(tau, g - 1.0);
  };
  const auto pos = integrate(positive, t, kInfinity, q);
  const auto neg = integrate(negative, t, kInfinity, q);
  require_converged(pos, "boundary identity (x >= t^gamma)");
  require_converged(neg, "boundary identity (x <= -t^gamma)");
  return {pos.value, neg.value, ep.amplitude() * ep.eval_tau(t), std::max(pos.error, neg.error)};
}

}  // namespace leafcurrent
