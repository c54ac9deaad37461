// Acceptance run: one PASS/FAIL line per criterion. Each criterion has a
// wall-clock budget that is part of its pass condition. Exit status is 0
// only if every criterion passes.
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "leafcurrent/asymptotics.hpp"
#include "leafcurrent/commands.hpp"
#include "leafcurrent/config.hpp"
#include "leafcurrent/current_mass.hpp"
#include "leafcurrent/ddc_verifier.hpp"
#include "leafcurrent/harmonic_extension.hpp"

using namespace leafcurrent;
namespace fs = std::filesystem;

namespace {

const std::pair<double, double> kGeometries[] = {{0.0, 1.0}, {1.0, 1.0}, {-1.0, 1.0}};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

std::string tag(double a, double b) {
  std::ostringstream s;
  s << "(" << a << "," << b << ")";
  return s.str();
}

BoundaryData power_data(const Hyperbolicity& h, double p = 0.5, double A = 10.0) {
  return BoundaryData::from_profile(EpsilonProfile::power(p, A), h.gamma);
}

// 1. Boundary identity against A e^{-pt}.
void identity(Outcome& o) {
  const QuadratureSpec q;
  double worst = 0.0;
  for (auto [a, b] : kGeometries) {
    const double gamma = make_hyperbolicity(a, b).gamma;
    for (double p : {0.25, 0.5, 1.0})
      for (double A : {1.0, 10.0}) {
        const EpsilonProfile ep = EpsilonProfile::power(p, A);
        const BoundaryData bd = BoundaryData::from_profile(ep, gamma);
        for (double t : {0.0, 1.0, 2.0, 5.0, 10.0}) {
          const double exact = A * std::exp(-p * t);
          const double rel = std::abs(boundary_identity(bd, ep, t, q).lhs - exact) / exact;
          worst = std::max(worst, rel);
        }
      }
  }
  o.detail << "worst relative error " << worst;
  o.require(worst <= 1e-8, "relative error <= 1e-8");
}

// 2. Constant data extends to 1; profile data stays even.
void unit_mass_symmetry(Outcome& o) {
  const QuadratureSpec q;
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> U(-50.0, 50.0), logV(std::log(1e-2), std::log(1e2));
  double worst_one = 0.0, worst_even = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto [a, b] = kGeometries[k % 3];
    const Hyperbolicity h = make_hyperbolicity(a, b);
    const BoundaryData one = BoundaryData::from_even_function(h.gamma, [](double) { return 1.0; }, "one");
    const double u = U(rng), v = std::exp(logV(rng));
    worst_one = std::max(worst_one, std::abs(poisson_extend(one, u, v, q).value - 1.0));
    const BoundaryData bd = power_data(h);
    const double hp = poisson_extend(bd, u, v, q).value, hm = poisson_extend(bd, -u, v, q).value;
    worst_even = std::max(worst_even, std::abs(hp - hm) / hp);
  }
  o.detail << "constant data max |H-1| " << worst_one << ", evenness max residual " << worst_even;
  o.require(worst_one <= 1e-8, "|H-1| <= 1e-8");
  o.require(worst_even < 1e-8, "evenness < 1e-8");
}

// 3. Mean-value property at random discs.
void harmonicity(Outcome& o) {
  const QuadratureSpec q;
  const BoundaryData bd = power_data(make_hyperbolicity(1.0, 1.0));
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> U(-50.0, 50.0), logV(std::log(1e-2), std::log(50.0));
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const double u = U(rng), v = std::exp(logV(rng));
    const double H = poisson_extend(bd, u, v, q).value;
    worst = std::max(worst, mean_value_residual(bd, {u, v}, 0.5 * v, 64, q) / H);
  }
  o.detail << "max relative mean-value residual " << worst;
  o.require(worst < 1e-6, "residual < 1e-6");
}

// 4. Large-r exponent and the exact a = 0 identities.
void exponent(Outcome& o) {
  for (auto [a, b] : kGeometries) {
    const Hyperbolicity h = make_hyperbolicity(a, b);
    const LemmaReport r = check_uv2(h, default_uv2_grid());
    const double slope = r.fitted_exponents.empty() ? NAN : r.fitted_exponents[0];
    const double rel = std::abs(slope - h.gamma) / h.gamma;
    o.detail << tag(a, b) << " slope " << slope << " (rel " << rel << ") ";
    o.require(rel <= 0.01, "slope within 1% at " + tag(a, b));
  }
  const Hyperbolicity h = make_hyperbolicity(0.0, 1.0);
  const double eps = std::numeric_limits<double>::epsilon();
  double worst_ulps = 0.0;
  for (double r : log_grid(1e-6, 1e4, 200)) {
    const cplx Z = primed_image(h, r);
    // Normwise: the error in Z' measured against |Z'|.
    worst_ulps = std::max(worst_ulps, std::abs(Z - cplx(r * r - 1.0, 2.0 * r)) / (eps * std::abs(Z)));
  }
  o.detail << "a=0 identities within " << worst_ulps << " eps";
  o.require(worst_ulps <= 4.0, "a=0 identities within 4 eps");
}

// 5. Kernel integral: bounded over the last positive decade, positive infimum below.
void kernel_bounds(Outcome& o) {
  const QuadratureSpec q;
  for (auto [a, b] : kGeometries) {
    const Hyperbolicity h = make_hyperbolicity(a, b);
    std::vector<double> grid;
    for (double x : default_upper_grid(h))
      if (x > 0.0) grid.push_back(x);
    const LemmaReport up = check_kernel_upper(h, grid, q);
    const double spread = up.metric("spread_positive");
    const LemmaReport lo = check_kernel_lower(h, default_lower_grid(), q);
    o.detail << tag(a, b) << " spread " << spread << " inf " << lo.empirical_constant << " ";
    o.require(spread < 0.2, "upper spread < 20% at " + tag(a, b));
    o.require(lo.empirical_constant > 1e-4, "lower infimum > 1e-4 at " + tag(a, b));
  }
}

// 6. Mass of the whole bidisc is finite.
void finite_mass(Outcome& o) {
  const QuadratureSpec q;
  for (auto [a, b] : kGeometries) {
    const Hyperbolicity h = make_hyperbolicity(a, b);
    const EpsilonProfile ep = EpsilonProfile::power(0.5, 10.0);
    MassReport r;
    try {
      r = mass_bidisc(h, BoundaryData::from_profile(ep, h.gamma), ep, 1.0 - 1e-9, q);
    } catch (const std::exception& e) {
      r.converged = false;
      r.note = e.what();
    }
    const double rel = r.err / r.mass;
    o.detail << tag(a, b) << " mass " << r.mass << " rel err " << rel << " ";
    o.require(r.converged && std::isfinite(r.mass) && rel < 0.01, "converged with rel err < 1% at " + tag(a, b));
  }
}

// 7. mass / delta^2 decreases and halves over the scan.
void lelong(Outcome& o) {
  const QuadratureSpec q;
  for (const std::string spec : {"power:0.25", "power:0.5", "power:1", "logpower:1", "logpower:2"})
    for (auto [a, b] : kGeometries) {
      const Hyperbolicity h = make_hyperbolicity(a, b);
      const EpsilonProfile ep = parse_profile(spec, 10.0);
      const auto reps = mass_scan(h, BoundaryData::from_profile(ep, h.gamma), ep, default_delta_scan(), q);
      std::vector<double> ratio;
      bool converged = true;
      for (const auto& r : reps) {
        ratio.push_back(r.ratio_lelong);
        converged = converged && r.converged;
      }
      const double halving = ratio.back() / ratio.front();
      const std::string where = spec + " " + tag(a, b);
      o.detail << where << " last/first " << halving << "; ";
      o.require(converged, "converged for " + where);
      o.require(strictly_decreasing(ratio), "strictly decreasing for " + where);
      o.require(halving < 0.5, "halved for " + where);
    }
}

// 8. mass / (delta^2 eps(delta)) bounded below, stable under 10x tighter tolerances.
void sharpness(Outcome& o) {
  const QuadratureSpec q;
  for (auto [a, b] : kGeometries) {
    const Hyperbolicity h = make_hyperbolicity(a, b);
    const EpsilonProfile ep = EpsilonProfile::power(0.5, 10.0);
    const BoundaryData bd = BoundaryData::from_profile(ep, h.gamma);
    auto c0 = [&](const QuadratureSpec& spec, bool& converged) {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& r : mass_scan(h, bd, ep, default_delta_scan(), spec)) {
        m = std::min(m, r.ratio_sharp);
        converged = converged && r.converged;
      }
      return m;
    };
    bool converged = true;
    const double c = c0(q, converged), c_tight = c0(q.scaled(0.1), converged);
    const double change = std::abs(c_tight - c) / c;
    o.detail << tag(a, b) << " c0 " << c << " tight " << c_tight << " ";
    o.require(converged, "converged at " + tag(a, b));
    o.require(c > 0.0, "c0 > 0 at " + tag(a, b));
    o.require(change <= 0.25, "c0 stable within 25% at " + tag(a, b));
  }
}

// 9. Horizontal-edge integrals decay; constant data does not.
void boundary_decay(Outcome& o) {
  const QuadratureSpec q;
  const double lambda = 1.0;
  for (auto [a, b] : kGeometries) {
    const Hyperbolicity h = make_hyperbolicity(a, b);
    const FluxReport r = flux_scan(h, power_data(h), default_s_scan(), lambda, q);
    const double flux_drop = r.flux.back() / r.flux.front(), grad_drop = r.grad.back() / r.grad.front();
    const BoundaryData one = BoundaryData::from_even_function(h.gamma, [](double) { return 1.0; }, "one");
    const double limit = std::exp(-lambda) / h.b;
    const double control = edge_flux(h, one, default_s_scan().back(), lambda, q).value;
    const double dev = std::abs(control - limit) / limit;
    o.detail << tag(a, b) << " flux " << flux_drop << " grad " << grad_drop << " control dev " << dev << " ";
    o.require(r.converged, "converged at " + tag(a, b));
    o.require(strictly_decreasing(r.flux) && flux_drop < 1e-3, "flux decays at " + tag(a, b));
    o.require(strictly_decreasing(r.grad) && grad_drop < 1e-3, "gradient term decays at " + tag(a, b));
    o.require(dev <= 0.05, "control within 5% at " + tag(a, b));
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 10. Same config twice gives the same CSV bytes.
void determinism(Outcome& o) {
  RunConfig c;
  c.threads = 2;
  c.deltas = {0.5, 0.3};
  c.leaf_grid = 40;
  c.extend_grid = 40;
  const fs::path root = fs::temp_directory_path() / "leafcurrent_acceptance";
  fs::remove_all(root);
  std::ostringstream log;
  int compared = 0, differing = 0;
  for (const std::string& cmd : command_names()) {
    c.out = (root / (cmd + "_1")).string();
    run_command(cmd, c, log);
    c.out = (root / (cmd + "_2")).string();
    run_command(cmd, c, log);
    for (const auto& e : fs::directory_iterator(root / (cmd + "_1"))) {
      if (e.path().extension() != ".csv") continue;
      ++compared;
      if (slurp(e.path()) != slurp(root / (cmd + "_2") / e.path().filename())) {
        ++differing;
        o.detail << " differs: " << cmd << "/" << e.path().filename().string();
      }
    }
  }
  fs::remove_all(root);
  o.detail << compared << " CSV files compared, " << differing << " differ";
  o.require(compared > 0 && differing == 0, "byte-identical CSV");
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<void(Outcome&)> run;
};

}  // namespace

// Optional arguments select criterion ids; default is all ten.
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const Criterion criteria[] = {
      {1, "boundary identity", 1.0, identity},
      {2, "unit mass and symmetry", 5.0, unit_mass_symmetry},
      {3, "harmonicity", 30.0, harmonicity},
      {4, "large-r exponent", 1.0, exponent},
      {5, "kernel bounds", 120.0, kernel_bounds},
      {6, "finite mass", 300.0, finite_mass},
      {7, "Lelong decay", 900.0, lelong},
      {8, "sharpness", 900.0, sharpness},
      {9, "boundary decay", 600.0, boundary_decay},
      {10, "determinism", std::numeric_limits<double>::infinity(), determinism},
  };
  bool all = true;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (std::isfinite(c.budget_s)) o.require(secs < c.budget_s, "runtime budget");
    all = all && o.pass;
    std::cout << "criterion " << std::setw(2) << c.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.name
              << "  (" << std::fixed << std::setprecision(2) << secs << " s" << std::defaultfloat
              << std::setprecision(6);
    if (std::isfinite(c.budget_s)) std::cout << ", budget " << c.budget_s << " s";
    std::cout << ")  " << o.detail.str() << std::endl;
  }
  return all ? 0 : 1;
}
