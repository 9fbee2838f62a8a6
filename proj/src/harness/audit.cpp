#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "cslab/classical.hpp"
#include "cslab/errors.hpp"
#include "cslab/harness.hpp"
#include "cslab/propagators.hpp"
#include "cslab/rotsym.hpp"
#include "cslab/wiener.hpp"

namespace cslab {

namespace {

struct Check {
  std::string suite;
  std::string name;
  std::string comparison;  // "<=" or ">="
  double tolerance;
  std::function<double(const ExperimentConfig&)> measure;
};

double overlap_grid(const ExperimentConfig&) {
  std::vector<PhasePoint> pts;
  std::vector<FockVector> states;
  for (int i = 0; i < 10; ++i) {
    pts.push_back({-2.0 + 4.0 * i / 9.0, 2.0 - 4.0 * ((i * 7) % 10) / 9.0});
    states.push_back(coherent_state(pts.back(), 64));
  }
  double worst = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) worst = std::max(worst, std::abs(states[i].inner(states[j]) - overlap_analytic(pts[i], pts[j])));
  return worst;
}

double exact_unitarity(const ExperimentConfig&) {
  return exact_cs_element({0.0, 0.0}, {0.0, 1.0}, 2.0, Hamiltonian::quartic_normal(0.1)).unitarity_defect;
}

double counter_mismatch(const ExperimentConfig&) {
  LatticeSpec lat;
  lat.T = 0.5;
  double bad = 0.0;
  for (int n : {1, 3, 7}) {
    lat.slices = n;
    const PropagatorResult r = sliced_propagator_position(1.0, 0.0, lat, Hamiltonian::harmonic());
    bad += std::abs(static_cast<double>(r.momentum_sums) - (n + 1)) + std::abs(static_cast<double>(r.position_sums) - n);
  }
  return bad;
}

double cs_reversal(const ExperimentConfig&) {
  const Hamiltonian h = Hamiltonian::quartic_normal(0.1);
  LatticeSpec fwd;
  fwd.slices = 6;
  fwd.T = 0.5;
  LatticeSpec back = fwd;
  back.T = -0.5;
  const PhasePoint a{0.2, 0.9}, b{-0.4, 0.3};
  const cplx k = sliced_propagator_cs(a, b, fwd, h).value;
  return std::abs(k - std::conj(sliced_propagator_cs(b, a, back, h).value)) / std::abs(k);
}

double slope_deviation(PropagatorMethod m) {
  LatticeSpec base;
  base.T = 0.5;
  // From the vacuum the harmonic coherent-state lattice is exact to roundoff.
  const Endpoints ends =
      m == PropagatorMethod::sliced_cs ? Endpoints{{0.0, 1.0}, {-std::sin(0.5), std::cos(0.5)}}
                                       : Endpoints{{0.0, 0.0}, {0.0, 0.4}};
  const ConvergenceStudy s = convergence_study(m, Hamiltonian::harmonic(), ends, {4, 8, 16, 32}, base);
  return std::abs(s.slope + 1.0);
}

double two_step_mismatch(const ExperimentConfig& cfg) {
  // z1 is Gaussian about the endpoint average with variance s/2 per axis.
  WienerConfig w;
  w.steps = 2;
  w.start = {0.3, -0.4};
  w.end = {-0.2, 0.6};
  w.T = 0.7;
  w.nu = 4.0;
  w.samples = static_cast<std::size_t>(cfg.integer("samples"));
  w.seed = std::stoull(cfg.text("seed"));
  const PhaseSymbol h = PhaseSymbol::antinormal(Hamiltonian::quartic_normal(0.1));
  const auto [x, wt] = gauss_hermite(80);
  const double dt = w.T / 2.0, sd = std::sqrt(w.nu * dt / 2.0);
  const PhasePoint a = w.start, b = w.end, mid{0.5 * (a.p + b.p), 0.5 * (a.q + b.q)};
  cplx e = 0.0;
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j) {
      const PhasePoint z{mid.p + std::sqrt(2.0) * sd * x[i], mid.q + std::sqrt(2.0) * sd * x[j]};
      const double pdq = 0.5 * (a.p + z.p) * (z.q - a.q) + 0.5 * (z.p + b.p) * (b.q - z.q);
      const double en = h(0.5 * (a.p + z.p), 0.5 * (a.q + z.q)) + h(0.5 * (z.p + b.p), 0.5 * (z.q + b.q));
      e += wt[i] * wt[j] / std::numbers::pi * std::polar(1.0, pdq - en * dt);
    }
  const double var = w.nu * w.T, dp = b.p - a.p, dq = b.q - a.q;
  const cplx quad = 2.0 * std::numbers::pi * lattice_normalization(w.nu, dt, 2) *
                    std::exp(-(dp * dp + dq * dq) / (2 * var)) / (2 * std::numbers::pi * var) * e;
  const EstimateWithError est = wiener_propagator_mc(w, h);
  return std::abs(est.value - quad) / est.stderr;
}

double worker_mismatch(const ExperimentConfig& cfg) {
  WienerConfig w;
  w.end = {0.0, 1.0};
  w.samples = std::min<std::size_t>(static_cast<std::size_t>(cfg.integer("samples")), 20000);
  w.seed = std::stoull(cfg.text("seed"));
  const PhaseSymbol h = PhaseSymbol::antinormal(Hamiltonian::harmonic());
  const EstimateWithError one = wiener_propagator_mc(w, h);
  w.workers = 3;
  const EstimateWithError three = wiener_propagator_mc(w, h);
  return std::abs(one.value - three.value) + std::abs(one.stderr - three.stderr);
}

double free_limit(const ExperimentConfig& cfg) {
  WienerConfig w;
  w.end = {0.0, 1.0};
  w.nu = 16.0;
  w.steps = default_wiener_steps(w.nu, w.T);
  w.samples = static_cast<std::size_t>(cfg.integer("samples"));
  w.seed = std::stoull(cfg.text("seed"));
  const EstimateWithError e = wiener_propagator_mc(w, PhaseSymbol::zero());
  return std::abs(e.value - overlap_analytic(w.end, w.start)) / e.stderr;
}

double quadratic_exactness(const ExperimentConfig&) {
  const OperatorAlgebra alg;
  const Hamiltonian h(0.5 * (1.2 * (alg.P() * alg.P()) + 0.2 * (alg.P() * alg.Q() + alg.Q() * alg.P()) +
                             0.9 * (alg.Q() * alg.Q())) +
                      0.1 * alg.Q());
  return compare_classical_quantum(h, {0.4, -0.3}, 10.0, 1e-2, 64).max_deviation;
}

double quartic_energy(const ExperimentConfig&) {
  const ClassicalHamiltonian h{[](double p, double q) { return 0.5 * (p * p + q * q) + 0.1 * q * q * q * q; }, true};
  const Trajectory t = hamilton_flow(h, {0.0, 1.0}, 10.0, 1e-3);
  double d = 0.0;
  for (double e : t.energy) d = std::max(d, std::abs(e - t.energy[0]));
  return d / t.energy[0];
}

double flow_reversal(const ExperimentConfig&) {
  const ClassicalHamiltonian h{[](double p, double q) { return 0.5 * (p * p + q * q) + 0.1 * q * q * q * q; }, true};
  const ClassicalHamiltonian r{[](double p, double q) { return -(0.5 * (p * p + q * q) + 0.1 * q * q * q * q); }, true};
  const PhasePoint end = hamilton_flow(h, {0.3, 1.0}, 10.0, 1e-3).points.back();
  const PhasePoint back = hamilton_flow(r, end, 10.0, 1e-3).points.back();
  return std::hypot(back.p - 0.3, back.q - 1.0);
}

double action_identity(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(std::stoull(cfg.text("seed")));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Hamiltonian quart = Hamiltonian::quartic_normal(0.1);
  const ClassicalHamiltonian normal = ClassicalHamiltonian::normal_symbol(quart);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double a0 = u(rng), a1 = u(rng), w0 = 2 * u(rng), b0 = u(rng), b1 = u(rng), w1 = 2 * u(rng);
    auto path = [=](double t) { return PhasePoint{a0 + a1 * std::sin(w0 * t), b0 + b1 * std::cos(w1 * t)}; };
    const double t = u(rng);
    const PhasePoint z = path(t);
    const double qdot = -b1 * w1 * std::sin(w1 * t);
    worst = std::max(worst, std::abs(action_integrand_quantum(path, t, 1e-4, quart, 64) - (z.p * qdot - normal(z))));
  }
  return worst;
}

double rotsym_worst(const ExperimentConfig& cfg, int what) {
  std::mt19937_64 rng(std::stoull(cfg.text("seed")));
  std::normal_distribution<double> g;
  double worst = what == 2 ? 1.0 : 0.0;
  for (int n : {2, 3, 6}) {
    RotSymSpec s{n, 1.0, 0.1, 1.0};
    RealVector p(n), q(n);
    for (int k = 0; k < n; ++k) {
      p[k] = g(rng);
      q[k] = g(rng);
    }
    const RotSymTrajectory t = rotsym_flow(s, p, q, 10.0, 1e-3);
    switch (what) {
      case 0:
        worst = std::max({worst, t.max_relative_energy_drift(), t.max_relative_L2_drift()});
        break;
      case 1:
        worst = std::max(worst, reduction_check(t).residual);
        break;
      default:
        worst = std::min(worst, t.min_cauchy_schwarz());
    }
  }
  return worst;
}

double h2_equivalence(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(std::stoull(cfg.text("seed")));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const ReducibleSpec r{0.6 + 0.8 * u(rng), 0.7 * (1.0 - u(rng)), 2.0 * u(rng), 1.0, 24};
    const PhasePoint z{2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0};
    worst = std::max(worst, std::abs(h2_symbol_fock(r, z) - h2_symbol_closed(r, z)));
  }
  return worst;
}

const std::vector<Check>& checks() {
  static const std::vector<Check> list{
      {"fock", "overlap-grid", "<=", 1e-8, overlap_grid},
      {"fock", "exact-propagator-unitarity", "<=", 1e-10, exact_unitarity},
      {"propagators", "integration-counters", "<=", 0.0, counter_mismatch},
      {"propagators", "cs-time-reversal", "<=", 1e-10, cs_reversal},
      {"propagators", "sliced-q-slope-offset", "<=", 0.3,
       [](const ExperimentConfig&) { return slope_deviation(PropagatorMethod::sliced_position); }},
      {"propagators", "sliced-cs-slope-offset", "<=", 0.3,
       [](const ExperimentConfig&) { return slope_deviation(PropagatorMethod::sliced_cs); }},
      {"wiener", "two-step-quadrature-sigmas", "<=", 3.0, two_step_mismatch},
      {"wiener", "worker-count-determinism", "<=", 0.0, worker_mismatch},
      {"wiener", "free-limit-sigmas", "<=", 3.0, free_limit},
      {"classical", "quadratic-ehrenfest", "<=", 1e-8, quadratic_exactness},
      {"classical", "quartic-energy-drift", "<=", 1e-8, quartic_energy},
      {"classical", "flow-time-reversal", "<=", 1e-8, flow_reversal},
      {"classical", "action-integrand", "<=", 1e-6, action_identity},
      {"rotsym", "energy-L2-drift", "<=", 1e-8, [](const ExperimentConfig& c) { return rotsym_worst(c, 0); }},
      {"rotsym", "plane-reduction", "<=", 1e-8, [](const ExperimentConfig& c) { return rotsym_worst(c, 1); }},
      {"rotsym", "cauchy-schwarz", ">=", -1e-12, [](const ExperimentConfig& c) { return rotsym_worst(c, 2); }},
      {"rotsym", "h2-symbol-equivalence", "<=", 1e-5, h2_equivalence},
      {"rotsym", "h2-lower-bound", ">=", -1e-8,
       [](const ExperimentConfig&) { return ReducibleRepresentation({1.0, 0.5, 2.0, 1.0, 24}).min_eigenvalue(); }},
      {"rotsym", "fiducial-gaussian", "<=", 1e-6,
       [](const ExperimentConfig&) {
         const FiducialCheck f = fiducial_wavefunction_check({1.0, 0.5, 1.0, 1.0, 24}, {1.0, 1.0});
         return std::max(f.vacuum_residual, f.displaced_residual);
       }},
  };
  return list;
}

}  // namespace

RunOutput run_audit(const ExperimentConfig& cfg) {
  const std::string& suite = cfg.text("suite");
  RunOutput out;
  for (const Check& c : checks()) {
    if (suite != "all" && suite != c.suite) continue;
    const auto t0 = std::chrono::steady_clock::now();
    double value = 0.0;
    bool pass = false;
    std::string error;
    try {
      value = c.measure(cfg);
      pass = c.comparison == "<=" ? value <= c.tolerance : value >= c.tolerance;
    } catch (const Error& e) {
      error = e.what();
    }
    ResultRecord r;
    r.command = cfg.command();
    r.kind = "check";
    r.config = cfg.snapshot();
    r.values["suite"] = c.suite;
    r.values["check"] = c.name;
    r.values["value"] = value;
    r.values["comparison"] = c.comparison;
    r.values["tolerance"] = c.tolerance;
    r.values["pass"] = pass;
    if (!error.empty()) r.values["error"] = error;
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.records.push_back(r);
    if (!pass) out.audit_failed = true;
  }
  return out;
}

}  // namespace cslab
