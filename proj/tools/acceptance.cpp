// Acceptance run: one PASS/FAIL line per criterion, each with its measured
// value, threshold and wall time. Exit status 1 when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "cslab/classical.hpp"
#include "cslab/errors.hpp"
#include "cslab/harness.hpp"
#include "cslab/propagators.hpp"
#include "cslab/rotsym.hpp"
#include "cslab/wiener.hpp"

using namespace cslab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome overlap_kernel() {
  std::vector<PhasePoint> pts;
  std::vector<FockVector> states;
  for (int i = 0; i < 10; ++i) {
    pts.push_back({-2.0 + 4.0 * i / 9.0, 2.0 - 4.0 * ((i * 3) % 10) / 9.0});
    states.push_back(coherent_state(pts.back(), 64));
  }
  double worst = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      worst = std::max(worst, std::abs(states[i].inner(states[j]) - overlap_analytic(pts[i], pts[j])));
  return {worst <= 1e-8, fmt("max |numeric - closed| = %.3e (<= 1e-8) over 100 pairs", worst)};
}

Outcome resolution() {
  const double dev = resolution_of_unity_check(32, 8.0, {0.2});
  return {dev <= 1e-6, fmt("max |M - 1| on 16 states = %.3e (<= 1e-6), R=8, D=32, spacing 0.2", dev)};
}

Outcome counters() {
  LatticeSpec lat;
  lat.T = 0.5;
  bool ok = true;
  std::string d;
  for (int n : {1, 3, 7}) {
    lat.slices = n;
    const PropagatorResult r = sliced_propagator_position(0.4, 0.0, lat, Hamiltonian::harmonic());
    ok = ok && r.momentum_sums == static_cast<std::size_t>(n + 1) && r.position_sums == static_cast<std::size_t>(n);
    d += fmt("N=%d: p %zu, q %zu; ", n, r.momentum_sums, r.position_sums);
  }
  return {ok, d + "expected N+1 and N"};
}

Outcome convergence() {
  LatticeSpec base;
  base.T = 0.5;
  const Hamiltonian ho = Hamiltonian::harmonic();
  const ConvergenceStudy q =
      convergence_study(PropagatorMethod::sliced_position, ho, {{0.0, 0.0}, {0.0, 0.4}}, {4, 8, 16, 32}, base);
  const ConvergenceStudy c = convergence_study(PropagatorMethod::sliced_cs, ho,
                                               {{0.0, 1.0}, {-std::sin(0.5), std::cos(0.5)}}, {4, 8, 16, 32}, base);
  auto in = [](double s) { return s >= -1.3 && s <= -0.7; };
  return {in(q.slope) && in(c.slope),
          fmt("slopes: position %.3f, coherent-state %.3f (in [-1.3, -0.7])", q.slope, c.slope)};
}

Outcome free_limit() {
  WienerConfig w;
  w.end = {0.0, 1.0};
  w.T = 1.0;
  w.samples = 1000000;
  w.workers = 0;
  std::vector<EstimateWithError> seq;
  double worst_rel = 0.0;
  for (double nu : {4.0, 8.0, 16.0, 32.0}) {
    w.nu = nu;
    w.steps = default_wiener_steps(nu, w.T);
    seq.push_back(wiener_propagator_mc(w, PhaseSymbol::zero()));
    worst_rel = std::max(worst_rel, seq.back().stderr / std::abs(seq.back().value));
  }
  const Extrapolation x = nu_extrapolate(seq);
  const cplx oracle = overlap_analytic(w.end, w.start);
  const double dev = std::abs(x.value - oracle);
  const bool ok = dev <= 3.0 * x.fit_error && worst_rel <= 0.1;
  return {ok, fmt("|extrapolated - overlap| = %.3e vs 3 x %.3e; max stderr/|value| = %.3f (<= 0.1)", dev,
                  x.fit_error, worst_rel)};
}

// Quadrature of the two-step integrand over the free midpoint z1, which is
// Gaussian about the endpoint average with variance nu dt / 2 per axis.
cplx two_step_quadrature(const WienerConfig& w, const PhaseSymbol& h) {
  const auto [x, wt] = gauss_hermite(80);
  const double dt = w.T / 2.0, sd = std::sqrt(w.nu * dt / 2.0);
  const PhasePoint a = w.start, b = w.end, mid{0.5 * (a.p + b.p), 0.5 * (a.q + b.q)};
  cplx e = 0.0;
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j) {
      const PhasePoint z{mid.p + std::sqrt(2.0) * sd * x[i], mid.q + std::sqrt(2.0) * sd * x[j]};
      const double pdq = 0.5 * (a.p + z.p) * (z.q - a.q) + 0.5 * (z.p + b.p) * (b.q - z.q);
      const double en = h(0.5 * (a.p + z.p), 0.5 * (a.q + z.q)) + h(0.5 * (z.p + b.p), 0.5 * (z.q + b.q));
      e += wt[i] * wt[j] / std::numbers::pi * std::polar(1.0, (pdq - en * dt) / w.hbar);
    }
  const double var = w.nu * w.T, dp = b.p - a.p, dq = b.q - a.q;
  return 2.0 * std::numbers::pi * w.hbar * lattice_normalization(w.nu, dt, 2) *
         std::exp(-(dp * dp + dq * dq) / (2 * var)) / (2 * std::numbers::pi * var) * e;
}

Outcome two_step() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    WienerConfig w;
    w.steps = 2;
    w.samples = 400000;
    w.seed = 100 + k;
    w.start = {u(rng), u(rng)};
    w.end = {u(rng), u(rng)};
    w.T = 0.5 + 0.3 * (u(rng) + 1.0);
    w.nu = 3.0 + 2.0 * (u(rng) + 1.0);
    w.estimator = WienerEstimator::plain;
    const PhaseSymbol h = PhaseSymbol::antinormal(Hamiltonian::quartic_normal(0.05 + 0.05 * (u(rng) + 1.0)));
    const EstimateWithError est = wiener_propagator_mc(w, h);
    worst = std::max(worst, std::abs(est.value - two_step_quadrature(w, h)) / est.stderr);
  }
  return {worst <= 3.0, fmt("max |MC - quadrature| / stderr = %.3f (<= 3) over 3 parameter sets", worst)};
}

Outcome covariance() {
  // Generators first: p dq - pbar dqbar - dGbar along random polygons.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const std::vector<std::pair<const char*, CanonicalMap>> maps{{"rotation", CanonicalMap::rotation(std::numbers::pi / 2)},
                                                               {"translation", CanonicalMap::translation(0.8, -0.5)}};
  double one_form = 0.0;
  for (const auto& [name, m] : maps)
    for (int t = 0; t < 100; ++t) {
      std::vector<PhasePoint> path, bar;
      for (int k = 0; k < 8; ++k) {
        path.push_back({u(rng), u(rng)});
        bar.push_back(m.forward(path.back()));
      }
      one_form = std::max(one_form, std::abs(midpoint_pdq(path) - midpoint_pdq(bar) -
                                             (m.generator(bar.back()) - m.generator(bar.front()))));
    }

  WienerConfig cfg;
  cfg.start = {0.2, -0.3};
  cfg.end = {-0.4, 0.6};
  cfg.T = 0.25;
  cfg.nu = 16.0;
  cfg.steps = default_wiener_steps(cfg.nu, cfg.T);
  cfg.samples = 200000;
  cfg.workers = 0;
  bool ok = one_form <= 1e-8;
  std::string d = fmt("generator one-form residual %.1e; ", one_form);
  const std::pair<const char*, PhaseSymbol> symbols[] = {{"H=0", PhaseSymbol::zero()},
                                                         {"HO", PhaseSymbol::antinormal(Hamiltonian::harmonic())}};
  for (const auto& [hname, h] : symbols)
    for (const auto& [mname, m] : maps) {
      const CovarianceReport r = covariance_check(m, cfg, h);
      const double ratio = r.discrepancy / r.combined_stderr;
      ok = ok && ratio <= 3.0;
      d += fmt("%s/%s %.2f sigma; ", hname, mname, ratio);
    }
  return {ok, d + "(<= 3)"};
}

Outcome classical_limit() {
  const OperatorAlgebra alg;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double a = 1.0 + 0.3 * u(rng), c = 1.0 + 0.3 * u(rng), b = 0.3 * u(rng);
    const Hamiltonian h(0.5 * (a * (alg.P() * alg.P()) + b * (alg.P() * alg.Q() + alg.Q() * alg.P()) +
                               c * (alg.Q() * alg.Q())) +
                        0.2 * u(rng) * alg.Q() + 0.2 * u(rng) * alg.P());
    worst = std::max(worst, compare_classical_quantum(h, {0.3 * u(rng), u(rng)}, 10.0, 1e-2, 64).max_deviation);
  }
  double dev[2];
  const double hbars[2] = {1.0, 0.25};
  for (int i = 0; i < 2; ++i)
    dev[i] = compare_classical_quantum(Hamiltonian::quartic_normal(0.05, hbars[i]), {0.0, 1.0}, 2.0, 1e-3, 64)
                 .max_deviation;
  const double ratio = dev[0] / dev[1];
  // hbar ratio 4: linear scaling within a factor 2 means [2, 8].
  return {worst <= 1e-8 && ratio >= 2.0 && ratio <= 8.0,
          fmt("quadratic max deviation %.3e (<= 1e-8) over T=10; quartic deviation %.3e at hbar=1, %.3e at "
              "hbar=0.25, ratio %.2f (in [2, 8])",
              worst, dev[0], dev[1], ratio)};
}

Outcome action_identity() {
  std::mt19937_64 rng(3);
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
  return {worst <= 1e-6, fmt("max pointwise residual %.3e (<= 1e-6) over 100 paths", worst)};
}

Outcome rotsym_classical() {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 0.7);
  double drift = 0.0, reduction = 0.0, cs = 1.0;
  for (int n : {2, 3, 6}) {
    RealVector p(n), q(n);
    for (int k = 0; k < n; ++k) {
      p[k] = g(rng);
      q[k] = g(rng);
    }
    const RotSymTrajectory t = rotsym_flow({n, 1.0, 0.1, 1.0}, p, q, 10.0, 1e-3);
    drift = std::max({drift, t.max_relative_energy_drift(), t.max_relative_L2_drift()});
    reduction = std::max(reduction, reduction_check(t).residual);
    cs = std::min(cs, t.min_cauchy_schwarz());
  }
  return {drift <= 1e-8 && reduction <= 1e-8 && cs >= -1e-12,
          fmt("E/L2 drift %.3e (<= 1e-8), reduction residual %.3e (<= 1e-8), min XZ-Y^2 %.3e (>= -1e-12)", drift,
              reduction, cs)};
}

Outcome rotsym_quantum() {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const ReducibleSpec s{0.6 + 0.8 * u(rng), 0.7 * (1.0 - u(rng)), 2.0 * u(rng), 1.0, 24};
    const PhasePoint z{2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0};
    worst = std::max(worst, std::abs(h2_symbol_fock(s, z) - h2_symbol_closed(s, z)));
  }
  const ReducibleSpec flat{1.0, 0.0, 2.0, 1.0, 24};
  const double flat_coupling = flat.induced_coupling();
  double flat_dev = 0.0;
  for (double q : {0.5, 1.0, 1.5}) flat_dev = std::max(flat_dev, std::abs(h2_symbol_fock(flat, {0.3, q}) - h2_symbol_closed(flat, {0.3, q})));
  double h1 = 0.0;
  for (int k = 0; k < 10; ++k) {
    const double m = 0.5 + u(rng);
    const PhasePoint z{2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0};
    h1 = std::max(h1, std::abs(h1_symbol_fock(m, z) - h1_symbol(m, z)));
  }
  return {worst <= 1e-5 && flat_coupling == 0.0 && flat_dev <= 1e-5 && h1 <= 1e-8,
          fmt("H2 max |Fock - closed| %.3e (<= 1e-5) over 50 draws; zeta=0 quartic coefficient %g (== 0), "
              "residual %.1e; H1 max deviation %.3e (<= 1e-8)",
              worst, flat_coupling, flat_dev, h1)};
}

Outcome span() {
  SpanOptions opts;
  opts.probes = 200;
  const SpanReport r = span_deficiency({1.0, 0.5, 1.0, 1.0, 24}, {0.0, 1.0}, opts);
  return {r.pinned_residual >= 10.0 * r.free_residual,
          fmt("pinned residual %.4e, free residual %.3e, ratio %.3g (>= 10); analytic floor %.4e",
              r.pinned_residual, r.free_residual, r.pinned_residual / r.free_residual,
              pinned_residual_floor({1.0, 0.5, 1.0, 1.0, 24}))};
}

Outcome determinism() {
  const std::vector<std::pair<std::string, std::string>> runs{
      {"wiener", "nu = 4,8,16\nsamples = 50000\nworkers = 3\nseed = 42\nhamiltonian = harmonic"},
      {"covariance", "samples = 20000\nmap = rotation\nworkers = 2\nseed = 7"},
      {"classical", "T = 1"},
      {"rotsym-quantum", "draws = 5\nspan_probes = 40\nseed = 3"},
  };
  bool ok = true;
  std::string d;
  for (const auto& [cmd, text] : runs) {
    const ExperimentConfig cfg = ExperimentConfig::parse(cmd, text);
    const RunOutput a = run_experiment(cfg), b = run_experiment(cfg);
    bool same = a.records.size() == b.records.size();
    for (std::size_t k = 0; same && k < a.records.size(); ++k) same = a.records[k].values.dump() == b.records[k].values.dump();
    if (a.table) same = same && b.table && a.table->rows == b.table->rows;
    ok = ok && same;
    d += (d.empty() ? "" : ", ") + cmd + (same ? " identical" : " DIFFERS");
  }
  return {ok, d + " on re-run"};
}

}  // namespace

int main() {
  const std::vector<std::tuple<int, const char*, double, std::function<Outcome()>>> criteria{
      {1, "overlap kernel", 5, overlap_kernel},
      {2, "resolution of unity", 60, resolution},
      {3, "integration counts", 1, counters},
      {4, "sliced convergence", 300, convergence},
      {5, "wiener free limit", 600, free_limit},
      {6, "wiener two-step quadrature", 120, two_step},
      {7, "covariance", 600, covariance},
      {8, "classical limit", 120, classical_limit},
      {9, "action identity", 60, action_identity},
      {10, "rotsym classical", 60, rotsym_classical},
      {11, "rotsym quantum", 300, rotsym_quantum},
      {12, "span deficiency", 120, span},
      {13, "determinism", 60, determinism},
  };
  int failed = 0;
  for (const auto& [id, name, limit, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < limit;
    failed += !pass;
    std::printf("%s %2d %s: %s [%.2f s, limit %.0f s]\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs,
                limit);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
