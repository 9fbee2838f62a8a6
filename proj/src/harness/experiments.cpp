#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "cslab/classical.hpp"
#include "cslab/errors.hpp"
#include "cslab/harness.hpp"
#include "cslab/propagators.hpp"
#include "cslab/rotsym.hpp"
#include "cslab/wiener.hpp"

namespace cslab {

RunOutput run_audit(const ExperimentConfig& cfg);

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

ResultRecord make_record(const ExperimentConfig& cfg, std::string kind, json values, Clock::time_point t0) {
  ResultRecord r;
  r.command = cfg.command();
  r.kind = std::move(kind);
  r.config = cfg.snapshot();
  r.values = std::move(values);
  r.wall_time = seconds_since(t0);
  return r;
}

void put_complex(json& j, const std::string& stem, cplx z) {
  j[stem + "_re"] = z.real();
  j[stem + "_im"] = z.imag();
}

Hamiltonian model(const std::string& name, double lambda, double hbar) {
  if (name == "free") return Hamiltonian::zero(1.0, hbar);
  if (name == "harmonic") return Hamiltonian::harmonic(1.0, hbar);
  if (name == "quartic") return Hamiltonian::quartic_normal(lambda, hbar);
  const OperatorAlgebra alg(1.0, hbar);
  if (name == "cubic") return Hamiltonian(alg.Q().pow(3), 1.0, hbar);
  if (name == "linear") return Hamiltonian(alg.Q(), 1.0, hbar);
  throw ValidationError("hamiltonian", "a known model");
}

std::uint64_t seed_of(const ExperimentConfig& cfg) { return std::stoull(cfg.text("seed")); }

PhasePoint start_of(const ExperimentConfig& cfg) { return {cfg.real("start_p"), cfg.real("start_q")}; }
PhasePoint end_of(const ExperimentConfig& cfg) { return {cfg.real("end_p"), cfg.real("end_q")}; }

RunOutput run_overlap(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const double hbar = cfg.real("hbar");
  const std::size_t dim = cfg.integer("dim");
  RunOutput out;
  const PhasePoint bra{cfg.real("bra_p"), cfg.real("bra_q")}, ket{cfg.real("ket_p"), cfg.real("ket_q")};
  const cplx numeric = coherent_state(bra, dim, hbar).inner(coherent_state(ket, dim, hbar));
  const cplx exact = overlap_analytic(bra, ket, hbar);
  json v;
  put_complex(v, "numeric", numeric);
  put_complex(v, "analytic", exact);
  v["difference"] = std::abs(numeric - exact);
  v["dim"] = dim;
  out.records.push_back(make_record(cfg, "overlap", v, t0));

  const long n = cfg.integer("grid");
  if (n > 0) {
    const auto t1 = Clock::now();
    const double e = cfg.real("extent");
    std::vector<PhasePoint> pts;
    std::vector<FockVector> states;
    for (long i = 0; i < n; ++i) {
      const double step = n > 1 ? 2.0 * e / (n - 1) : 0.0;
      pts.push_back({-e + step * i, e - step * ((7 * i) % n)});
      states.push_back(coherent_state(pts.back(), dim, hbar));
    }
    double worst = 0.0, sum = 0.0;
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        const double d = std::abs(states[i].inner(states[j]) - overlap_analytic(pts[i], pts[j], hbar));
        worst = std::max(worst, d);
        sum += d;
      }
    json s;
    s["pairs"] = n * n;
    s["max_difference"] = worst;
    s["mean_difference"] = sum / static_cast<double>(n * n);
    out.records.push_back(make_record(cfg, "summary", s, t1));
  }
  return out;
}

RunOutput run_resolve_unity(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const std::size_t dim = cfg.integer("dim");
  const double R = cfg.real("radius"), hbar = cfg.real("hbar");
  json v;
  v["dim"] = dim;
  v["block"] = dim / 2;
  v["radius"] = R;
  v["spacing"] = cfg.real("spacing");
  v["max_deviation"] = resolution_of_unity_check(dim, R, {cfg.real("spacing")}, hbar);
  // missing weight of the last block state under the disc cutoff
  v["disc_deficit"] = 1.0 - poisson_tail(R * R / (2.0 * hbar), dim / 2);
  RunOutput out;
  out.records.push_back(make_record(cfg, "resolution", v, t0));
  return out;
}

RunOutput run_propagate(const ExperimentConfig& cfg) {
  const double hbar = cfg.real("hbar");
  const Hamiltonian h = model(cfg.text("hamiltonian"), cfg.real("lambda"), hbar);
  const PropagatorMethod method = parse_method(cfg.text("method"));
  LatticeSpec lat;
  lat.slices = static_cast<int>(cfg.integer("slices"));
  lat.T = cfg.real("T");
  lat.hbar = hbar;
  lat.position = {static_cast<std::size_t>(cfg.integer("grid_points")), cfg.real("grid_spacing")};
  lat.phase = {cfg.real("cs_spacing"), cfg.real("cs_radius")};
  const PhasePoint a = start_of(cfg), b = end_of(cfg);
  RunOutput out;

  const auto list = cfg.integer_list("convergence");
  if (!list.empty()) {
    const auto t0 = Clock::now();
    if (method == PropagatorMethod::exact) throw ValidationError("method", "sliced-q or sliced-cs for a convergence study");
    std::vector<int> sorted = list;
    std::sort(sorted.begin(), sorted.end());
    const ConvergenceStudy study = convergence_study(method, h, {a, b}, sorted, lat);
    CsvTable t;
    t.header = {"N", "value_re", "value_im", "error"};
    for (const auto& row : study.rows)
      t.add_row({std::to_string(row.slices), format_real(row.value.real()), format_real(row.value.imag()),
                 format_real(row.error)});
    out.table = t;
    json v;
    v["method"] = to_string(method);
    put_complex(v, "oracle", study.oracle);
    v["slope"] = study.slope;
    v["points"] = study.rows.size();
    out.records.push_back(make_record(cfg, "convergence", v, t0));
    return out;
  }

  const auto t0 = Clock::now();
  PropagatorResult r;
  json v;
  v["method"] = to_string(method);
  switch (method) {
    case PropagatorMethod::exact:
      r = exact_cs_element(a, b, lat.T, h, cfg.integer("dim"));
      break;
    case PropagatorMethod::sliced_position:
      r = sliced_propagator_position(b.q, a.q, lat, h);
      break;
    case PropagatorMethod::sliced_cs:
      r = sliced_propagator_cs(a, b, lat, h);
      break;
  }
  put_complex(v, "value", r.value);
  v["error_estimate"] = r.error_estimate;
  if (method == PropagatorMethod::exact) {
    v["unitarity_defect"] = r.unitarity_defect;
  } else {
    v["slices"] = lat.slices;
    v["momentum_sums"] = r.momentum_sums;
    v["position_sums"] = r.position_sums;
    v["phase_space_sums"] = r.phase_space_sums;
    v["boundary_mass"] = r.boundary_mass;
    v["boundary_warning"] = r.boundary_warning;
    if (method == PropagatorMethod::sliced_cs) {
      const cplx oracle = exact_cs_element(a, b, lat.T, h).value;
      put_complex(v, "oracle", oracle);
      v["oracle_difference"] = std::abs(r.value - oracle);
    } else {
      try {
        const cplx oracle = grid_exact_position(b.q, a.q, lat, h);
        put_complex(v, "oracle", oracle);
        v["oracle_difference"] = std::abs(r.value - oracle);
      } catch (const GridError&) {
        // the grid oracle needs grid-point endpoints
      }
    }
  }
  out.records.push_back(make_record(cfg, "propagator", v, t0));
  return out;
}

WienerConfig wiener_config(const ExperimentConfig& cfg, double nu) {
  WienerConfig w;
  w.nu = nu;
  w.T = cfg.real("T");
  w.steps = cfg.integer("steps") > 0 ? static_cast<int>(cfg.integer("steps")) : default_wiener_steps(nu, w.T);
  w.samples = static_cast<std::size_t>(cfg.integer("samples"));
  w.seed = seed_of(cfg);
  w.start = start_of(cfg);
  w.end = end_of(cfg);
  w.hbar = cfg.real("hbar");
  w.workers = static_cast<unsigned>(cfg.integer("workers"));
  const std::string& e = cfg.text("estimator");
  w.estimator = e == "plain" ? WienerEstimator::plain
                : e == "conditional" ? WienerEstimator::conditional
                                     : WienerEstimator::automatic;
  w.confidence_fraction = cfg.real("confidence");
  return w;
}

PhaseSymbol wiener_symbol(const ExperimentConfig& cfg, const Hamiltonian& h) {
  return cfg.text("symbol") == "normal" ? PhaseSymbol::normal(h) : PhaseSymbol::antinormal(h);
}

json estimate_values(const EstimateWithError& e) {
  json v;
  v["nu"] = e.nu;
  v["value_re"] = e.value.real();
  v["value_im"] = e.value.imag();
  v["stderr"] = e.stderr;
  v["samples"] = e.samples;
  v["steps"] = e.steps;
  v["seed"] = e.seed;
  v["estimator"] = e.estimator == WienerEstimator::conditional ? "conditional" : "plain";
  v["low_confidence"] = e.low_confidence;
  return v;
}

RunOutput run_wiener(const ExperimentConfig& cfg) {
  const double hbar = cfg.real("hbar");
  const Hamiltonian h = model(cfg.text("hamiltonian"), cfg.real("lambda"), hbar);
  const PhaseSymbol symbol = wiener_symbol(cfg, h);
  const PhasePoint a = start_of(cfg), b = end_of(cfg);
  const cplx oracle = exact_cs_element(a, b, cfg.real("T"), h).value;
  RunOutput out;
  std::vector<EstimateWithError> estimates;
  for (double nu : cfg.real_list("nu")) {
    const auto t0 = Clock::now();
    const EstimateWithError e = wiener_propagator_mc(wiener_config(cfg, nu), symbol);
    estimates.push_back(e);
    json v = estimate_values(e);
    put_complex(v, "oracle", oracle);
    v["deviation"] = std::abs(e.value - oracle);
    out.records.push_back(make_record(cfg, "estimate", v, t0));
  }
  if (estimates.size() >= 3) {
    const auto t0 = Clock::now();
    std::sort(estimates.begin(), estimates.end(), [](const auto& x, const auto& y) { return x.nu < y.nu; });
    const Extrapolation x = nu_extrapolate(estimates);
    json v;
    put_complex(v, "value", x.value);
    put_complex(v, "slope", x.slope);
    v["stderr"] = x.stderr;
    v["fit_error"] = x.fit_error;
    v["chi2_per_dof"] = x.chi2_per_dof;
    v["unreliable"] = x.unreliable;
    put_complex(v, "oracle", oracle);
    v["deviation"] = std::abs(x.value - oracle);
    out.records.push_back(make_record(cfg, "extrapolation", v, t0));
  }
  return out;
}

RunOutput run_covariance(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const double hbar = cfg.real("hbar");
  const Hamiltonian h = model(cfg.text("hamiltonian"), cfg.real("lambda"), hbar);
  const std::string& name = cfg.text("map");
  const CanonicalMap map = name == "identity"   ? CanonicalMap::identity()
                           : name == "rotation" ? CanonicalMap::rotation(cfg.real("angle"))
                                                : CanonicalMap::translation(cfg.real("shift_p"), cfg.real("shift_q"));
  const CovarianceReport r = covariance_check(map, wiener_config(cfg, cfg.real("nu")), wiener_symbol(cfg, h));
  json v;
  v["map"] = name;
  v["nu"] = r.original.nu;
  v["steps"] = r.original.steps;
  v["samples"] = r.original.samples;
  put_complex(v, "original", r.original.value);
  put_complex(v, "transformed", r.transformed.value);
  v["original_stderr"] = r.original.stderr;
  v["transformed_stderr"] = r.transformed.stderr;
  v["original_seed"] = r.original.seed;
  v["transformed_seed"] = r.transformed.seed;
  v["discrepancy"] = r.discrepancy;
  v["combined_stderr"] = r.combined_stderr;
  v["within_3_stderr"] = r.discrepancy <= 3.0 * r.combined_stderr;
  RunOutput out;
  out.records.push_back(make_record(cfg, "covariance", v, t0));
  return out;
}

RunOutput run_classical(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const Hamiltonian h = model(cfg.text("hamiltonian"), cfg.real("lambda"), cfg.real("hbar"));
  const PhasePoint start{cfg.real("start_p"), cfg.real("start_q")};
  const ClassicalComparison c =
      compare_classical_quantum(h, start, cfg.real("T"), cfg.real("dt"), static_cast<std::size_t>(cfg.integer("dim")));
  const long every = cfg.integer("record_every");
  CsvTable t;
  t.header = {"t", "p", "q", "energy", "source-tag"};
  for (std::size_t k = 0; k < c.quantum.size(); ++k) {
    if (k % every != 0 && k + 1 != c.quantum.size()) continue;
    for (const auto& [traj, tag] : {std::pair{&c.quantum, "quantum"}, std::pair{&c.classical, "classical"}})
      t.add_row({format_real(traj->times[k]), format_real(traj->points[k].p), format_real(traj->points[k].q),
                 format_real(traj->energy[k]), tag});
  }
  json v;
  v["max_deviation"] = c.max_deviation;
  v["rms_deviation"] = c.rms_deviation;
  v["antinormal_max_deviation"] = c.antinormal_max_deviation;
  v["energy_drift"] = c.energy_drift;
  v["samples"] = c.quantum.size();
  RunOutput out;
  out.table = t;
  out.records.push_back(make_record(cfg, "summary", v, t0));
  return out;
}

RunOutput run_rotsym_classical(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  RotSymSpec spec;
  spec.N = static_cast<int>(cfg.integer("N"));
  spec.m0 = cfg.real("m0");
  spec.lambda0 = cfg.real("lambda0");
  spec.hbar = cfg.real("hbar");
  RealVector p = RealVector::Zero(spec.N), q = RealVector::Zero(spec.N);
  const std::string& init = cfg.text("init");
  if (init == "random") {
    std::mt19937_64 rng(seed_of(cfg));
    std::normal_distribution<double> g;
    for (int k = 0; k < spec.N; ++k) {
      p[k] = g(rng);
      q[k] = g(rng);
    }
  } else if (init == "plane" && spec.N >= 2) {
    q[0] = 1.0;
    p[1] = 1.0;
  } else {
    q[0] = 1.0;
    p[0] = 2.0;
  }
  const RotSymTrajectory tr = rotsym_flow(spec, p, q, cfg.real("T"), cfg.real("dt"), cfg.integer("record_every"));
  const ReductionReport red = reduction_check(tr);
  CsvTable t;
  t.header = {"t", "energy", "X", "Y", "Z", "L2"};
  for (int k = 0; k < spec.N; ++k) t.header.push_back("q" + std::to_string(k));
  for (int k = 0; k < spec.N; ++k) t.header.push_back("p" + std::to_string(k));
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    std::vector<std::string> row{format_real(tr.times[i]), format_real(tr.energy[i]), format_real(tr.inv[i].X),
                                 format_real(tr.inv[i].Y), format_real(tr.inv[i].Z), format_real(tr.L2[i])};
    for (int k = 0; k < spec.N; ++k) row.push_back(format_real(tr.q[i][k]));
    for (int k = 0; k < spec.N; ++k) row.push_back(format_real(tr.p[i][k]));
    t.add_row(row);
  }
  json v;
  v["N"] = spec.N;
  v["energy_drift"] = tr.max_relative_energy_drift();
  v["L2_drift"] = tr.max_relative_L2_drift();
  v["min_XZ_minus_Y2"] = tr.min_cauchy_schwarz();
  v["collinear"] = red.collinear;
  v["reduction_residual"] = red.residual;
  RunOutput out;
  out.table = t;
  out.records.push_back(make_record(cfg, "summary", v, t0));
  return out;
}

RunOutput run_rotsym_quantum(const ExperimentConfig& cfg) {
  RunOutput out;
  const auto t0 = Clock::now();
  ReducibleSpec spec;
  spec.m = cfg.real("m");
  spec.zeta = cfg.real("zeta");
  spec.beta = cfg.real("beta");
  spec.hbar = cfg.real("hbar");
  spec.dim_per_mode = static_cast<std::size_t>(cfg.integer("dim_per_mode"));
  const PhasePoint z{cfg.real("p"), cfg.real("q")};
  const ReducibleRepresentation rep(spec);
  json v;
  v["p"] = z.p;
  v["q"] = z.q;
  v["closed"] = h2_symbol_closed(spec, z);
  v["fock"] = rep.symbol(z);
  v["difference"] = std::abs(v["fock"].get<double>() - v["closed"].get<double>());
  v["m0"] = std::sqrt(spec.induced_mass2());
  v["lambda0"] = spec.induced_coupling();
  v["h1_closed"] = h1_symbol(spec.m, z);
  v["h1_fock"] = h1_symbol_fock(spec.m, z, spec.hbar, cfg.integer("dim"));
  v["h1_difference"] = std::abs(v["h1_fock"].get<double>() - v["h1_closed"].get<double>());
  v["vacuum_residual_a"] = rep.vacuum_residual_a();
  v["vacuum_residual_b"] = rep.vacuum_residual_b();
  v["min_eigenvalue"] = rep.min_eigenvalue();
  v["dim_per_mode"] = spec.dim_per_mode;
  v["working_dim"] = rep.working_dim();
  out.records.push_back(make_record(cfg, "symbol", v, t0));

  const long draws = cfg.integer("draws");
  if (draws > 0) {
    const auto t1 = Clock::now();
    std::mt19937_64 rng(seed_of(cfg));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0, sum = 0.0;
    for (long k = 0; k < draws; ++k) {
      ReducibleSpec r = spec;
      r.m = 0.6 + 0.8 * u(rng);
      r.zeta = 0.7 * (1.0 - u(rng));  // (0, 0.7]
      r.beta = 2.0 * u(rng);
      const PhasePoint w{2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0};
      const double d = std::abs(h2_symbol_fock(r, w) - h2_symbol_closed(r, w));
      worst = std::max(worst, d);
      sum += d;
    }
    json s;
    s["draws"] = draws;
    s["max_residual"] = worst;
    s["mean_residual"] = sum / static_cast<double>(draws);
    out.records.push_back(make_record(cfg, "audit-summary", s, t1));
  }

  const long probes = cfg.integer("span_probes");
  if (probes > 0) {
    const auto t1 = Clock::now();
    SpanOptions opts;
    opts.probes = static_cast<std::size_t>(probes);
    opts.seed = seed_of(cfg);
    const PhasePoint target{0.0, 1.0};
    const SpanReport r = span_deficiency(spec, target, opts);
    json s;
    s["probes"] = r.probes;
    s["target_p"] = target.p;
    s["target_q"] = target.q;
    s["free_residual"] = r.free_residual;
    s["pinned_residual"] = r.pinned_residual;
    s["pinned_floor"] = pinned_residual_floor(spec);
    s["free_condition"] = r.free_condition;
    s["pinned_condition"] = r.pinned_condition;
    out.records.push_back(make_record(cfg, "span", s, t1));
  }
  return out;
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& cfg) {
  const std::string& c = cfg.command();
  try {
    if (c == "overlap") return run_overlap(cfg);
    if (c == "resolve-unity") return run_resolve_unity(cfg);
    if (c == "propagate") return run_propagate(cfg);
    if (c == "wiener") return run_wiener(cfg);
    if (c == "covariance") return run_covariance(cfg);
    if (c == "classical") return run_classical(cfg);
    if (c == "rotsym-classical") return run_rotsym_classical(cfg);
    if (c == "rotsym-quantum") return run_rotsym_quantum(cfg);
    if (c == "audit") return run_audit(cfg);
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw Error(c + ": " + e.what());
  }
  throw ValidationError("command", "a known subcommand");
}

}  // namespace cslab
