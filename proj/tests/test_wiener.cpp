#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "cslab/errors.hpp"
#include "cslab/propagators.hpp"
#include "cslab/wiener.hpp"

using namespace cslab;

namespace {

// Direct evaluation of the two-step lattice integral: the single free point
// z1 is Gaussian around the endpoint average with variance s/2 per axis, so
// the bridge expectation is a 2D Gauss-Hermite sum.
cplx two_step_quadrature(const WienerConfig& cfg, const PhaseSymbol& h, int nodes) {
  const auto [x, w] = gauss_hermite(nodes);
  const double dt = cfg.T / 2.0;
  const double s = cfg.nu * cfg.hbar * dt;
  const double sd = std::sqrt(s / 2.0);
  const PhasePoint a = cfg.start, b = cfg.end;
  const PhasePoint mid{0.5 * (a.p + b.p), 0.5 * (a.q + b.q)};
  cplx expectation = 0.0;
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j) {
      const PhasePoint z{mid.p + std::sqrt(2.0) * sd * x[i], mid.q + std::sqrt(2.0) * sd * x[j]};
      const double pdq = 0.5 * (a.p + z.p) * (z.q - a.q) + 0.5 * (z.p + b.p) * (b.q - z.q);
      const double energy = h(0.5 * (a.p + z.p), 0.5 * (a.q + z.q)) + h(0.5 * (z.p + b.p), 0.5 * (z.q + b.q));
      expectation += w[i] * w[j] / std::numbers::pi * std::polar(1.0, (pdq - energy * dt) / cfg.hbar);
    }
  const double dp = b.p - a.p, dq = b.q - a.q;
  const double var = cfg.nu * cfg.hbar * cfg.T;
  const double density = std::exp(-(dp * dp + dq * dq) / (2 * var)) / (2 * std::numbers::pi * var);
  const double norm = (1 + 0.5 * cfg.nu * dt) * (1 + 0.5 * cfg.nu * dt);
  return 2 * std::numbers::pi * cfg.hbar * norm * density * expectation;
}

}  // namespace

TEST_CASE("pinned bridges") {
  WienerConfig cfg;
  cfg.start = {0.3, -0.2};
  cfg.end = {1.0, 0.5};
  cfg.steps = 1;
  std::mt19937_64 rng(1);
  const BridgePath one = sample_pinned_bridge(cfg, rng);
  REQUIRE(one.points.size() == 2);
  CHECK(one.points[0] == cfg.start);
  CHECK(one.points[1] == cfg.end);

  cfg.steps = 17;
  for (int k = 0; k < 20; ++k) {
    const BridgePath b = sample_pinned_bridge(cfg, rng);
    CHECK(b.points.front() == cfg.start);
    CHECK(b.points.back() == cfg.end);
  }

  // Mean and variance of every interior point against the bridge law
  // (mean: linear interpolant, variance: nu hbar t (T - t)/T).
  WienerConfig z;
  z.nu = 1.0;
  z.T = 1.0;
  z.steps = 8;
  z.hbar = 1.0;
  const int n = 100000;
  std::vector<double> sum(z.steps + 1, 0.0), sum2(z.steps + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    const BridgePath b = sample_pinned_bridge(z, rng);
    for (int k = 0; k <= z.steps; ++k) {
      sum[k] += b.points[k].q;
      sum2[k] += b.points[k].q * b.points[k].q;
    }
  }
  for (int k = 1; k < z.steps; ++k) {
    const double t = k * z.dt();
    const double var = z.nu * t * (z.T - t) / z.T;
    const double mean = sum[k] / n;
    const double sample_var = sum2[k] / n - mean * mean;
    CHECK(std::abs(mean) <= 3.0 * std::sqrt(var / n));
    // variance of the sample variance of a Gaussian: 2 var^2 / n
    CHECK(std::abs(sample_var - var) <= 3.0 * var * std::sqrt(2.0 / n));
  }
}

TEST_CASE("midpoint action") {
  BridgePath still;
  still.dt = 0.1;
  still.points.assign(5, PhasePoint{0.4, -1.0});
  CHECK(midpoint_pdq(still.points) == 0.0);

  // Rectangle [0,a] x [0,b] traversed in both orientations.
  const double a = 1.7, b = 0.6;
  std::vector<PhasePoint> loop{{0, 0}, {0, b}, {a, b}, {a, 0}, {0, 0}};
  CHECK(std::abs(midpoint_pdq(loop)) == doctest::Approx(a * b).epsilon(1e-15));
  std::vector<PhasePoint> rev(loop.rbegin(), loop.rend());
  CHECK(midpoint_pdq(rev) == doctest::Approx(-midpoint_pdq(loop)).epsilon(1e-15));

  // Any closed polygon: the planimeter identity with the shoelace area.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 50; ++t) {
    std::vector<PhasePoint> poly;
    for (int k = 0; k < 7; ++k) poly.push_back({u(rng), u(rng)});
    poly.push_back(poly.front());
    double shoelace = 0.0;
    for (std::size_t k = 0; k + 1 < poly.size(); ++k)
      shoelace += poly[k].p * poly[k + 1].q - poly[k + 1].p * poly[k].q;
    CHECK(midpoint_pdq(poly) == doctest::Approx(0.5 * shoelace).epsilon(1e-13));
  }

  WienerConfig cfg;
  cfg.steps = 9;
  cfg.T = 0.9;
  cfg.hbar = 0.5;
  cfg.end = {0.2, 0.4};
  const BridgePath path = sample_pinned_bridge(cfg, rng);
  const double c = 1.3;
  const cplx with = stratonovich_action(path, PhaseSymbol::constant(c), cfg.hbar);
  const cplx without = stratonovich_action(path, PhaseSymbol::zero(), cfg.hbar);
  CHECK(std::abs((with - without) - cplx(0.0, -c * cfg.T / cfg.hbar)) <= 1e-13);
}

TEST_CASE("phase symbols") {
  const Hamiltonian quart = Hamiltonian::quartic_normal(0.2, 0.7);
  const PhaseSymbol anti = PhaseSymbol::antinormal(quart);
  const PhaseSymbol normal = PhaseSymbol::normal(quart);
  for (PhasePoint z : {PhasePoint{0.3, -0.8}, PhasePoint{1.2, 0.5}}) {
    CHECK(anti(z.p, z.q) == doctest::Approx(quart.antinormal_symbol(z)).epsilon(1e-14));
    CHECK(normal(z.p, z.q) == doctest::Approx(quart.normal_symbol(z)).epsilon(1e-14));
    const auto [h0, h1, h2] = anti.momentum_coefficients(z.q);
    CHECK(h2 * z.p * z.p + h1 * z.p + h0 == doctest::Approx(anti(z.p, z.q)).epsilon(1e-14));
  }
  CHECK(anti.momentum_degree() == 2);
  CHECK(PhaseSymbol::zero().momentum_degree() == 0);
}

TEST_CASE("wiener estimator, exact lattice cases") {
  const PhasePoint a{0.0, 0.0}, b{0.0, 1.0};
  // One step with nu dt = 2: the estimator is the overlap itself.
  WienerConfig cfg;
  cfg.start = a;
  cfg.end = b;
  cfg.T = 1.0;
  cfg.nu = 2.0;
  cfg.steps = 1;
  cfg.samples = 16;
  for (auto est : {WienerEstimator::plain, WienerEstimator::conditional}) {
    cfg.estimator = est;
    const EstimateWithError e = wiener_propagator_mc(cfg, PhaseSymbol::zero());
    CHECK(std::abs(e.value - overlap_analytic(b, a)) <= 1e-14);
    CHECK(e.stderr <= 1e-14);
  }
  // Constant energy shifts only the phase, path by path.
  cfg.steps = 12;
  cfg.nu = 6.0;
  cfg.samples = 5000;
  cfg.estimator = WienerEstimator::plain;
  const EstimateWithError e0 = wiener_propagator_mc(cfg, PhaseSymbol::zero());
  const EstimateWithError e1 = wiener_propagator_mc(cfg, PhaseSymbol::constant(0.8));
  CHECK(std::abs(e1.value - std::polar(1.0, -0.8 * cfg.T) * e0.value) <= 1e-12);
}

TEST_CASE("two-step estimator against direct quadrature") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Hamiltonian quart = Hamiltonian::quartic_normal(0.1);
  const PhaseSymbol ho = PhaseSymbol::antinormal(Hamiltonian::harmonic());
  const PhaseSymbol q4 = PhaseSymbol::antinormal(quart);
  for (int trial = 0; trial < 3; ++trial) {
    WienerConfig cfg;
    cfg.steps = 2;
    cfg.start = {u(rng), u(rng)};
    cfg.end = {u(rng), u(rng)};
    cfg.T = 0.3 + 0.5 * (u(rng) + 1.0);
    cfg.nu = 2.0 + 3.0 * (u(rng) + 1.0);
    cfg.samples = 200000;
    cfg.seed = 100 + trial;
    for (const PhaseSymbol* h : {&ho, &q4}) {
      const cplx quad = two_step_quadrature(cfg, *h, 80);
      for (auto est : {WienerEstimator::plain, WienerEstimator::conditional}) {
        if (est == WienerEstimator::conditional && h->momentum_degree() > 2) continue;
        cfg.estimator = est;
        const EstimateWithError e = wiener_propagator_mc(cfg, *h);
        CHECK(std::abs(e.value - quad) <= 3.0 * e.stderr);
      }
    }
  }
}

TEST_CASE("wiener estimator statistics and determinism") {
  WienerConfig cfg;
  cfg.start = {0.0, 0.0};
  cfg.end = {0.0, 1.0};
  cfg.nu = 8.0;
  cfg.steps = default_wiener_steps(cfg.nu, cfg.T);
  cfg.samples = 40000;
  cfg.estimator = WienerEstimator::plain;
  const PhaseSymbol h = PhaseSymbol::antinormal(Hamiltonian::harmonic());

  const EstimateWithError one = wiener_propagator_mc(cfg, h);
  cfg.workers = 3;
  const EstimateWithError three = wiener_propagator_mc(cfg, h);
  CHECK(one.value == three.value);
  CHECK(one.stderr == three.stderr);

  cfg.workers = 1;
  cfg.samples *= 4;
  cfg.seed = 9;
  const EstimateWithError more = wiener_propagator_mc(cfg, h);
  CHECK(one.stderr / more.stderr == doctest::Approx(2.0).epsilon(0.25));
  CHECK(std::abs(one.value - more.value) <= 3.0 * std::hypot(one.stderr, more.stderr));

  cfg.samples = 40000;
  cfg.estimator = WienerEstimator::conditional;
  const EstimateWithError cond = wiener_propagator_mc(cfg, h);
  CHECK(cond.stderr < one.stderr);
  CHECK(std::abs(cond.value - one.value) <= 3.0 * std::hypot(one.stderr, cond.stderr));

  CHECK_THROWS_AS(wiener_propagator_mc(cfg, PhaseSymbol::antinormal(Hamiltonian(OperatorAlgebra().P().pow(4)))),
                  ParameterError);
  WienerConfig bad = cfg;
  bad.nu = -1.0;
  CHECK_THROWS_AS(validate(bad), ValidationError);
}

TEST_CASE("free propagator approaches the overlap") {
  WienerConfig cfg;
  cfg.start = {0.0, 0.0};
  cfg.end = {0.0, 1.0};
  cfg.T = 1.0;
  cfg.samples = 100000;
  const cplx target = overlap_analytic(cfg.end, cfg.start);
  for (double nu : {8.0, 16.0}) {
    cfg.nu = nu;
    cfg.steps = default_wiener_steps(nu, cfg.T);
    const EstimateWithError e = wiener_propagator_mc(cfg, PhaseSymbol::zero());
    CHECK(std::abs(e.value - target) <= 3.0 * e.stderr);
    CHECK_FALSE(e.low_confidence);
  }
}

TEST_CASE("harmonic oscillator, nu extrapolation") {
  // At T = 0.25 the finite-nu bias only settles into its 1/nu form once
  // nu T is several units, so the sequence starts at nu = 16.
  const Hamiltonian ho = Hamiltonian::harmonic();
  WienerConfig cfg;
  cfg.start = {0.0, 0.0};
  cfg.end = {0.0, 1.0};
  cfg.T = 0.25;
  cfg.samples = 400000;
  std::vector<EstimateWithError> seq;
  for (double nu : {16.0, 32.0, 64.0}) {
    cfg.nu = nu;
    cfg.steps = default_wiener_steps(nu, cfg.T);
    seq.push_back(wiener_propagator_mc(cfg, PhaseSymbol::antinormal(ho)));
  }
  const Extrapolation x = nu_extrapolate(seq);
  const cplx exact = exact_cs_element(cfg.start, cfg.end, cfg.T, ho).value;
  CHECK(std::abs(x.value - exact) <= 3.0 * x.fit_error);
  CHECK(std::abs(x.value - exact) < std::abs(seq.back().value - exact));
}

TEST_CASE("nu extrapolation fits") {
  std::vector<EstimateWithError> flat;
  for (double nu : {4.0, 8.0, 16.0}) flat.push_back({cplx(0.3, -0.2), 0.0, 100, nu});
  const Extrapolation f = nu_extrapolate(flat);
  CHECK(std::abs(f.value - cplx(0.3, -0.2)) <= 1e-14);
  CHECK_FALSE(f.unreliable);

  std::vector<EstimateWithError> model;
  for (double nu : {4.0, 8.0, 16.0, 32.0}) model.push_back({cplx(1.0, 0.0) + 0.3 / nu, 0.0, 100, nu});
  const Extrapolation m = nu_extrapolate(model);
  CHECK(std::abs(m.value - 1.0) <= 1e-10);
  CHECK(std::abs(m.slope - 0.3) <= 1e-10);

  // Noisy data far from the ansatz is flagged.
  std::vector<EstimateWithError> noisy;
  const double vals[] = {1.0, 0.5, 1.2, 0.4};
  int i = 0;
  for (double nu : {4.0, 8.0, 16.0, 32.0}) noisy.push_back({cplx(vals[i++], 0.0), 0.01, 100, nu});
  CHECK(nu_extrapolate(noisy).unreliable);

  CHECK_THROWS_AS(nu_extrapolate({flat[0], flat[1]}), ParameterError);
  CHECK_THROWS_AS(nu_extrapolate({flat[1], flat[0], flat[2]}), ParameterError);
}

TEST_CASE("canonical maps") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const std::vector<CanonicalMap> maps{CanonicalMap::identity(), CanonicalMap::rotation(std::numbers::pi / 2),
                                       CanonicalMap::rotation(0.7), CanonicalMap::translation(0.5, -1.5),
                                       CanonicalMap::affine(2.0, 0.3, 0.0, 0.5, 0.1, 0.2)};
  for (const auto& m : maps) {
    for (int k = 0; k < 20; ++k) {
      const PhasePoint z{u(rng), u(rng)};
      const PhasePoint back = m.inverse(m.forward(z));
      CHECK(std::abs(back.p - z.p) <= 1e-12);
      CHECK(std::abs(back.q - z.q) <= 1e-12);
    }
    // p dq - pbar dqbar - dGbar vanishes along random polygonal paths.
    for (int t = 0; t < 100; ++t) {
      std::vector<PhasePoint> path, bar;
      for (int k = 0; k < 6; ++k) {
        path.push_back({u(rng), u(rng)});
        bar.push_back(m.forward(path.back()));
      }
      const double lhs = midpoint_pdq(path) - midpoint_pdq(bar) - (m.generator(bar.back()) - m.generator(bar.front()));
      CHECK(std::abs(lhs) <= 1e-8);
    }
  }

  // Quarter turn: (pbar, qbar) = (-q, p) and Gbar = -pbar qbar.
  const CanonicalMap quarter = CanonicalMap::rotation(std::numbers::pi / 2);
  const PhasePoint z{0.4, 1.3};
  const PhasePoint zb = quarter.forward(z);
  CHECK(zb.p == doctest::Approx(-z.q));
  CHECK(zb.q == doctest::Approx(z.p));
  CHECK(quarter.generator(zb) == doctest::Approx(-zb.p * zb.q));

  // dGbar by finite differences along a smooth path matches p dq - pbar dqbar.
  const CanonicalMap shift = CanonicalMap::translation(0.7, -0.3);
  for (const CanonicalMap* m : {&quarter, &shift}) {
    const double h = 1e-5;
    for (double t = 0.1; t < 3.0; t += 0.37) {
      auto path = [](double s) { return PhasePoint{std::cos(1.3 * s) + 0.2 * s, std::sin(s) - 0.1 * s * s}; };
      auto dpath = [](double s) { return PhasePoint{-1.3 * std::sin(1.3 * s) + 0.2, std::cos(s) - 0.2 * s}; };
      const PhasePoint x = path(t), v = dpath(t);
      const double dG = (m->generator(m->forward(path(t + h))) - m->generator(m->forward(path(t - h)))) / (2 * h);
      const PhasePoint xb = m->forward(x);
      const double dqbar = (m->forward(path(t + h)).q - m->forward(path(t - h)).q) / (2 * h);
      CHECK(std::abs(x.p * v.q - xb.p * dqbar - dG) <= 1e-8);
    }
  }
  // Translation (p + a, q + b): Gbar = -a qbar up to a constant.
  CHECK(shift.generator({1.0, 2.0}) - shift.generator({5.0, 0.5}) == doctest::Approx(-0.7 * (2.0 - 0.5)));

  CHECK(quarter.is_isometry());
  CHECK(shift.is_isometry());
  CHECK_FALSE(maps.back().is_isometry());
  CHECK_THROWS_AS(CanonicalMap::affine(2.0, 0.0, 0.0, 2.0, 0.0, 0.0), ParameterError);

  const PhaseSymbol h = PhaseSymbol::antinormal(Hamiltonian::quartic_normal(0.1));
  const PhaseSymbol hb = quarter.transform(h);
  CHECK(hb(zb.p, zb.q) == doctest::Approx(h(z.p, z.q)).epsilon(1e-14));
}

TEST_CASE("covariance under phase-plane isometries") {
  WienerConfig cfg;
  cfg.start = {0.2, -0.3};
  cfg.end = {-0.4, 0.6};
  cfg.T = 1.0;
  cfg.nu = 8.0;
  cfg.steps = default_wiener_steps(cfg.nu, cfg.T);
  cfg.samples = 50000;
  const PhaseSymbol zero = PhaseSymbol::zero();

  const CovarianceReport id = covariance_check(CanonicalMap::identity(), cfg, zero);
  CHECK(id.discrepancy == 0.0);

  for (const CanonicalMap& m : {CanonicalMap::rotation(std::numbers::pi / 2), CanonicalMap::translation(0.8, -0.5)}) {
    const CovarianceReport r = covariance_check(m, cfg, zero);
    CHECK(r.transformed.seed != r.original.seed);
    CHECK(r.discrepancy <= 3.0 * r.combined_stderr);
  }

  cfg.T = 0.25;
  cfg.nu = 16.0;
  cfg.steps = default_wiener_steps(cfg.nu, cfg.T);
  const PhaseSymbol ho = PhaseSymbol::antinormal(Hamiltonian::harmonic());
  for (const CanonicalMap& m : {CanonicalMap::rotation(std::numbers::pi / 2), CanonicalMap::translation(0.8, -0.5)}) {
    const CovarianceReport r = covariance_check(m, cfg, ho);
    CHECK(r.discrepancy <= 3.0 * r.combined_stderr);
  }

  // With a shared stream a translation maps every path onto its image, so
  // the two frames agree sample by sample.
  const CanonicalMap shift = CanonicalMap::translation(0.8, -0.5);
  WienerConfig barred = cfg;
  barred.start = shift.forward(cfg.start);
  barred.end = shift.forward(cfg.end);
  barred.estimator = cfg.estimator = WienerEstimator::plain;
  const cplx a = wiener_propagator_mc(cfg, ho).value;
  const cplx b = wiener_propagator_mc(barred, shift.transform(ho)).value *
                 std::polar(1.0, shift.generator(barred.end) - shift.generator(barred.start));
  CHECK(std::abs(a - b) <= 1e-10);

  CHECK_THROWS_AS(covariance_check(CanonicalMap::affine(2.0, 0.0, 0.0, 0.5, 0.0, 0.0), cfg, zero),
                  UnsupportedMapError);
}
