#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "cslab/errors.hpp"
#include "cslab/fock.hpp"
#include "cslab/hamiltonian.hpp"

using namespace cslab;

namespace {

// Displaced-number amplitudes e^{-ipq/2hbar} e^{-|a|^2/2} a^n / sqrt(n!).
Vector closed_form_coherent(PhasePoint pt, int dim, double hbar, double mass) {
  const cplx alpha = cplx(mass * pt.q, pt.p) / std::sqrt(2.0 * mass * hbar);
  Vector v(dim);
  cplx term = std::exp(-0.5 * std::norm(alpha)) * std::polar(1.0, -pt.p * pt.q / (2.0 * hbar));
  for (int n = 0; n < dim; ++n) {
    v[n] = term;
    term *= alpha / std::sqrt(n + 1.0);
  }
  return v;
}

double poisson_cdf(int n, double lambda) {
  double s = 0.0;
  for (int k = 0; k <= n; ++k) s += std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
  return s;
}

}  // namespace

TEST_CASE("ladder operators") {
  auto [a2, ad2] = build_ladder(2);
  CHECK(a2.matrix()(0, 1) == cplx(1.0));
  CHECK(a2.matrix().cwiseAbs().sum() == doctest::Approx(1.0));

  auto [a4, ad4] = build_ladder(4);
  const Matrix n = ad4.matrix() * a4.matrix();
  for (int k = 0; k < 4; ++k) CHECK(n(k, k).real() == doctest::Approx(k));

  auto [a, ad] = build_ladder(64);
  const Matrix comm = a.matrix() * ad.matrix() - ad.matrix() * a.matrix();
  CHECK((comm.topLeftCorner(32, 32) - Matrix::Identity(32, 32)).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(build_ladder(1), DimensionError);
}

TEST_CASE("position and momentum") {
  auto [q, p] = build_qp(32, 1.0, 1.0);
  Vector vac = Vector::Zero(32);
  vac[0] = 1.0;
  CHECK((q.matrix() * vac + cplx(0, 1) * (p.matrix() * vac)).norm() <= 1e-12);

  const double hbar = 0.7;
  auto [q2, p2] = build_qp(32, 1.3, hbar);
  const Matrix comm = q2.matrix() * p2.matrix() - p2.matrix() * q2.matrix();
  CHECK((comm.topLeftCorner(16, 16) - cplx(0, hbar) * Matrix::Identity(16, 16)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(q2.is_hermitian());
  CHECK(p2.is_hermitian());

  auto [qm, pm] = build_qp(16, 2.0, 1.0);
  const double expected = 1.0 / (2.0 * 2.0);
  CHECK((qm.matrix() * qm.matrix())(0, 0).real() == doctest::Approx(expected).epsilon(1e-14));

  CHECK_THROWS_AS(build_qp(8, -1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(build_qp(8, 1.0, 0.0), ParameterError);
}

TEST_CASE("coherent states") {
  const FockVector vac = coherent_state({0.0, 0.0}, 16);
  CHECK(std::abs(vac.amplitudes()[0] - 1.0) <= 1e-15);
  CHECK(vac.amplitudes().tail(15).norm() <= 1e-15);

  const PhasePoint pt{0.3, -1.2};
  const FockVector s = coherent_state(pt, 64);
  CHECK(s.normalized());
  auto [q, p] = build_qp(64);
  CHECK(std::abs(q.expectation(s) - (-1.2)) <= 1e-10);
  CHECK(std::abs(p.expectation(s) - 0.3) <= 1e-10);

  CHECK_THROWS_AS(coherent_state({2.0, 2.0}, 8), TruncationError);
  try {
    coherent_state({2.0, 2.0}, 8);
  } catch (const TruncationError& e) {
    CHECK(e.suggested_dim() > 8);
    CHECK_NOTHROW(coherent_state({2.0, 2.0}, e.suggested_dim()));
  }
  CHECK_NOTHROW(coherent_state({2.0, 2.0}, 64));

  SUBCASE("matches the displaced-number closed form, including the phase") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (double hbar : {1.0, 0.5}) {
      for (double mass : {1.0, 1.7}) {
        for (int k = 0; k < 8; ++k) {
          const PhasePoint z{u(rng), u(rng)};
          const FockVector v = coherent_state(z, 64, hbar, mass);
          const Vector ref = closed_form_coherent(z, 64, hbar, mass);
          CHECK((v.amplitudes() - ref).cwiseAbs().maxCoeff() <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("overlap kernel") {
  CHECK(std::abs(overlap_analytic({0.7, -3.0}, {0.7, -3.0}) - 1.0) == 0.0);
  const cplx a = overlap_analytic({0.0, 0.0}, {0.0, 1.0});
  CHECK(a.real() == doctest::Approx(std::exp(-0.25)).epsilon(1e-15));
  CHECK(a.imag() == 0.0);
  const cplx b = overlap_analytic({1.0, 0.0}, {0.0, 0.0});
  CHECK(b.real() == doctest::Approx(std::exp(-0.25)).epsilon(1e-15));
  CHECK(b.imag() == 0.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const PhasePoint x{u(rng), u(rng)}, y{u(rng), u(rng)};
    CHECK(std::abs(overlap_analytic(x, y, 0.8)) < 1.0);
  }

  // Numeric overlap of truncated states on a grid of point pairs.
  std::vector<FockVector> states;
  std::vector<PhasePoint> pts;
  for (int i = 0; i < 10; ++i) {
    const PhasePoint z{-2.0 + 4.0 * i / 9.0, 2.0 - 4.0 * ((i * 7) % 10) / 9.0};
    pts.push_back(z);
    states.push_back(coherent_state(z, 64));
  }
  double worst = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      worst = std::max(worst, std::abs(states[i].inner(states[j]) - overlap_analytic(pts[i], pts[j])));
  CHECK(worst <= 1e-8);
}

TEST_CASE("normal symbol") {
  const OperatorAlgebra alg;
  const Hamiltonian ho_normal(0.5 * (alg.normal_power(alg.P(), 2) + alg.normal_power(alg.Q(), 2)));
  const FockOperator h = ho_normal.matrix(64);
  CHECK(std::abs(symbol_normal(h, {0.0, 0.0})) <= 1e-12);
  const cplx v = symbol_normal(h, {1.0, 1.0});
  CHECK(v.real() == doctest::Approx(0.5 * (1.0 + 1.0)).epsilon(1e-10));
  CHECK(std::abs(v.imag()) <= 1e-10);
  CHECK(ho_normal.normal_symbol({1.0, 1.0}) == doctest::Approx(1.0));

  auto [q, p] = build_qp(64);
  CHECK(std::abs(symbol_normal(q, {0.3, -1.2}) - (-1.2)) <= 1e-10);

  // Hermitian quartic: imaginary part vanishes and the polynomial symbol agrees.
  const Hamiltonian quart = Hamiltonian::quartic_normal(0.3);
  const FockOperator hq = quart.matrix(96);
  for (PhasePoint z : {PhasePoint{0.4, -0.9}, PhasePoint{-1.5, 1.1}}) {
    const cplx s = symbol_normal(hq, z);
    CHECK(std::abs(s.imag()) <= 1e-10);
    CHECK(s.real() == doctest::Approx(quart.normal_symbol(z)).epsilon(1e-10));
    // (P^2 + Q^2)/2 is not normal ordered: its symbol carries hbar/2.
    const double expected = 0.5 * (z.p * z.p + z.q * z.q) + 0.5 + 0.3 * std::pow(z.q, 4);
    CHECK(quart.normal_symbol(z) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("momentum-left symbol") {
  const OperatorAlgebra alg;
  const Hamiltonian ho = Hamiltonian::harmonic();
  CHECK(std::abs(symbol_pq(ho, 1.0, 0.0) - 0.5) <= 1e-14);
  CHECK(std::abs(symbol_pq(ho, 0.6, -1.3) - 0.5 * (0.36 + 1.69)) <= 1e-14);
  CHECK(std::abs(symbol_pq(Hamiltonian(alg.Q()), 0.0, 2.0) - 2.0) <= 1e-14);
  CHECK(std::abs(symbol_pq(Hamiltonian(alg.P()), -1.0, 0.0) - (-1.0)) <= 1e-14);

  // Q P = P Q + i hbar, so its symbol picks up the commutator.
  for (double hbar : {1.0, 0.3}) {
    const OperatorAlgebra a2(1.4, hbar);
    const Hamiltonian qp(a2.Q() * a2.P(), 1.4, hbar);
    CHECK(std::abs(symbol_pq(qp, 0.7, 0.2) - cplx(0.14, hbar)) <= 1e-13);
    // Q^2 P^2 = P^2 Q^2 + 4 i hbar P Q - 2 hbar^2.
    const Hamiltonian qqpp(a2.Q() * a2.Q() * a2.P() * a2.P(), 1.4, hbar);
    const double p = -0.4, q = 1.1;
    const cplx expected = p * p * q * q + cplx(0, 4 * hbar) * p * q - 2 * hbar * hbar;
    CHECK(std::abs(symbol_pq(qqpp, p, q) - expected) <= 1e-12);
  }
}

TEST_CASE("anti-normal symbol") {
  for (double hbar : {1.0, 0.25}) {
    const Hamiltonian ho = Hamiltonian::harmonic(1.0, hbar);
    const PhasePoint z{0.8, -0.3};
    CHECK(ho.antinormal_symbol(z) == doctest::Approx(0.5 * (0.64 + 0.09) - hbar / 2).epsilon(1e-14));
    CHECK(ho.normal_symbol(z) == doctest::Approx(0.5 * (0.64 + 0.09) + hbar / 2).epsilon(1e-14));
  }

  // Smearing the anti-normal symbol with |<z|z'>|^2 dmu(z') gives the normal
  // symbol. Gauss-Hermite in each coordinate integrates polynomials exactly.
  auto [x, w] = gauss_hermite(12);
  const double mass = 1.0;
  for (double hbar : {1.0, 0.5}) {
    const OperatorAlgebra alg(mass, hbar);
    const auto q = alg.Q();
    const auto p = alg.P();
    const Hamiltonian h(0.5 * (p * p + q * q) + 0.2 * (q * q * q * q) + 0.1 * (p * q * q) + 0.1 * (q * q * p), mass,
                        hbar);
    for (PhasePoint z : {PhasePoint{0.0, 0.0}, PhasePoint{0.5, -1.2}, PhasePoint{-1.0, 0.7}}) {
      double smeared = 0.0;
      for (int i = 0; i < x.size(); ++i)
        for (int j = 0; j < x.size(); ++j) {
          const PhasePoint zp{z.p + std::sqrt(2 * hbar) * x[i], z.q + std::sqrt(2 * hbar) * x[j]};
          smeared += w[i] * w[j] / std::numbers::pi * h.antinormal_symbol(zp);
        }
      CHECK(smeared == doctest::Approx(h.normal_symbol(z)).epsilon(1e-11));
    }
  }
}

TEST_CASE("polynomial products are operator products") {
  const OperatorAlgebra alg(1.3, 0.8);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random_poly = [&] {
    OrderedPolynomial out(1.0);
    for (int j = 0; j <= 2; ++j)
      for (int k = 0; k <= 2; ++k) out.add_term(j, k, cplx(u(rng), u(rng)));
    return out;
  };
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_poly();
    const auto b = random_poly();
    const Matrix lhs = Hamiltonian(a * b, 1.3, 0.8).matrix(40).matrix();
    const Matrix rhs = Hamiltonian(a, 1.3, 0.8).matrix(40).matrix() * Hamiltonian(b, 1.3, 0.8).matrix(40).matrix();
    CHECK((lhs - rhs).topLeftCorner(30, 30).cwiseAbs().maxCoeff() <= 1e-13 * rhs.cwiseAbs().maxCoeff());
  }

  const Matrix ho = Hamiltonian::harmonic(1.0, 0.5).matrix(10).matrix();
  for (int n = 0; n < 10; ++n) CHECK(ho(n, n).real() == doctest::Approx(0.5 * (n + 0.5)));
}

TEST_CASE("resolution of unity") {
  const Matrix m0 = resolution_of_unity_matrix(1, 8.0, {0.2});
  CHECK(std::abs(m0(0, 0) - 1.0) <= 1e-6);

  CHECK(resolution_of_unity_check(8, 1.0, {0.1}) >= 0.1);

  // With a disc cutoff the n-th diagonal element misses the Poisson CDF
  // P(N <= n; R^2/2hbar), so the deviation is bounded below by it.
  const double dev = resolution_of_unity_check(32, 8.0, {0.2});
  const double floor = poisson_cdf(15, 32.0);
  CHECK(dev == doctest::Approx(floor).epsilon(0.05));
}

TEST_CASE("exact propagator") {
  const FockOperator h = Hamiltonian::harmonic().matrix(16);
  CHECK(unitarity_defect(exact_propagator(h, 0.0).matrix()) <= 1e-14);
  CHECK((exact_propagator(h, 0.0).matrix() - Matrix::Identity(16, 16)).cwiseAbs().maxCoeff() <= 1e-14);

  auto [a, ad] = build_ladder(64);
  const FockOperator num = FockOperator::hermitian(ad.matrix() * a.matrix(), 1.0);
  for (std::size_t dim : {48u, 64u}) {
    const FockOperator n = FockOperator::hermitian(num.matrix().topLeftCorner(dim, dim), 1.0);
    const FockOperator u = exact_propagator(n, std::numbers::pi / 2);
    const FockVector start = coherent_state({0.0, 1.0}, dim);
    const FockVector end = coherent_state({-1.0, 0.0}, dim);
    CHECK(std::abs(end.inner(u.apply(start)) - 1.0) <= 1e-10);

    // Generic times: the number operator rotates the label clockwise.
    for (double t : {0.3, 1.1, 2.5}) {
      const PhasePoint z{0.4, -0.8};
      const PhasePoint zr{z.p * std::cos(t) - z.q * std::sin(t), z.p * std::sin(t) + z.q * std::cos(t)};
      const PhasePoint bra{0.1, 0.2};
      const cplx expected =
          std::polar(1.0, (zr.p * zr.q - z.p * z.q) / 2.0) * overlap_analytic(bra, zr);
      const FockOperator ut = exact_propagator(n, t);
      CHECK(std::abs(coherent_state(bra, dim).inner(ut.apply(coherent_state(z, dim))) - expected) <= 1e-10);
    }
  }

  const FockOperator quart = Hamiltonian::harmonic().matrix(64) + 0.1 * Hamiltonian(OperatorAlgebra().Q().pow(4)).matrix(64);
  CHECK(quart.is_hermitian());
  CHECK(unitarity_defect(exact_propagator(quart, 1.0).matrix()) <= 1e-9);

  Matrix nonherm = Matrix::Zero(4, 4);
  nonherm(0, 1) = 1.0;
  CHECK_THROWS_AS(exact_propagator(FockOperator(nonherm, 1.0), 1.0), FlagError);
}
