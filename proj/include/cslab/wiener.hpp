#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "cslab/fock.hpp"
#include "cslab/hamiltonian.hpp"

namespace cslab {

/// A real phase-space function given as a commuting polynomial in (p, q).
class PhaseSymbol {
 public:
  explicit PhaseSymbol(const OrderedPolynomial& poly);

  static PhaseSymbol zero();
  static PhaseSymbol constant(double c);
  /// h with H = int h(p,q) |p,q><p,q| dmu.
  static PhaseSymbol antinormal(const Hamiltonian& h);
  /// <p,q|H|p,q>
  static PhaseSymbol normal(const Hamiltonian& h);

  double operator()(double p, double q) const;
  const OrderedPolynomial& polynomial() const noexcept { return poly_; }
  int momentum_degree() const noexcept { return static_cast<int>(rows_.size()) - 1; }
  /// (h0, h1, h2) of h = h2(q) p^2 + h1(q) p + h0(q); zero beyond the degree.
  std::array<double, 3> momentum_coefficients(double q) const;

  /// h(p, q) with (p, q) = (a p' + b q' + c, d p' + e q' + f).
  PhaseSymbol substituted(double a, double b, double c, double d, double e, double f) const;

 private:
  OrderedPolynomial poly_;
  std::vector<std::vector<double>> rows_;  // rows_[j][k]: coefficient of p^j q^k
};

enum class WienerEstimator {
  automatic,    // conditional when the symbol is at most quadratic in p
  plain,        // sample both bridges, average exp(iS/hbar)
  conditional,  // sample the q bridge, integrate the Gaussian p bridge exactly
};

struct WienerConfig {
  double nu = 8.0;
  int steps = 32;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  PhasePoint start{};
  PhasePoint end{};
  double T = 1.0;
  double hbar = 1.0;
  unsigned workers = 1;  // 0: hardware concurrency
  WienerEstimator estimator = WienerEstimator::automatic;
  double confidence_fraction = 0.1;  // stderr / |value| above this flags the result

  double dt() const { return T / steps; }
};

/// Throws ValidationError on out-of-range fields.
void validate(const WienerConfig& cfg);

/// Lattice step count used when none is given: about four steps per unit nu T.
int default_wiener_steps(double nu, double T);

struct BridgePath {
  std::vector<PhasePoint> points;
  double dt = 0.0;
};

struct EstimateWithError {
  cplx value{};
  double stderr = 0.0;
  std::size_t samples = 0;
  double nu = 0.0;
  int steps = 0;
  std::uint64_t seed = 0;
  bool low_confidence = false;
  WienerEstimator estimator = WienerEstimator::plain;
};

/// Splittable seeding: the generator for block b of stream `seed`.
std::mt19937_64 block_generator(std::uint64_t seed, std::uint64_t block);

/// Independent Brownian bridges in p and q, each with variance nu hbar per
/// unit time, pinned at cfg.start (t = 0) and cfg.end (t = T).
BridgePath sample_pinned_bridge(const WienerConfig& cfg, std::mt19937_64& rng);

/// (i/hbar)[sum p_mid dq - sum h(mid) dt]
cplx stratonovich_action(const BridgePath& path, const PhaseSymbol& h, double hbar = 1.0);

/// Sum of (p_k + p_{k+1})/2 (q_{k+1} - q_k).
double midpoint_pdq(const std::vector<PhasePoint>& points);

/// Lattice normalization that replaces exp(nu T / 2): (1 + nu dt/2)^steps.
double lattice_normalization(double nu, double dt, int steps);

/// Monte Carlo estimate of
///   2 pi hbar (1 + nu dt/2)^n rho_T(end - start) E_bridge[exp(i S / hbar)].
EstimateWithError wiener_propagator_mc(const WienerConfig& cfg, const PhaseSymbol& h);

struct Extrapolation {
  cplx value{};
  cplx slope{};  // coefficient of 1/nu
  double stderr = 0.0;
  double fit_error = 0.0;  // stderr inflated by the fit quality, or the drop-one shift if larger
  double chi2_per_dof = 0.0;
  bool unreliable = false;
};

/// Weighted least-squares fit of value(nu) = a + b/nu.
Extrapolation nu_extrapolate(const std::vector<EstimateWithError>& estimates);

/// Affine symplectic map (p, q) -> (A p + B q + a, C p + D q + b) with
/// AD - BC = 1, together with the generator of p dq = pbar dqbar + dGbar.
class CanonicalMap {
 public:
  static CanonicalMap identity();
  /// Phase-plane rotation: pbar = p cos t - q sin t, qbar = p sin t + q cos t.
  static CanonicalMap rotation(double angle);
  static CanonicalMap translation(double dp, double dq);
  static CanonicalMap affine(double A, double B, double C, double D, double a, double b);

  PhasePoint forward(PhasePoint z) const;
  PhasePoint inverse(PhasePoint zbar) const;
  /// Gbar(pbar, qbar)
  double generator(PhasePoint zbar) const;
  bool is_identity() const;
  bool is_isometry(double tol = 1e-12) const;
  /// hbar(pbar, qbar) = h(inverse(pbar, qbar))
  PhaseSymbol transform(const PhaseSymbol& h) const;

 private:
  CanonicalMap(double A, double B, double C, double D, double a, double b);
  double A_, B_, C_, D_, a_, b_;
};

struct CovarianceReport {
  EstimateWithError original;
  EstimateWithError transformed;  // includes the exp(i dGbar / hbar) factor
  double discrepancy = 0.0;
  double combined_stderr = 0.0;
};

/// Estimates the propagator in both coordinate systems. The transformed
/// frame uses its own random stream unless the map is the identity.
CovarianceReport covariance_check(const CanonicalMap& map, const WienerConfig& cfg, const PhaseSymbol& h);

}  // namespace cslab
