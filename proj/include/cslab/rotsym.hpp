#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "cslab/fock.hpp"
#include "cslab/linalg.hpp"

namespace cslab {

/// H = (p^2 + m0^2 q^2)/2 + lambda0 (q^2)^2 in N degrees of freedom.
struct RotSymSpec {
  int N = 3;
  double m0 = 1.0;
  double lambda0 = 0.1;
  double hbar = 1.0;

  void validate() const;
};

/// X = p.p, Y = p.q, Z = q.q
struct InvariantTriple {
  double X = 0.0, Y = 0.0, Z = 0.0;
  double angular_momentum2() const { return X * Z - Y * Y; }
};

InvariantTriple invariants(const RealVector& p, const RealVector& q);
double rotsym_energy(const RotSymSpec& spec, const InvariantTriple& inv);

struct RotSymTrajectory {
  std::vector<double> times;
  std::vector<RealVector> p, q;
  std::vector<InvariantTriple> inv;
  std::vector<double> energy;
  std::vector<double> L2;

  double max_relative_energy_drift() const;
  double max_relative_L2_drift() const;  // relative to max(L2(0), 1)
  double min_cauchy_schwarz() const;     // min X Z - Y^2
};

/// Fourth-order symmetric composition of position-Verlet steps.
RotSymTrajectory rotsym_flow(const RotSymSpec& spec, const RealVector& p0, const RealVector& q0, double T, double dt,
                             int record_every = 1);

struct ReductionReport {
  bool collinear = false;  // L = 0 start: motion stays on the initial line
  double residual = 0.0;   // max distance of p(t), q(t) from the initial line or plane
};

ReductionReport reduction_check(const RotSymTrajectory& traj, double collinear_tol = 1e-12);

/// (p^2 + m^2 q^2)/2 + ((p^2 + m^2 q^2)/2)^2
double h1_symbol(double m, PhasePoint pt);
/// <p,q|H0 + :H0^2:|p,q> with H0 = :(P^2 + m^2 Q^2):/2 on the first `dim` states.
double h1_symbol_fock(double m, PhasePoint pt, double hbar = 1.0, std::size_t dim = 64);

struct ReducibleSpec {
  double m = 1.0;
  double zeta = 0.5;
  double beta = 2.0;
  double hbar = 1.0;
  std::size_t dim_per_mode = 24;

  void validate() const;
  /// m0^2 = m^2 (1 + zeta^2)
  double induced_mass2() const { return m * m * (1.0 + zeta * zeta); }
  /// lambda0 = beta m^4 zeta^4
  double induced_coupling() const { return beta * std::pow(m * zeta, 4); }
};

/// (m, beta) reproducing a given (m0, lambda0) at the chosen zeta.
ReducibleSpec reducible_from_bare(double m0, double lambda0, double zeta, double hbar = 1.0,
                                  std::size_t dim_per_mode = 24);

double h2_symbol_closed(const ReducibleSpec& spec, PhasePoint pt);

using SparseMatrix = Eigen::SparseMatrix<cplx>;

/// Two-mode truncated realization of the doubled operator set (Q, P, S, R),
/// [Q,P] = [S,R] = i hbar, with a ~ m(Q + zeta S) + iP and b ~ m(S + zeta Q) + iR
/// and H2 = a^dag a / 2 + b^dag b / 2 + beta b^dag^2 b^2. The joint vacuum is the
/// lowest eigenvector of a^dag a + b^dag b; the first mode carries (Q, P).
class ReducibleRepresentation {
 public:
  explicit ReducibleRepresentation(const ReducibleSpec& spec);

  const ReducibleSpec& spec() const noexcept { return spec_; }
  /// Oscillator mass of the product basis.
  double basis_mass() const noexcept { return basis_mass_; }
  /// Vacuum amplitudes c[j * W + k] on |j>|k>, W = working dimension.
  const Vector& vacuum() const noexcept { return vacuum_; }
  std::size_t working_dim() const noexcept { return work_; }
  double vacuum_residual_a() const noexcept { return residual_a_; }
  double vacuum_residual_b() const noexcept { return residual_b_; }

  /// U[p,q]|0,0> on the working basis. Throws TruncationError if the
  /// displacement pushes more than 1e-10 of the weight past the truncation.
  Vector coherent(PhasePoint pt) const;
  /// <p,q|H2|p,q>
  double symbol(PhasePoint pt) const;
  /// Smallest eigenvalue of H2 compressed to dim_per_mode^2 states.
  double min_eigenvalue() const;

  /// sum c_jk psi_j(x) psi_k(y)
  cplx wavefunction(const Vector& state, double x, double y) const;

 private:
  ReducibleSpec spec_;
  double basis_mass_;
  std::size_t work_;
  SparseMatrix a_, b_;
  Vector vacuum_;
  double residual_a_ = 0.0, residual_b_ = 0.0;
  Matrix displacement_generator_q_, displacement_generator_p_;
};

double h2_symbol_fock(const ReducibleSpec& spec, PhasePoint pt);

/// <x,y|p,q> of the reducible family, unit norm.
cplx reducible_wavefunction(const ReducibleSpec& spec, PhasePoint pt, double x, double y);

struct FiducialCheck {
  double vacuum_residual = 0.0;     // L2 distance to the Gaussian, phase aligned
  double displaced_residual = 0.0;  // same for U[p,q]|0,0>
};

/// Square grid [-half_width, half_width]^2 with `points` nodes per axis.
FiducialCheck fiducial_wavefunction_check(const ReducibleSpec& spec, PhasePoint displaced, double half_width = 6.0,
                                          int points = 121);

struct SpanReport {
  double free_residual = 0.0;    // relative squared projection residual, (p, q) labels
  double pinned_residual = 0.0;  // labels with q = q_fixed
  double free_condition = 0.0;   // Gram condition number before regularization
  double pinned_condition = 0.0;
  std::size_t probes = 0;
};

struct SpanOptions {
  std::size_t probes = 200;
  double q_fixed = 0.0;
  double label_box = 4.0;  // free labels uniform in [-box, box]^2, pinned p on [-box, box]
  double half_width = 7.0;
  int points = 121;
  double regularization = 1e-12;  // relative eigenvalue cutoff for the Gram pseudo-inverse
  std::uint64_t seed = 0;
};

/// Relative squared residual of projecting `target` onto the span of the free
/// and q-pinned families.
SpanReport span_deficiency(const ReducibleSpec& spec, PhasePoint target, const SpanOptions& opts = {});

/// 1 - exp(-m zeta^2 / (2 hbar)): residual left by the complete q-pinned family
/// for a target displaced in q by one unit.
double pinned_residual_floor(const ReducibleSpec& spec, double dq = 1.0);

}  // namespace cslab
