#pragma once

#include <functional>
#include <vector>

#include "cslab/fock.hpp"
#include "cslab/hamiltonian.hpp"
#include "cslab/wiener.hpp"

namespace cslab {

struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> points;
  std::vector<double> energy;

  std::size_t size() const noexcept { return times.size(); }
  /// Throws ParameterError unless the sequences have equal length and the
  /// times increase strictly.
  void check() const;
};

/// A classical Hamiltonian known only pointwise. `separable` promises the
/// form T(p) + V(q), which selects the explicit splitting.
struct ClassicalHamiltonian {
  std::function<double(double p, double q)> value;
  bool separable = false;

  double operator()(PhasePoint z) const { return value(z.p, z.q); }
  /// (dH/dp, dH/dq) by central differences, h = eps^(1/3) max(1, |x|).
  std::pair<double, double> gradient(PhasePoint z) const;

  static ClassicalHamiltonian from_symbol(const PhaseSymbol& h);
  static ClassicalHamiltonian normal_symbol(const Hamiltonian& h);
  static ClassicalHamiltonian antinormal_symbol(const Hamiltonian& h);
};

/// Discrete int [p qdot - H] dt with the midpoint rule on each interval.
double restricted_action(const Trajectory& traj, const ClassicalHamiltonian& h);

/// <p,q|(i hbar d/dt - H)|p,q> along a path z(t) at time t, with a central
/// difference of step dt_fd for the time derivative.
cplx action_integrand_quantum(const std::function<PhasePoint(double)>& path, double t, double dt_fd,
                              const Hamiltonian& h, std::size_t dim);

struct FlowOptions {
  int record_every = 1;  // keep every k-th step (the final point is always kept)
  int max_iterations = 100;  // implicit midpoint fixed-point iterations
};

/// Symplectic integration of qdot = dH/dp, pdot = -dH/dq: fourth-order
/// symmetric composition of position-Verlet steps (separable H) or implicit
/// midpoint steps (general H). Throws ParameterError on a non-finite gradient
/// or a non-converging midpoint solve.
Trajectory hamilton_flow(const ClassicalHamiltonian& h, PhasePoint start, double T, double dt,
                         const FlowOptions& opts = {});

/// Mean values (<P>, <Q>)(t) of exp(-iHt/hbar)|p0,q0> on the first `dim`
/// basis states, sampled every dt up to T; energy holds <H>. Throws
/// TruncationError if the top of the basis picks up weight above 1e-10.
Trajectory ehrenfest_trajectory(const Hamiltonian& h, PhasePoint start, double T, double dt, std::size_t dim);

struct ClassicalComparison {
  Trajectory quantum;
  Trajectory classical;            // flow of the normal symbol
  double max_deviation = 0.0;      // max |z_quantum - z_classical|
  double rms_deviation = 0.0;
  double antinormal_max_deviation = 0.0;  // same against the anti-normal symbol flow
  double energy_drift = 0.0;       // max |H(t) - H(0)| of the classical flow
};

ClassicalComparison compare_classical_quantum(const Hamiltonian& h, PhasePoint start, double T, double dt,
                                              std::size_t dim);

}  // namespace cslab
