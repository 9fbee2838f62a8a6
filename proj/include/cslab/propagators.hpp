#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cslab/fock.hpp"
#include "cslab/hamiltonian.hpp"

namespace cslab {

enum class PropagatorMethod { exact, sliced_position, sliced_cs };

/// "exact", "sliced-q", "sliced-cs"
std::string to_string(PropagatorMethod m);
PropagatorMethod parse_method(const std::string& name);

/// Odd number of points q_j = (j - (G-1)/2) dq. The momentum grid has the same
/// count with dp = 2 pi hbar / (G dq), so the two are discrete Fourier duals.
struct PositionGrid {
  std::size_t points = 65;
  double spacing = 0.2;
};

/// Cartesian phase-space grid restricted to the disc of the given radius.
struct PhaseGrid {
  double spacing = 0.5;
  double radius = 8.0;
};

struct LatticeSpec {
  int slices = 0;  // N intermediate insertions, N + 1 time steps
  double T = 1.0;
  double hbar = 1.0;
  PositionGrid position{};
  PhaseGrid phase{};

  double epsilon() const { return T / (slices + 1); }
};

struct PropagatorResult {
  cplx value{};
  PropagatorMethod method = PropagatorMethod::exact;
  LatticeSpec lattice{};
  double error_estimate = 0.0;
  // instrumentation
  std::size_t momentum_sums = 0;
  std::size_t position_sums = 0;
  std::size_t phase_space_sums = 0;
  double boundary_mass = 0.0;
  bool boundary_warning = false;
  double unitarity_defect = 0.0;  // exact method only
};

/// <p|q> exp(-i eps H(p;q)/hbar) with <p|q> = exp(-iqp/hbar)/sqrt(2 pi hbar).
cplx short_time_kernel_pq(double p, double q, double epsilon, const Hamiltonian& h);

/// Grid coordinates of the position lattice.
std::vector<double> position_nodes(const PositionGrid& grid);
std::vector<double> momentum_nodes(const PositionGrid& grid, double hbar);

/// Alternating p/q lattice for K(q'',T;q',0). The first and last kernel
/// factors are evaluated at the endpoints directly, so q' and q'' need not be
/// grid points. Throws GridError when an endpoint sits too close to the grid
/// edge or the momentum grid is too short for the lattice.
PropagatorResult sliced_propagator_position(double q_final, double q_initial, const LatticeSpec& lattice,
                                            const Hamiltonian& h);

/// H_grid(a,b) = (1/G) sum_k exp(i p_k (q_a - q_b)/hbar) h(p_k; q_b), the
/// generator whose short-time exponential the slice matrix approximates.
Matrix position_grid_generator(const LatticeSpec& lattice, const Hamiltonian& h);

/// exp(-i T H_grid/hbar)(q'', q')/dq where H_grid is the generator of the
/// lattice's slice matrix. Endpoints must be grid points.
cplx grid_exact_position(double q_final, double q_initial, const LatticeSpec& lattice, const Hamiltonian& h);

/// Coherent-state lattice with kernel <z'|z> exp(-i eps H(z';z)/hbar).
PropagatorResult sliced_propagator_cs(PhasePoint start, PhasePoint end, const LatticeSpec& lattice,
                                      const Hamiltonian& h);

/// <end| exp(-i T H/hbar) |start> on a truncated basis large enough for both
/// endpoints (at least min_dim).
PropagatorResult exact_cs_element(PhasePoint start, PhasePoint end, double T, const Hamiltonian& h,
                                  std::size_t min_dim = 64);

struct Endpoints {
  PhasePoint start{};
  PhasePoint end{};  // sliced-q uses the q components
};

struct ConvergenceRow {
  int slices = 0;
  cplx value{};
  double error = 0.0;
};

struct ConvergenceStudy {
  PropagatorMethod method = PropagatorMethod::sliced_cs;
  cplx oracle{};
  std::vector<ConvergenceRow> rows;
  double slope = 0.0;  // least-squares slope of log(error) against log(N)
};

/// Runs the lattice at each N (ascending) against the exact oracle: the grid
/// generator for sliced-q, the truncated-basis element for sliced-cs.
ConvergenceStudy convergence_study(PropagatorMethod method, const Hamiltonian& h, const Endpoints& ends,
                                   const std::vector<int>& slice_list, const LatticeSpec& base);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cslab
