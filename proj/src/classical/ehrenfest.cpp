#include <algorithm>
#include <cmath>

#include "cslab/classical.hpp"
#include "cslab/errors.hpp"

namespace cslab {

cplx action_integrand_quantum(const std::function<PhasePoint(double)>& path, double t, double dt_fd,
                              const Hamiltonian& h, std::size_t dim) {
  const double hbar = h.hbar(), m = h.mass();
  const Vector psi = coherent_state(path(t), dim, hbar, m).amplitudes();
  const Vector ahead = coherent_state(path(t + dt_fd), dim, hbar, m).amplitudes();
  const Vector behind = coherent_state(path(t - dt_fd), dim, hbar, m).amplitudes();
  const Matrix H = h.matrix(dim).matrix();
  const cplx dt_term = cplx(0.0, hbar) * psi.dot(ahead - behind) / (2.0 * dt_fd);
  return dt_term - psi.dot(H * psi);
}

Trajectory ehrenfest_trajectory(const Hamiltonian& h, PhasePoint start, double T, double dt, std::size_t dim) {
  if (!(dt > 0.0)) throw ValidationError("dt", "dt > 0");
  if (!(T >= 0.0) || !std::isfinite(T)) throw ValidationError("T", "T >= 0");
  if (!h.is_hermitian()) throw FlagError("Ehrenfest evolution needs a hermitian Hamiltonian");
  const double hbar = h.hbar();
  const Matrix H = h.matrix(dim).matrix();
  const HermitianEvolution evo(H / hbar);
  const auto [Q, P] = build_qp(dim, h.mass(), hbar);
  const Vector start_state = coherent_state(start, dim, hbar, h.mass()).amplitudes();
  const Vector c = evo.eigenvectors().adjoint() * start_state;
  const std::size_t top = std::min(dim, std::max<std::size_t>(4, dim / 8));

  const long steps = std::max(1L, std::lround(std::ceil(T / dt - 1e-9)));
  const double tau = T / steps;
  Trajectory traj;
  Vector phased(c.size());
  for (long k = 0; k <= steps; ++k) {
    const double t = k * tau;
    for (Eigen::Index j = 0; j < c.size(); ++j) phased[j] = std::polar(1.0, -evo.eigenvalues()[j] * t) * c[j];
    const Vector psi = evo.eigenvectors() * phased;
    const double tail = psi.tail(top).squaredNorm();
    if (tail > 1e-10)
      throw TruncationError("evolved state reaches the top of the basis at t = " + std::to_string(t), 2 * dim);
    traj.times.push_back(t);
    traj.points.push_back({psi.dot(P.matrix() * psi).real(), psi.dot(Q.matrix() * psi).real()});
    traj.energy.push_back(psi.dot(H * psi).real());
    if (T == 0.0) break;
  }
  return traj;
}

ClassicalComparison compare_classical_quantum(const Hamiltonian& h, PhasePoint start, double T, double dt,
                                              std::size_t dim) {
  ClassicalComparison out;
  out.quantum = ehrenfest_trajectory(h, start, T, dt, dim);
  const ClassicalHamiltonian normal = ClassicalHamiltonian::normal_symbol(h);
  out.classical = hamilton_flow(normal, start, T, dt);
  const Trajectory anti = hamilton_flow(ClassicalHamiltonian::antinormal_symbol(h), start, T, dt);
  double sum2 = 0.0;
  for (std::size_t k = 0; k < out.quantum.size(); ++k) {
    const PhasePoint& a = out.quantum.points[k];
    const PhasePoint& b = out.classical.points[k];
    const PhasePoint& c = anti.points[k];
    const double d = std::hypot(a.p - b.p, a.q - b.q);
    out.max_deviation = std::max(out.max_deviation, d);
    out.antinormal_max_deviation = std::max(out.antinormal_max_deviation, std::hypot(a.p - c.p, a.q - c.q));
    sum2 += d * d;
    out.energy_drift = std::max(out.energy_drift, std::abs(out.classical.energy[k] - out.classical.energy[0]));
  }
  out.rms_deviation = std::sqrt(sum2 / static_cast<double>(out.quantum.size()));
  return out;
}

}  // namespace cslab
