#include <cmath>
#include <limits>

#include "cslab/classical.hpp"
#include "cslab/errors.hpp"

namespace cslab {

void Trajectory::check() const {
  if (points.size() != times.size() || energy.size() != times.size())
    throw ParameterError("trajectory sequences differ in length");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw ParameterError("trajectory times must increase");
}

std::pair<double, double> ClassicalHamiltonian::gradient(PhasePoint z) const {
  static const double root = std::cbrt(std::numeric_limits<double>::epsilon());
  const double hp = root * std::max(1.0, std::abs(z.p));
  const double hq = root * std::max(1.0, std::abs(z.q));
  const double dp = (value(z.p + hp, z.q) - value(z.p - hp, z.q)) / (2.0 * hp);
  const double dq = (value(z.p, z.q + hq) - value(z.p, z.q - hq)) / (2.0 * hq);
  if (!std::isfinite(dp) || !std::isfinite(dq))
    throw ParameterError("non-finite Hamiltonian gradient at (" + std::to_string(z.p) + ", " + std::to_string(z.q) + ")");
  return {dp, dq};
}

ClassicalHamiltonian ClassicalHamiltonian::from_symbol(const PhaseSymbol& h) {
  bool separable = true;
  for (const auto& [key, c] : h.polynomial().terms())
    if (key.first > 0 && key.second > 0 && c != cplx(0.0)) separable = false;
  return {[h](double p, double q) { return h(p, q); }, separable};
}

ClassicalHamiltonian ClassicalHamiltonian::normal_symbol(const Hamiltonian& h) {
  return from_symbol(PhaseSymbol::normal(h));
}

ClassicalHamiltonian ClassicalHamiltonian::antinormal_symbol(const Hamiltonian& h) {
  return from_symbol(PhaseSymbol::antinormal(h));
}

double restricted_action(const Trajectory& traj, const ClassicalHamiltonian& h) {
  traj.check();
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const PhasePoint& a = traj.points[k];
    const PhasePoint& b = traj.points[k + 1];
    const PhasePoint mid{0.5 * (a.p + b.p), 0.5 * (a.q + b.q)};
    s += mid.p * (b.q - a.q) - h(mid) * (traj.times[k + 1] - traj.times[k]);
  }
  return s;
}

namespace {

void verlet_step(const ClassicalHamiltonian& h, PhasePoint& z, double tau) {
  z.q += 0.5 * tau * h.gradient(z).first;
  z.p -= tau * h.gradient(z).second;
  z.q += 0.5 * tau * h.gradient(z).first;
}

void midpoint_step(const ClassicalHamiltonian& h, PhasePoint& z, double tau, int max_iterations) {
  PhasePoint next = z;
  {
    const auto [gp, gq] = h.gradient(z);
    next = {z.p - tau * gq, z.q + tau * gp};
  }
  const double scale = std::max(1.0, std::hypot(z.p, z.q));
  // Gradients carry finite-difference noise, so the iteration stops either at
  // tight convergence or once it stalls at the noise floor.
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iterations; ++it) {
    const auto [gp, gq] = h.gradient({0.5 * (z.p + next.p), 0.5 * (z.q + next.q)});
    const PhasePoint trial{z.p - tau * gq, z.q + tau * gp};
    const double change = std::hypot(trial.p - next.p, trial.q - next.q);
    next = trial;
    if (change <= 1e-14 * scale || (change >= previous && change <= 1e-10 * scale)) {
      z = next;
      return;
    }
    previous = change;
  }
  throw ParameterError("implicit midpoint step did not converge; reduce dt");
}

}  // namespace

Trajectory hamilton_flow(const ClassicalHamiltonian& h, PhasePoint start, double T, double dt,
                         const FlowOptions& opts) {
  if (!(dt > 0.0)) throw ValidationError("dt", "dt > 0");
  if (!(T >= 0.0) || !std::isfinite(T)) throw ValidationError("T", "T >= 0");
  if (opts.record_every < 1) throw ValidationError("record_every", ">= 1");
  const long steps = std::max(1L, std::lround(std::ceil(T / dt - 1e-9)));
  const double tau = T / steps;
  // fourth-order symmetric (triple-jump) composition
  const double cube = std::cbrt(2.0);
  const double w1 = 1.0 / (2.0 - cube);
  const double w0 = -cube / (2.0 - cube);

  Trajectory traj;
  auto record = [&](double t, PhasePoint z) {
    traj.times.push_back(t);
    traj.points.push_back(z);
    traj.energy.push_back(h(z));
  };
  PhasePoint z = start;
  record(0.0, z);
  if (T == 0.0) return traj;
  for (long k = 1; k <= steps; ++k) {
    for (double w : {w1, w0, w1}) {
      if (h.separable)
        verlet_step(h, z, w * tau);
      else
        midpoint_step(h, z, w * tau, opts.max_iterations);
    }
    if (k % opts.record_every == 0 || k == steps) record(k * tau, z);
  }
  return traj;
}

}  // namespace cslab
