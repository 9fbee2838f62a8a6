#include <algorithm>
#include <cmath>

#include "cslab/errors.hpp"
#include "cslab/rotsym.hpp"

namespace cslab {

void RotSymSpec::validate() const {
  if (N < 1) throw ValidationError("N", "N >= 1");
  if (!(m0 > 0.0)) throw ValidationError("m0", "m0 > 0");
  if (!(lambda0 >= 0.0)) throw ValidationError("lambda0", "lambda0 >= 0");
  if (!(hbar > 0.0)) throw ValidationError("hbar", "hbar > 0");
}

InvariantTriple invariants(const RealVector& p, const RealVector& q) { return {p.dot(p), p.dot(q), q.dot(q)}; }

double rotsym_energy(const RotSymSpec& spec, const InvariantTriple& inv) {
  return 0.5 * inv.X + 0.5 * spec.m0 * spec.m0 * inv.Z + spec.lambda0 * inv.Z * inv.Z;
}

double RotSymTrajectory::max_relative_energy_drift() const {
  double d = 0.0;
  for (double e : energy) d = std::max(d, std::abs(e - energy.front()));
  return d / std::max(std::abs(energy.front()), 1e-300);
}

double RotSymTrajectory::max_relative_L2_drift() const {
  double d = 0.0;
  for (double l : L2) d = std::max(d, std::abs(l - L2.front()));
  return d / std::max(L2.front(), 1.0);
}

double RotSymTrajectory::min_cauchy_schwarz() const {
  double m = L2.front();
  for (double l : L2) m = std::min(m, l);
  return m;
}

RotSymTrajectory rotsym_flow(const RotSymSpec& spec, const RealVector& p0, const RealVector& q0, double T, double dt,
                             int record_every) {
  spec.validate();
  if (p0.size() != spec.N || q0.size() != spec.N)
    throw DimensionError("initial vectors must have N = " + std::to_string(spec.N) + " components");
  if (!(dt > 0.0)) throw ValidationError("dt", "dt > 0");
  if (!(T >= 0.0)) throw ValidationError("T", "T >= 0");
  if (record_every < 1) throw ValidationError("record_every", ">= 1");

  const long steps = std::max(1L, std::lround(std::ceil(T / dt - 1e-9)));
  const double tau = T / steps;
  const double cube = std::cbrt(2.0);
  const double w1 = 1.0 / (2.0 - cube);
  const double w0 = -cube / (2.0 - cube);
  const double m2 = spec.m0 * spec.m0;

  RotSymTrajectory traj;
  RealVector p = p0, q = q0;
  auto record = [&](double t) {
    const InvariantTriple inv = invariants(p, q);
    traj.times.push_back(t);
    traj.p.push_back(p);
    traj.q.push_back(q);
    traj.inv.push_back(inv);
    traj.energy.push_back(rotsym_energy(spec, inv));
    traj.L2.push_back(inv.angular_momentum2());
  };
  record(0.0);
  if (T == 0.0) return traj;
  for (long k = 1; k <= steps; ++k) {
    for (double w : {w1, w0, w1}) {
      const double h = w * tau;
      q += 0.5 * h * p;
      p -= h * (m2 + 4.0 * spec.lambda0 * q.squaredNorm()) * q;
      q += 0.5 * h * p;
    }
    if (k % record_every == 0 || k == steps) record(k * tau);
  }
  return traj;
}

ReductionReport reduction_check(const RotSymTrajectory& traj, double collinear_tol) {
  ReductionReport out;
  const RealVector& p0 = traj.p.front();
  const RealVector& q0 = traj.q.front();
  const InvariantTriple inv = traj.inv.front();
  const double scale = std::max({inv.X * inv.Z, inv.X * inv.X, inv.Z * inv.Z, 1e-300});
  out.collinear = inv.angular_momentum2() <= collinear_tol * scale;

  // Orthonormal basis of the initial line or plane.
  std::vector<RealVector> basis;
  for (const RealVector* v : {&q0, &p0}) {
    RealVector u = *v;
    for (const auto& e : basis) u -= e.dot(u) * e;
    const double n = u.norm();
    if (n > 1e-12 * std::max(1.0, v->norm()) && (basis.empty() || !out.collinear)) basis.push_back(u / n);
  }
  auto distance = [&](const RealVector& x) {
    RealVector r = x;
    for (const auto& e : basis) r -= e.dot(r) * e;
    return r.norm();
  };
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    out.residual = std::max({out.residual, distance(traj.p[k]), distance(traj.q[k])});
  return out;
}

}  // namespace cslab
