#include <cmath>
#include <numbers>
#include <string>

#include "cslab/errors.hpp"
#include "cslab/propagators.hpp"

namespace cslab {

namespace {

constexpr double kBoundaryTolerance = 1e-6;

void check_lattice(const LatticeSpec& lat) {
  if (lat.slices < 0) throw ParameterError("slice count must be >= 0");
  if (!std::isfinite(lat.T)) throw ParameterError("T must be finite");
  if (!(lat.hbar > 0.0)) throw ParameterError("hbar must be positive");
}

void check_position_grid(const PositionGrid& g) {
  if (g.points < 3 || g.points % 2 == 0) throw GridError("position grid needs an odd number of points >= 3");
  if (!(g.spacing > 0.0)) throw GridError("position grid spacing must be positive");
}

// One column of the slice kernel evaluated at source point x:
// out[a] = (1/(G dq)) sum_k exp(i p_k (q_a - x)/hbar) exp(-i eps h(p_k; x)/hbar).
Vector slice_column(double x, const std::vector<double>& qs, const std::vector<double>& ps, double eps,
                    const Hamiltonian& h, double hbar, double dq) {
  const std::size_t g = qs.size();
  Vector weights(g);
  for (std::size_t k = 0; k < g; ++k) {
    const cplx hk = h.pq_form_ref().evaluate(ps[k], x);
    weights[k] = std::exp(cplx(0.0, -eps / hbar) * hk);
  }
  Vector out(g);
  for (std::size_t a = 0; a < g; ++a) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < g; ++k) s += std::polar(1.0, ps[k] * (qs[a] - x) / hbar) * weights[k];
    out[a] = s / (static_cast<double>(g) * dq);
  }
  return out;
}

std::size_t grid_index(double q, const PositionGrid& g) {
  const double half = 0.5 * static_cast<double>(g.points - 1);
  const double x = q / g.spacing + half;
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-9 || r < 0 || r > static_cast<double>(g.points - 1))
    throw GridError("endpoint q = " + std::to_string(q) + " is not a grid point");
  return static_cast<std::size_t>(r);
}

cplx position_lattice_value(double q_final, double q_initial, const LatticeSpec& lat, const Hamiltonian& h,
                            std::size_t* momentum_sums, std::size_t* position_sums) {
  const auto qs = position_nodes(lat.position);
  const auto ps = momentum_nodes(lat.position, lat.hbar);
  const double dq = lat.position.spacing;
  const double eps = lat.epsilon();
  const std::size_t g = qs.size();
  std::size_t msum = 0, qsum = 0;
  cplx value;
  if (lat.slices == 0) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < g; ++k)
      s += std::polar(1.0, ps[k] * (q_final - q_initial) / lat.hbar) *
           std::exp(cplx(0.0, -eps / lat.hbar) * h.pq_form_ref().evaluate(ps[k], q_initial));
    value = s / (static_cast<double>(g) * dq);
    msum = 1;
  } else {
    Vector v = slice_column(q_initial, qs, ps, eps, h, lat.hbar, dq);
    ++msum;
    if (lat.slices > 1) {
      Matrix slice(g, g);
      for (std::size_t b = 0; b < g; ++b) slice.col(b) = dq * slice_column(qs[b], qs, ps, eps, h, lat.hbar, dq);
      for (int n = 1; n < lat.slices; ++n) {
        v = slice * v;
        ++msum;
        ++qsum;
      }
    }
    // Last factor: row at q'' against the grid.
    cplx s = 0.0;
    for (std::size_t b = 0; b < g; ++b) {
      cplx kb = 0.0;
      for (std::size_t k = 0; k < g; ++k)
        kb += std::polar(1.0, ps[k] * (q_final - qs[b]) / lat.hbar) *
              std::exp(cplx(0.0, -eps / lat.hbar) * h.pq_form_ref().evaluate(ps[k], qs[b]));
      s += kb / (static_cast<double>(g) * dq) * dq * v[b];
    }
    value = s;
    ++msum;
    ++qsum;
  }
  if (momentum_sums) *momentum_sums = msum;
  if (position_sums) *position_sums = qsum;
  return value;
}

std::vector<PhasePoint> phase_nodes(const PhaseGrid& g) {
  if (!(g.spacing > 0.0) || !(g.radius > 0.0)) throw GridError("phase grid spacing and radius must be positive");
  const int n = static_cast<int>(std::floor(g.radius / g.spacing));
  std::vector<PhasePoint> out;
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j) {
      const PhasePoint z{i * g.spacing, j * g.spacing};
      if (z.p * z.p + z.q * z.q <= g.radius * g.radius) out.push_back(z);
    }
  return out;
}

cplx cs_kernel(PhasePoint bra, PhasePoint ket, double eps, const Hamiltonian& h, double hbar) {
  return overlap_analytic(bra, ket, hbar) * std::exp(cplx(0.0, -eps / hbar) * h.mixed_symbol(bra, ket));
}

cplx cs_lattice_value(PhasePoint start, PhasePoint end, const LatticeSpec& lat, const Hamiltonian& h,
                      double* boundary_mass) {
  const double eps = lat.epsilon();
  if (lat.slices == 0) {
    if (boundary_mass) *boundary_mass = 0.0;
    return cs_kernel(end, start, eps, h, lat.hbar);
  }
  const auto nodes = phase_nodes(lat.phase);
  const std::size_t g = nodes.size();
  const double w = lat.phase.spacing * lat.phase.spacing / (2.0 * std::numbers::pi * lat.hbar);
  const double rim = lat.phase.radius - 1.5 * lat.phase.spacing;
  auto rim_fraction = [&](const Vector& v) {
    double all = 0.0, edge = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
      const double m = std::norm(v[i]);
      all += m;
      if (std::hypot(nodes[i].p, nodes[i].q) > rim) edge += m;
    }
    return all > 0.0 ? edge / all : 0.0;
  };

  Vector v(g);
  for (std::size_t i = 0; i < g; ++i) v[i] = cs_kernel(nodes[i], start, eps, h, lat.hbar);
  double worst = rim_fraction(v);
  if (lat.slices > 1) {
    Matrix k(g, g);
    for (std::size_t j = 0; j < g; ++j)
      for (std::size_t i = 0; i < g; ++i) k(i, j) = w * cs_kernel(nodes[i], nodes[j], eps, h, lat.hbar);
    for (int n = 1; n < lat.slices; ++n) {
      v = k * v;
      worst = std::max(worst, rim_fraction(v));
    }
  }
  cplx s = 0.0;
  for (std::size_t j = 0; j < g; ++j) s += w * cs_kernel(end, nodes[j], eps, h, lat.hbar) * v[j];
  if (boundary_mass) *boundary_mass = worst;
  return s;
}

}  // namespace

std::string to_string(PropagatorMethod m) {
  switch (m) {
    case PropagatorMethod::exact:
      return "exact";
    case PropagatorMethod::sliced_position:
      return "sliced-q";
    case PropagatorMethod::sliced_cs:
      return "sliced-cs";
  }
  return "unknown";
}

PropagatorMethod parse_method(const std::string& name) {
  if (name == "exact") return PropagatorMethod::exact;
  if (name == "sliced-q") return PropagatorMethod::sliced_position;
  if (name == "sliced-cs") return PropagatorMethod::sliced_cs;
  throw ValidationError("method", "one of exact, sliced-q, sliced-cs");
}

cplx short_time_kernel_pq(double p, double q, double epsilon, const Hamiltonian& h) {
  if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be >= 0");
  const double hbar = h.hbar();
  const cplx bracket = std::polar(1.0 / std::sqrt(2.0 * std::numbers::pi * hbar), -q * p / hbar);
  return bracket * std::exp(cplx(0.0, -epsilon / hbar) * symbol_pq(h, p, q));
}

std::vector<double> position_nodes(const PositionGrid& grid) {
  check_position_grid(grid);
  std::vector<double> out(grid.points);
  const double half = 0.5 * static_cast<double>(grid.points - 1);
  for (std::size_t j = 0; j < grid.points; ++j) out[j] = (static_cast<double>(j) - half) * grid.spacing;
  return out;
}

std::vector<double> momentum_nodes(const PositionGrid& grid, double hbar) {
  check_position_grid(grid);
  const double dp = 2.0 * std::numbers::pi * hbar / (static_cast<double>(grid.points) * grid.spacing);
  std::vector<double> out(grid.points);
  const double half = 0.5 * static_cast<double>(grid.points - 1);
  for (std::size_t j = 0; j < grid.points; ++j) out[j] = (static_cast<double>(j) - half) * dp;
  return out;
}

PropagatorResult sliced_propagator_position(double q_final, double q_initial, const LatticeSpec& lattice,
                                            const Hamiltonian& h) {
  check_lattice(lattice);
  check_position_grid(lattice.position);
  if (std::abs(lattice.hbar - h.hbar()) > 1e-12) throw ParameterError("lattice hbar differs from the Hamiltonian's");
  const double half_width = 0.5 * static_cast<double>(lattice.position.points - 1) * lattice.position.spacing;
  const double length = std::sqrt(lattice.hbar / h.mass());
  const double p_max = momentum_nodes(lattice.position, lattice.hbar).back();
  for (double q : {q_initial, q_final}) {
    if (std::abs(q) > half_width - 4.0 * length)
      throw GridError("endpoint q = " + std::to_string(q) + " within 4 natural lengths of the grid edge " +
                      std::to_string(half_width));
  }
  if (p_max < 6.0 * std::sqrt(h.mass() * lattice.hbar))
    throw GridError("momentum grid reaches only " + std::to_string(p_max) + ", below 6 natural widths");

  PropagatorResult r;
  r.method = PropagatorMethod::sliced_position;
  r.lattice = lattice;
  r.value = position_lattice_value(q_final, q_initial, lattice, h, &r.momentum_sums, &r.position_sums);
  if (lattice.slices >= 2) {
    LatticeSpec coarse = lattice;
    coarse.slices = (lattice.slices - 1) / 2;
    r.error_estimate = std::abs(r.value - position_lattice_value(q_final, q_initial, coarse, h, nullptr, nullptr));
  }
  return r;
}

Matrix position_grid_generator(const LatticeSpec& lattice, const Hamiltonian& h) {
  check_lattice(lattice);
  const auto qs = position_nodes(lattice.position);
  const auto ps = momentum_nodes(lattice.position, lattice.hbar);
  const std::size_t g = qs.size();
  Matrix gen(g, g);
  for (std::size_t b = 0; b < g; ++b) {
    for (std::size_t a = 0; a < g; ++a) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < g; ++k)
        s += std::polar(1.0, ps[k] * (qs[a] - qs[b]) / lattice.hbar) * h.pq_form_ref().evaluate(ps[k], qs[b]);
      gen(a, b) = s / static_cast<double>(g);
    }
  }
  return gen;
}

cplx grid_exact_position(double q_final, double q_initial, const LatticeSpec& lattice, const Hamiltonian& h) {
  const std::size_t i0 = grid_index(q_initial, lattice.position);
  const std::size_t i1 = grid_index(q_final, lattice.position);
  const Matrix u = expm(cplx(0.0, -lattice.T / lattice.hbar) * position_grid_generator(lattice, h));
  return u(i1, i0) / lattice.position.spacing;
}

PropagatorResult sliced_propagator_cs(PhasePoint start, PhasePoint end, const LatticeSpec& lattice,
                                      const Hamiltonian& h) {
  check_lattice(lattice);
  if (std::abs(lattice.hbar - h.hbar()) > 1e-12) throw ParameterError("lattice hbar differs from the Hamiltonian's");
  PropagatorResult r;
  r.method = PropagatorMethod::sliced_cs;
  r.lattice = lattice;
  r.value = cs_lattice_value(start, end, lattice, h, &r.boundary_mass);
  r.phase_space_sums = static_cast<std::size_t>(lattice.slices);
  r.boundary_warning = r.boundary_mass > kBoundaryTolerance;
  if (lattice.slices >= 2) {
    LatticeSpec coarse = lattice;
    coarse.slices = (lattice.slices - 1) / 2;
    r.error_estimate = std::abs(r.value - cs_lattice_value(start, end, coarse, h, nullptr));
  }
  return r;
}

PropagatorResult exact_cs_element(PhasePoint start, PhasePoint end, double T, const Hamiltonian& h,
                                  std::size_t min_dim) {
  const double hbar = h.hbar();
  const std::size_t need =
      std::max(coherent_dimension_for(start, hbar, h.mass()), coherent_dimension_for(end, hbar, h.mass()));
  const std::size_t dim = std::max(min_dim, need + 16);
  auto element = [&](std::size_t d, double* defect) {
    const FockOperator u = exact_propagator(h.matrix(d), T);
    if (defect) *defect = unitarity_defect(u.matrix());
    const FockVector a = coherent_state(start, d, hbar, h.mass());
    const FockVector b = coherent_state(end, d, hbar, h.mass());
    return b.inner(u.apply(a));
  };
  PropagatorResult r;
  r.method = PropagatorMethod::exact;
  r.lattice.T = T;
  r.lattice.hbar = hbar;
  r.value = element(dim, &r.unitarity_defect);
  r.error_estimate = std::abs(r.value - element(2 * dim, nullptr));
  return r;
}

}  // namespace cslab
