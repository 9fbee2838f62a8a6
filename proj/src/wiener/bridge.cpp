#include <cmath>

#include "cslab/errors.hpp"
#include "cslab/wiener.hpp"

namespace cslab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double horner(const std::vector<double>& c, double x) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

}  // namespace

PhaseSymbol::PhaseSymbol(const OrderedPolynomial& poly) : poly_(poly) {
  if (poly.kappa() != cplx(0.0)) throw RepresentationError("phase symbol needs a commuting polynomial");
  const int jmax = std::max(poly.degree_left(), 0);
  const int kmax = std::max(poly.degree_right(), 0);
  rows_.assign(jmax + 1, std::vector<double>(kmax + 1, 0.0));
  for (const auto& [key, c] : poly.terms()) {
    if (std::abs(c.imag()) > 1e-10 * std::max(1.0, std::abs(c)))
      throw RepresentationError("phase symbol must be real");
    rows_[key.first][key.second] = c.real();
  }
}

PhaseSymbol PhaseSymbol::zero() { return PhaseSymbol(OrderedPolynomial(0.0)); }

PhaseSymbol PhaseSymbol::constant(double c) { return PhaseSymbol(OrderedPolynomial::constant(c, 0.0)); }

PhaseSymbol PhaseSymbol::antinormal(const Hamiltonian& h) { return PhaseSymbol(h.antinormal_symbol_polynomial()); }

PhaseSymbol PhaseSymbol::normal(const Hamiltonian& h) { return PhaseSymbol(h.normal_symbol_polynomial()); }

double PhaseSymbol::operator()(double p, double q) const {
  double r = 0.0;
  for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) r = r * p + horner(*it, q);
  return r;
}

std::array<double, 3> PhaseSymbol::momentum_coefficients(double q) const {
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < rows_.size() && j < 3; ++j) out[j] = horner(rows_[j], q);
  return out;
}

PhaseSymbol PhaseSymbol::substituted(double a, double b, double c, double d, double e, double f) const {
  OrderedPolynomial pimg(0.0), qimg(0.0);
  pimg.add_term(1, 0, a);
  pimg.add_term(0, 1, b);
  pimg.add_term(0, 0, c);
  qimg.add_term(1, 0, d);
  qimg.add_term(0, 1, e);
  qimg.add_term(0, 0, f);
  return PhaseSymbol(poly_.substitute(pimg, qimg).pruned(1e-14));
}

void validate(const WienerConfig& cfg) {
  if (!(cfg.nu > 0.0) || !std::isfinite(cfg.nu)) throw ValidationError("nu", "nu > 0");
  if (cfg.steps < 1) throw ValidationError("steps", "steps >= 1");
  if (cfg.samples < 2) throw ValidationError("samples", "samples >= 2");
  if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) throw ValidationError("T", "T > 0");
  if (!(cfg.hbar > 0.0) || !std::isfinite(cfg.hbar)) throw ValidationError("hbar", "hbar > 0");
  if (!(cfg.confidence_fraction > 0.0)) throw ValidationError("confidence_fraction", "> 0");
  for (double x : {cfg.start.p, cfg.start.q, cfg.end.p, cfg.end.q})
    if (!std::isfinite(x)) throw ValidationError("endpoints", "finite phase points");
}

int default_wiener_steps(double nu, double T) {
  return std::max(2, static_cast<int>(std::ceil(4.0 * nu * T)));
}

std::mt19937_64 block_generator(std::uint64_t seed, std::uint64_t block) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(block + 0x632be59bd9b4e019ULL)));
}

BridgePath sample_pinned_bridge(const WienerConfig& cfg, std::mt19937_64& rng) {
  validate(cfg);
  const int n = cfg.steps;
  const double s = cfg.nu * cfg.hbar * cfg.dt();
  std::normal_distribution<double> gauss;
  BridgePath path;
  path.dt = cfg.dt();
  path.points.resize(n + 1);
  path.points[0] = cfg.start;
  path.points[n] = cfg.end;
  for (int k = 0; k + 1 < n; ++k) {
    const double left = n - k;
    const double sd = std::sqrt(s * (left - 1.0) / left);
    const PhasePoint& x = path.points[k];
    path.points[k + 1] = {x.p + (cfg.end.p - x.p) / left + sd * gauss(rng),
                          x.q + (cfg.end.q - x.q) / left + sd * gauss(rng)};
  }
  return path;
}

double midpoint_pdq(const std::vector<PhasePoint>& points) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < points.size(); ++k)
    s += 0.5 * (points[k].p + points[k + 1].p) * (points[k + 1].q - points[k].q);
  return s;
}

cplx stratonovich_action(const BridgePath& path, const PhaseSymbol& h, double hbar) {
  double energy = 0.0;
  for (std::size_t k = 0; k + 1 < path.points.size(); ++k) {
    const PhasePoint& a = path.points[k];
    const PhasePoint& b = path.points[k + 1];
    energy += h(0.5 * (a.p + b.p), 0.5 * (a.q + b.q));
  }
  return cplx(0.0, (midpoint_pdq(path.points) - energy * path.dt) / hbar);
}

double lattice_normalization(double nu, double dt, int steps) { return std::pow(1.0 + 0.5 * nu * dt, steps); }

}  // namespace cslab
