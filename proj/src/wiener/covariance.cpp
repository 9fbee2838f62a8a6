#include <cmath>

#include "cslab/errors.hpp"
#include "cslab/wiener.hpp"

namespace cslab {

CanonicalMap::CanonicalMap(double A, double B, double C, double D, double a, double b)
    : A_(A), B_(B), C_(C), D_(D), a_(a), b_(b) {
  if (std::abs(A * D - B * C - 1.0) > 1e-12) throw ParameterError("affine map is not canonical: AD - BC != 1");
}

CanonicalMap CanonicalMap::identity() { return CanonicalMap(1, 0, 0, 1, 0, 0); }

CanonicalMap CanonicalMap::rotation(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return CanonicalMap(c, -s, s, c, 0, 0);
}

CanonicalMap CanonicalMap::translation(double dp, double dq) { return CanonicalMap(1, 0, 0, 1, dp, dq); }

CanonicalMap CanonicalMap::affine(double A, double B, double C, double D, double a, double b) {
  return CanonicalMap(A, B, C, D, a, b);
}

PhasePoint CanonicalMap::forward(PhasePoint z) const {
  return {A_ * z.p + B_ * z.q + a_, C_ * z.p + D_ * z.q + b_};
}

PhasePoint CanonicalMap::inverse(PhasePoint zb) const {
  const double u = zb.p - a_, v = zb.q - b_;
  return {D_ * u - B_ * v, -C_ * u + A_ * v};
}

double CanonicalMap::generator(PhasePoint zbar) const {
  // p dq - pbar dqbar = dF with F in the original coordinates.
  const PhasePoint z = inverse(zbar);
  return -B_ * C_ * z.p * z.q - 0.5 * A_ * C_ * z.p * z.p - 0.5 * B_ * D_ * z.q * z.q - a_ * (C_ * z.p + D_ * z.q);
}

bool CanonicalMap::is_identity() const {
  return A_ == 1.0 && D_ == 1.0 && B_ == 0.0 && C_ == 0.0 && a_ == 0.0 && b_ == 0.0;
}

bool CanonicalMap::is_isometry(double tol) const {
  return std::abs(A_ - D_) <= tol && std::abs(B_ + C_) <= tol && std::abs(A_ * A_ + C_ * C_ - 1.0) <= tol;
}

PhaseSymbol CanonicalMap::transform(const PhaseSymbol& h) const {
  return h.substituted(D_, -B_, -D_ * a_ + B_ * b_, -C_, A_, C_ * a_ - A_ * b_);
}

CovarianceReport covariance_check(const CanonicalMap& map, const WienerConfig& cfg, const PhaseSymbol& h) {
  if (!map.is_isometry())
    throw UnsupportedMapError("covariance check supports only rotations and translations of the phase plane");
  CovarianceReport r;
  r.original = wiener_propagator_mc(cfg, h);

  WienerConfig barred = cfg;
  barred.start = map.forward(cfg.start);
  barred.end = map.forward(cfg.end);
  if (!map.is_identity()) barred.seed = block_generator(cfg.seed, ~0ULL)();
  r.transformed = wiener_propagator_mc(barred, map.transform(h));
  const double dg = map.generator(barred.end) - map.generator(barred.start);
  r.transformed.value *= std::polar(1.0, dg / cfg.hbar);
  r.transformed.seed = barred.seed;

  r.discrepancy = std::abs(r.original.value - r.transformed.value);
  r.combined_stderr = std::hypot(r.original.stderr, r.transformed.stderr);
  return r;
}

}  // namespace cslab
