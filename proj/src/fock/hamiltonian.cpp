#include "cslab/hamiltonian.hpp"

#include <cmath>

#include "cslab/errors.hpp"

namespace cslab {

namespace {

// <n| (a^dagger)^j a^k |l>, nonzero only for n = l - k + j.
double ladder_element(int j, int k, int l) {
  if (l < k) return 0.0;
  const int base = l - k;
  double v = 1.0;
  for (int i = base + 1; i <= l; ++i) v *= std::sqrt(static_cast<double>(i));
  for (int i = base + 1; i <= base + j; ++i) v *= std::sqrt(static_cast<double>(i));
  return v;
}

OrderedPolynomial alpha_poly(double mass, double hbar, bool conjugate) {
  const double s = 1.0 / std::sqrt(2.0 * mass * hbar);
  OrderedPolynomial out(0.0);
  out.add_term(0, 1, mass * s);
  out.add_term(1, 0, cplx(0.0, conjugate ? -s : s));
  return out;
}

}  // namespace

OperatorAlgebra::OperatorAlgebra(double mass, double hbar) : mass_(mass), hbar_(hbar) {
  if (!(mass > 0.0)) throw ParameterError("mass must be positive");
  if (!(hbar > 0.0)) throw ParameterError("hbar must be positive");
}

OrderedPolynomial OperatorAlgebra::identity(cplx c) const { return OrderedPolynomial::constant(c, 1.0); }
OrderedPolynomial OperatorAlgebra::a() const { return OrderedPolynomial::right(1.0); }
OrderedPolynomial OperatorAlgebra::adag() const { return OrderedPolynomial::left(1.0); }

OrderedPolynomial OperatorAlgebra::Q() const {
  return std::sqrt(hbar_ / (2.0 * mass_)) * (a() + adag());
}

OrderedPolynomial OperatorAlgebra::P() const {
  return cplx(0.0, std::sqrt(mass_ * hbar_ / 2.0)) * (adag() - a());
}

OrderedPolynomial OperatorAlgebra::normal_power(const OrderedPolynomial& x, int n) const {
  return x.ordered_pow(n);
}

OrderedPolynomial OperatorAlgebra::normal_product(const OrderedPolynomial& x, const OrderedPolynomial& y) const {
  return x.ordered_product(y);
}

Hamiltonian::Hamiltonian(OrderedPolynomial normal_form, double mass, double hbar)
    : normal_(normal_form.pruned(0.0)), mass_(mass), hbar_(hbar) {
  if (normal_.kappa() != cplx(1.0)) throw RepresentationError("Hamiltonian expects a ladder normal-ordered polynomial");
  if (!(mass > 0.0)) throw ParameterError("mass must be positive");
  if (!(hbar > 0.0)) throw ParameterError("hbar must be positive");
  pq_form_ = compute_pq_form();
  antinormal_symbol_ = antinormal_form().substitute(alpha_poly(mass_, hbar_, false), alpha_poly(mass_, hbar_, true)).pruned();
}

Hamiltonian Hamiltonian::zero(double mass, double hbar) { return Hamiltonian(OrderedPolynomial(1.0), mass, hbar); }

Hamiltonian Hamiltonian::harmonic(double mass, double hbar) {
  const OperatorAlgebra alg(mass, hbar);
  const auto q = alg.Q();
  const auto p = alg.P();
  return Hamiltonian(0.5 * (p * p + mass * mass * (q * q)), mass, hbar);
}

Hamiltonian Hamiltonian::quartic_normal(double lambda, double hbar) {
  const OperatorAlgebra alg(1.0, hbar);
  const auto q = alg.Q();
  const auto p = alg.P();
  return Hamiltonian(0.5 * (p * p + q * q) + lambda * alg.normal_power(q, 4), 1.0, hbar);
}

bool Hamiltonian::is_hermitian(double tol) const {
  for (const auto& [key, c] : normal_.terms()) {
    if (std::abs(c - std::conj(normal_.coefficient(key.second, key.first))) > tol * std::max(1.0, std::abs(c)))
      return false;
  }
  return true;
}

FockOperator Hamiltonian::matrix(std::size_t dim) const {
  if (dim < 1) throw DimensionError("operator matrix needs D >= 1");
  Matrix m = Matrix::Zero(dim, dim);
  const int d = static_cast<int>(dim);
  for (const auto& [key, c] : normal_.terms()) {
    const auto [j, k] = key;
    for (int l = k; l < d; ++l) {
      const int n = l - k + j;
      if (n >= d) continue;
      m(n, l) += c * ladder_element(j, k, l);
    }
  }
  if (is_hermitian()) return FockOperator::hermitian(m, hbar_);
  return FockOperator(std::move(m), hbar_);
}

OrderedPolynomial Hamiltonian::normal_symbol_polynomial() const {
  return normal_.substitute(alpha_poly(mass_, hbar_, true), alpha_poly(mass_, hbar_, false)).pruned();
}

OrderedPolynomial Hamiltonian::antinormal_form() const {
  // a^dagger -> R, a -> L in the algebra with R L = L R - 1.
  return normal_.substitute(OrderedPolynomial::right(-1.0), OrderedPolynomial::left(-1.0)).pruned();
}

OrderedPolynomial Hamiltonian::antinormal_symbol_polynomial() const { return antinormal_symbol_; }

OrderedPolynomial Hamiltonian::pq_form() const { return pq_form_; }

OrderedPolynomial Hamiltonian::compute_pq_form() const {
  const cplx kappa(0.0, hbar_);
  const double s = 1.0 / std::sqrt(2.0 * mass_ * hbar_);
  OrderedPolynomial adag_image(kappa), a_image(kappa);
  adag_image.add_term(1, 0, cplx(0.0, -s));
  adag_image.add_term(0, 1, mass_ * s);
  a_image.add_term(1, 0, cplx(0.0, s));
  a_image.add_term(0, 1, mass_ * s);
  return normal_.substitute(adag_image, a_image).pruned();
}

OrderedPolynomial Hamiltonian::pq_symbol_polynomial() const {
  OrderedPolynomial out(0.0);
  for (const auto& [key, c] : pq_form().terms()) out.add_term(key.first, key.second, c);
  return out;
}

double Hamiltonian::normal_symbol(PhasePoint pt) const {
  const cplx a = alpha(pt);
  return normal_.evaluate(std::conj(a), a).real();
}

double Hamiltonian::antinormal_symbol(PhasePoint pt) const {
  return antinormal_symbol_.evaluate(pt.p, pt.q).real();
}

cplx Hamiltonian::mixed_symbol(PhasePoint bra, PhasePoint ket) const {
  return normal_.evaluate(std::conj(alpha(bra)), alpha(ket));
}

cplx Hamiltonian::alpha(PhasePoint pt) const {
  return cplx(mass_ * pt.q, pt.p) / std::sqrt(2.0 * mass_ * hbar_);
}

cplx symbol_pq(const Hamiltonian& h, double p, double q) { return h.pq_form_ref().evaluate(p, q); }

}  // namespace cslab
