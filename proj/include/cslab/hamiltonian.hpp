#pragma once

#include <cstddef>

#include "cslab/fock.hpp"
#include "cslab/polynomial.hpp"

namespace cslab {

/// Builds polynomial operators in Q and P for an oscillator of mass m. Every
/// element is kept in ladder normal order (a^dagger left), so products of
/// elements are true operator products and `normal()` implements :...:.
class OperatorAlgebra {
 public:
  explicit OperatorAlgebra(double mass = 1.0, double hbar = 1.0);

  double mass() const noexcept { return mass_; }
  double hbar() const noexcept { return hbar_; }

  OrderedPolynomial identity(cplx c = 1.0) const;
  OrderedPolynomial a() const;
  OrderedPolynomial adag() const;
  OrderedPolynomial Q() const;
  OrderedPolynomial P() const;

  /// :x^n: for an element x (commuting power of its ladder form).
  OrderedPolynomial normal_power(const OrderedPolynomial& x, int n) const;
  /// :x y:
  OrderedPolynomial normal_product(const OrderedPolynomial& x, const OrderedPolynomial& y) const;

 private:
  double mass_;
  double hbar_;
};

/// A Hamiltonian given as a polynomial in Q and P. The ladder normal-ordered
/// form is canonical; matrices and every symbol convention derive from it.
class Hamiltonian {
 public:
  Hamiltonian(OrderedPolynomial normal_form, double mass = 1.0, double hbar = 1.0);

  static Hamiltonian zero(double mass = 1.0, double hbar = 1.0);
  /// (P^2 + m^2 Q^2)/2, not normal ordered.
  static Hamiltonian harmonic(double mass = 1.0, double hbar = 1.0);
  /// (P^2 + Q^2)/2 + lambda :Q^4: at m = 1.
  static Hamiltonian quartic_normal(double lambda, double hbar = 1.0);

  double mass() const noexcept { return mass_; }
  double hbar() const noexcept { return hbar_; }
  const OrderedPolynomial& normal_form() const noexcept { return normal_; }
  bool is_hermitian(double tol = 1e-12) const;
  /// True when no term survives.
  bool is_zero() const { return normal_.terms().empty(); }

  /// Compression of the operator onto the first D basis states (exact
  /// matrix elements, no truncation artefacts at the top).
  FockOperator matrix(std::size_t dim) const;

  /// Ladder normal symbol <p,q|H|p,q> as a commuting polynomial in (p, q).
  OrderedPolynomial normal_symbol_polynomial() const;
  /// Anti-normal symbol h with H = int h(p,q) |p,q><p,q| dmu.
  OrderedPolynomial antinormal_symbol_polynomial() const;
  /// Symbol with all P to the left of all Q, i.e. <p|H|q>/<p|q>.
  OrderedPolynomial pq_symbol_polynomial() const;

  /// Anti-normal ordered form (L = a, R = a^dagger).
  OrderedPolynomial antinormal_form() const;
  /// Momentum-left form (L = P, R = Q).
  OrderedPolynomial pq_form() const;
  const OrderedPolynomial& pq_form_ref() const noexcept { return pq_form_; }

  double normal_symbol(PhasePoint pt) const;
  double antinormal_symbol(PhasePoint pt) const;
  /// H(p,q;p',q') = <p,q|H|p',q'> / <p,q|p',q'>
  cplx mixed_symbol(PhasePoint bra, PhasePoint ket) const;

  /// Ladder variable alpha = (m q + i p)/sqrt(2 m hbar) of a phase point.
  cplx alpha(PhasePoint pt) const;

 private:
  OrderedPolynomial compute_pq_form() const;

  OrderedPolynomial normal_;
  double mass_;
  double hbar_;
  OrderedPolynomial pq_form_;
  OrderedPolynomial antinormal_symbol_;
};

/// H(p;q) = <p|H|q>/<p|q> for a Hamiltonian polynomial.
cplx symbol_pq(const Hamiltonian& h, double p, double q);

/// Evaluates a commuting (p, q) polynomial (L = p, R = q).
inline cplx evaluate_phase(const OrderedPolynomial& poly, double p, double q) { return poly.evaluate(p, q); }

}  // namespace cslab
