#pragma once

#include <complex>
#include <map>
#include <utility>

namespace cslab {

using cplx = std::complex<double>;

/// Polynomial in two generators kept in a fixed order: every monomial is
/// stored as L^j R^k (all L factors to the left). The generators satisfy
/// R L = L R + kappa with kappa a c-number, so products can be brought back
/// to ordered form exactly:
///
///   ladder, normal order      L = a^dagger, R = a,        kappa = 1
///   anti-normal order         L = a,        R = a^dagger, kappa = -1
///   momentum-left/position    L = P,        R = Q,        kappa = i hbar
///   commuting phase-space     L = p,        R = q,        kappa = 0
class OrderedPolynomial {
 public:
  using Key = std::pair<int, int>;  // (power of L, power of R)
  using Terms = std::map<Key, cplx>;

  explicit OrderedPolynomial(cplx kappa = 0.0) : kappa_(kappa) {}

  static OrderedPolynomial constant(cplx c, cplx kappa);
  static OrderedPolynomial left(cplx kappa);   // L
  static OrderedPolynomial right(cplx kappa);  // R
  static OrderedPolynomial monomial(int j, int k, cplx c, cplx kappa);

  cplx kappa() const noexcept { return kappa_; }
  const Terms& terms() const noexcept { return terms_; }
  cplx coefficient(int j, int k) const;
  void add_term(int j, int k, cplx c);

  /// Highest power of L (resp. R) with a nonzero coefficient; -1 if empty.
  int degree_left() const;
  int degree_right() const;
  int total_degree() const;

  OrderedPolynomial& operator+=(const OrderedPolynomial& o);
  OrderedPolynomial& operator-=(const OrderedPolynomial& o);
  OrderedPolynomial& operator*=(cplx s);

  /// Operator product, reordered with the commutation rule.
  friend OrderedPolynomial operator*(const OrderedPolynomial& a, const OrderedPolynomial& b);
  friend OrderedPolynomial operator+(OrderedPolynomial a, const OrderedPolynomial& b) { return a += b; }
  friend OrderedPolynomial operator-(OrderedPolynomial a, const OrderedPolynomial& b) { return a -= b; }
  friend OrderedPolynomial operator*(OrderedPolynomial a, cplx s) { return a *= s; }
  friend OrderedPolynomial operator*(cplx s, OrderedPolynomial a) { return a *= s; }
  friend OrderedPolynomial operator*(OrderedPolynomial a, double s) { return a *= s; }
  friend OrderedPolynomial operator*(double s, OrderedPolynomial a) { return a *= s; }

  /// Product that ignores the commutator (the :AB: of two ordered forms).
  OrderedPolynomial ordered_product(const OrderedPolynomial& o) const;
  OrderedPolynomial pow(int n) const;
  OrderedPolynomial ordered_pow(int n) const;

  /// Sum c_jk l^j r^k with l, r numbers.
  cplx evaluate(cplx l, cplx r) const;

  /// Substitutes L -> left_image and R -> right_image, evaluating products in
  /// the target algebra (whose kappa is taken from the images).
  OrderedPolynomial substitute(const OrderedPolynomial& left_image,
                               const OrderedPolynomial& right_image) const;

  /// Drops coefficients with modulus below tol.
  OrderedPolynomial pruned(double tol = 1e-14) const;

  /// Adjoint assuming L^dagger = R (ladder algebras): c_jk L^j R^k ->
  /// conj(c_jk) L^k R^j.
  OrderedPolynomial ladder_adjoint() const;

 private:
  cplx kappa_;
  Terms terms_;
};

}  // namespace cslab
