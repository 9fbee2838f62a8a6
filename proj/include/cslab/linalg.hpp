#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

namespace cslab {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Spectral decomposition of a hermitian matrix, kept around so that
/// exp(-i M t) can be formed or applied for many t without refactoring.
class HermitianEvolution {
 public:
  explicit HermitianEvolution(const Matrix& hermitian);

  /// exp(-i M t)
  Matrix propagator(double t) const;
  /// exp(-i M t) v
  Vector apply(double t, const Vector& v) const;
  /// exp(i s M) v, the form used for displacement operators.
  Vector apply_phase(double s, const Vector& v) const;

  const RealVector& eigenvalues() const noexcept { return eigenvalues_; }
  const Matrix& eigenvectors() const noexcept { return eigenvectors_; }

 private:
  RealVector eigenvalues_;
  Matrix eigenvectors_;
};

/// General complex matrix exponential (scaling and squaring, Pade).
Matrix expm(const Matrix& m);

/// max |M - M^dagger|
double hermiticity_defect(const Matrix& m);

/// max |U U^dagger - 1|
double unitarity_defect(const Matrix& u);

/// Gauss-Hermite rule for weight exp(-x^2), n nodes (Golub-Welsch).
std::pair<RealVector, RealVector> gauss_hermite(int n);

/// Hermite functions psi_0..psi_{n-1} of an oscillator with mass m and hbar,
/// evaluated at x (L2-normalized in x).
RealVector hermite_functions(int n, double x, double mass, double hbar);

/// sum_{k >= n} e^{-lambda} lambda^k / k!
double poisson_tail(double lambda, std::size_t n);

}  // namespace cslab
