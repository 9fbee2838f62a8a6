#include "cslab/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cslab {

HermitianEvolution::HermitianEvolution(const Matrix& hermitian) {
  const Matrix sym = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Matrix HermitianEvolution::propagator(double t) const {
  Vector phases(eigenvalues_.size());
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) phases[k] = std::polar(1.0, -eigenvalues_[k] * t);
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

Vector HermitianEvolution::apply(double t, const Vector& v) const {
  if (t == 0.0) return v;
  Vector c = eigenvectors_.adjoint() * v;
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -eigenvalues_[k] * t);
  return eigenvectors_ * c;
}

Vector HermitianEvolution::apply_phase(double s, const Vector& v) const { return apply(-s, v); }

Matrix expm(const Matrix& m) { return m.exp(); }

double hermiticity_defect(const Matrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

double unitarity_defect(const Matrix& u) {
  return (u * u.adjoint() - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

std::pair<RealVector, RealVector> gauss_hermite(int n) {
  RealMatrix jacobi = RealMatrix::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    jacobi(i, i - 1) = std::sqrt(i / 2.0);
    jacobi(i - 1, i) = jacobi(i, i - 1);
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(jacobi);
  RealVector nodes = solver.eigenvalues();
  RealVector weights(n);
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int i = 0; i < n; ++i) weights[i] = mu0 * solver.eigenvectors()(0, i) * solver.eigenvectors()(0, i);
  return {nodes, weights};
}

RealVector hermite_functions(int n, double x, double mass, double hbar) {
  RealVector out = RealVector::Zero(n);
  if (n == 0) return out;
  const double scale = std::sqrt(mass / hbar);
  const double xi = scale * x;
  out[0] = std::pow(scale * scale / std::numbers::pi, 0.25) * std::exp(-0.5 * xi * xi);
  if (n > 1) out[1] = std::sqrt(2.0) * xi * out[0];
  for (int k = 2; k < n; ++k)
    out[k] = std::sqrt(2.0 / k) * xi * out[k - 1] - std::sqrt((k - 1.0) / k) * out[k - 2];
  return out;
}

double poisson_tail(double lambda, std::size_t n) {
  if (n == 0) return 1.0;
  if (lambda <= 0.0) return 0.0;
  double sum = 0.0;
  const double log_lambda = std::log(lambda);
  for (std::size_t k = n;; ++k) {
    const double term = std::exp(-lambda + static_cast<double>(k) * log_lambda - std::lgamma(k + 1.0));
    sum += term;
    if (static_cast<double>(k) > lambda && term < 1e-30 * std::max(sum, 1e-300)) break;
    if (static_cast<double>(k) > lambda && term == 0.0) break;
  }
  return sum;
}

}  // namespace cslab
