#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "cslab/errors.hpp"
#include "cslab/hamiltonian.hpp"
#include "cslab/rotsym.hpp"

namespace cslab {

double h1_symbol(double m, PhasePoint pt) {
  const double h0 = 0.5 * (pt.p * pt.p + m * m * pt.q * pt.q);
  return h0 + h0 * h0;
}

double h1_symbol_fock(double m, PhasePoint pt, double hbar, std::size_t dim) {
  const OperatorAlgebra alg(m, hbar);
  const auto h0 = 0.5 * (alg.normal_power(alg.P(), 2) + m * m * alg.normal_power(alg.Q(), 2));
  const Hamiltonian h1(h0 + alg.normal_product(h0, h0), m, hbar);
  const FockVector psi = coherent_state(pt, dim, hbar, m);
  return h1.matrix(dim).expectation(psi).real();
}

void ReducibleSpec::validate() const {
  if (!(m > 0.0)) throw ValidationError("m", "m > 0");
  if (!(zeta >= 0.0 && zeta < 1.0)) throw ValidationError("zeta", "0 <= zeta < 1");
  if (!(beta >= 0.0)) throw ValidationError("beta", "beta >= 0");
  if (!(hbar > 0.0)) throw ValidationError("hbar", "hbar > 0");
  if (dim_per_mode < 4) throw ValidationError("dim_per_mode", "dim_per_mode >= 4");
}

ReducibleSpec reducible_from_bare(double m0, double lambda0, double zeta, double hbar, std::size_t dim_per_mode) {
  if (!(m0 > 0.0)) throw ValidationError("m0", "m0 > 0");
  if (!(lambda0 >= 0.0)) throw ValidationError("lambda0", "lambda0 >= 0");
  if (lambda0 > 0.0 && zeta == 0.0) throw ParameterError("a quartic coupling needs zeta > 0");
  ReducibleSpec s;
  s.zeta = zeta;
  s.hbar = hbar;
  s.dim_per_mode = dim_per_mode;
  s.m = m0 / std::sqrt(1.0 + zeta * zeta);
  s.beta = lambda0 > 0.0 ? lambda0 / std::pow(s.m * zeta, 4) : 0.0;
  s.validate();
  return s;
}

double h2_symbol_closed(const ReducibleSpec& spec, PhasePoint pt) {
  const double q2 = pt.q * pt.q;
  return 0.5 * (pt.p * pt.p + spec.induced_mass2() * q2) + spec.induced_coupling() * q2 * q2;
}

namespace {

// Single-mode annihilator, sparse, n x n.
SparseMatrix lowering(std::size_t n) {
  SparseMatrix a(n, n);
  std::vector<Eigen::Triplet<cplx>> t;
  for (std::size_t k = 1; k < n; ++k) t.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

SparseMatrix identity(std::size_t n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

SparseMatrix kron(const SparseMatrix& x, const SparseMatrix& y) {
  SparseMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  std::vector<Eigen::Triplet<cplx>> t;
  for (int i = 0; i < x.outerSize(); ++i)
    for (SparseMatrix::InnerIterator ix(x, i); ix; ++ix)
      for (int j = 0; j < y.outerSize(); ++j)
        for (SparseMatrix::InnerIterator iy(y, j); iy; ++iy)
          t.emplace_back(ix.row() * y.rows() + iy.row(), ix.col() * y.cols() + iy.col(), ix.value() * iy.value());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

// Dense block of a two-mode operator on the states with both indices < d.
Matrix compress(const SparseMatrix& op, std::size_t work, std::size_t d) {
  const Matrix full(op);
  Matrix out(d * d, d * d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t jj = 0; jj < d; ++jj)
        for (std::size_t kk = 0; kk < d; ++kk) out(j * d + k, jj * d + kk) = full(j * work + k, jj * work + kk);
  return out;
}

constexpr std::size_t kExtraWorking = 8;
constexpr std::size_t kExtraDisplacement = 48;

}  // namespace

ReducibleRepresentation::ReducibleRepresentation(const ReducibleSpec& spec)
    : spec_(spec), basis_mass_(spec.m * std::sqrt(1.0 - spec.zeta * spec.zeta)), work_(spec.dim_per_mode + kExtraWorking) {
  spec_.validate();
  const double m = spec_.m, z = spec_.zeta, hbar = spec_.hbar, mb = basis_mass_;
  const std::size_t W = work_, D = spec_.dim_per_mode;
  const SparseMatrix c = lowering(W);
  const SparseMatrix cd = SparseMatrix(c.adjoint());
  const SparseMatrix id = identity(W);
  const double xs = std::sqrt(hbar / (2.0 * mb)), ps = std::sqrt(mb * hbar / 2.0);
  const SparseMatrix x1 = xs * (c + cd), p1 = cplx(0.0, ps) * (cd - c);
  const SparseMatrix Q = kron(x1, id), P = kron(p1, id), S = kron(id, x1), R = kron(id, p1);
  const cplx I(0.0, 1.0);
  a_ = m * (Q + z * S) + I * P;
  b_ = m * (S + z * Q) + I * R;

  // Joint kernel on the first D states of each mode.
  const SparseMatrix K = SparseMatrix(a_.adjoint()) * a_ + SparseMatrix(b_.adjoint()) * b_;
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(compress(K, W, D));
  const Vector low = eig.eigenvectors().col(0);
  vacuum_ = Vector::Zero(W * W);
  for (std::size_t j = 0; j < D; ++j)
    for (std::size_t k = 0; k < D; ++k) vacuum_[j * W + k] = low[j * D + k];
  const cplx c00 = vacuum_[0];
  vacuum_ *= std::abs(c00) / c00;
  vacuum_.normalize();
  const double scale = std::sqrt(2.0 * m * hbar);
  residual_a_ = (a_ * vacuum_).norm() / scale;
  residual_b_ = (b_ * vacuum_).norm() / scale;
  if (residual_a_ > 1e-8 || residual_b_ > 1e-8)
    throw FiducialError("joint vacuum not annihilated: |a v| = " + std::to_string(residual_a_) +
                        ", |b v| = " + std::to_string(residual_b_));

  // Single-mode Q and P at a larger dimension for the displacement.
  const std::size_t L = W + kExtraDisplacement;
  const auto [ql, pl] = build_qp(L, mb, hbar);
  displacement_generator_q_ = ql.matrix();
  displacement_generator_p_ = pl.matrix();
}

Vector ReducibleRepresentation::coherent(PhasePoint pt) const {
  const std::size_t W = work_, L = static_cast<std::size_t>(displacement_generator_q_.rows());
  Matrix psi = Matrix::Zero(L, W);  // rows: first mode, columns: second mode
  for (std::size_t j = 0; j < W; ++j)
    for (std::size_t k = 0; k < W; ++k) psi(j, k) = vacuum_[j * W + k];
  const HermitianEvolution eq(displacement_generator_q_), ep(displacement_generator_p_);
  for (std::size_t k = 0; k < W; ++k) {
    Vector col = psi.col(k);
    col = eq.apply_phase(pt.p / spec_.hbar, col);
    col = ep.apply_phase(-pt.q / spec_.hbar, col);
    psi.col(k) = col;
  }
  const double spill = psi.bottomRows(L - W).squaredNorm();
  if (spill > 1e-10)
    throw TruncationError("displaced reducible state leaves the working basis (" + std::to_string(spill) + ")",
                          spec_.dim_per_mode + 2 * (L - W));
  Vector out(W * W);
  for (std::size_t j = 0; j < W; ++j)
    for (std::size_t k = 0; k < W; ++k) out[j * W + k] = psi(j, k);
  return out;
}

double ReducibleRepresentation::symbol(PhasePoint pt) const {
  const Vector psi = coherent(pt);
  const Vector bpsi = b_ * psi;
  const Vector bbpsi = b_ * bpsi;
  return 0.5 * (a_ * psi).squaredNorm() + 0.5 * bpsi.squaredNorm() + spec_.beta * bbpsi.squaredNorm();
}

double ReducibleRepresentation::min_eigenvalue() const {
  const SparseMatrix ad = a_.adjoint(), bd = b_.adjoint();
  const SparseMatrix h2 = 0.5 * (ad * a_) + 0.5 * (bd * b_) + spec_.beta * (bd * bd * b_ * b_);
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(compress(h2, work_, spec_.dim_per_mode), Eigen::EigenvaluesOnly);
  return eig.eigenvalues()[0];
}

cplx ReducibleRepresentation::wavefunction(const Vector& state, double x, double y) const {
  const RealVector hx = hermite_functions(static_cast<int>(work_), x, basis_mass_, spec_.hbar);
  const RealVector hy = hermite_functions(static_cast<int>(work_), y, basis_mass_, spec_.hbar);
  cplx s = 0.0;
  for (std::size_t j = 0; j < work_; ++j)
    for (std::size_t k = 0; k < work_; ++k) s += state[j * work_ + k] * hx[j] * hy[k];
  return s;
}

double h2_symbol_fock(const ReducibleSpec& spec, PhasePoint pt) { return ReducibleRepresentation(spec).symbol(pt); }

cplx reducible_wavefunction(const ReducibleSpec& spec, PhasePoint pt, double x, double y) {
  const double m = spec.m, z = spec.zeta, hbar = spec.hbar;
  const double norm = std::sqrt(m * std::sqrt(1.0 - z * z) / (std::numbers::pi * hbar));
  const double u = x - pt.q;
  return norm * std::exp(cplx(-(m / (2.0 * hbar)) * (u * u + y * y + 2.0 * z * u * y), pt.p * u / hbar));
}

FiducialCheck fiducial_wavefunction_check(const ReducibleSpec& spec, PhasePoint displaced, double half_width,
                                          int points) {
  const ReducibleRepresentation rep(spec);
  const std::size_t W = rep.working_dim();
  const double h = 2.0 * half_width / (points - 1);
  RealMatrix herm(W, points);
  for (int i = 0; i < points; ++i)
    herm.col(i) = hermite_functions(static_cast<int>(W), -half_width + i * h, rep.basis_mass(), spec.hbar);

  auto residual = [&](const Vector& state, PhasePoint label) {
    Matrix c(W, W);
    for (std::size_t j = 0; j < W; ++j)
      for (std::size_t k = 0; k < W; ++k) c(j, k) = state[j * W + k];
    const Matrix grid = herm.transpose().cast<cplx>() * c * herm.cast<cplx>();  // (x_i, y_j)
    cplx overlap = 0.0;
    Matrix closed(points, points);
    for (int i = 0; i < points; ++i)
      for (int j = 0; j < points; ++j) {
        closed(i, j) = reducible_wavefunction(spec, label, -half_width + i * h, -half_width + j * h);
        overlap += std::conj(closed(i, j)) * grid(i, j);
      }
    const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0);
    return std::sqrt((grid - phase * closed).squaredNorm() * h * h);
  };
  FiducialCheck out;
  out.vacuum_residual = residual(rep.vacuum(), {0.0, 0.0});
  out.displaced_residual = residual(rep.coherent(displaced), displaced);
  return out;
}

}  // namespace cslab
