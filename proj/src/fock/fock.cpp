#include "cslab/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "cslab/errors.hpp"

namespace cslab {

namespace {

constexpr double kHermitianTolerance = 1e-12;

void check_physics(double mass, double hbar) {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw ParameterError("mass must be positive");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ParameterError("hbar must be positive");
}

bool hermitian_within_tolerance(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return hermiticity_defect(m) <= kHermitianTolerance * scale;
}

RealMatrix real_ladder(std::size_t dim) {
  RealMatrix a = RealMatrix::Zero(dim, dim);
  for (std::size_t n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// Spectral data of the truncated Q and P at one working dimension.
struct DisplacementFactors {
  HermitianEvolution q;
  HermitianEvolution p;
};

std::shared_ptr<const DisplacementFactors> displacement_factors(std::size_t dim, double mass, double hbar) {
  using Key = std::tuple<std::size_t, double, double>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const DisplacementFactors>> cache;
  const Key key{dim, mass, hbar};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto [qop, pop] = build_qp(dim, mass, hbar);
  auto factors = std::make_shared<const DisplacementFactors>(
      DisplacementFactors{HermitianEvolution(qop.matrix()), HermitianEvolution(pop.matrix())});
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(factors)).first->second;
}

std::size_t working_dimension(PhasePoint pt, std::size_t n_keep, double hbar, double mass) {
  const std::size_t needed = coherent_dimension_for(pt, hbar, mass, 1e-20);
  std::size_t w = std::max(needed, n_keep) + 24;
  return (w + 15) / 16 * 16;
}

}  // namespace

FockVector::FockVector(Vector amplitudes, double hbar) : amplitudes_(std::move(amplitudes)), hbar_(hbar) {
  if (!amplitudes_.allFinite()) throw ParameterError("FockVector amplitudes must be finite");
  if (!(hbar_ > 0.0)) throw ParameterError("hbar must be positive");
  normalized_ = std::abs(amplitudes_.norm() - 1.0) <= 1e-12;
}

cplx FockVector::inner(const FockVector& other) const {
  if (other.dim() != dim()) throw DimensionError("inner product of vectors with different dimensions");
  return amplitudes_.dot(other.amplitudes_);
}

FockOperator::FockOperator(Matrix matrix, double hbar) : matrix_(std::move(matrix)), hbar_(hbar) {
  if (matrix_.rows() != matrix_.cols()) throw DimensionError("FockOperator must be square");
  if (!(hbar_ > 0.0)) throw ParameterError("hbar must be positive");
  hermitian_ = hermitian_within_tolerance(matrix_);
}

FockOperator FockOperator::hermitian(const Matrix& matrix, double hbar) {
  FockOperator op(0.5 * (matrix + matrix.adjoint()), hbar);
  op.hermitian_ = true;
  return op;
}

FockVector FockOperator::apply(const FockVector& v) const {
  if (v.dim() != dim()) throw DimensionError("operator and vector dimensions differ");
  return FockVector(matrix_ * v.amplitudes(), hbar_);
}

cplx FockOperator::expectation(const FockVector& v) const {
  if (v.dim() != dim()) throw DimensionError("operator and vector dimensions differ");
  return v.amplitudes().dot(matrix_ * v.amplitudes());
}

FockOperator operator+(const FockOperator& a, const FockOperator& b) {
  return FockOperator(a.matrix_ + b.matrix_, a.hbar_);
}

FockOperator operator-(const FockOperator& a, const FockOperator& b) {
  return FockOperator(a.matrix_ - b.matrix_, a.hbar_);
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  return FockOperator(a.matrix_ * b.matrix_, a.hbar_);
}

FockOperator operator*(cplx s, const FockOperator& a) { return FockOperator(s * a.matrix_, a.hbar_); }

std::pair<FockOperator, FockOperator> build_ladder(std::size_t dim) {
  if (dim < 2) throw DimensionError("ladder operators need D >= 2, got " + std::to_string(dim));
  const RealMatrix a = real_ladder(dim);
  return {FockOperator(a.cast<cplx>(), 1.0), FockOperator(a.transpose().cast<cplx>(), 1.0)};
}

std::pair<FockOperator, FockOperator> build_qp(std::size_t dim, double mass, double hbar) {
  if (dim < 2) throw DimensionError("Q and P need D >= 2, got " + std::to_string(dim));
  check_physics(mass, hbar);
  const RealMatrix a = real_ladder(dim);
  const RealMatrix sum = a + a.transpose();
  const RealMatrix diff = a.transpose() - a;
  Matrix q = std::sqrt(hbar / (2.0 * mass)) * sum.cast<cplx>();
  Matrix p = cplx(0.0, std::sqrt(mass * hbar / 2.0)) * diff.cast<cplx>();
  return {FockOperator::hermitian(q, hbar), FockOperator::hermitian(p, hbar)};
}

double coherent_mean_occupation(PhasePoint pt, double hbar, double mass) {
  return (mass * mass * pt.q * pt.q + pt.p * pt.p) / (2.0 * mass * hbar);
}

double coherent_tail_mass(PhasePoint pt, std::size_t dim, double hbar, double mass) {
  return poisson_tail(coherent_mean_occupation(pt, hbar, mass), dim);
}

std::size_t coherent_dimension_for(PhasePoint pt, double hbar, double mass, double tol) {
  const double lambda = coherent_mean_occupation(pt, hbar, mass);
  std::size_t d = 1;
  while (poisson_tail(lambda, d) > tol) ++d;
  return d;
}

Vector coherent_amplitudes(PhasePoint pt, std::size_t n_keep, double hbar, double mass) {
  check_physics(mass, hbar);
  if (!std::isfinite(pt.p) || !std::isfinite(pt.q)) throw ParameterError("phase point must be finite");
  const std::size_t w = working_dimension(pt, n_keep, hbar, mass);
  const auto factors = displacement_factors(w, mass, hbar);
  Vector v = Vector::Zero(w);
  v[0] = 1.0;
  // exp(ipQ/hbar) first, then exp(-iqP/hbar).
  v = factors->q.apply_phase(pt.p / hbar, v);
  v = factors->p.apply_phase(-pt.q / hbar, v);
  return v.head(n_keep);
}

FockVector coherent_state(PhasePoint pt, std::size_t dim, double hbar, double mass) {
  if (dim < 1) throw DimensionError("coherent state needs D >= 1");
  const double tail = coherent_tail_mass(pt, dim, hbar, mass);
  if (tail > kCoherentTailTolerance) {
    const std::size_t suggested = coherent_dimension_for(pt, hbar, mass);
    throw TruncationError("coherent state (p=" + std::to_string(pt.p) + ", q=" + std::to_string(pt.q) +
                              ") has tail mass " + std::to_string(tail) + " beyond D=" + std::to_string(dim) +
                              "; use D >= " + std::to_string(suggested),
                          suggested);
  }
  Vector v = coherent_amplitudes(pt, dim, hbar, mass);
  v /= v.norm();
  return FockVector(std::move(v), hbar);
}

cplx overlap_analytic(PhasePoint bra, PhasePoint ket, double hbar) {
  const double dp = bra.p - ket.p;
  const double dq = bra.q - ket.q;
  const double phase = (bra.p + ket.p) * dq / (2.0 * hbar);
  const double damping = (dp * dp + dq * dq) / (4.0 * hbar);
  return std::polar(std::exp(-damping), phase);
}

cplx symbol_normal(const FockOperator& h, PhasePoint pt, double mass) {
  const FockVector state = coherent_state(pt, h.dim(), h.hbar(), mass);
  return h.expectation(state);
}

Matrix resolution_of_unity_matrix(std::size_t block, double cutoff_radius, QuadratureSpec grid, double hbar,
                                  double mass) {
  if (!(cutoff_radius > 0.0)) throw ParameterError("cutoff radius must be positive");
  if (!(grid.spacing > 0.0)) throw ParameterError("grid spacing must be positive");
  check_physics(mass, hbar);
  const double h = grid.spacing;
  const int n = static_cast<int>(std::floor(cutoff_radius / h));
  const double weight = h * h / (2.0 * std::numbers::pi * hbar);
  const double r2 = cutoff_radius * cutoff_radius;
  Matrix m = Matrix::Zero(block, block);
  for (int i = -n; i <= n; ++i) {
    for (int j = -n; j <= n; ++j) {
      const PhasePoint pt{i * h, j * h};
      if (pt.p * pt.p + pt.q * pt.q > r2) continue;
      const Vector c = coherent_amplitudes(pt, block, hbar, mass);
      m.noalias() += weight * c * c.adjoint();
    }
  }
  return m;
}

double resolution_of_unity_check(std::size_t dim, double cutoff_radius, QuadratureSpec grid, double hbar,
                                 double mass) {
  if (dim < 2) throw DimensionError("resolution check needs D >= 2");
  const std::size_t block = dim / 2;
  const Matrix m = resolution_of_unity_matrix(block, cutoff_radius, grid, hbar, mass);
  return (m - Matrix::Identity(block, block)).cwiseAbs().maxCoeff();
}

FockOperator exact_propagator(const FockOperator& h, double time) {
  if (!h.is_hermitian()) throw FlagError("exact_propagator requires a hermitian operator");
  const HermitianEvolution evo(h.matrix());
  return FockOperator(evo.propagator(time / h.hbar()), h.hbar());
}

}  // namespace cslab
