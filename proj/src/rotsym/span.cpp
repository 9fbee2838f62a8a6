#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "cslab/errors.hpp"
#include "cslab/rotsym.hpp"

namespace cslab {

double pinned_residual_floor(const ReducibleSpec& spec, double dq) {
  return 1.0 - std::exp(-spec.m * spec.zeta * spec.zeta * dq * dq / (2.0 * spec.hbar));
}

namespace {

struct Projection {
  double residual;
  double condition;
};

// Relative squared residual of t against the column span of phi, through the
// regularized Gram matrix.
Projection project(const Matrix& phi, const Vector& t, double regularization) {
  const Matrix gram = phi.adjoint() * phi;
  const Vector rhs = phi.adjoint() * t;
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const RealVector& lam = eig.eigenvalues();
  const double top = lam[lam.size() - 1];
  const Vector coeffs = eig.eigenvectors().adjoint() * rhs;
  double captured = 0.0;
  for (Eigen::Index k = 0; k < lam.size(); ++k)
    if (lam[k] > regularization * top) captured += std::norm(coeffs[k]) / lam[k];
  const double norm2 = t.squaredNorm();
  const double low = std::max(lam[0], 0.0);
  return {std::max(0.0, 1.0 - captured / norm2), low > 0.0 ? top / low : std::numeric_limits<double>::infinity()};
}

}  // namespace

SpanReport span_deficiency(const ReducibleSpec& spec, PhasePoint target, const SpanOptions& opts) {
  spec.validate();
  if (opts.probes < 1) throw ValidationError("probes", ">= 1");
  if (opts.points < 3) throw ValidationError("points", ">= 3");
  const int n = opts.points;
  const double h = 2.0 * opts.half_width / (n - 1);
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  auto sample = [&](PhasePoint label) {
    Vector v(cells);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        v[i * n + j] = h * reducible_wavefunction(spec, label, -opts.half_width + i * h, -opts.half_width + j * h);
    return v;
  };

  Matrix free(cells, opts.probes), pinned(cells, opts.probes);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> box(-opts.label_box, opts.label_box);
  for (std::size_t k = 0; k < opts.probes; ++k) {
    const double p = box(rng), q = box(rng);
    free.col(k) = sample({p, q});
    const double pp = -opts.label_box + 2.0 * opts.label_box * (k + 0.5) / opts.probes;
    pinned.col(k) = sample({pp, opts.q_fixed});
  }
  const Vector t = sample(target);
  const Projection f = project(free, t, opts.regularization);
  const Projection g = project(pinned, t, opts.regularization);
  return {f.residual, g.residual, f.condition, g.condition, opts.probes};
}

}  // namespace cslab
