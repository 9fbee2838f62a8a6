#pragma once

#include <cstddef>
#include <utility>

#include "cslab/linalg.hpp"

namespace cslab {

/// A phase-space label (p, q).
struct PhasePoint {
  double p = 0.0;
  double q = 0.0;

  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

/// Amplitude vector on the truncated oscillator basis |0>, ..., |D-1>.
class FockVector {
 public:
  FockVector(Vector amplitudes, double hbar);

  const Vector& amplitudes() const noexcept { return amplitudes_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  double hbar() const noexcept { return hbar_; }
  double norm() const { return amplitudes_.norm(); }
  /// True when the norm is 1 within 1e-12.
  bool normalized() const noexcept { return normalized_; }

  /// <this|other>
  cplx inner(const FockVector& other) const;

 private:
  Vector amplitudes_;
  double hbar_;
  bool normalized_;
};

/// Complex matrix on the truncated oscillator basis.
class FockOperator {
 public:
  FockOperator(Matrix matrix, double hbar);

  /// Symmetrizes (M + M^dagger)/2 and sets the hermitian flag.
  static FockOperator hermitian(const Matrix& matrix, double hbar);

  const Matrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  double hbar() const noexcept { return hbar_; }
  bool is_hermitian() const noexcept { return hermitian_; }

  FockVector apply(const FockVector& v) const;
  cplx expectation(const FockVector& v) const;

  friend FockOperator operator+(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator-(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator*(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator*(cplx s, const FockOperator& a);

 private:
  Matrix matrix_;
  double hbar_;
  bool hermitian_;
};

/// Annihilation and creation operators truncated to dimension D.
std::pair<FockOperator, FockOperator> build_ladder(std::size_t dim);

/// Q = sqrt(hbar/2m)(a + a^dagger), P = i sqrt(m hbar/2)(a^dagger - a).
std::pair<FockOperator, FockOperator> build_qp(std::size_t dim, double mass = 1.0, double hbar = 1.0);

/// Tail-mass tolerance used to accept a coherent state at a given truncation.
inline constexpr double kCoherentTailTolerance = 1e-10;

/// |alpha|^2 = (m^2 q^2 + p^2) / (2 m hbar): the Poisson mean of |p,q>.
double coherent_mean_occupation(PhasePoint pt, double hbar = 1.0, double mass = 1.0);

/// Poisson estimate of sum_{n >= D} |<n|p,q>|^2.
double coherent_tail_mass(PhasePoint pt, std::size_t dim, double hbar = 1.0, double mass = 1.0);

/// Smallest D whose tail mass is below tol.
std::size_t coherent_dimension_for(PhasePoint pt, double hbar = 1.0, double mass = 1.0,
                                   double tol = kCoherentTailTolerance);

/// First n_keep amplitudes of exp(-iqP/hbar) exp(ipQ/hbar)|0>, computed in a
/// working dimension large enough that the kept components are converged.
/// No truncation gate; callers that need one use coherent_state.
Vector coherent_amplitudes(PhasePoint pt, std::size_t n_keep, double hbar = 1.0, double mass = 1.0);

/// |p,q> = exp(-iqP/hbar) exp(ipQ/hbar)|0>, with (mQ + iP)|0> = 0.
/// Throws TruncationError when the tail beyond D exceeds kCoherentTailTolerance.
FockVector coherent_state(PhasePoint pt, std::size_t dim, double hbar = 1.0, double mass = 1.0);

/// <p,q|p',q'> = exp{ i(p+p')(q-q')/2hbar - [(p-p')^2 + (q-q')^2]/4hbar }
cplx overlap_analytic(PhasePoint bra, PhasePoint ket, double hbar = 1.0);

/// <p,q|H|p,q> from the truncated matrix.
cplx symbol_normal(const FockOperator& h, PhasePoint pt, double mass = 1.0);

struct QuadratureSpec {
  double spacing = 0.2;  // Cartesian grid spacing in both p and q
};

/// M = sum over grid points inside p^2+q^2 <= R^2 of |p,q><p,q| h^2/(2 pi hbar),
/// restricted to the first `block` basis states.
Matrix resolution_of_unity_matrix(std::size_t block, double cutoff_radius, QuadratureSpec grid,
                                  double hbar = 1.0, double mass = 1.0);

/// max |M_jk - delta_jk| over the first D/2 states.
double resolution_of_unity_check(std::size_t dim, double cutoff_radius, QuadratureSpec grid,
                                 double hbar = 1.0, double mass = 1.0);

/// exp(-i H T / hbar). Requires the hermitian flag.
FockOperator exact_propagator(const FockOperator& h, double time);

}  // namespace cslab
