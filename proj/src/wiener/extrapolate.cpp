#include <cmath>

#include "cslab/errors.hpp"
#include "cslab/wiener.hpp"

namespace cslab {

namespace {

struct LineFit {
  cplx a, b;
  double var_a = 0.0;  // variance of a, both components together
  double chi2 = 0.0;
};

// Fits a + b x with per-point weights w (for each of the real and imaginary parts).
LineFit fit_line(const std::vector<double>& x, const std::vector<cplx>& y, const std::vector<double>& w) {
  double sw = 0.0, sx = 0.0, sxx = 0.0;
  cplx sy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sxx += w[i] * x[i] * x[i];
    sy += w[i] * y[i];
    sxy += w[i] * x[i] * y[i];
  }
  const double det = sw * sxx - sx * sx;
  if (!(std::abs(det) > 0.0)) throw ParameterError("extrapolation needs distinct nu values");
  LineFit f;
  f.a = (sxx * sy - sx * sxy) / det;
  f.b = (sw * sxy - sx * sy) / det;
  f.var_a = 2.0 * sxx / det;
  for (std::size_t i = 0; i < x.size(); ++i) f.chi2 += w[i] * std::norm(y[i] - f.a - f.b * x[i]);
  return f;
}

}  // namespace

Extrapolation nu_extrapolate(const std::vector<EstimateWithError>& estimates) {
  const std::size_t n = estimates.size();
  if (n < 3) throw ParameterError("extrapolation needs at least 3 estimates");
  for (std::size_t i = 1; i < n; ++i)
    if (!(estimates[i].nu > estimates[i - 1].nu)) throw ParameterError("estimates must have increasing nu");

  bool weighted = true;
  for (const auto& e : estimates) weighted = weighted && e.stderr > 0.0;
  std::vector<double> x(n), w(n);
  std::vector<cplx> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 1.0 / estimates[i].nu;
    y[i] = estimates[i].value;
    // each component carries half the variance of the complex estimate
    w[i] = weighted ? 2.0 / (estimates[i].stderr * estimates[i].stderr) : 1.0;
  }
  const LineFit full = fit_line(x, y, w);
  const LineFit dropped = fit_line({x.begin() + 1, x.end()}, {y.begin() + 1, y.end()}, {w.begin() + 1, w.end()});

  Extrapolation out;
  out.value = full.a;
  out.slope = full.b;
  const double dof = 2.0 * static_cast<double>(n) - 4.0;
  out.chi2_per_dof = full.chi2 / dof;
  out.stderr = weighted ? std::sqrt(full.var_a) : 0.0;
  out.fit_error = std::max(out.stderr * std::sqrt(std::max(1.0, out.chi2_per_dof)), std::abs(full.a - dropped.a));
  out.unreliable = weighted ? out.chi2_per_dof > 3.0 : out.chi2_per_dof > 1e-20;
  return out;
}

}  // namespace cslab
