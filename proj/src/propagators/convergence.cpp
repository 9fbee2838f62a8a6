#include <cmath>

#include "cslab/errors.hpp"
#include "cslab/propagators.hpp"

namespace cslab {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("slope fit needs at least two points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceStudy convergence_study(PropagatorMethod method, const Hamiltonian& h, const Endpoints& ends,
                                   const std::vector<int>& slice_list, const LatticeSpec& base) {
  if (method == PropagatorMethod::exact) throw ParameterError("convergence study needs a lattice method");
  for (std::size_t i = 1; i < slice_list.size(); ++i)
    if (slice_list[i] <= slice_list[i - 1]) throw ParameterError("slice list must be ascending");

  ConvergenceStudy study;
  study.method = method;
  study.oracle = method == PropagatorMethod::sliced_position
                     ? grid_exact_position(ends.end.q, ends.start.q, base, h)
                     : exact_cs_element(ends.start, ends.end, base.T, h).value;
  std::vector<double> xs, ys;
  for (int n : slice_list) {
    LatticeSpec lat = base;
    lat.slices = n;
    const PropagatorResult r = method == PropagatorMethod::sliced_position
                                   ? sliced_propagator_position(ends.end.q, ends.start.q, lat, h)
                                   : sliced_propagator_cs(ends.start, ends.end, lat, h);
    ConvergenceRow row{n, r.value, std::abs(r.value - study.oracle)};
    study.rows.push_back(row);
    if (n > 0 && row.error > 0.0) {
      xs.push_back(n);
      ys.push_back(row.error);
    }
  }
  study.slope = xs.size() >= 2 ? loglog_slope(xs, ys) : 0.0;
  return study;
}

}  // namespace cslab
