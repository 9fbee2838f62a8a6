#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "cslab/errors.hpp"
#include "cslab/wiener.hpp"

namespace cslab {

namespace {

constexpr std::size_t kBlockSize = 2048;

struct BlockSums {
  double re = 0.0, im = 0.0, re2 = 0.0, im2 = 0.0;
  std::size_t count = 0;
};

// Draws one q (or p) bridge into x[0..n].
void draw_bridge(std::vector<double>& x, double a, double b, double s, std::normal_distribution<double>& gauss,
                 std::mt19937_64& rng) {
  const int n = static_cast<int>(x.size()) - 1;
  x[0] = a;
  x[n] = b;
  for (int k = 0; k + 1 < n; ++k) {
    const double left = n - k;
    x[k + 1] = x[k] + (b - x[k]) / left + std::sqrt(s * (left - 1.0) / left) * gauss(rng);
  }
}

class PathWeight {
 public:
  PathWeight(const WienerConfig& cfg, const PhaseSymbol& h, bool conditional)
      : cfg_(cfg), h_(h), conditional_(conditional), n_(cfg.steps), dt_(cfg.dt()),
        s_(cfg.nu * cfg.hbar * cfg.dt()), p_(n_ + 1), q_(n_ + 1) {
    if (conditional_) {
      const int m = n_ - 1;
      diag_.resize(std::max(m, 0));
      off_.resize(std::max(m, 0));
      piv_.resize(std::max(m, 0));
      low_.resize(std::max(m, 0));
      gam_.resize(std::max(m, 0));
      g_.resize(n_);
      h2_.resize(n_);
      // log of the pivots of tridiag(-1, 2, -1)/s: (j+1)/(j s)
      log_free_pivots_ = 0.0;
      for (int j = 1; j <= m; ++j) log_free_pivots_ += std::log((j + 1.0) / (j * s_));
    }
  }

  cplx operator()(std::mt19937_64& rng) {
    draw_bridge(q_, cfg_.start.q, cfg_.end.q, s_, gauss_, rng);
    if (!conditional_) {
      draw_bridge(p_, cfg_.start.p, cfg_.end.p, s_, gauss_, rng);
      double pdq = 0.0, energy = 0.0;
      for (int k = 0; k < n_; ++k) {
        const double pm = 0.5 * (p_[k] + p_[k + 1]);
        pdq += pm * (q_[k + 1] - q_[k]);
        energy += h_(pm, 0.5 * (q_[k] + q_[k + 1]));
      }
      return std::polar(1.0, (pdq - energy * dt_) / cfg_.hbar);
    }
    return conditional_weight();
  }

 private:
  // E_p[exp(iS/hbar) | q] for h = h2(q) p^2 + h1(q) p + h0(q). The p bridge is
  // its linear interpolant mu plus a Gaussian x with precision tridiag(-1,2,-1)/s;
  // the action is quadratic in x, so the conditional expectation is a
  // complex Gaussian integral evaluated with a tridiagonal LDL^T solve.
  cplx conditional_weight() {
    const double hbar = cfg_.hbar;
    const double p0 = cfg_.start.p, pn = cfg_.end.p;
    cplx constant = 0.0;
    for (int k = 0; k < n_; ++k) {
      const double qm = 0.5 * (q_[k] + q_[k + 1]);
      const auto [h0, h1, h2] = h_.momentum_coefficients(qm);
      const double mu = p0 + (pn - p0) * (k + 0.5) / n_;
      const double u = (q_[k + 1] - q_[k]) - dt_ * h1;
      constant += cplx(0.0, (u * mu - dt_ * (h2 * mu * mu + h0)) / hbar);
      g_[k] = cplx(0.0, (u - 2.0 * dt_ * h2 * mu) / hbar);
      h2_[k] = h2;
    }
    const int m = n_ - 1;
    if (m <= 0) return std::exp(constant);
    const cplx kfac(0.0, dt_ / (2.0 * hbar));
    for (int j = 0; j < m; ++j) {
      // interior point j + 1 couples to midpoints j and j + 1
      diag_[j] = 2.0 / s_ + kfac * (h2_[j] + h2_[j + 1]);
      off_[j] = -1.0 / s_ + kfac * h2_[j + 1];
      gam_[j] = 0.5 * (g_[j] + g_[j + 1]);
    }
    cplx log_pivots = 0.0;
    for (int j = 0; j < m; ++j) {
      if (j == 0) {
        piv_[j] = diag_[j];
      } else {
        low_[j] = off_[j - 1] / piv_[j - 1];
        piv_[j] = diag_[j] - low_[j] * off_[j - 1];
      }
      log_pivots += std::log(piv_[j]);
    }
    // Solve (L D L^T) y = gamma, accumulate gamma^T y.
    for (int j = 1; j < m; ++j) gam_[j] -= low_[j] * gam_[j - 1];
    std::vector<cplx>& y = gam_;
    y[m - 1] /= piv_[m - 1];
    for (int j = m - 2; j >= 0; --j) y[j] = y[j] / piv_[j] - low_[j + 1] * y[j + 1];
    // gamma^T y needs the original gamma; rebuild it.
    cplx quad = 0.0;
    for (int j = 0; j < m; ++j) quad += 0.5 * (g_[j] + g_[j + 1]) * y[j];
    return std::exp(constant + 0.5 * quad + 0.5 * (log_free_pivots_ - log_pivots));
  }

  const WienerConfig& cfg_;
  const PhaseSymbol& h_;
  bool conditional_;
  int n_;
  double dt_;
  double s_;
  std::vector<double> p_, q_;
  std::vector<cplx> diag_, off_, piv_, low_, gam_, g_;
  std::vector<double> h2_;
  double log_free_pivots_ = 0.0;
  std::normal_distribution<double> gauss_;
};

}  // namespace

EstimateWithError wiener_propagator_mc(const WienerConfig& cfg, const PhaseSymbol& h) {
  validate(cfg);
  bool conditional = false;
  switch (cfg.estimator) {
    case WienerEstimator::plain:
      break;
    case WienerEstimator::conditional:
      if (h.momentum_degree() > 2) throw ParameterError("conditional estimator needs a symbol quadratic in p");
      conditional = true;
      break;
    case WienerEstimator::automatic:
      conditional = h.momentum_degree() <= 2;
      break;
  }

  const std::size_t blocks = (cfg.samples + kBlockSize - 1) / kBlockSize;
  std::vector<BlockSums> sums(blocks);
  auto run_block = [&](std::size_t b) {
    PathWeight weight(cfg, h, conditional);
    std::mt19937_64 rng = block_generator(cfg.seed, b);
    const std::size_t count = std::min(kBlockSize, cfg.samples - b * kBlockSize);
    BlockSums& out = sums[b];
    for (std::size_t i = 0; i < count; ++i) {
      const cplx w = weight(rng);
      out.re += w.real();
      out.im += w.imag();
      out.re2 += w.real() * w.real();
      out.im2 += w.imag() * w.imag();
    }
    out.count = count;
  };

  unsigned workers = cfg.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.workers;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < blocks; b += workers) run_block(b);
      });
    for (auto& t : pool) t.join();
  }

  BlockSums total;
  for (const auto& s : sums) {
    total.re += s.re;
    total.im += s.im;
    total.re2 += s.re2;
    total.im2 += s.im2;
    total.count += s.count;
  }
  const double n = static_cast<double>(total.count);
  const cplx mean(total.re / n, total.im / n);
  const double var = std::max(0.0, (total.re2 - n * mean.real() * mean.real()) / (n - 1.0)) +
                     std::max(0.0, (total.im2 - n * mean.imag() * mean.imag()) / (n - 1.0));

  const double dp = cfg.end.p - cfg.start.p, dq = cfg.end.q - cfg.start.q;
  const double diffusion = cfg.nu * cfg.hbar * cfg.T;
  const double density = std::exp(-(dp * dp + dq * dq) / (2.0 * diffusion)) / (2.0 * std::numbers::pi * diffusion);
  const double prefactor =
      2.0 * std::numbers::pi * cfg.hbar * lattice_normalization(cfg.nu, cfg.dt(), cfg.steps) * density;

  EstimateWithError est;
  est.value = prefactor * mean;
  est.stderr = prefactor * std::sqrt(var / n);
  est.samples = total.count;
  est.nu = cfg.nu;
  est.steps = cfg.steps;
  est.seed = cfg.seed;
  est.estimator = conditional ? WienerEstimator::conditional : WienerEstimator::plain;
  est.low_confidence = !(est.stderr <= cfg.confidence_fraction * std::abs(est.value));
  return est;
}

}  // namespace cslab
