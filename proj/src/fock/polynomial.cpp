#include "cslab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace cslab {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

cplx ipow(cplx x, int n) {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

OrderedPolynomial OrderedPolynomial::constant(cplx c, cplx kappa) {
  return monomial(0, 0, c, kappa);
}

OrderedPolynomial OrderedPolynomial::left(cplx kappa) { return monomial(1, 0, 1.0, kappa); }

OrderedPolynomial OrderedPolynomial::right(cplx kappa) { return monomial(0, 1, 1.0, kappa); }

OrderedPolynomial OrderedPolynomial::monomial(int j, int k, cplx c, cplx kappa) {
  OrderedPolynomial p(kappa);
  p.add_term(j, k, c);
  return p;
}

cplx OrderedPolynomial::coefficient(int j, int k) const {
  auto it = terms_.find({j, k});
  return it == terms_.end() ? cplx{0.0} : it->second;
}

void OrderedPolynomial::add_term(int j, int k, cplx c) {
  if (j < 0 || k < 0) throw std::invalid_argument("negative power in polynomial term");
  if (c == cplx{0.0}) return;
  auto& slot = terms_[{j, k}];
  slot += c;
  if (slot == cplx{0.0}) terms_.erase({j, k});
}

int OrderedPolynomial::degree_left() const {
  int d = -1;
  for (const auto& [key, c] : terms_) d = std::max(d, key.first);
  return d;
}

int OrderedPolynomial::degree_right() const {
  int d = -1;
  for (const auto& [key, c] : terms_) d = std::max(d, key.second);
  return d;
}

int OrderedPolynomial::total_degree() const {
  int d = -1;
  for (const auto& [key, c] : terms_) d = std::max(d, key.first + key.second);
  return d;
}

OrderedPolynomial& OrderedPolynomial::operator+=(const OrderedPolynomial& o) {
  for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, c);
  return *this;
}

OrderedPolynomial& OrderedPolynomial::operator-=(const OrderedPolynomial& o) {
  for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, -c);
  return *this;
}

OrderedPolynomial& OrderedPolynomial::operator*=(cplx s) {
  if (s == cplx{0.0}) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, c] : terms_) c *= s;
  return *this;
}

// (L^i R^j)(L^k R^l) = sum_r C(j,r) C(k,r) r! kappa^r L^{i+k-r} R^{j+l-r}
OrderedPolynomial operator*(const OrderedPolynomial& a, const OrderedPolynomial& b) {
  const cplx kappa = a.kappa_;
  OrderedPolynomial out(kappa);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      const int i = ka.first, j = ka.second, k = kb.first, l = kb.second;
      double fact = 1.0;
      for (int r = 0; r <= std::min(j, k); ++r) {
        if (r > 0) fact *= r;
        if (r > 0 && kappa == cplx{0.0}) break;
        const cplx w = binomial(j, r) * binomial(k, r) * fact * ipow(kappa, r);
        out.add_term(i + k - r, j + l - r, ca * cb * w);
      }
    }
  }
  return out;
}

OrderedPolynomial OrderedPolynomial::ordered_product(const OrderedPolynomial& o) const {
  OrderedPolynomial out(kappa_);
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_) out.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
  return out;
}

OrderedPolynomial OrderedPolynomial::pow(int n) const {
  if (n < 0) throw std::invalid_argument("negative polynomial power");
  OrderedPolynomial r = constant(1.0, kappa_);
  for (int i = 0; i < n; ++i) r = r * *this;
  return r;
}

OrderedPolynomial OrderedPolynomial::ordered_pow(int n) const {
  if (n < 0) throw std::invalid_argument("negative polynomial power");
  OrderedPolynomial r = constant(1.0, kappa_);
  for (int i = 0; i < n; ++i) r = r.ordered_product(*this);
  return r;
}

cplx OrderedPolynomial::evaluate(cplx l, cplx r) const {
  cplx sum = 0.0;
  for (const auto& [key, c] : terms_) sum += c * ipow(l, key.first) * ipow(r, key.second);
  return sum;
}

OrderedPolynomial OrderedPolynomial::substitute(const OrderedPolynomial& left_image,
                                                const OrderedPolynomial& right_image) const {
  const cplx target_kappa = left_image.kappa();
  const int dl = std::max(degree_left(), 0);
  const int dr = std::max(degree_right(), 0);
  std::vector<OrderedPolynomial> lp{OrderedPolynomial::constant(1.0, target_kappa)};
  std::vector<OrderedPolynomial> rp{OrderedPolynomial::constant(1.0, target_kappa)};
  for (int i = 1; i <= dl; ++i) lp.push_back(lp.back() * left_image);
  for (int i = 1; i <= dr; ++i) rp.push_back(rp.back() * right_image);
  OrderedPolynomial out(target_kappa);
  for (const auto& [key, c] : terms_) out += (lp[key.first] * rp[key.second]) * c;
  return out;
}

OrderedPolynomial OrderedPolynomial::pruned(double tol) const {
  OrderedPolynomial out(kappa_);
  for (const auto& [key, c] : terms_)
    if (std::abs(c) > tol) out.terms_[key] = c;
  return out;
}

OrderedPolynomial OrderedPolynomial::ladder_adjoint() const {
  OrderedPolynomial out(kappa_);
  for (const auto& [key, c] : terms_) out.add_term(key.second, key.first, std::conj(c));
  return out;
}

}  // namespace cslab
