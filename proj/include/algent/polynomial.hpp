#ifndef ALGENT_POLYNOMIAL_HPP
#define ALGENT_POLYNOMIAL_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "algent/rational.hpp"

namespace algent {

// Dense univariate polynomial over a field F. F needs F(), F(1), ==, and
// field arithmetic. Coefficients are trimmed; zero polynomial is empty.
template <class F>
class Poly {
 public:
  Poly() = default;
  explicit Poly(F constant) {
    if (!(constant == F())) c_.push_back(std::move(constant));
  }
  explicit Poly(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly monomial(F coeff, std::size_t degree) {
    if (coeff == F()) return Poly();
    std::vector<F> v(degree + 1);
    v[degree] = std::move(coeff);
    return Poly(std::move(v));
  }

  bool is_zero() const { return c_.empty(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<F>& coeffs() const { return c_; }
  const F& operator[](std::size_t i) const { return c_[i]; }
  const F& leading() const { return c_.back(); }

  F coeff_or_zero(std::size_t i) const { return i < c_.size() ? c_[i] : F(); }

  bool operator==(const Poly& o) const { return c_ == o.c_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly operator-() const {
    Poly r = *this;
    for (auto& x : r.c_) x = F() - x;
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<F> v(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i < a.c_.size()) v[i] = v[i] + a.c_[i];
      if (i < b.c_.size()) v[i] = v[i] + b.c_[i];
    }
    return Poly(std::move(v));
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<F> v(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == F()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
    }
    return Poly(std::move(v));
  }

  friend Poly operator*(const Poly& a, const F& k) { return a * Poly(k); }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly shifted(std::size_t k) const {
    if (is_zero()) return Poly();
    std::vector<F> v(c_.size() + k);
    for (std::size_t i = 0; i < c_.size(); ++i) v[i + k] = c_[i];
    return Poly(std::move(v));
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<F> v(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) {
      F k(1);
      for (std::size_t j = 1; j < i; ++j) k = k + F(1);
      v[i - 1] = c_[i] * k;
    }
    return Poly(std::move(v));
  }

  template <class X>
  X eval(const X& x) const {
    X acc{};
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + X(c_[i]);
    return acc;
  }

  // Euclidean division: a = q*b + r with deg r < deg b.
  static void divmod(const Poly& a, const Poly& b, Poly* q_out, Poly* r_out) {
    if (b.is_zero()) throw std::domain_error("Poly::divmod: division by zero");
    std::vector<F> rem = a.c_;
    std::vector<F> q(a.c_.size() >= b.c_.size() ? a.c_.size() - b.c_.size() + 1 : 0);
    F lb_inv = F(1) / b.leading();
    for (long k = static_cast<long>(rem.size()) - static_cast<long>(b.c_.size()); k >= 0; --k) {
      F f = rem[k + b.degree()] * lb_inv;
      q[k] = f;
      if (f == F()) continue;
      for (std::size_t i = 0; i < b.c_.size(); ++i) rem[k + i] = rem[k + i] - f * b.c_[i];
    }
    if (q_out) *q_out = Poly(std::move(q));
    if (r_out) *r_out = Poly(std::move(rem));
  }

  // Monic gcd by the Euclidean algorithm.
  static Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r;
      divmod(a, b, nullptr, &r);
      a = std::move(b);
      b = std::move(r);
    }
    if (!a.is_zero()) {
      F inv = F(1) / a.leading();
      for (auto& c : a.c_) c = c * inv;
    }
    return a;
  }

 private:
  std::vector<F> c_;

  void trim() {
    while (!c_.empty() && c_.back() == F()) c_.pop_back();
  }
};

using PolyQ = Poly<Rat>;

// Integer coefficient vector with a common denominator: p = coeffs / denom.
struct ClearedPoly {
  std::vector<Int> coeffs;
  Int denom;
};

inline ClearedPoly clear_denominators(const PolyQ& p) {
  Int l(1);
  for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den(c).get_mpz_t());
  std::vector<Int> v(p.coeffs().size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rat scaled = p.coeffs()[i] * Rat(l);
    v[i] = num(scaled);
  }
  return {std::move(v), l};
}

}  // namespace algent

#endif  // ALGENT_POLYNOMIAL_HPP
