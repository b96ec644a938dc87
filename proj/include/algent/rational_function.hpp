#ifndef ALGENT_RATIONAL_FUNCTION_HPP
#define ALGENT_RATIONAL_FUNCTION_HPP

#include <stdexcept>
#include <string>
#include <utility>

#include "algent/int_poly.hpp"
#include "algent/polynomial.hpp"
#include "algent/rational.hpp"

namespace algent {

// Reduced fraction of polynomials over a field F. Invariants: gcd(num, den)
// is constant, den is monic, zero is 0/1. Forms a field, so RatFunc can be
// nested as the coefficient type of another Poly or RatFunc.
template <class F>
class RatFunc {
 public:
  RatFunc() : num_(), den_(one_poly()) {}
  explicit RatFunc(long v) : num_(Poly<F>(F(v))), den_(one_poly()) {}
  explicit RatFunc(F v) : num_(Poly<F>(std::move(v))), den_(one_poly()) {}
  explicit RatFunc(Poly<F> p) : num_(std::move(p)), den_(one_poly()) {}
  RatFunc(Poly<F> n, Poly<F> d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw std::domain_error("RatFunc: zero denominator");
    reduce();
  }

  static RatFunc variable() { return RatFunc(Poly<F>::monomial(F(1), 1)); }

  const Poly<F>& num() const { return num_; }
  const Poly<F>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }

  F constant_value() const {
    if (!is_constant()) throw std::domain_error("RatFunc: not a constant");
    if (num_.is_zero()) return F();
    return num_[0] / den_[0];
  }

  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RatFunc& o) const { return !(*this == o); }
  bool operator==(const F& v) const { return *this == RatFunc(v); }

  RatFunc operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return RatFunc();
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw std::domain_error("RatFunc: division by zero");
    if (a.is_zero()) return RatFunc();
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
  }

  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

  RatFunc reciprocal() const {
    if (is_zero()) throw std::domain_error("RatFunc: reciprocal of zero");
    return RatFunc(den_, num_);
  }

  // Evaluates at a point of F; throws if the point is a pole.
  F eval(const F& x) const {
    F d = den_.eval(x);
    if (d == F()) throw std::domain_error("RatFunc: evaluation at a pole");
    return num_.eval(x) / d;
  }

 private:
  Poly<F> num_;
  Poly<F> den_;

  static Poly<F> one_poly() { return Poly<F>(F(1)); }

  void reduce();
};

template <class F>
void RatFunc<F>::reduce() {
  if (num_.is_zero()) {
    den_ = one_poly();
    return;
  }
  if (den_.degree() > 0 || num_.degree() > 0) {
    Poly<F> g = Poly<F>::gcd(num_, den_);
    if (g.degree() > 0) {
      Poly<F> qn, qd;
      Poly<F>::divmod(num_, g, &qn, nullptr);
      Poly<F>::divmod(den_, g, &qd, nullptr);
      num_ = std::move(qn);
      den_ = std::move(qd);
    }
  }
  F inv = F(1) / den_.leading();
  if (!(inv == F(1))) {
    num_ = num_ * inv;
    den_ = den_ * inv;
  }
}

// Fast reduction for the rational base case through the integer gcd.
template <>
inline void RatFunc<Rat>::reduce() {
  if (num_.is_zero()) {
    den_ = one_poly();
    return;
  }
  ClearedPoly n = clear_denominators(num_);
  ClearedPoly d = clear_denominators(den_);
  PolyZ pn(std::move(n.coeffs));
  PolyZ pd(std::move(d.coeffs));
  if (pn.degree() > 0 && pd.degree() > 0) {
    PolyZ g = poly_gcd(pn, pd);
    if (g.degree() > 0) {
      PolyZ qn, qd;
      if (!PolyZ::div_exact(pn, g, &qn) || !PolyZ::div_exact(pd, g, &qd))
        throw std::logic_error("RatFunc: gcd does not divide");
      pn = std::move(qn);
      pd = std::move(qd);
    }
  }
  // num/den = (pn/a) / (pd/b) = (b/(a*lead(pd))) * pn / (pd/lead(pd)).
  Rat scale = make_rat(d.denom, n.denom * pd.leading());
  std::vector<Rat> nv(pn.coeffs().size());
  for (std::size_t i = 0; i < nv.size(); ++i) nv[i] = Rat(pn.coeffs()[i]) * scale;
  std::vector<Rat> dv(pd.coeffs().size());
  for (std::size_t i = 0; i < dv.size(); ++i) dv[i] = make_rat(pd.coeffs()[i], pd.leading());
  num_ = Poly<Rat>(std::move(nv));
  den_ = Poly<Rat>(std::move(dv));
}

// Coefficient field for singularity traces: rational functions of the
// generic seed parameter u.
using GenericField = RatFunc<Rat>;

inline bool is_u_dependent(const GenericField& f) { return !f.is_constant(); }

inline std::string to_string(const Poly<Rat>& p, const std::string& var) {
  if (p.is_zero()) return "0";
  std::string s;
  for (long i = p.degree(); i >= 0; --i) {
    Rat c = p.coeffs()[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0)
      s += "-";
    Rat a = abs(c);
    bool unit = (a == 1);
    if (!unit || i == 0) s += to_string(a);
    if (i > 0) {
      if (!unit) s += "*";
      s += var;
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s;
}

inline std::string to_string(const GenericField& f, const std::string& var = "u") {
  std::string n = to_string(f.num(), var);
  if (f.den().degree() == 0 && f.den()[0] == 1) return n;
  return "(" + n + ")/(" + to_string(f.den(), var) + ")";
}

}  // namespace algent

#endif  // ALGENT_RATIONAL_FUNCTION_HPP
