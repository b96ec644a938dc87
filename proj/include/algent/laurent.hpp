#ifndef ALGENT_LAURENT_HPP
#define ALGENT_LAURENT_HPP

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace algent {

// Raised when an operation needs series coefficients beyond the known
// window, typically after deep cancellation. Callers restart the
// computation with a larger truncation order.
struct TruncationExhausted : std::runtime_error {
  TruncationExhausted() : std::runtime_error("Laurent window exhausted") {}
};

// Truncated Laurent series in a local parameter over a field F.
//
// A series knows its coefficients on the exponent window [val, end):
// everything below val is exactly zero, everything at or beyond end is
// unknown. The stored window starts at the first nonzero coefficient, so
// leading() is reliable whenever the series is not zero_to_order. A series
// that is zero on its whole window ("zero to order end") has empty storage;
// the exact zero series is the special case end == unbounded.
template <class F>
class LaurentSeries {
 public:
  static constexpr long kUnbounded = std::numeric_limits<long>::max();

  LaurentSeries() : val_(kUnbounded), end_(kUnbounded) {}

  static LaurentSeries zero() { return LaurentSeries(); }

  static LaurentSeries zero_to_order(long end) {
    LaurentSeries s;
    s.val_ = end;
    s.end_ = end;
    return s;
  }

  // Constant c + O(eps^window).
  static LaurentSeries constant(F c, long window) {
    if (window < 1) throw std::domain_error("LaurentSeries: window must be positive");
    if (c == F()) return zero();
    LaurentSeries s;
    s.val_ = 0;
    s.end_ = window;
    s.c_.assign(static_cast<std::size_t>(window), F());
    s.c_[0] = std::move(c);
    return s;
  }

  // c * eps^k + O(eps^{k+window}).
  static LaurentSeries monomial(F c, long k, long window) {
    LaurentSeries s = constant(std::move(c), window);
    if (!s.is_zero()) {
      s.val_ += k;
      s.end_ += k;
    }
    return s;
  }

  bool is_zero() const { return c_.empty() && end_ == kUnbounded; }
  bool is_zero_to_order() const { return c_.empty() && end_ != kUnbounded; }
  bool has_leading() const { return !c_.empty(); }

  long valuation() const {
    if (!has_leading()) throw TruncationExhausted();
    return val_;
  }
  long known_end() const { return end_; }
  long window() const { return end_ == kUnbounded ? kUnbounded : end_ - val_; }

  const F& leading() const {
    if (!has_leading()) throw TruncationExhausted();
    return c_[0];
  }

  // Coefficient at exponent e; throws if e lies beyond the known window.
  F coeff(long e) const {
    if (e >= end_) throw TruncationExhausted();
    if (c_.empty() || e < val_) return F();
    return c_[static_cast<std::size_t>(e - val_)];
  }

  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    long end = std::min(a.end_, b.end_);
    long start = std::min(a.first_known(), b.first_known());
    LaurentSeries r;
    if (start >= end) return zero_to_order(end);
    r.val_ = start;
    r.end_ = end;
    r.c_.resize(static_cast<std::size_t>(end - start));
    for (long e = start; e < end; ++e)
      r.c_[static_cast<std::size_t>(e - start)] = a.coeff(e) + b.coeff(e);
    r.normalize();
    return r;
  }

  LaurentSeries operator-() const {
    LaurentSeries r = *this;
    for (auto& x : r.c_) x = F() - x;
    return r;
  }

  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    if (a.is_zero_to_order() || b.is_zero_to_order()) {
      long end = sat_add(a.first_known(), b.first_known());
      return zero_to_order(end);
    }
    long w = std::min(a.window(), b.window());
    LaurentSeries r;
    r.val_ = a.val_ + b.val_;
    r.end_ = sat_add(r.val_, w);
    r.c_.assign(static_cast<std::size_t>(w), F());
    for (std::size_t i = 0; i < a.c_.size() && i < static_cast<std::size_t>(w); ++i) {
      if (a.c_[i] == F()) continue;
      std::size_t jmax = std::min(b.c_.size(), static_cast<std::size_t>(w) - i);
      for (std::size_t j = 0; j < jmax; ++j) r.c_[i + j] = r.c_[i + j] + a.c_[i] * b.c_[j];
    }
    r.normalize();
    return r;
  }

  friend LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b) {
    if (b.is_zero()) throw std::domain_error("LaurentSeries: division by zero");
    if (!b.has_leading()) throw TruncationExhausted();
    if (a.is_zero()) return zero();
    if (a.is_zero_to_order()) return zero_to_order(a.end_ - b.val_);
    long w = std::min(a.window(), b.window());
    LaurentSeries r;
    r.val_ = a.val_ - b.val_;
    r.end_ = sat_add(r.val_, w);
    r.c_.assign(static_cast<std::size_t>(w), F());
    F inv = F(1) / b.c_[0];
    for (std::size_t k = 0; k < static_cast<std::size_t>(w); ++k) {
      F acc = k < a.c_.size() ? a.c_[k] : F();
      std::size_t imax = std::min(k, b.c_.size() - 1);
      for (std::size_t i = 1; i <= imax; ++i) acc = acc - b.c_[i] * r.c_[k - i];
      r.c_[k] = acc * inv;
    }
    r.normalize();
    return r;
  }

  LaurentSeries pow(unsigned long e) const {
    if (e == 0) throw std::domain_error("LaurentSeries: pow needs a positive exponent");
    LaurentSeries r = *this;
    for (unsigned long i = 1; i < e; ++i) r = r * *this;
    return r;
  }

  std::string describe() const {
    if (is_zero()) return "0";
    if (is_zero_to_order()) return "O(eps^" + std::to_string(end_) + ")";
    return "eps^" + std::to_string(val_) + "*(...) known to " + std::to_string(end_);
  }

 private:
  long val_;
  long end_;
  std::vector<F> c_;

  // First exponent not known to vanish.
  long first_known() const { return c_.empty() ? end_ : val_; }

  static long sat_add(long a, long b) {
    if (a == kUnbounded || b == kUnbounded) return kUnbounded;
    return a + b;
  }

  void normalize() {
    std::size_t lead = 0;
    while (lead < c_.size() && c_[lead] == F()) ++lead;
    if (lead == c_.size()) {
      c_.clear();
      val_ = end_;
      return;
    }
    if (lead > 0) {
      c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
      val_ += static_cast<long>(lead);
    }
  }
};

}  // namespace algent

#endif  // ALGENT_LAURENT_HPP
