#ifndef ALGENT_RECURRENCE_FIT_HPP
#define ALGENT_RECURRENCE_FIT_HPP

#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "algent/int_poly.hpp"
#include "algent/polynomial.hpp"
#include "algent/rational.hpp"

namespace algent {

// Constant-coefficient linear recurrence d_n = sum_i c_i d_{n-i}, valid for
// every n >= start + order of the fitted sequence.
struct RecurrenceFit {
  int order = 0;
  int start = 0;
  std::vector<Rat> coeffs;
  PolyZ char_poly;  // primitive integer form of l^r - sum c_i l^(r-i)
};

namespace detail {

// Gauss-Jordan over Q. Returns false when the system is inconsistent; free
// variables are set to zero.
inline bool solve_rational(std::vector<std::vector<Rat>> m, std::vector<Rat> rhs,
                           std::vector<Rat>& x) {
  std::size_t rows = m.size();
  std::size_t cols = rows ? m[0].size() : 0;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    std::swap(rhs[p], rhs[r]);
    Rat inv = Rat(1) / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    rhs[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
      rhs[i] -= f * rhs[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (rhs[i] != 0) return false;
  x.assign(cols, Rat(0));
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = rhs[i];
  return true;
}

}  // namespace detail

// Minimal (order, start) recurrence, orders tried in increasing order and
// start indices 0..max_start within each: the window of 2*order consecutive
// terms determines the coefficients, which must then annihilate the whole
// tail with at least four terms held out beyond the window.
inline std::optional<RecurrenceFit> fit_recurrence(const std::vector<long>& d,
                                                   int max_order = 8, int max_start = 4) {
  long n_last = static_cast<long>(d.size()) - 1;
  for (int r = 1; r <= max_order; ++r) {
    for (int s = 0; s <= max_start; ++s) {
      if (s + 2 * r - 1 + 4 > n_last) continue;
      std::vector<std::vector<Rat>> m(r, std::vector<Rat>(r));
      std::vector<Rat> rhs(r);
      for (int j = 0; j < r; ++j) {
        long n = s + r + j;
        for (int i = 1; i <= r; ++i) m[j][i - 1] = Rat(d[n - i]);
        rhs[j] = Rat(d[n]);
      }
      std::vector<Rat> c;
      if (!detail::solve_rational(std::move(m), std::move(rhs), c)) continue;
      bool ok = true;
      for (long n = s + r; n <= n_last && ok; ++n) {
        Rat acc(0);
        for (int i = 1; i <= r; ++i) acc += c[i - 1] * Rat(d[n - i]);
        ok = acc == Rat(d[n]);
      }
      if (!ok) continue;
      RecurrenceFit fit;
      fit.order = r;
      fit.start = s;
      fit.coeffs = std::move(c);
      std::vector<Rat> cp(r + 1);
      cp[r] = Rat(1);
      for (int i = 1; i <= r; ++i) cp[r - i] = -fit.coeffs[i - 1];
      fit.char_poly = PolyZ(clear_denominators(PolyQ(std::move(cp))).coeffs).primitive();
      return fit;
    }
  }
  return std::nullopt;
}

// Cyclotomic polynomial of index k, by exact division of x^k - 1 by the
// cyclotomics of the proper divisors of k. Cached across calls.
inline PolyZ cyclotomic(long k) {
  if (k < 1) throw std::invalid_argument("cyclotomic: index must be positive");
  static std::mutex mu;
  static std::map<long, PolyZ> cache;
  std::lock_guard<std::mutex> lock(mu);
  std::vector<long> divs;
  for (long j = 1; j <= k; ++j)
    if (k % j == 0) divs.push_back(j);
  for (long j : divs) {
    if (cache.count(j)) continue;
    std::vector<Int> xj(j + 1);
    xj[0] = -1;
    xj[j] = 1;
    PolyZ p(std::move(xj));
    for (long e : divs) {
      if (e >= j || j % e != 0) continue;
      p = *poly_div_checked(p, cache.at(e));
    }
    cache.emplace(j, std::move(p));
  }
  return cache.at(k);
}

// True when the polynomial is a product of cyclotomic polynomials, which for
// monic integer polynomials is equivalent to all roots lying on the unit
// circle (Kronecker). Non-monic or zero-rooted inputs fail the check.
inline bool all_roots_on_unit_circle(const PolyZ& p_in) {
  if (p_in.is_zero()) return false;
  PolyZ p = p_in.primitive();
  if (p.leading() < 0) p = -p;
  if (p.degree() == 0) return true;
  if (p.leading() != 1) return false;
  if (p.coeffs()[0] == 0) return false;
  long deg = p.degree();
  long limit = 2 * deg * deg + 6;
  for (long k = 1; k <= limit && p.degree() > 0; ++k) {
    PolyZ phi = cyclotomic(k);
    if (phi.degree() > p.degree()) continue;
    while (p.degree() > 0) {
      auto q = poly_div_checked(p, phi);
      if (!q) break;
      p = std::move(*q);
    }
  }
  return p.degree() == 0;
}

struct EntropyEstimate {
  double last_ratio = 0.0;
  double log_slope = 0.0;
};

// Empirical entropy figures: the final degree ratio and the least-squares
// slope of log d_n over the last ceil(N/2) indices.
inline EntropyEstimate entropy_estimate(const std::vector<long>& d) {
  long n_last = static_cast<long>(d.size()) - 1;
  long nonzero_tail = 0;
  for (long i = n_last; i >= 0 && d[i] > 0; --i) ++nonzero_tail;
  if (nonzero_tail < 6)
    throw std::runtime_error("entropy_estimate: needs at least 6 nonzero tail terms");
  EntropyEstimate e;
  e.last_ratio = static_cast<double>(d[n_last]) / static_cast<double>(d[n_last - 1]);
  long w = (n_last + 1) / 2;
  long from = std::max<long>(n_last - w + 1, 1);
  double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
  for (long n = from; n <= n_last; ++n) {
    double xx = static_cast<double>(n);
    double yy = std::log(static_cast<double>(d[n]));
    sx += xx;
    sy += yy;
    sxx += xx * xx;
    sxy += xx * yy;
    cnt += 1;
  }
  e.log_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return e;
}

}  // namespace algent

#endif  // ALGENT_RECURRENCE_FIT_HPP
