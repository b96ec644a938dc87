#ifndef ALGENT_ROOTS_HPP
#define ALGENT_ROOTS_HPP

// Certified real root isolation for integer polynomials. Roots are located
// by Sturm chains and refined by exact rational bisection, so every bracket
// carries a sign-change certificate. Rational roots are detected exactly and
// reported as zero-width brackets.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "algent/int_poly.hpp"
#include "algent/polynomial.hpp"
#include "algent/rational.hpp"

namespace algent {

// Isolating interval [lo, hi] around a single real root. lo == hi marks an
// exact rational root.
struct RootBracket {
  Rat lo, hi;

  bool exact() const { return lo == hi; }
  Rat mid() const { return (lo + hi) / 2; }
  Rat width() const { return hi - lo; }
};

namespace rootdetail {

inline PolyQ to_polyq(const PolyZ& p) {
  std::vector<Rat> c(p.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = Rat(p[i]);
  return PolyQ(std::move(c));
}

// Divide a rational polynomial by the gcd of numerator magnitudes over the
// lcm of denominators. A positive rescale keeps all Sturm sign data intact
// while stopping coefficient growth in the remainder sequence.
inline PolyQ scale_primitive(const PolyQ& p) {
  if (p.is_zero()) return p;
  Int g(0), l(1);
  for (const auto& c : p.coeffs()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num(c).get_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den(c).get_mpz_t());
  }
  if (g == 0) return p;
  Rat scale = make_rat(l, g);
  std::vector<Rat> out(p.coeffs().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = p[i] * scale;
  return PolyQ(std::move(out));
}

inline std::vector<PolyQ> sturm_chain(const PolyZ& squarefree) {
  std::vector<PolyQ> chain;
  chain.push_back(scale_primitive(to_polyq(squarefree)));
  if (chain[0].degree() <= 0) return chain;
  chain.push_back(scale_primitive(chain[0].derivative()));
  while (chain.back().degree() > 0) {
    PolyQ r;
    PolyQ::divmod(chain[chain.size() - 2], chain.back(), nullptr, &r);
    if (r.is_zero()) break;
    chain.push_back(scale_primitive(-r));
  }
  return chain;
}

inline int sign_of(const Rat& v) {
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

inline long variations(const std::vector<PolyQ>& chain, const Rat& x) {
  long count = 0;
  int prev = 0;
  for (const auto& q : chain) {
    int s = sign_of(q.eval(x));
    if (s != 0) {
      if (prev != 0 && s != prev) ++count;
      prev = s;
    }
  }
  return count;
}

inline long variations_at_infinity(const std::vector<PolyQ>& chain) {
  long count = 0;
  int prev = 0;
  for (const auto& q : chain) {
    if (q.is_zero()) continue;
    int s = sign_of(q.coeffs().back());
    if (s != 0) {
      if (prev != 0 && s != prev) ++count;
      prev = s;
    }
  }
  return count;
}

inline std::vector<Int> small_divisors(const Int& v) {
  std::vector<Int> out;
  Int a = abs(v);
  if (a == 0) return out;
  for (Int d(1); d * d <= a && d <= 100000; ++d) {
    if (a % d == 0) {
      out.push_back(d);
      out.push_back(a / d);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace rootdetail

// Product of the distinct irreducible factors of p.
inline PolyZ squarefree_part(const PolyZ& p) {
  if (p.degree() <= 0) return p;
  PolyZ pp = p.primitive();
  PolyZ g = poly_gcd(pp, pp.derivative());
  if (g.degree() <= 0) return pp;
  PolyZ q;
  if (!PolyZ::div_exact(pp, g.primitive(), &q))
    throw std::logic_error("squarefree_part: inexact division");
  return q.primitive();
}

// Upper bound on the magnitude of all real roots.
inline Rat cauchy_bound(const PolyZ& p) {
  if (p.degree() < 1) return Rat(1);
  Rat m(0);
  Rat lead = Rat(abs(p.leading()));
  for (long i = 0; i < p.degree(); ++i) {
    Rat c = Rat(abs(p[static_cast<std::size_t>(i)])) / lead;
    if (c > m) m = c;
  }
  return m + 1;
}

// Number of distinct real roots strictly greater than a.
inline long count_real_roots_above(const PolyZ& p, const Rat& a) {
  PolyZ sf = squarefree_part(p);
  if (sf.degree() < 1) return 0;
  auto chain = rootdetail::sturm_chain(sf);
  return rootdetail::variations(chain, a) - rootdetail::variations_at_infinity(chain);
}

inline bool has_real_root_above(const PolyZ& p, const Rat& a) {
  return count_real_roots_above(p, a) > 0;
}

// All distinct real roots strictly greater than threshold, in increasing
// order, each bracket refined to at most the requested width.
inline std::vector<RootBracket> isolate_real_roots_above(const PolyZ& p, const Rat& threshold,
                                                         const Rat& width) {
  std::vector<RootBracket> out;
  PolyZ sf = squarefree_part(p);
  if (sf.degree() < 1) return out;

  // Exact rational roots first: candidates num/den with num dividing the
  // constant term and den dividing the leading coefficient.
  while (!sf.is_zero() && sf[0] == 0) {
    PolyZ q;
    PolyZ::div_exact(sf, PolyZ::monomial(Int(1), 1), &q);
    if (Rat(0) > threshold) out.push_back({Rat(0), Rat(0)});
    sf = q;
  }
  if (sf.degree() >= 1) {
    bool removed = true;
    while (removed && sf.degree() >= 1) {
      removed = false;
      for (const Int& n : rootdetail::small_divisors(sf[0])) {
        for (const Int& d : rootdetail::small_divisors(sf.leading())) {
          for (int sign = 1; sign >= -1; sign -= 2) {
            Rat cand = make_rat(sign > 0 ? n : Int(-n), d);
            if (sf.eval(cand) == 0) {
              if (cand > threshold) out.push_back({cand, cand});
              std::vector<Int> lin{-num(cand), den(cand)};
              PolyZ q;
              if (!PolyZ::div_exact(sf, PolyZ(std::move(lin)).primitive(), &q))
                throw std::logic_error("isolate_real_roots_above: inexact deflation");
              sf = q;
              removed = true;
              break;
            }
          }
          if (removed) break;
        }
        if (removed) break;
      }
    }
  }

  if (sf.degree() >= 1) {
    auto chain = rootdetail::sturm_chain(sf);
    Rat bound = cauchy_bound(sf);
    Rat lo = threshold;
    Rat hi = bound > threshold ? bound : threshold + 1;
    long vlo = rootdetail::variations(chain, lo);
    long vhi = rootdetail::variations(chain, hi);
    struct Span {
      Rat lo, hi;
      long count;
    };
    std::vector<Span> work{{lo, hi, vlo - vhi}};
    std::vector<RootBracket> isolated;
    while (!work.empty()) {
      Span s = work.back();
      work.pop_back();
      if (s.count <= 0) continue;
      if (s.count == 1) {
        // Refine (lo, hi] by bisection; each midpoint is tested exactly.
        long vh = rootdetail::variations(chain, s.hi);
        while (s.hi - s.lo > width) {
          Rat m = (s.lo + s.hi) / 2;
          if (sf.eval(m) == 0) {
            s.lo = m;
            s.hi = m;
            break;
          }
          long vm = rootdetail::variations(chain, m);
          if (vm - vh == 1) {
            s.lo = m;
          } else {
            s.hi = m;
            vh = vm;
          }
        }
        isolated.push_back({s.lo, s.hi});
        continue;
      }
      Rat m = (s.lo + s.hi) / 2;
      long vm = rootdetail::variations(chain, m);
      // Half-open semantics: (m, hi] excludes m, (lo, m] includes it.
      long right = vm - rootdetail::variations(chain, s.hi);
      bool at_m = sf.eval(m) == 0;
      if (at_m) isolated.push_back({m, m});
      work.push_back({s.lo, m, s.count - right - (at_m ? 1 : 0)});
      work.push_back({m, s.hi, right});
    }
    out.insert(out.end(), isolated.begin(), isolated.end());
  }

  std::sort(out.begin(), out.end(),
            [](const RootBracket& a, const RootBracket& b) { return a.lo < b.lo; });
  return out;
}

inline std::optional<RootBracket> largest_real_root_above(const PolyZ& p, const Rat& threshold,
                                                          const Rat& width) {
  auto roots = isolate_real_roots_above(p, threshold, width);
  if (roots.empty()) return std::nullopt;
  return roots.back();
}

}  // namespace algent

#endif  // ALGENT_ROOTS_HPP
