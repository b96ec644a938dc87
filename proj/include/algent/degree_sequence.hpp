#ifndef ALGENT_DEGREE_SEQUENCE_HPP
#define ALGENT_DEGREE_SEQUENCE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "algent/int_poly.hpp"
#include "algent/mapping.hpp"
#include "algent/param_env.hpp"
#include "algent/rational.hpp"

namespace algent {

// Reduced fraction of integer polynomials in z, jointly primitive with a
// positive leading coefficient on the denominator. Infinity is carried as
// (num, 0); the indeterminate pair (0, 0) is never stored.
struct FracZ {
  PolyZ num;
  PolyZ den;

  long degree() const { return std::max(num.degree(), den.degree()); }
};

struct DegreeOptions {
  long n_max = 11;
  int trials = 3;
  std::uint64_t seed = 0x5eedULL;
  // Iteration stops before any step whose unreduced degree bound would pass
  // this cap, so runaway exponential maps terminate predictably.
  long degree_cap = 6000;
};

// Homogeneous degrees of the iterates, identical across all trials. For
// systems both components are recorded; y_degrees stays empty for scalars.
struct DegreeSequence {
  std::string mapping;
  std::vector<long> x_degrees;
  std::vector<long> y_degrees;
  std::vector<std::uint64_t> trial_seeds;
  bool is_system = false;
  bool truncated = false;
};

namespace detail {

// Integer form of a homography: all four coefficient polynomials scaled by
// the common denominator, plus the shared homogenisation degree.
struct HomographyZ {
  PolyZ a, b, c, d;
  std::size_t m;
};

inline HomographyZ homography_to_z(const Homography& h) {
  Int l(1);
  for (const PolyQ* p : {&h.A, &h.B, &h.C, &h.D})
    for (const Rat& coeff : p->coeffs())
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den(coeff).get_mpz_t());
  auto conv = [&](const PolyQ& p) {
    std::vector<Int> c(p.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = num(Rat(p.coeffs()[i] * Rat(l)));
    return PolyZ(std::move(c));
  };
  long m = h.coeff_degree();
  return {conv(h.A), conv(h.B), conv(h.C), conv(h.D),
          static_cast<std::size_t>(std::max(m, 0L))};
}

inline FracZ reduce_frac(PolyZ n, PolyZ d) {
  if (n.is_zero() && d.is_zero()) throw IndeterminateValue();
  PolyZ g = poly_gcd(n, d);
  auto qn = poly_div_checked(n, g);
  auto qd = poly_div_checked(d, g);
  if (!qn || !qd) throw std::logic_error("reduce_frac: gcd does not divide its arguments");
  FracZ f{std::move(*qn), std::move(*qd)};
  const PolyZ& lead_src = f.den.is_zero() ? f.num : f.den;
  if (lead_src.leading() < 0) {
    f.num = -f.num;
    f.den = -f.den;
  }
  return f;
}

// One homographic step: substitute the center fraction into the coefficient
// polynomials (homogenised to degree m) and apply the result to the lag pair.
inline FracZ apply_step(const HomographyZ& h, const FracZ& center, const FracZ& lag) {
  std::vector<PolyZ> pp(h.m + 1), qp(h.m + 1);
  pp[0] = PolyZ(Int(1));
  qp[0] = PolyZ(Int(1));
  for (std::size_t i = 1; i <= h.m; ++i) {
    pp[i] = pp[i - 1] * center.num;
    qp[i] = qp[i - 1] * center.den;
  }
  std::vector<PolyZ> mixed(h.m + 1);
  for (std::size_t i = 0; i <= h.m; ++i) mixed[i] = pp[i] * qp[h.m - i];
  auto hom_eval = [&](const PolyZ& p) {
    PolyZ acc;
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
      if (p.coeffs()[i] == 0) continue;
      acc = acc + mixed[i] * p.coeffs()[i];
    }
    return acc;
  };
  PolyZ ah = hom_eval(h.a), bh = hom_eval(h.b), ch = hom_eval(h.c), dh = hom_eval(h.d);
  return reduce_frac(ah * lag.num + bh * lag.den, ch * lag.num + dh * lag.den);
}

inline FracZ constant_frac(const Rat& v) { return {PolyZ(num(v)), PolyZ(den(v))}; }

inline FracZ variable_frac() { return {PolyZ::monomial(Int(1), 1), PolyZ(Int(1))}; }

inline void iterate_scalar(const MappingModel& model, const Rat& x0, const DegreeOptions& opt,
                           std::vector<long>& degrees, bool& truncated) {
  FracZ prev = constant_frac(x0);
  FracZ cur = variable_frac();
  degrees = {prev.degree(), cur.degree()};
  truncated = false;
  for (long n = 1; n < opt.n_max; ++n) {
    HomographyZ h = homography_to_z(model.forward(n));
    long bound = static_cast<long>(h.m) * cur.degree() + prev.degree();
    if (bound > opt.degree_cap) {
      truncated = true;
      return;
    }
    FracZ next = apply_step(h, cur, prev);
    degrees.push_back(next.degree());
    prev = std::move(cur);
    cur = std::move(next);
  }
}

inline void iterate_system(const MappingModel& model, const Rat& x0, const DegreeOptions& opt,
                           std::vector<long>& xd, std::vector<long>& yd, bool& truncated) {
  FracZ x = constant_frac(x0);
  FracZ y = variable_frac();
  xd = {x.degree()};
  yd = {y.degree()};
  truncated = false;
  for (long n = 0; n < opt.n_max; ++n) {
    HomographyZ hx = homography_to_z(model.forward_x(n));
    long bx = static_cast<long>(hx.m) * y.degree() + x.degree();
    if (bx > opt.degree_cap) {
      truncated = true;
      return;
    }
    FracZ xn = apply_step(hx, y, x);
    HomographyZ hy = homography_to_z(model.forward_y(n));
    long by = static_cast<long>(hy.m) * xn.degree() + y.degree();
    if (by > opt.degree_cap) {
      truncated = true;
      return;
    }
    FracZ yn = apply_step(hy, xn, y);
    xd.push_back(xn.degree());
    yd.push_back(yn.degree());
    x = std::move(xn);
    y = std::move(yn);
  }
}

// One trial: sample an environment, iterate, resample on exact singular
// orbits. Resampling is deterministic in the trial seed.
inline void run_trial(const MappingSource& src, std::uint64_t seed, const DegreeOptions& opt,
                      std::vector<long>& xd, std::vector<long>& yd, bool& truncated) {
  for (int attempt = 0; attempt < 10; ++attempt) {
    std::uint64_t s = attempt == 0 ? seed
                                   : hash_combine(seed, 0xa77e3d9bULL + static_cast<std::uint64_t>(attempt));
    ParamEnv env(src, s);
    MappingModel model(src, env);
    try {
      if (model.is_system()) {
        iterate_system(model, env.initial_point(0), opt, xd, yd, truncated);
      } else {
        iterate_scalar(model, env.initial_point(0), opt, xd, truncated);
        yd.clear();
      }
      return;
    } catch (const IndeterminateValue&) {
    }
  }
  throw std::runtime_error("degree iteration hit singular orbits in 10 resamples");
}

}  // namespace detail

// Exact degree sequence of the iterates: x0 is a sampled generic constant and
// x1 carries z (for systems, y0 carries z so that x1 does). Every trial uses
// fresh parameter and initial samples and must reproduce the same degrees.
inline DegreeSequence compute_degrees(const MappingSource& src, const DegreeOptions& opt) {
  if (opt.n_max < 1) throw std::invalid_argument("compute_degrees: n_max must be at least 1");
  if (opt.trials < 1) throw std::invalid_argument("compute_degrees: trials must be at least 1");
  DegreeSequence out;
  out.mapping = src.name;
  out.is_system = src.is_system();
  for (int t = 0; t < opt.trials; ++t) {
    std::uint64_t s =
        t == 0 ? opt.seed : hash_combine(opt.seed, static_cast<std::uint64_t>(t));
    std::vector<long> xd, yd;
    bool trunc = false;
    detail::run_trial(src, s, opt, xd, yd, trunc);
    if (t == 0) {
      out.x_degrees = std::move(xd);
      out.y_degrees = std::move(yd);
      out.truncated = trunc;
    } else if (xd != out.x_degrees || yd != out.y_degrees || trunc != out.truncated) {
      throw std::runtime_error("degree sequences disagree between trials (seed " +
                               std::to_string(s) + "): non-generic sample");
    }
    out.trial_seeds.push_back(s);
  }
  return out;
}

}  // namespace algent

#endif  // ALGENT_DEGREE_SEQUENCE_HPP
