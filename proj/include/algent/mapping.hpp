#ifndef ALGENT_MAPPING_HPP
#define ALGENT_MAPPING_HPP

#include <cstdlib>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "algent/expr.hpp"
#include "algent/param_env.hpp"
#include "algent/polynomial.hpp"
#include "algent/rational_function.hpp"

namespace algent {

// Linear-fractional action on the lagged variable w, with coefficients that
// are polynomials in the step's other variable c:
//   w' = (A(c) w + B(c)) / (C(c) w + D(c)).
struct Homography {
  PolyQ A, B, C, D;

  Homography inverse() const { return {D, -B, -C, A}; }
  PolyQ determinant() const { return A * D - B * C; }
  long coeff_degree() const {
    return std::max(std::max(A.degree(), B.degree()), std::max(C.degree(), D.degree()));
  }
};

// Point of the projective line over Rat.
struct PValue {
  bool inf = false;
  Rat v;

  static PValue infinity() { return {true, Rat()}; }
  static PValue finite(Rat x) { return {false, std::move(x)}; }
  bool operator==(const PValue& o) const { return inf == o.inf && (inf || v == o.v); }
};

inline std::string to_string(const PValue& p) { return p.inf ? "inf" : to_string(p.v); }

struct IndeterminateValue : std::runtime_error {
  IndeterminateValue() : std::runtime_error("homography evaluation is indeterminate") {}
};

// Evaluates the homography at an exact center and lag, both allowed to be
// the point at infinity. Throws IndeterminateValue on 0/0.
inline PValue apply_homography(const Homography& h, const PValue& center, const PValue& lag) {
  long m = h.coeff_degree();
  auto top = [&](const PolyQ& p) { return p.coeff_or_zero(static_cast<std::size_t>(m)); };
  Rat ac, bc, cc, dc;
  if (center.inf) {
    ac = top(h.A);
    bc = top(h.B);
    cc = top(h.C);
    dc = top(h.D);
  } else {
    ac = h.A.eval(center.v);
    bc = h.B.eval(center.v);
    cc = h.C.eval(center.v);
    dc = h.D.eval(center.v);
  }
  Rat pn, pd;
  if (lag.inf) {
    pn = ac;
    pd = cc;
  } else {
    pn = ac * lag.v + bc;
    pd = cc * lag.v + dc;
  }
  if (pd == 0) {
    if (pn == 0) throw IndeterminateValue();
    return PValue::infinity();
  }
  return PValue::finite(pn / pd);
}

namespace detail {

// Three nested levels of rational functions drive the exact normal-form
// extraction: innermost in the coefficient variable, then the lag, then the
// variable being solved for.
using T3 = RatFunc<Rat>;
using K3 = RatFunc<T3>;
using L3 = RatFunc<K3>;

inline L3 l3_const(Rat v) { return L3(K3(T3(std::move(v)))); }

struct VarRole {
  std::string name;
  long offset = 0;
  bool operator==(const VarRole& o) const { return name == o.name && offset == o.offset; }
};

struct RoleSet {
  VarRole solve, lag, coeff;
};

inline L3 eval_l3(const Expr& e, const RoleSet& roles, const ParamEnv& env, long n) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return l3_const(e.number);
    case Expr::Kind::Param:
      return l3_const(env.param(e.name));
    case Expr::Kind::SeqRef:
      return l3_const(env.seq(e.name, n + e.offset));
    case Expr::Kind::Var: {
      VarRole r{e.name, e.offset};
      if (r == roles.solve) return L3::variable();
      if (r == roles.lag) return L3(K3::variable());
      if (r == roles.coeff) return L3(K3(T3::variable()));
      throw std::domain_error("unexpected variable " + e.name + "[n" +
                              (e.offset ? std::string(e.offset > 0 ? "+" : "") + std::to_string(e.offset) : "") +
                              "] in equation");
    }
    case Expr::Kind::Add:
      return eval_l3(*e.lhs, roles, env, n) + eval_l3(*e.rhs, roles, env, n);
    case Expr::Kind::Sub:
      return eval_l3(*e.lhs, roles, env, n) - eval_l3(*e.rhs, roles, env, n);
    case Expr::Kind::Mul:
      return eval_l3(*e.lhs, roles, env, n) * eval_l3(*e.rhs, roles, env, n);
    case Expr::Kind::Div:
      return eval_l3(*e.lhs, roles, env, n) / eval_l3(*e.rhs, roles, env, n);
    case Expr::Kind::Neg:
      return -eval_l3(*e.lhs, roles, env, n);
    case Expr::Kind::Pow: {
      if (!e.pow_ident.empty()) throw std::domain_error("quantified exponent in equation");
      L3 base = eval_l3(*e.lhs, roles, env, n);
      long k = e.pow_value;
      if (k == 0) return l3_const(Rat(1));
      L3 r(1);
      for (long i = 0; i < std::abs(k); ++i) r = r * base;
      return k > 0 ? r : L3(1) / r;
    }
  }
  throw std::logic_error("eval_l3: unreachable");
}

inline PolyQ polyq_lcm(const PolyQ& a, const PolyQ& b) {
  PolyQ g = PolyQ::gcd(a, b);
  PolyQ q;
  PolyQ::divmod(a, g, &q, nullptr);
  return q * b;
}

inline PolyQ polyq_div_exact(const PolyQ& a, const PolyQ& b) {
  PolyQ q, r;
  PolyQ::divmod(a, b, &q, &r);
  if (!r.is_zero()) throw std::logic_error("polyq_div_exact: inexact division");
  return q;
}

// Joint canonical form: integer coefficients, unit content across all four
// polynomials, positive leading coefficient on the first nonzero one.
inline void canonicalize_homography(Homography& h) {
  PolyQ* ps[4] = {&h.A, &h.B, &h.C, &h.D};
  Int l(1);
  for (auto* p : ps)
    for (const auto& c : p->coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den(c).get_mpz_t());
  Int g(0);
  for (auto* p : ps)
    for (const auto& c : p->coeffs()) {
      Int scaled = num(c * Rat(l));
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), scaled.get_mpz_t());
    }
  if (g == 0) throw std::domain_error("degenerate homography");
  int sign = 0;
  for (auto* p : {&h.D, &h.C, &h.B, &h.A})
    if (!p->is_zero() && sign == 0) sign = p->leading() > 0 ? 1 : -1;
  Rat scale = make_rat(l, sign < 0 ? Int(-g) : g);
  for (auto* p : ps) *p = *p * scale;
}

inline Homography solve_homography(const EquationDecl& eq, const RoleSet& roles, const ParamEnv& env,
                                   long n) {
  L3 diff = eval_l3(*eq.lhs, roles, env, n) - eval_l3(*eq.rhs, roles, env, n);
  if (diff.is_zero()) throw std::domain_error("equation is identically satisfied");
  const Poly<K3>& N = diff.num();
  if (N.degree() < 1)
    throw std::domain_error("equation does not determine " + roles.solve.name + "[n+1]");
  if (N.degree() > 1)
    throw std::domain_error("mapping is not birational in " + roles.solve.name + "[n+1]");
  K3 sol = -(N[0] / N[1]);
  if (sol.num().degree() > 1 || sol.den().degree() > 1)
    throw std::domain_error("mapping is not homographic in the lagged variable");
  T3 a = sol.num().coeff_or_zero(1);
  T3 b = sol.num().coeff_or_zero(0);
  T3 c = sol.den().coeff_or_zero(1);
  T3 d = sol.den().coeff_or_zero(0);
  PolyQ common = polyq_lcm(polyq_lcm(a.den(), b.den()), polyq_lcm(c.den(), d.den()));
  auto lift = [&](const T3& f) { return f.num() * polyq_div_exact(common, f.den()); };
  Homography h{lift(a), lift(b), lift(c), lift(d)};
  PolyQ g = PolyQ::gcd(PolyQ::gcd(h.A, h.B), PolyQ::gcd(h.C, h.D));
  if (g.degree() > 0) {
    h.A = polyq_div_exact(h.A, g);
    h.B = polyq_div_exact(h.B, g);
    h.C = polyq_div_exact(h.C, g);
    h.D = polyq_div_exact(h.D, g);
  }
  canonicalize_homography(h);
  if (h.determinant().is_zero())
    throw std::domain_error("mapping is not birational: vanishing determinant");
  return h;
}

inline void collect_vars(const ExprPtr& e, std::set<std::pair<std::string, long>>& out) {
  if (!e) return;
  if (e->kind == Expr::Kind::Var) out.insert({e->name, e->offset});
  collect_vars(e->lhs, out);
  collect_vars(e->rhs, out);
}

}  // namespace detail

// One finite or infinite value at which a homographic step degenerates,
// with its multiplicity in the determinant.
struct SingularValue {
  PValue where;
  long order = 1;
};

// A mapping bound to a sampled parameter environment. All accessors are
// pure; homographies for autonomous mappings are extracted once.
class MappingModel {
 public:
  MappingModel(MappingSource src, ParamEnv env) : src_(std::move(src)), env_(std::move(env)) {
    if (src_.is_system()) {
      detect_system_roles();
    } else {
      std::set<std::pair<std::string, long>> vars;
      detail::collect_vars(src_.equations[0].lhs, vars);
      detail::collect_vars(src_.equations[0].rhs, vars);
      for (const auto& v : vars)
        if (v.first != "x") throw ParseError("scalar mapping cannot reference " + v.first);
      if (!vars.count({"x", 1})) throw ParseError("equation does not involve x[n+1]");
      xeq_ = 0;
    }
    if (src_.seqs.empty()) {
      if (src_.is_system()) {
        cached_x_ = compute_x(0);
        cached_y_ = compute_y(0);
      } else {
        cached_x_ = compute_scalar(0);
      }
    }
  }

  const MappingSource& source() const { return src_; }
  const ParamEnv& env() const { return env_; }
  bool is_system() const { return src_.is_system(); }
  bool autonomous() const { return src_.seqs.empty(); }

  // Scalar step n: x[n+1] = (A(x[n]) x[n-1] + B(x[n])) / (C(x[n]) x[n-1] + D(x[n])).
  Homography forward(long n) const {
    if (is_system()) throw std::domain_error("forward(): mapping is a system");
    return cached_x_ ? *cached_x_ : compute_scalar(n);
  }

  // System half steps at step n. The x half step maps (x[n], y[n]) to x[n+1]
  // and is homographic in x[n]; the y half step maps (y[n], x[n+1]) to y[n+1]
  // and is homographic in y[n].
  Homography forward_x(long n) const {
    if (!is_system()) throw std::domain_error("forward_x(): mapping is scalar");
    return cached_x_ ? *cached_x_ : compute_x(n);
  }
  Homography forward_y(long n) const {
    if (!is_system()) throw std::domain_error("forward_y(): mapping is scalar");
    return cached_y_ ? *cached_y_ : compute_y(n);
  }

  // Values of the step's coefficient variable at which the step degenerates.
  // Scalar: values of x[n]. Systems: component 'x' gives the x[n+1] values
  // degenerating the y half step, 'y' the y[n] values degenerating the x
  // half step.
  std::vector<SingularValue> singular_values(long n, char component = 'x') const {
    PolyQ det;
    long m = 0;
    if (!is_system()) {
      Homography h = forward(n);
      det = h.determinant();
      m = h.coeff_degree();
    } else if (component == 'x') {
      Homography h = forward_y(n);
      det = h.determinant();
      m = h.coeff_degree();
    } else if (component == 'y') {
      Homography h = forward_x(n);
      det = h.determinant();
      m = h.coeff_degree();
    } else {
      throw std::domain_error("singular_values: component must be 'x' or 'y'");
    }
    return det_roots(det, m, n);
  }

 private:
  MappingSource src_;
  ParamEnv env_;
  std::size_t xeq_ = 0, yeq_ = 0;
  std::optional<Homography> cached_x_, cached_y_;

  void detect_system_roles() {
    bool found_y = false;
    for (std::size_t i = 0; i < 2; ++i) {
      std::set<std::pair<std::string, long>> vars;
      detail::collect_vars(src_.equations[i].lhs, vars);
      detail::collect_vars(src_.equations[i].rhs, vars);
      if (vars.count({"y", 1})) {
        yeq_ = i;
        found_y = true;
        for (const auto& v : vars) {
          bool ok = v == std::make_pair(std::string("y"), 1L) ||
                    v == std::make_pair(std::string("y"), 0L) ||
                    v == std::make_pair(std::string("x"), 1L);
          if (!ok)
            throw ParseError("y equation may only use y[n+1], y[n], x[n+1]");
        }
      } else {
        xeq_ = i;
        if (!vars.count({"x", 1})) throw ParseError("x equation does not involve x[n+1]");
        for (const auto& v : vars) {
          bool ok = v == std::make_pair(std::string("x"), 1L) ||
                    v == std::make_pair(std::string("x"), 0L) ||
                    v == std::make_pair(std::string("y"), 0L);
          if (!ok)
            throw ParseError("x equation may only use x[n+1], x[n], y[n]");
        }
      }
    }
    if (!found_y) throw ParseError("system has no y[n+1] equation");
  }

  Homography compute_scalar(long n) const {
    detail::RoleSet roles{{"x", 1}, {"x", -1}, {"x", 0}};
    return detail::solve_homography(src_.equations[0], roles, env_, n);
  }
  Homography compute_x(long n) const {
    detail::RoleSet roles{{"x", 1}, {"x", 0}, {"y", 0}};
    return detail::solve_homography(src_.equations[xeq_], roles, env_, n);
  }
  Homography compute_y(long n) const {
    detail::RoleSet roles{{"y", 1}, {"y", 0}, {"x", 1}};
    return detail::solve_homography(src_.equations[yeq_], roles, env_, n);
  }

  std::vector<Rat> candidate_roots(long n) const {
    std::vector<Rat> out{Rat(0), Rat(1), Rat(-1)};
    auto push = [&out](const Rat& r) {
      out.push_back(r);
      out.push_back(-r);
      if (r != 0) {
        Rat inv = Rat(1) / r;
        out.push_back(inv);
        out.push_back(-inv);
      }
    };
    for (const auto& p : src_.params) push(env_.param(p.name));
    for (const auto& s : src_.seqs)
      for (long k = -4; k <= 4; ++k) push(env_.seq(s, n + k));
    return out;
  }

  // Divisors of |v| by trial division, only attempted for small values.
  static std::vector<Int> small_divisors(const Int& v) {
    std::vector<Int> divs;
    Int a = abs(v);
    if (a == 0 || a > 10000) return divs;
    for (Int d(1); d * d <= a; ++d)
      if (a % d == 0) {
        divs.push_back(d);
        divs.push_back(a / d);
      }
    return divs;
  }

  std::vector<SingularValue> det_roots(const PolyQ& det, long m, long n) const {
    std::vector<SingularValue> out;
    PolyQ rem = det;
    auto deflate = [&rem](const Rat& r) {
      long order = 0;
      PolyQ lin(std::vector<Rat>{-r, Rat(1)});
      while (!rem.is_zero() && rem.eval(r) == 0) {
        rem = detail::polyq_div_exact(rem, lin);
        ++order;
      }
      return order;
    };
    std::set<std::string> seen;
    auto try_root = [&](const Rat& r) {
      std::string key = to_string(r);
      if (!seen.insert(key).second) return;
      long order = deflate(r);
      if (order > 0) out.push_back({PValue::finite(r), order});
    };
    for (const auto& r : candidate_roots(n)) try_root(r);
    if (rem.degree() > 0) {
      ClearedPoly cp = clear_denominators(rem);
      PolyZ pz(std::move(cp.coeffs));
      pz = pz.primitive();
      for (const Int& p : small_divisors(pz.coeffs().front()))
        for (const Int& q : small_divisors(pz.coeffs().back())) {
          Rat r = make_rat(p, q);
          try_root(r);
          try_root(-r);
        }
    }
    long inf_order = 2 * m - (det.degree() < 0 ? 0 : det.degree());
    if (inf_order > 0) out.push_back({PValue::infinity(), inf_order});
    return out;
  }
};

}  // namespace algent

#endif  // ALGENT_MAPPING_HPP
