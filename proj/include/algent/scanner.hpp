#ifndef ALGENT_SCANNER_HPP
#define ALGENT_SCANNER_HPP

// Singularity pattern scanner. Orbits seeded at a singular value, perturbed
// by a formal parameter eps and fed generic neighbour data, are traced as
// Laurent series in eps. The tag stream (zeros, infinities, recovered
// generic values) is then classified into confined, cyclic, unconfined and
// anticonfined patterns, with fitted order recurrences for tails whose
// multiplicities grow.
//
// Genericity of the neighbour data is established by sampling: each trace
// runs several trials with distinct neighbour values, and every trial runs
// over two independent 62-bit prime fields. A slot whose leading value
// agrees across all trials is a definite value (reconstructed exactly from
// the residues when small enough); one that varies with the trial is
// generic. Kinds and orders must agree across every channel, so a sampling
// accident surfaces as an undetermined pattern, never as a wrong one.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "algent/int_poly.hpp"
#include "algent/laurent.hpp"
#include "algent/mapping.hpp"
#include "algent/rational_function.hpp"
#include "algent/recurrence_fit.hpp"
#include "algent/roots.hpp"

namespace algent {

// The orbit reached an exact degeneracy (vanishing numerator or denominator
// with no series structure left); the trace cannot continue.
struct DegenerateOrbit : std::runtime_error {
  DegenerateOrbit() : std::runtime_error("orbit step degenerated exactly") {}
};

// Trial or prime channels disagree on a slot's structure, which can only
// come from a degenerate sample; the trace is not trustworthy.
struct TrialMismatch : std::runtime_error {
  TrialMismatch() : std::runtime_error("trial channels disagree") {}
};

enum class TagKind { Zero, Inf, Finite, Generic };

// One orbit slot: the kind of value reached, its order (for zeros and
// infinities), the exact value for finite slots when reconstructible, and
// the component the slot lives on ('x' for scalars).
struct ValueTag {
  TagKind kind = TagKind::Generic;
  long order = 0;
  std::optional<Rat> value;
  char component = 'x';
};

inline bool is_singular_tag(const ValueTag& t) {
  return t.kind == TagKind::Zero || t.kind == TagKind::Inf;
}

// Match by kind, order and component; finite values are not compared, since
// interior values of a repeating block drift from period to period.
inline bool tag_match(const ValueTag& a, const ValueTag& b) {
  return a.kind == b.kind && a.order == b.order && a.component == b.component;
}

inline bool tag_kind_match(const ValueTag& a, const ValueTag& b) {
  return a.kind == b.kind && a.component == b.component;
}

inline std::string to_string(const ValueTag& t, bool with_component = false) {
  std::string prefix;
  if (with_component && t.kind != TagKind::Generic) prefix = std::string(1, t.component) + "=";
  switch (t.kind) {
    case TagKind::Zero:
      return prefix + (t.order == 1 ? "0" : "0^" + std::to_string(t.order));
    case TagKind::Inf:
      return prefix + (t.order == 1 ? "inf" : "inf^" + std::to_string(t.order));
    case TagKind::Finite:
      return prefix + (t.value ? to_string(*t.value) : std::string("f"));
    case TagKind::Generic:
      return with_component ? std::string(1, t.component) : std::string("x");
  }
  return "?";
}

struct ScanOptions {
  long max_steps = 40;
  long truncation = 24;
  long trunc_cap = 192;
  long order_cap = 400;
  long trials = 3;
  long max_preperiod = 12;
  long max_period = 18;
  long min_blocks = 3;
  // A trace whose series window runs out of coefficients is still a valid
  // observation of everything it saw; accept it once this many slots are
  // known, otherwise retry with a doubled window.
  long min_horizon = 16;
  std::vector<long> base_indices = {7, 11, 15};
};

// Raw tag stream of one seeded orbit. steps[0] is the entry tag itself;
// offsets give each slot's displacement in full map steps (half steps of a
// system share an index).
struct PatternTrace {
  PValue entry;
  char entry_component = 'x';
  bool forward = true;
  long base_index = 0;
  long truncation = 0;
  bool truncated = false;
  bool failed = false;
  std::vector<ValueTag> steps;
  std::vector<long> offsets;
};

// Integer linear recurrence fitted to a growing order sequence, with a
// certified bracket on its dominant growth rate.
struct OrderRecurrence {
  std::vector<long> coeffs;
  PolyZ char_poly;
  std::optional<RootBracket> growth;
  std::vector<long> observed;
};

inline std::optional<OrderRecurrence> fit_order_recurrence(const std::vector<long>& g) {
  long n = static_cast<long>(g.size());
  for (long r = 1; r <= 4; ++r) {
    if (n < 2 * r + 2) break;
    std::vector<std::vector<Rat>> m(static_cast<std::size_t>(r),
                                    std::vector<Rat>(static_cast<std::size_t>(r)));
    std::vector<Rat> rhs(static_cast<std::size_t>(r));
    for (long k = 0; k < r; ++k) {
      for (long i = 0; i < r; ++i)
        m[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
            Rat(g[static_cast<std::size_t>(r + k - 1 - i)]);
      rhs[static_cast<std::size_t>(k)] = Rat(g[static_cast<std::size_t>(r + k)]);
    }
    std::vector<Rat> c;
    if (!detail::solve_rational(std::move(m), std::move(rhs), c)) continue;
    bool integral = true;
    for (const auto& ci : c) integral = integral && is_integer(ci);
    if (!integral) continue;
    bool ok = true;
    for (long k = 2 * r; k < n && ok; ++k) {
      Rat acc(0);
      for (long i = 0; i < r; ++i)
        acc += c[static_cast<std::size_t>(i)] * Rat(g[static_cast<std::size_t>(k - 1 - i)]);
      ok = acc == Rat(g[static_cast<std::size_t>(k)]);
    }
    if (!ok) continue;
    OrderRecurrence rec;
    rec.observed = g;
    for (const auto& ci : c) rec.coeffs.push_back(static_cast<long>(num(ci).get_si()));
    std::vector<Int> cp(static_cast<std::size_t>(r + 1));
    cp[static_cast<std::size_t>(r)] = 1;
    for (long i = 0; i < r; ++i) cp[static_cast<std::size_t>(r - 1 - i)] = -num(c[static_cast<std::size_t>(i)]);
    rec.char_poly = PolyZ(std::move(cp));
    rec.growth = largest_real_root_above(rec.char_poly, Rat(0), make_rat(Int(1), Int(1000000000000L)));
    return rec;
  }
  return std::nullopt;
}

enum class PatternType { Confined, Cyclic, Unconfined, Anticonfined, Undetermined };

// Per-position order track of a kind-periodic repeating block.
struct TrackFit {
  char component = 'x';
  TagKind kind = TagKind::Zero;
  long position = 0;
  std::vector<long> orders;
  std::optional<OrderRecurrence> rec;
};

struct PatternClass {
  PatternType type = PatternType::Undetermined;
  PValue entry;
  char entry_component = 'x';
  long base_index = 0;
  bool enterable = false;

  PatternTrace fwd;
  std::optional<PatternTrace> bwd;

  // Confined: steps[0 .. body_len) is the pattern body.
  long body_len = 0;
  // Unconfined: repeating block steps[block_start .. block_start + period).
  long block_start = 0;
  long period = 0;
  bool strict_periodic = false;
  std::vector<TrackFit> tracks;
  // Cyclic: block normalized to start at the generic slot.
  std::vector<ValueTag> cycle;
  // Anticonfined: fitted order growth in each time direction.
  std::optional<OrderRecurrence> forward_orders, backward_orders;

  std::vector<ValueTag> body() const {
    return {fwd.steps.begin(), fwd.steps.begin() + body_len};
  }
  std::vector<ValueTag> block() const {
    return {fwd.steps.begin() + block_start, fwd.steps.begin() + block_start + period};
  }
};

namespace scandetail {

// Element of F_p with the modulus carried alongside, so LaurentSeries can
// use it as a coefficient field. A default-constructed element (p == 0) is
// the plain integer 0 or 1 produced by the series template's F() and F(1);
// it adopts the modulus of the first proper operand it meets. Literal
// arithmetic only ever sees the values 0 and 1.
struct Fp {
  std::uint64_t v = 0;
  std::uint64_t p = 0;

  Fp() = default;
  explicit Fp(long x) : v(static_cast<std::uint64_t>(x)) {}

  static Fp res(std::uint64_t r, std::uint64_t prime) {
    Fp f;
    f.p = prime;
    f.v = r % prime;
    return f;
  }

  std::uint64_t red(std::uint64_t prime) const { return p ? v : v % prime; }

  friend bool operator==(const Fp& a, const Fp& b) {
    std::uint64_t prime = a.p ? a.p : b.p;
    if (!prime) return a.v == b.v;
    return a.red(prime) == b.red(prime);
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

  friend Fp operator+(const Fp& a, const Fp& b) {
    std::uint64_t prime = a.p ? a.p : b.p;
    if (!prime) return Fp(static_cast<long>(a.v + b.v));
    std::uint64_t s = a.red(prime) + b.red(prime);
    return res(s >= prime ? s - prime : s, prime);
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    std::uint64_t prime = a.p ? a.p : b.p;
    if (!prime) {
      if (a.v < b.v) throw TrialMismatch();
      return Fp(static_cast<long>(a.v - b.v));
    }
    std::uint64_t x = a.red(prime), y = b.red(prime);
    return res(x >= y ? x - y : x + prime - y, prime);
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    std::uint64_t prime = a.p ? a.p : b.p;
    if (!prime) return Fp(static_cast<long>(a.v * b.v));
    return res(detail::mulmod_u64(a.red(prime), b.red(prime), prime), prime);
  }
  friend Fp operator/(const Fp& a, const Fp& b) {
    std::uint64_t prime = a.p ? a.p : b.p;
    if (!prime) throw TrialMismatch();
    std::uint64_t d = b.red(prime);
    if (d == 0) throw TrialMismatch();
    return res(detail::mulmod_u64(a.red(prime), detail::invmod_u64(d, prime), prime), prime);
  }
};

inline Fp from_rat(const Rat& c, std::uint64_t p) {
  std::uint64_t n = mpz_fdiv_ui(num(c).get_mpz_t(), p);
  std::uint64_t d = mpz_fdiv_ui(den(c).get_mpz_t(), p);
  if (d == 0) throw TrialMismatch();
  return Fp::res(detail::mulmod_u64(n, detail::invmod_u64(d, p), p), p);
}

using SeriesF = LaurentSeries<Fp>;
using SeriesVec = std::vector<SeriesF>;

// The parallel trace channels: every trial (a distinct sampled neighbour
// value) runs once per prime, channel index c = trial * np + prime.
struct Channels {
  std::vector<std::uint64_t> primes;
  std::vector<Rat> u;

  long np() const { return static_cast<long>(primes.size()); }
  long nt() const { return static_cast<long>(u.size()); }
  long count() const { return np() * nt(); }
  std::uint64_t prime_of(long c) const { return primes[static_cast<std::size_t>(c % np())]; }
};

inline Channels make_channels(const MappingModel& m, const ScanOptions& opts) {
  Channels ch;
  for (std::size_t j = 0; j < 2; ++j) ch.primes.push_back(detail::gcd_prime(8 + j));
  long want = std::max<long>(2, opts.trials);
  for (int t = 0; static_cast<long>(ch.u.size()) < want && t < 64; ++t) {
    Rat u = m.env().initial_point(t);
    bool dup = false;
    for (const auto& prev : ch.u) dup = dup || prev == u;
    if (!dup) ch.u.push_back(u);
  }
  if (static_cast<long>(ch.u.size()) < want) throw TrialMismatch();
  return ch;
}

inline SeriesVec seed_vec(const Channels& ch, const PValue& entry, long window) {
  SeriesVec out;
  out.reserve(static_cast<std::size_t>(ch.count()));
  for (long t = 0; t < ch.nt(); ++t) {
    for (long j = 0; j < ch.np(); ++j) {
      std::uint64_t p = ch.primes[static_cast<std::size_t>(j)];
      if (entry.inf)
        out.push_back(SeriesF::monomial(Fp::res(1, p), -1, window));
      else if (entry.v == 0)
        out.push_back(SeriesF::monomial(Fp::res(1, p), 1, window));
      else
        out.push_back(SeriesF::constant(from_rat(entry.v, p), window) +
                      SeriesF::monomial(Fp::res(1, p), 1, window));
    }
  }
  return out;
}

inline SeriesVec generic_vec(const Channels& ch, long window) {
  SeriesVec out;
  out.reserve(static_cast<std::size_t>(ch.count()));
  for (long t = 0; t < ch.nt(); ++t)
    for (long j = 0; j < ch.np(); ++j)
      out.push_back(SeriesF::constant(
          from_rat(ch.u[static_cast<std::size_t>(t)], ch.primes[static_cast<std::size_t>(j)]),
          window));
  return out;
}

inline SeriesF eval_poly(const PolyQ& poly, const SeriesF& s, std::uint64_t p, long window) {
  SeriesF acc = SeriesF::zero();
  for (long i = poly.degree(); i >= 0; --i) {
    acc = acc * s;
    const Rat& c = poly[static_cast<std::size_t>(i)];
    if (c != 0) acc = acc + SeriesF::constant(from_rat(c, p), window);
  }
  return acc;
}

inline SeriesVec apply_vec(const Channels& ch, const Homography& h, const SeriesVec& center,
                           const SeriesVec& lag, long window) {
  SeriesVec out(center.size());
  for (long c = 0; c < ch.count(); ++c) {
    std::uint64_t p = ch.prime_of(c);
    const SeriesF& w = center[static_cast<std::size_t>(c)];
    const SeriesF& l = lag[static_cast<std::size_t>(c)];
    SeriesF num = eval_poly(h.A, w, p, window) * l + eval_poly(h.B, w, p, window);
    SeriesF den = eval_poly(h.C, w, p, window) * l + eval_poly(h.D, w, p, window);
    if (num.is_zero() || den.is_zero()) throw DegenerateOrbit();
    out[static_cast<std::size_t>(c)] = num / den;
  }
  return out;
}

inline Homography hom_invert(const Homography& h) { return {h.D, -h.B, -h.C, h.A}; }

// Chinese remainder lift of one residue per prime followed by rational
// reconstruction; nullopt when the value does not fit the bound.
inline std::optional<Rat> reconstruct_value(const Channels& ch,
                                            const std::vector<std::uint64_t>& r) {
  Int x(0), m(1);
  for (long j = 0; j < ch.np(); ++j) {
    std::uint64_t p = ch.primes[static_cast<std::size_t>(j)];
    Int pz(static_cast<unsigned long>(p));
    if (j == 0) {
      x = Int(static_cast<unsigned long>(r[0]));
      m = pz;
      continue;
    }
    std::uint64_t xm = mpz_fdiv_ui(x.get_mpz_t(), p);
    std::uint64_t mm = mpz_fdiv_ui(m.get_mpz_t(), p);
    std::uint64_t rj = r[static_cast<std::size_t>(j)];
    std::uint64_t diff = rj >= xm ? rj - xm : rj + p - xm;
    std::uint64_t delta = detail::mulmod_u64(diff, detail::invmod_u64(mm, p), p);
    x += m * Int(static_cast<unsigned long>(delta));
    m *= pz;
  }
  Int bound = sqrt(m / 2);
  Int r0 = m, r1 = x, t0 = 0, t1 = 1;
  while (r1 > bound) {
    Int q = r0 / r1;
    r0 -= q * r1;
    std::swap(r0, r1);
    t0 -= q * t1;
    std::swap(t0, t1);
  }
  if (t1 == 0 || r1 == 0) return std::nullopt;
  Int nu = r1, de = t1;
  if (de < 0) {
    de = -de;
    nu = -nu;
  }
  if (de > bound) return std::nullopt;
  // Demand a wide margin below the lattice bound: a residue whose true
  // value does not fit would otherwise reconstruct to a spurious small
  // fraction. With the margin the accept region is a ~2^-55 sliver, so a
  // value this small matching every residue is the genuine one.
  if (abs(nu) * de > (m >> 61)) return std::nullopt;
  Rat v = make_rat(nu, de);
  for (long j = 0; j < ch.np(); ++j) {
    std::uint64_t p = ch.primes[static_cast<std::size_t>(j)];
    if (from_rat(v, p).v != r[static_cast<std::size_t>(j)]) return std::nullopt;
  }
  return v;
}

// Collapses the per-channel leading data of one slot into a single tag.
// Kinds and orders must agree across every channel; finite versus generic
// is decided by whether the leading value moves with the trial.
inline ValueTag merge_tag(const Channels& ch, const SeriesVec& vec, char component) {
  for (const auto& s : vec)
    if (s.is_zero()) throw DegenerateOrbit();
  long val = vec[0].valuation();
  for (const auto& s : vec)
    if (s.valuation() != val) throw TrialMismatch();
  ValueTag t;
  t.component = component;
  if (val > 0) {
    t.kind = TagKind::Zero;
    t.order = val;
    return t;
  }
  if (val < 0) {
    t.kind = TagKind::Inf;
    t.order = -val;
    return t;
  }
  bool constant = true;
  for (long j = 0; j < ch.np(); ++j) {
    bool cj = true;
    std::uint64_t base = vec[static_cast<std::size_t>(j)].leading().v;
    for (long tr = 1; tr < ch.nt(); ++tr)
      cj = cj && vec[static_cast<std::size_t>(tr * ch.np() + j)].leading().v == base;
    if (j == 0)
      constant = cj;
    else if (cj != constant)
      throw TrialMismatch();
  }
  if (!constant) {
    t.kind = TagKind::Generic;
    return t;
  }
  t.kind = TagKind::Finite;
  std::vector<std::uint64_t> r(static_cast<std::size_t>(ch.np()));
  for (long j = 0; j < ch.np(); ++j)
    r[static_cast<std::size_t>(j)] = vec[static_cast<std::size_t>(j)].leading().v;
  t.value = reconstruct_value(ch, r);
  return t;
}

// Stop rules shared by all trace loops.
struct TraceSink {
  PatternTrace& out;
  long order_cap;
  long generic_run = 0;
  bool saw_generic = false;

  // Returns false when the trace should stop after this tag.
  bool push(const ValueTag& t, long offset) {
    out.steps.push_back(t);
    out.offsets.push_back(offset);
    if (t.kind == TagKind::Generic) {
      saw_generic = true;
      generic_run = 0;
    } else if (is_singular_tag(t)) {
      generic_run = -1;
      if (t.order > order_cap) return false;
    }
    if (saw_generic && generic_run >= 0 && !is_singular_tag(t)) {
      ++generic_run;
      if (generic_run > 6) return false;
    }
    return true;
  }
};

inline void trace_scalar(const MappingModel& m, const Channels& ch, PatternTrace& tr,
                         const ScanOptions& opts, long window) {
  SeriesVec cur = seed_vec(ch, tr.entry, window);
  SeriesVec other = generic_vec(ch, window);
  TraceSink sink{tr, opts.order_cap};
  if (!sink.push(merge_tag(ch, cur, 'x'), 0)) return;
  long idx = tr.base_index;
  for (long k = 1; k <= opts.max_steps; ++k) {
    Homography h = tr.forward ? m.forward(idx) : hom_invert(m.forward(idx));
    SeriesVec next = apply_vec(ch, h, cur, other, window);
    other = std::move(cur);
    cur = std::move(next);
    idx += tr.forward ? 1 : -1;
    if (!sink.push(merge_tag(ch, cur, 'x'), tr.forward ? k : -k)) return;
  }
}

inline void trace_system(const MappingModel& m, const Channels& ch, PatternTrace& tr,
                         const ScanOptions& opts, long window) {
  TraceSink sink{tr, opts.order_cap};
  long idx = tr.base_index;
  if (tr.forward) {
    SeriesVec x, y;
    if (tr.entry_component == 'x') {
      // Seed x[k] singular with generic y[k-1]; the first computed slot is
      // y[k], which shares the entry's step index.
      x = seed_vec(ch, tr.entry, window);
      SeriesVec ylag = generic_vec(ch, window);
      if (!sink.push(merge_tag(ch, x, 'x'), 0)) return;
      y = apply_vec(ch, m.forward_y(idx - 1), x, ylag, window);
      if (!sink.push(merge_tag(ch, y, 'y'), 0)) return;
    } else {
      y = seed_vec(ch, tr.entry, window);
      x = generic_vec(ch, window);
      if (!sink.push(merge_tag(ch, y, 'y'), 0)) return;
    }
    for (long k = 1; k <= opts.max_steps; ++k) {
      SeriesVec xn = apply_vec(ch, m.forward_x(idx), y, x, window);
      if (!sink.push(merge_tag(ch, xn, 'x'), k)) return;
      SeriesVec yn = apply_vec(ch, m.forward_y(idx), xn, y, window);
      if (!sink.push(merge_tag(ch, yn, 'y'), k)) return;
      x = std::move(xn);
      y = std::move(yn);
      ++idx;
    }
  } else {
    SeriesVec x, y;
    if (tr.entry_component == 'x') {
      // Seed x[k] singular with generic y[k]; walk left through y[k-1],
      // x[k-1], y[k-2], ...
      x = seed_vec(ch, tr.entry, window);
      y = generic_vec(ch, window);
      if (!sink.push(merge_tag(ch, x, 'x'), 0)) return;
    } else {
      y = seed_vec(ch, tr.entry, window);
      SeriesVec xnext = generic_vec(ch, window);
      if (!sink.push(merge_tag(ch, y, 'y'), 0)) return;
      x = apply_vec(ch, hom_invert(m.forward_x(idx)), y, xnext, window);
      if (!sink.push(merge_tag(ch, x, 'x'), 0)) return;
    }
    for (long k = 1; k <= opts.max_steps; ++k) {
      SeriesVec yp = apply_vec(ch, hom_invert(m.forward_y(idx - 1)), x, y, window);
      if (!sink.push(merge_tag(ch, yp, 'y'), -k)) return;
      SeriesVec xp = apply_vec(ch, hom_invert(m.forward_x(idx - 1)), yp, x, window);
      if (!sink.push(merge_tag(ch, xp, 'x'), -k)) return;
      x = std::move(xp);
      y = std::move(yp);
      --idx;
    }
  }
}

inline long last_generic_index(const std::vector<ValueTag>& steps) {
  long lg = -1;
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (steps[i].kind == TagKind::Generic) lg = static_cast<long>(i);
  return lg;
}

// Singular tags keep appearing up to the end of the observed horizon.
inline bool singular_persistent(const std::vector<ValueTag>& steps) {
  if (steps.size() < 4) return false;
  long last = -1, count = 0;
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (is_singular_tag(steps[i])) {
      last = static_cast<long>(i);
      ++count;
    }
  return last >= static_cast<long>(steps.size()) - 3 &&
         count >= static_cast<long>(steps.size()) / 3;
}

// Dominant order sequence of an anticonfined tail: the singular tags after
// the last generic slot, split per kind track when the kinds alternate.
inline std::vector<long> dominant_tail_orders(const std::vector<ValueTag>& steps) {
  long lg = last_generic_index(steps);
  std::vector<ValueTag> tail;
  for (std::size_t i = static_cast<std::size_t>(lg + 1); i < steps.size(); ++i)
    if (is_singular_tag(steps[i])) tail.push_back(steps[i]);
  if (tail.empty()) return {};
  bool uniform = true;
  for (const auto& t : tail) uniform = uniform && tag_kind_match(t, tail[0]);
  if (uniform) {
    std::vector<long> orders;
    for (const auto& t : tail) orders.push_back(t.order);
    return orders;
  }
  for (long p = 2; p <= 4; ++p) {
    bool ok = true;
    for (std::size_t i = 0; i + static_cast<std::size_t>(p) < tail.size() && ok; ++i)
      ok = tag_kind_match(tail[i], tail[i + static_cast<std::size_t>(p)]);
    if (!ok) continue;
    std::vector<long> best;
    for (long j = 0; j < p; ++j) {
      std::vector<long> track;
      for (std::size_t i = static_cast<std::size_t>(j); i < tail.size();
           i += static_cast<std::size_t>(p))
        track.push_back(tail[i].order);
      if (track.size() < 2) continue;
      if (best.empty() || track.back() > best.back()) best = track;
    }
    if (!best.empty()) return best;
  }
  std::vector<long> orders;
  for (const auto& t : tail) orders.push_back(t.order);
  return orders;
}

struct Periodicity {
  long pre = 0, period = 0;
};

template <class Match>
inline std::optional<Periodicity> find_periodicity(const std::vector<ValueTag>& s, Match match,
                                                   const ScanOptions& opts) {
  long h = static_cast<long>(s.size());
  for (long pre = 0; pre <= std::min(opts.max_preperiod, h); ++pre) {
    for (long p = 1; p <= opts.max_period; ++p) {
      if (h - pre < opts.min_blocks * p) break;
      bool ok = true;
      for (long i = pre; i + p < h && ok; ++i)
        ok = match(s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(i + p)]);
      if (ok) return Periodicity{pre, p};
    }
  }
  return std::nullopt;
}

}  // namespace scandetail

// Trace one seeded orbit, retrying with a doubled series window whenever
// cancellation exhausts the known coefficients.
inline PatternTrace trace_pattern(const MappingModel& m, const PValue& entry, char component,
                                  bool forward, long base_index, const ScanOptions& opts) {
  scandetail::Channels ch = scandetail::make_channels(m, opts);
  for (long window = opts.truncation; window <= opts.trunc_cap; window *= 2) {
    PatternTrace tr;
    tr.entry = entry;
    tr.entry_component = component;
    tr.forward = forward;
    tr.base_index = base_index;
    tr.truncation = window;
    try {
      if (m.is_system())
        scandetail::trace_system(m, ch, tr, opts, window);
      else
        scandetail::trace_scalar(m, ch, tr, opts, window);
      return tr;
    } catch (const TruncationExhausted&) {
      // Every slot already pushed was verified before the coefficients ran
      // out; a long enough prefix is a complete observation in itself.
      if (static_cast<long>(tr.steps.size()) >= opts.min_horizon) return tr;
      continue;
    } catch (const DegenerateOrbit&) {
      tr.failed = true;
      return tr;
    } catch (const TrialMismatch&) {
      tr.failed = true;
      return tr;
    }
  }
  PatternTrace tr;
  tr.entry = entry;
  tr.entry_component = component;
  tr.forward = forward;
  tr.base_index = base_index;
  tr.truncation = opts.trunc_cap;
  tr.truncated = true;
  tr.failed = true;
  return tr;
}

// Can the value be reached from generic neighbour data? Solves the step for
// the lag that lands on the value at a generic coefficient w; the entry is
// spontaneous unless that lag is forced to a constant singular value (or no
// finite lag exists at all).
inline bool spontaneously_enterable(const MappingModel& m, const PValue& entry, char component,
                                    long base_index) {
  Homography h;
  if (!m.is_system())
    h = m.forward(base_index);
  else if (component == 'x')
    h = m.forward_x(base_index);
  else
    h = m.forward_y(base_index);
  PolyQ num, den;
  if (entry.inf) {
    num = -h.D;
    den = h.C;
  } else {
    PolyQ s(std::vector<Rat>{entry.v});
    num = h.D * s - h.B;
    den = h.A - h.C * s;
  }
  if (den.is_zero()) return false;
  RatFunc<Rat> lag(num, den);
  if (!lag.is_constant()) return true;
  Rat c = lag.constant_value();
  for (const auto& sv : m.singular_values(base_index, m.is_system() ? component : 'x'))
    if (!sv.where.inf && sv.where.v == c) return false;
  return true;
}

// Base indices a scan probes: one for autonomous mappings, several for
// nonautonomous ones so index-specific accidents are caught.
inline std::vector<long> scan_bases(const MappingModel& m, const ScanOptions& opts) {
  return m.autonomous() ? std::vector<long>{opts.base_indices.at(0)} : opts.base_indices;
}

// Classify one family of entries, one per scan base. For a nonautonomous
// mapping the singular values move with the index, so every base is seeded
// with its own member of the family; the tag streams must still agree.
// Returns nullopt for interior seeds whose orbit is immediately generic and
// never singular again (no pattern at all).
inline std::optional<PatternClass> classify_family(const MappingModel& m,
                                                   const std::vector<PValue>& entries,
                                                   char component, bool interior_seed,
                                                   const ScanOptions& opts,
                                                   bool primary_forward = true) {
  std::vector<long> bases = scan_bases(m, opts);
  if (entries.size() != bases.size())
    throw std::invalid_argument("classify_family: one entry per scan base required");

  PatternClass pc;
  pc.entry = entries[0];
  pc.entry_component = component;
  pc.base_index = bases[0];

  std::vector<PatternTrace> fwds;
  for (std::size_t i = 0; i < bases.size(); ++i)
    fwds.push_back(trace_pattern(m, entries[i], component, primary_forward, bases[i], opts));
  pc.fwd = fwds[0];
  for (const auto& tr : fwds) {
    if (tr.truncated || tr.failed) {
      pc.type = PatternType::Undetermined;
      return pc;
    }
  }
  for (std::size_t i = 1; i < fwds.size(); ++i) {
    std::size_t common = std::min(fwds[0].steps.size(), fwds[i].steps.size());
    for (std::size_t k = 0; k < common; ++k)
      if (!tag_match(fwds[0].steps[k], fwds[i].steps[k])) {
        pc.type = PatternType::Undetermined;
        return pc;
      }
  }

  const std::vector<ValueTag>& steps = pc.fwd.steps;
  if (steps.size() < 2) {
    pc.type = PatternType::Undetermined;
    return pc;
  }

  if (interior_seed) {
    bool singular_later = false;
    for (std::size_t i = 1; i < steps.size(); ++i)
      singular_later = singular_later || is_singular_tag(steps[i]);
    if (steps[1].kind == TagKind::Generic && !singular_later) return std::nullopt;
  }

  pc.enterable = spontaneously_enterable(m, entries[0], component, bases[0]);

  // Confined: a generic slot is reached and every observed slot after it is
  // regular.
  for (std::size_t g = 1; g < steps.size(); ++g) {
    if (steps[g].kind != TagKind::Generic) continue;
    bool regular_after = true;
    for (std::size_t i = g; i < steps.size(); ++i)
      regular_after = regular_after && !is_singular_tag(steps[i]);
    if (regular_after && steps.size() - g >= 3) {
      pc.type = PatternType::Confined;
      pc.body_len = static_cast<long>(g);
      return pc;
    }
    break;
  }

  auto tagp = scandetail::find_periodicity(steps, tag_match, opts);
  if (tagp) {
    std::vector<ValueTag> block(steps.begin() + tagp->pre, steps.begin() + tagp->pre + tagp->period);
    bool has_generic = false, has_singular = false;
    for (const auto& t : block) {
      has_generic = has_generic || t.kind == TagKind::Generic;
      has_singular = has_singular || is_singular_tag(t);
    }
    if (has_generic) {
      pc.type = PatternType::Cyclic;
      pc.block_start = tagp->pre;
      pc.period = tagp->period;
      // Rotate the cycle so the generic slot leads and, when possible, the
      // seed's own tag follows it.
      long p = tagp->period;
      long pick = -1;
      for (long r = 0; r < p; ++r) {
        if (block[static_cast<std::size_t>(r)].kind != TagKind::Generic) continue;
        if (pick < 0) pick = r;
        if (tag_match(block[static_cast<std::size_t>((r + 1) % p)], steps[0])) {
          pick = r;
          break;
        }
      }
      for (long j = 0; j < p; ++j)
        pc.cycle.push_back(block[static_cast<std::size_t>((pick + j) % p)]);
      return pc;
    }
    if (has_singular) {
      long pre = tagp->pre;
      while (pre < tagp->pre + tagp->period &&
             !is_singular_tag(steps[static_cast<std::size_t>(pre)]))
        ++pre;
      if (pre < tagp->pre + tagp->period) {
        if (pc.enterable) {
          pc.type = PatternType::Unconfined;
          pc.strict_periodic = true;
          pc.block_start = pre;
          pc.period = tagp->period;
          return pc;
        }
        // Not enterable: a persistent singular tail in both directions is
        // an anticonfined pattern; fall through.
      }
    }
  }

  std::vector<TrackFit> tracks;
  bool kind_growing = false;
  std::optional<scandetail::Periodicity> kindp;
  if (!tagp) kindp = scandetail::find_periodicity(steps, tag_kind_match, opts);
  if (kindp) {
    long pre = kindp->pre, p = kindp->period;
    while (pre < kindp->pre + p && !is_singular_tag(steps[static_cast<std::size_t>(pre)])) ++pre;
    for (long j = 0; j < p; ++j) {
      const ValueTag& rep = steps[static_cast<std::size_t>(pre + j)];
      if (!is_singular_tag(rep)) continue;
      TrackFit tf;
      tf.component = rep.component;
      tf.kind = rep.kind;
      tf.position = j;
      for (std::size_t i = static_cast<std::size_t>(pre + j); i < steps.size();
           i += static_cast<std::size_t>(p))
        tf.orders.push_back(steps[i].order);
      bool constant = true;
      for (long o : tf.orders) constant = constant && o == tf.orders[0];
      if (!constant) kind_growing = true;
      tf.rec = fit_order_recurrence(tf.orders);
      tracks.push_back(std::move(tf));
    }
    if (!tracks.empty() && kind_growing && pc.enterable && !entries[0].inf) {
      pc.type = PatternType::Unconfined;
      pc.strict_periodic = false;
      pc.block_start = pre;
      pc.period = p;
      pc.tracks = std::move(tracks);
      return pc;
    }
    pc.tracks = tracks;
  }

  // Anticonfined: singular tags persist on both sides of the seed.
  if (scandetail::singular_persistent(steps)) {
    std::vector<PatternTrace> bwds;
    for (std::size_t i = 0; i < bases.size(); ++i)
      bwds.push_back(trace_pattern(m, entries[i], component, !primary_forward, bases[i], opts));
    bool bad = false;
    for (const auto& tr : bwds) bad = bad || tr.truncated || tr.failed;
    for (std::size_t i = 1; i < bwds.size() && !bad; ++i) {
      std::size_t common = std::min(bwds[0].steps.size(), bwds[i].steps.size());
      for (std::size_t k = 0; k < common; ++k)
        if (!tag_match(bwds[0].steps[k], bwds[i].steps[k])) bad = true;
    }
    if (!bad && scandetail::singular_persistent(bwds[0].steps)) {
      pc.bwd = bwds[0];
      pc.type = PatternType::Anticonfined;
      auto ford = scandetail::dominant_tail_orders(pc.fwd.steps);
      auto bord = scandetail::dominant_tail_orders(bwds[0].steps);
      pc.forward_orders = fit_order_recurrence(ford);
      pc.backward_orders = fit_order_recurrence(bord);
      return pc;
    }
  }

  pc.type = PatternType::Undetermined;
  return pc;
}

// Classify a single entry value, seeding every scan base with it. This is
// exact for autonomous mappings and for values (such as 0 and infinity)
// that stay singular at every index.
inline std::optional<PatternClass> classify_entry(const MappingModel& m, const PValue& entry,
                                                  char component, bool interior_seed,
                                                  const ScanOptions& opts,
                                                  bool primary_forward = true) {
  std::vector<PValue> entries(scan_bases(m, opts).size(), entry);
  return classify_family(m, entries, component, interior_seed, opts, primary_forward);
}

// Degeneracy data for one component: the singular entry values, the step's
// homographic degree and its determinant (used downstream to account for
// entry values that are not rational).
struct ComponentInfo {
  char component = 'x';
  std::vector<SingularValue> values;
  long hom_degree = 0;
  PolyQ det;
};

struct ScanResult {
  std::vector<PatternClass> patterns;
  std::vector<ComponentInfo> info;
  long base_index = 0;
};

// Classify the interior seeds 0 and infinity on each component, skipping
// values already covered, and keep whatever closes into a cycle.
inline std::vector<PatternClass> detect_cyclic(const MappingModel& m, const ScanOptions& opts,
                                               const std::vector<PValue>& skip_x = {},
                                               const std::vector<PValue>& skip_y = {}) {
  std::vector<PatternClass> out;
  std::vector<char> comps = m.is_system() ? std::vector<char>{'x', 'y'} : std::vector<char>{'x'};
  for (char comp : comps) {
    const auto& skip = comp == 'x' ? skip_x : skip_y;
    for (const PValue& seed : {PValue::finite(Rat(0)), PValue::infinity()}) {
      bool covered = false;
      for (const auto& s : skip) covered = covered || s == seed;
      if (covered) continue;
      auto pc = classify_entry(m, seed, comp, true, opts);
      if (pc && pc->type == PatternType::Cyclic) out.push_back(std::move(*pc));
    }
  }
  return out;
}

// Full singularity scan: every degenerate value of every component plus the
// interior seeds 0 and infinity.
inline ScanResult scan_mapping(const MappingModel& m, const ScanOptions& opts = {}) {
  ScanResult res;
  std::vector<long> bases = scan_bases(m, opts);
  res.base_index = bases[0];
  std::vector<char> comps = m.is_system() ? std::vector<char>{'x', 'y'} : std::vector<char>{'x'};
  std::vector<PValue> seen_x, seen_y;
  for (char comp : comps) {
    ComponentInfo ci;
    ci.component = comp;
    Homography h;
    if (!m.is_system())
      h = m.forward(res.base_index);
    else if (comp == 'x')
      h = m.forward_y(res.base_index);
    else
      h = m.forward_x(res.base_index);
    ci.det = h.determinant();
    ci.hom_degree = h.coeff_degree();
    ci.values = m.singular_values(res.base_index, comp);
    res.info.push_back(ci);

    // For a nonautonomous mapping the singular values move with the index;
    // pair them up positionally across the scan bases so every base is
    // seeded with its own member of the family. When the lists do not line
    // up, fall back to replicating the value (a genuine index accident then
    // shows up as an undetermined pattern).
    std::vector<std::vector<SingularValue>> per_base{ci.values};
    bool aligned = true;
    for (std::size_t i = 1; i < bases.size(); ++i) {
      per_base.push_back(m.singular_values(bases[i], comp));
      aligned = aligned && per_base[i].size() == ci.values.size();
    }

    auto& seen = comp == 'x' ? seen_x : seen_y;
    for (std::size_t k = 0; k < ci.values.size(); ++k) {
      seen.push_back(ci.values[k].where);
      std::vector<PValue> entries;
      for (std::size_t i = 0; i < bases.size(); ++i)
        entries.push_back(aligned ? per_base[i][k].where : ci.values[k].where);
      auto pc = classify_family(m, entries, comp, false, opts);
      if (pc) res.patterns.push_back(std::move(*pc));
    }
    for (const PValue& seed : {PValue::finite(Rat(0)), PValue::infinity()}) {
      bool covered = false;
      for (const auto& s : seen) covered = covered || s == seed;
      if (covered) continue;
      auto pc = classify_entry(m, seed, comp, true, opts);
      if (pc) res.patterns.push_back(std::move(*pc));
    }
  }
  return res;
}

// Human-readable pattern rendering, e.g. "{1, inf, a}" or
// "{y=0, x=inf, y=1, x=inf}".
inline std::string pattern_to_string(const PatternClass& pc, bool with_component) {
  auto render = [&](const std::vector<ValueTag>& tags) {
    std::string s = "{";
    for (std::size_t i = 0; i < tags.size(); ++i) {
      if (i) s += ", ";
      s += to_string(tags[i], with_component);
    }
    return s + "}";
  };
  switch (pc.type) {
    case PatternType::Confined:
      return render(pc.body());
    case PatternType::Cyclic:
      return render(pc.cycle);
    case PatternType::Unconfined: {
      std::vector<ValueTag> shown(pc.fwd.steps.begin(),
                                  pc.fwd.steps.begin() + pc.block_start + pc.period);
      std::string s = render(shown);
      s.back() = ',';
      return s + " ...}";
    }
    case PatternType::Anticonfined: {
      std::string s = "{..., ";
      if (pc.bwd) {
        std::vector<ValueTag> rev(pc.bwd->steps.rbegin(), pc.bwd->steps.rend() - 1);
        for (const auto& t : rev) s += to_string(t, with_component) + ", ";
      }
      for (std::size_t i = 0; i < pc.fwd.steps.size(); ++i)
        s += to_string(pc.fwd.steps[i], with_component) + ", ";
      return s + "...}";
    }
    case PatternType::Undetermined:
      return "{undetermined}";
  }
  return "{}";
}

}  // namespace algent

#endif  // ALGENT_SCANNER_HPP
