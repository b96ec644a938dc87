#ifndef ALGENT_INT_POLY_HPP
#define ALGENT_INT_POLY_HPP

#include <algorithm>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "algent/rational.hpp"

namespace algent {

// Dense univariate polynomial over Int. Coefficient vector has no trailing
// zeros; the zero polynomial is the empty vector. Degree of zero is -1.
class PolyZ {
 public:
  PolyZ() = default;
  explicit PolyZ(Int constant) {
    if (constant != 0) c_.push_back(std::move(constant));
  }
  explicit PolyZ(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }

  static PolyZ monomial(Int coeff, std::size_t degree) {
    if (coeff == 0) return PolyZ();
    std::vector<Int> v(degree + 1);
    v[degree] = std::move(coeff);
    return PolyZ(std::move(v));
  }

  bool is_zero() const { return c_.empty(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<Int>& coeffs() const { return c_; }
  const Int& operator[](std::size_t i) const { return c_[i]; }
  const Int& leading() const { return c_.back(); }

  bool operator==(const PolyZ& o) const { return c_ == o.c_; }
  bool operator!=(const PolyZ& o) const { return !(*this == o); }

  PolyZ operator-() const {
    PolyZ r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend PolyZ operator+(const PolyZ& a, const PolyZ& b) {
    std::vector<Int> v(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i < a.c_.size()) v[i] += a.c_[i];
      if (i < b.c_.size()) v[i] += b.c_[i];
    }
    return PolyZ(std::move(v));
  }

  friend PolyZ operator-(const PolyZ& a, const PolyZ& b) { return a + (-b); }

  friend PolyZ operator*(const PolyZ& a, const PolyZ& b) {
    if (a.is_zero() || b.is_zero()) return PolyZ();
    return PolyZ(mul_dispatch(a.c_, b.c_));
  }

  PolyZ& operator+=(const PolyZ& o) { return *this = *this + o; }
  PolyZ& operator-=(const PolyZ& o) { return *this = *this - o; }
  PolyZ& operator*=(const PolyZ& o) { return *this = *this * o; }

  friend PolyZ operator*(const PolyZ& a, const Int& k) {
    if (k == 0) return PolyZ();
    PolyZ r = a;
    for (auto& x : r.c_) x *= k;
    return r;
  }

  // x^k * a
  PolyZ shifted(std::size_t k) const {
    if (is_zero()) return PolyZ();
    std::vector<Int> v(c_.size() + k);
    for (std::size_t i = 0; i < c_.size(); ++i) v[i + k] = c_[i];
    return PolyZ(std::move(v));
  }

  PolyZ derivative() const {
    if (c_.size() <= 1) return PolyZ();
    std::vector<Int> v(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * Int(static_cast<long>(i));
    return PolyZ(std::move(v));
  }

  Int content() const {
    Int g(0);
    for (const auto& x : c_) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
      if (g == 1) break;
    }
    return g;
  }

  // Content-free part with positive leading coefficient; zero stays zero.
  PolyZ primitive() const {
    if (is_zero()) return PolyZ();
    Int g = content();
    if (leading() < 0) g = -g;
    PolyZ r;
    r.c_.resize(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i)
      mpz_divexact(r.c_[i].get_mpz_t(), c_[i].get_mpz_t(), g.get_mpz_t());
    return r;
  }

  Rat eval(const Rat& x) const {
    Rat acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + Rat(c_[i]);
    return acc;
  }

  Int eval_int(const Int& x) const {
    Int acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  // Exact division; returns false if the division has a remainder or a
  // non-integer quotient coefficient appears.
  static bool div_exact(const PolyZ& a, const PolyZ& d, PolyZ* quotient) {
    if (d.is_zero()) return false;
    if (a.is_zero()) {
      if (quotient) *quotient = PolyZ();
      return true;
    }
    if (a.degree() < d.degree()) return false;
    std::vector<Int> rem = a.c_;
    std::vector<Int> q(a.degree() - d.degree() + 1);
    const Int& dl = d.leading();
    for (long k = a.degree() - d.degree(); k >= 0; --k) {
      Int& top = rem[k + d.degree()];
      if (top == 0) {
        q[k] = 0;
        continue;
      }
      if (!mpz_divisible_p(top.get_mpz_t(), dl.get_mpz_t())) return false;
      Int f;
      mpz_divexact(f.get_mpz_t(), top.get_mpz_t(), dl.get_mpz_t());
      for (long i = 0; i <= d.degree(); ++i) rem[k + i] -= f * d.c_[i];
      q[k] = std::move(f);
    }
    for (const auto& r : rem)
      if (r != 0) return false;
    if (quotient) *quotient = PolyZ(std::move(q));
    return true;
  }

  std::string to_string(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0) continue;
      bool neg = c_[i] < 0;
      Int mag = neg ? Int(-c_[i]) : c_[i];
      if (out.empty())
        out += neg ? "-" : "";
      else
        out += neg ? " - " : " + ";
      bool unit = mag == 1 && i > 0;
      if (!unit) out += mag.get_str();
      if (i > 0) {
        if (!unit) out += "*";
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out;
  }

 private:
  std::vector<Int> c_;

  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  static std::vector<Int> mul_school(const std::vector<Int>& a, const std::vector<Int>& b) {
    std::vector<Int> v(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (b[j] == 0) continue;
        v[i + j] += a[i] * b[j];
      }
    }
    return v;
  }

  static constexpr std::size_t kKroneckerThreshold = 40;

  // Evaluate the slice v[lo..hi) at 2^slot by balanced splitting, so the
  // shifts stay large and GMP does the heavy lifting.
  static Int pack_slots(const std::vector<Int>& v, std::size_t lo, std::size_t hi,
                        mp_bitcnt_t slot) {
    if (hi - lo == 1) return v[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    Int low = pack_slots(v, lo, mid, slot);
    Int high = pack_slots(v, mid, hi, slot);
    mpz_mul_2exp(high.get_mpz_t(), high.get_mpz_t(), slot * (mid - lo));
    return low + high;
  }

  // Split a nonnegative packed integer into hi - lo raw digits of slot bits.
  static void unpack_slots(const Int& packed, std::size_t lo, std::size_t hi,
                           mp_bitcnt_t slot, std::vector<Int>& out) {
    if (hi - lo == 1) {
      out[lo] = packed;
      return;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    Int low, high;
    mpz_fdiv_r_2exp(low.get_mpz_t(), packed.get_mpz_t(), slot * (mid - lo));
    mpz_fdiv_q_2exp(high.get_mpz_t(), packed.get_mpz_t(), slot * (mid - lo));
    unpack_slots(low, lo, mid, slot, out);
    unpack_slots(high, mid, hi, slot, out);
  }

  // Kronecker substitution: pack each factor into a single integer at
  // x = 2^slot, multiply once with GMP, then recover the signed coefficients
  // from the balanced digit expansion of the product.
  static std::vector<Int> mul_kronecker(const std::vector<Int>& a, const std::vector<Int>& b) {
    auto height = [](const std::vector<Int>& v) {
      std::size_t bits = 1;
      for (const Int& c : v)
        if (mpz_sgn(c.get_mpz_t()) != 0)
          bits = std::max(bits, mpz_sizeinbase(c.get_mpz_t(), 2));
      return bits;
    };
    std::size_t cross = 1;
    while ((std::size_t{1} << cross) < std::min(a.size(), b.size())) ++cross;
    mp_bitcnt_t slot = static_cast<mp_bitcnt_t>(height(a) + height(b) + cross + 2);
    Int prod = pack_slots(a, 0, a.size(), slot) * pack_slots(b, 0, b.size(), slot);
    bool neg = mpz_sgn(prod.get_mpz_t()) < 0;
    if (neg) prod = -prod;
    std::size_t n = a.size() + b.size() - 1;
    std::vector<Int> out(n);
    unpack_slots(prod, 0, n, slot, out);
    Int half = Int(1) << (slot - 1);
    Int full = Int(1) << slot;
    Int carry(0);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] += carry;
      if (out[i] >= half) {
        out[i] -= full;
        carry = 1;
      } else {
        carry = 0;
      }
    }
    if (carry != 0) throw std::logic_error("mul_kronecker: digit recovery overflow");
    if (neg)
      for (Int& c : out) c = -c;
    return out;
  }

  static std::vector<Int> mul_dispatch(const std::vector<Int>& a, const std::vector<Int>& b) {
    if (std::min(a.size(), b.size()) < kKroneckerThreshold) return mul_school(a, b);
    return mul_kronecker(a, b);
  }
};

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, p);
    a = mulmod_u64(a, a, p);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t p) {
  return powmod_u64(a % p, p - 2, p);
}

// Montgomery arithmetic modulo an odd prime p < 2^63 with R = 2^64. A value
// in Montgomery form stands for x * R mod p; redc folds the division by R
// into the multiply, replacing the hardware 128-bit remainder with two
// 64-bit multiplies. That matters in the dense F_p loops below, which spend
// nearly all their time in modular multiplication.
struct MontCtx {
  std::uint64_t p;
  std::uint64_t pinv;  // -p^{-1} mod 2^64
  std::uint64_t one;   // R mod p

  explicit MontCtx(std::uint64_t prime) : p(prime) {
    std::uint64_t inv = prime;  // correct mod 2^3 because prime is odd
    for (int i = 0; i < 5; ++i) inv *= 2 - prime * inv;
    pinv = ~inv + 1;
    one = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(1) << 64) % prime);
  }

  std::uint64_t redc(unsigned __int128 t) const {
    std::uint64_t m = static_cast<std::uint64_t>(t) * pinv;
    std::uint64_t v = static_cast<std::uint64_t>(
        (t + static_cast<unsigned __int128>(m) * p) >> 64);
    return v >= p ? v - p : v;
  }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return redc(static_cast<unsigned __int128>(a) * b);
  }

  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = one;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  std::uint64_t inv(std::uint64_t a) const { return pow(a, p - 2); }

  // Montgomery form -> plain residue.
  std::uint64_t from(std::uint64_t a) const { return redc(a); }
};

// Monic gcd of dense polynomials over F_p. Vectors trimmed, empty = zero.
// The loop runs in the Montgomery domain: reading raw residues as Montgomery
// values only rescales both inputs by the same unit, which gcd ignores, so
// no entry conversion is needed and just the monic result is mapped back.
inline std::vector<std::uint64_t> fp_gcd(std::vector<std::uint64_t> a,
                                         std::vector<std::uint64_t> b,
                                         std::uint64_t p) {
  MontCtx mc(p);
  auto trim = [](std::vector<std::uint64_t>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a mod b in place
    std::uint64_t inv_lb = mc.inv(b.back());
    while (a.size() >= b.size() && !a.empty()) {
      std::uint64_t f = mc.mul(a.back(), inv_lb);
      std::size_t off = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) {
        std::uint64_t t = mc.mul(f, b[i]);
        std::uint64_t& c = a[off + i];
        c = (c >= t) ? c - t : c + p - t;
      }
      trim(a);
    }
    std::swap(a, b);
  }
  if (!a.empty()) {
    std::uint64_t inv = mc.inv(a.back());
    for (auto& c : a) c = mc.from(mc.mul(c, inv));
  }
  return a;
}

// Growable pool of 62-bit primes shared by all modular routines. Index i
// always returns the same prime; the pool extends itself on demand.
inline std::uint64_t gcd_prime(std::size_t index) {
  static std::mutex mu;
  static std::vector<std::uint64_t> primes;
  static Int cursor = Int(1) << 62;
  std::lock_guard<std::mutex> lock(mu);
  while (primes.size() <= index) {
    mpz_nextprime(cursor.get_mpz_t(), cursor.get_mpz_t());
    primes.push_back(static_cast<std::uint64_t>(mpz_getlimbn(cursor.get_mpz_t(), 0)));
  }
  return primes[index];
}

// Quotient of a by d over F_p, computed in place; *exact reports whether the
// remainder vanished. Vectors trimmed, empty = zero. As in fp_gcd the loop
// reads raw residues as Montgomery values; the common rescale cancels in the
// quotient, which is converted back on exit.
inline std::vector<std::uint64_t> fp_div(std::vector<std::uint64_t> a,
                                         const std::vector<std::uint64_t>& d,
                                         std::uint64_t p, bool* exact) {
  MontCtx mc(p);
  auto trim = [](std::vector<std::uint64_t>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  trim(a);
  if (a.size() < d.size()) {
    if (exact) *exact = a.empty();
    return {};
  }
  std::vector<std::uint64_t> q(a.size() - d.size() + 1, 0);
  std::uint64_t inv_ld = mc.inv(d.back());
  while (a.size() >= d.size() && !a.empty()) {
    std::uint64_t f = mc.mul(a.back(), inv_ld);
    std::size_t off = a.size() - d.size();
    q[off] = f;
    for (std::size_t i = 0; i < d.size(); ++i) {
      std::uint64_t t = mc.mul(f, d[i]);
      std::uint64_t& c = a[off + i];
      c = (c >= t) ? c - t : c + p - t;
    }
    trim(a);
  }
  if (exact) *exact = a.empty();
  for (auto& c : q) c = mc.from(c);
  return q;
}

// Fixed set of primes with product and remainder trees, for reducing many
// big integers to residues and assembling them back by CRT. The pairwise
// inverses used in reconstruction are precomputed once.
class PrimeBasis {
 public:
  PrimeBasis(std::size_t count, const Int& avoid) {
    std::vector<Int> leaves;
    for (std::size_t i = 0; leaves.size() < count; ++i) {
      std::uint64_t q = gcd_prime(i);
      Int p(static_cast<unsigned long>(q));
      if (avoid != 0 && mpz_divisible_p(avoid.get_mpz_t(), p.get_mpz_t())) continue;
      primes_.push_back(q);
      leaves.push_back(std::move(p));
    }
    tree_.push_back(std::move(leaves));
    while (tree_.back().size() > 1) {
      const std::vector<Int>& prev = tree_.back();
      std::vector<Int> next;
      std::vector<Int> invs;
      for (std::size_t i = 0; i + 1 < prev.size(); i += 2) {
        next.push_back(prev[i] * prev[i + 1]);
        Int inv;
        mpz_invert(inv.get_mpz_t(), prev[i].get_mpz_t(), prev[i + 1].get_mpz_t());
        invs.push_back(std::move(inv));
      }
      if (prev.size() % 2 == 1) next.push_back(prev.back());
      inv_.push_back(std::move(invs));
      tree_.push_back(std::move(next));
    }
  }

  std::size_t size() const { return primes_.size(); }
  std::uint64_t prime(std::size_t i) const { return primes_[i]; }
  const Int& modulus() const { return tree_.back().front(); }

  // Residues of c modulo every prime, via remainder-tree descent.
  void reduce(const Int& c, std::vector<std::uint64_t>& out) const {
    out.assign(primes_.size(), 0);
    descend(c, tree_.size() - 1, 0, out);
  }

  // Symmetric-range CRT lift of one residue per prime.
  Int crt_symmetric(const std::vector<std::uint64_t>& residues) const {
    std::vector<Int> vals(residues.size());
    for (std::size_t i = 0; i < residues.size(); ++i)
      vals[i] = Int(static_cast<unsigned long>(residues[i]));
    for (std::size_t level = 0; level + 1 < tree_.size(); ++level) {
      const std::vector<Int>& mods = tree_[level];
      std::vector<Int> next;
      for (std::size_t i = 0; i + 1 < mods.size(); i += 2) {
        Int t = (vals[i + 1] - vals[i]) * inv_[level][i / 2];
        mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), mods[i + 1].get_mpz_t());
        next.push_back(vals[i] + mods[i] * t);
      }
      if (mods.size() % 2 == 1) next.push_back(vals.back());
      vals = std::move(next);
    }
    Int v = std::move(vals.front());
    if (v * 2 > modulus()) v -= modulus();
    return v;
  }

 private:
  void descend(const Int& c, std::size_t level, std::size_t idx,
               std::vector<std::uint64_t>& out) const {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), tree_[level][idx].get_mpz_t());
    if (level == 0) {
      out[idx] = r.get_ui();
      return;
    }
    descend(r, level - 1, 2 * idx, out);
    if (2 * idx + 1 < tree_[level - 1].size()) descend(r, level - 1, 2 * idx + 1, out);
  }

  std::vector<std::uint64_t> primes_;
  std::vector<std::vector<Int>> tree_;  // tree_[0] = leaf primes
  std::vector<std::vector<Int>> inv_;   // inv_[k][i/2] = tree_[k][i]^-1 mod tree_[k][i+1]
};

inline std::vector<std::uint64_t> mod_image(const PolyZ& f, std::uint64_t p) {
  std::vector<std::uint64_t> v(f.coeffs().size());
  Int pz(static_cast<unsigned long>(p));
  for (std::size_t i = 0; i < v.size(); ++i) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), f.coeffs()[i].get_mpz_t(), pz.get_mpz_t());
    v[i] = r.get_ui();
  }
  while (!v.empty() && v.back() == 0) v.pop_back();
  return v;
}

}  // namespace detail

// Exact division test over Z: returns a/d when d divides a, std::nullopt
// otherwise. Small operands go through schoolbook trial division. Large ones
// are divided modulo a batch of primes, assembled by CRT, and certified with
// one full multiplication. The batch is first sized by the typical quotient
// height (dividend height minus divisor height, padded); only if that
// certification fails does a second pass run with the a-priori Mignotte-type
// bound, which is often several times larger than the quotient needs.
inline std::optional<PolyZ> poly_div_checked(const PolyZ& a, const PolyZ& d) {
  if (d.is_zero()) throw std::invalid_argument("poly_div_checked: division by zero");
  if (a.is_zero()) return PolyZ();
  if (a.degree() < d.degree()) return std::nullopt;
  auto height_bits = [](const PolyZ& f) {
    std::size_t bits = 1;
    for (const Int& c : f.coeffs())
      if (mpz_sgn(c.get_mpz_t()) != 0)
        bits = std::max(bits, mpz_sizeinbase(c.get_mpz_t(), 2));
    return bits;
  };
  std::size_t abits = height_bits(a);
  std::size_t qdeg = static_cast<std::size_t>(a.degree() - d.degree());
  if (d.degree() == 0 || qdeg <= 96 || abits <= 1024) {
    PolyZ q;
    if (PolyZ::div_exact(a, d, &q)) return q;
    return std::nullopt;
  }

  enum class Trial { divides, rejects, undecided };
  std::optional<PolyZ> found;
  auto attempt = [&](std::size_t nprimes) -> Trial {
    detail::PrimeBasis basis(nprimes, d.leading());
    std::vector<std::vector<std::uint64_t>> ares(a.coeffs().size());
    std::vector<std::vector<std::uint64_t>> dres(d.coeffs().size());
    for (std::size_t i = 0; i < ares.size(); ++i) basis.reduce(a.coeffs()[i], ares[i]);
    for (std::size_t i = 0; i < dres.size(); ++i) basis.reduce(d.coeffs()[i], dres[i]);
    std::vector<std::vector<std::uint64_t>> qres(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
      std::uint64_t p = basis.prime(k);
      std::vector<std::uint64_t> ap(ares.size()), dp(dres.size());
      for (std::size_t i = 0; i < ap.size(); ++i) ap[i] = ares[i][k];
      for (std::size_t i = 0; i < dp.size(); ++i) dp[i] = dres[i][k];
      bool exact = false;
      std::vector<std::uint64_t> qp = detail::fp_div(std::move(ap), dp, p, &exact);
      // d does not divide a over Z if any modular remainder survives:
      // exactness over Z forces the remainder to vanish mod every prime
      // coprime to lc(d), no matter how few primes are in the batch.
      if (!exact) return Trial::rejects;
      qp.resize(qdeg + 1, 0);
      qres[k] = std::move(qp);
    }
    std::vector<Int> qc(qdeg + 1);
    std::vector<std::uint64_t> column(basis.size());
    for (std::size_t i = 0; i <= qdeg; ++i) {
      for (std::size_t k = 0; k < basis.size(); ++k) column[k] = qres[k][i];
      qc[i] = basis.crt_symmetric(column);
    }
    PolyZ q(std::move(qc));
    if (q * d == a) {
      found = std::move(q);
      return Trial::divides;
    }
    return Trial::undecided;
  };

  // If q = a/d over Z, every coefficient of q is bounded by the Mignotte-type
  // divisor bound 2^(deg q) * (deg q + 1) * height(a) / |lc(d)|, so
  // bits(q) <= abits + qdeg + 16 with room to spare.
  std::size_t full_primes = (abits + qdeg + 16) / 61 + 2;
  std::size_t dbits = height_bits(d);
  std::size_t hint_bits = (abits > dbits ? abits - dbits : 1) + abits / 16 + 1024;
  std::size_t hint_primes = std::min(hint_bits / 61 + 4, full_primes);
  Trial t = attempt(hint_primes);
  if (t == Trial::undecided && hint_primes < full_primes) t = attempt(full_primes);
  if (t == Trial::divides) return found;
  if (t == Trial::rejects) return std::nullopt;
  // Certification failed; settle the question by exact trial division.
  PolyZ qs;
  if (PolyZ::div_exact(a, d, &qs)) return qs;
  return std::nullopt;
}

// gcd over Z via modular images (Brown's algorithm): monic gcds mod 62-bit
// primes, leading coefficient corrected, combined by CRT with symmetric lift,
// stabilization detected, final result verified by exact division.
// Result is primitive with positive leading coefficient, scaled by the gcd of
// the contents.
inline PolyZ poly_gcd(const PolyZ& a, const PolyZ& b) {
  auto norm = [](const PolyZ& f) { return f.leading() < 0 ? -f : f; };
  if (a.is_zero()) return b.is_zero() ? PolyZ() : norm(b);
  if (b.is_zero()) return norm(a);
  Int ca = a.content(), cb = b.content();
  Int cg;
  mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  PolyZ fa = a.primitive(), fb = b.primitive();
  if (fa.degree() < fb.degree()) std::swap(fa, fb);
  if (fb.degree() == 0) return PolyZ(cg);  // primitive constant is 1

  Int lg;
  mpz_gcd(lg.get_mpz_t(), fa.leading().get_mpz_t(), fb.leading().get_mpz_t());

  long best_deg = -2;  // degree of current modular candidate
  std::vector<Int> crt;  // symmetric-lifted candidate coefficients
  Int modulus(1);
  std::vector<Int> prev_lift;

  for (std::size_t pi = 0;; ++pi) {
    if (pi >= (std::size_t{1} << 20))
      throw std::runtime_error("poly_gcd: modular gcd failed to stabilize");
    std::uint64_t p = detail::gcd_prime(pi);
    Int pz(static_cast<unsigned long>(p));
    if (mpz_divisible_p(fa.leading().get_mpz_t(), pz.get_mpz_t()) ||
        mpz_divisible_p(fb.leading().get_mpz_t(), pz.get_mpz_t()))
      continue;
    auto ga = detail::mod_image(fa, p);
    auto gb = detail::mod_image(fb, p);
    auto gp = detail::fp_gcd(ga, gb, p);
    long e = static_cast<long>(gp.size()) - 1;
    if (e == 0) return PolyZ(cg);  // coprime certificate
    // scale monic image so its leading coefficient is lg mod p
    Int lgr;
    mpz_fdiv_r(lgr.get_mpz_t(), lg.get_mpz_t(), pz.get_mpz_t());
    std::uint64_t scale = lgr.get_ui() % p;
    for (auto& c : gp) c = detail::mulmod_u64(c, scale, p);

    if (best_deg < 0 || e < best_deg) {
      best_deg = e;
      crt.assign(gp.size(), Int(0));
      for (std::size_t i = 0; i < gp.size(); ++i) crt[i] = Int(static_cast<unsigned long>(gp[i]));
      modulus = pz;
      prev_lift.clear();
    } else if (e > best_deg) {
      continue;  // unlucky prime
    } else {
      // CRT combine coefficientwise
      Int mr;
      mpz_fdiv_r(mr.get_mpz_t(), modulus.get_mpz_t(), pz.get_mpz_t());
      Int inv(static_cast<unsigned long>(detail::invmod_u64(mr.get_ui(), p)));
      for (std::size_t i = 0; i < crt.size(); ++i) {
        Int cur;
        mpz_fdiv_r(cur.get_mpz_t(), crt[i].get_mpz_t(), pz.get_mpz_t());
        Int target(static_cast<unsigned long>(gp[i]));
        Int delta = target - cur;
        Int t;
        mpz_fdiv_r(t.get_mpz_t(), Int(delta * inv).get_mpz_t(), pz.get_mpz_t());
        crt[i] += modulus * t;
      }
      modulus *= pz;
    }
    // symmetric lift
    std::vector<Int> lift(crt.size());
    Int half = modulus / 2;
    for (std::size_t i = 0; i < crt.size(); ++i) {
      Int v;
      mpz_fdiv_r(v.get_mpz_t(), crt[i].get_mpz_t(), modulus.get_mpz_t());
      if (v > half) v -= modulus;
      lift[i] = v;
    }
    if (lift == prev_lift) {
      PolyZ cand = PolyZ(std::vector<Int>(lift)).primitive();
      if (!cand.is_zero() && poly_div_checked(fa, cand) && poly_div_checked(fb, cand))
        return cand * cg;
    }
    prev_lift = std::move(lift);
  }
}

}  // namespace algent

#endif  // ALGENT_INT_POLY_HPP
