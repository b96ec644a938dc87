#ifndef ALGENT_RATIONAL_HPP
#define ALGENT_RATIONAL_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace algent {

// Arbitrary precision integers and rationals. Rat is always kept in
// canonical form: gcd(num, den) = 1 and den >= 1 (mpq_class canonical form).
using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::domain_error("make_rat: zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat rat_of(long n) { return Rat(n); }

inline const Int& num(const Rat& r) { return r.get_num(); }
inline const Int& den(const Rat& r) { return r.get_den(); }

inline bool is_integer(const Rat& r) { return den(r) == 1; }

inline Int int_pow(Int base, unsigned long e) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

// r^e for integer e (negative exponents require r != 0).
inline Rat rat_pow(const Rat& r, long e) {
  if (e == 0) return Rat(1);
  bool inv = e < 0;
  unsigned long a = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  if (inv && r == 0) throw std::domain_error("rat_pow: 0 to negative power");
  Rat p = r;
  Rat acc(1);
  while (a) {
    if (a & 1) acc *= p;
    p *= p;
    a >>= 1;
  }
  if (inv) return Rat(1) / acc;
  return acc;
}

// Parse "p", "-p", or "p/q". Returns nullopt on malformed input.
inline std::optional<Rat> parse_rat(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      Int n(text);
      return Rat(n);
    }
    std::string ns = text.substr(0, slash), ds = text.substr(slash + 1);
    if (ns.empty() || ds.empty()) return std::nullopt;
    Int n(ns), d(ds);
    if (d == 0) return std::nullopt;
    return make_rat(n, d);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

inline std::string to_string(const Rat& r) {
  if (is_integer(r)) return num(r).get_str();
  return num(r).get_str() + "/" + den(r).get_str();
}

// Deterministic fixed-point rendering with `digits` fractional digits,
// rounding half away from zero. Used for report decimals so identical
// inputs give byte-identical output.
inline std::string decimal_string(const Rat& r, int digits) {
  Int scale = int_pow(Int(10), static_cast<unsigned long>(digits));
  Rat scaled = r * Rat(scale);
  Int twice_num = num(scaled) * 2;
  Int q, rem;
  // round(x) = floor(x + 1/2) for x >= 0, mirrored for x < 0
  Int two_den = den(scaled) * 2;
  Int adj = twice_num;
  if (twice_num >= 0)
    adj += den(scaled);
  else
    adj -= den(scaled);
  mpz_tdiv_q(q.get_mpz_t(), adj.get_mpz_t(), two_den.get_mpz_t());
  bool neg = q < 0;
  Int mag = neg ? Int(-q) : q;
  std::string ds = mag.get_str();
  if (digits > 0) {
    if (static_cast<int>(ds.size()) <= digits) ds.insert(0, digits + 1 - ds.size(), '0');
    ds.insert(ds.size() - digits, ".");
  }
  return (neg ? "-" : "") + ds;
}

inline double to_double(const Rat& r) { return r.get_d(); }

// 64-bit splitmix, used to derive per-purpose substreams from the user seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  return splitmix64(s);
}

inline std::uint64_t hash_string(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace algent

#endif  // ALGENT_RATIONAL_HPP
