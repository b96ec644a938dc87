#ifndef ALGENT_PARAM_ENV_HPP
#define ALGENT_PARAM_ENV_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "algent/expr.hpp"
#include "algent/rational.hpp"

namespace algent {

// Deterministic sampled realization of a mapping's free data: parameter
// values, n-indexed sequence values, and generic initial points. Everything
// is a pure function of (seed, name, index), so instances are immutable and
// safe to share across threads.
class ParamEnv {
 public:
  ParamEnv(const MappingSource& src, std::uint64_t seed) : seed_(seed) {
    for (int attempt = 0;; ++attempt) {
      params_.clear();
      std::uint64_t salt = seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(attempt));
      for (const auto& p : src.params)
        params_[p.name] = p.value ? *p.value : sample_rat(salt, "param:" + p.name, 0);
      if (exclusions_hold(src)) break;
      if (attempt >= 99)
        throw std::runtime_error("ParamEnv: could not satisfy exclusions after 100 samples");
    }
    for (const auto& s : src.seqs) seq_names_.insert(s);
  }

  std::uint64_t seed() const { return seed_; }

  Rat param(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) throw std::domain_error("ParamEnv: unknown parameter " + name);
    return it->second;
  }

  Rat seq(const std::string& name, long n) const {
    if (seq_names_.find(name) == seq_names_.end())
      throw std::domain_error("ParamEnv: unknown sequence " + name);
    return sample_rat(seed_, "seq:" + name, n);
  }

  // Generic initial point for degree iteration; trial selects the stream.
  Rat initial_point(int trial) const { return sample_rat(seed_, "initial", trial); }

  bool has_param(const std::string& name) const { return params_.find(name) != params_.end(); }

 private:
  std::uint64_t seed_;
  std::map<std::string, Rat> params_;
  std::set<std::string> seq_names_;

  // Signed rational with numerator magnitude in [7, 97] and denominator in
  // [3, 97]. Small heights keep iterated coefficient growth manageable while
  // the offsets avoid the degenerate values 0, +-1, +-2 that many mappings
  // treat specially.
  static Rat sample_rat(std::uint64_t seed, const std::string& tag, long index) {
    std::uint64_t h = seed;
    h = hash_combine(h, hash_string(tag));
    h = hash_combine(h, static_cast<std::uint64_t>(index) * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
    std::uint64_t r1 = splitmix64(h);
    std::uint64_t r2 = splitmix64(r1);
    std::uint64_t r3 = splitmix64(r2);
    long num = static_cast<long>(7 + r1 % (97 - 7 + 1));
    long den = static_cast<long>(3 + r2 % (97 - 3 + 1));
    if (r3 & 1) num = -num;
    return make_rat(Int(num), Int(den));
  }

  bool exclusions_hold(const MappingSource& src) const {
    auto pf = [this](const std::string& n) { return param(n); };
    auto sf = [](const std::string&, long) -> Rat {
      throw std::domain_error("sequences cannot appear in exclusions");
    };
    for (const auto& ex : src.excludes) {
      std::map<std::string, long> quant;
      if (!exclusion_holds_rec(ex, 0, quant, pf, sf)) return false;
    }
    return true;
  }

  static bool exclusion_holds_rec(const ExcludeDecl& ex, std::size_t qi,
                                  std::map<std::string, long>& quant,
                                  const std::function<Rat(const std::string&)>& pf,
                                  const std::function<Rat(const std::string&, long)>& sf) {
    if (qi == ex.quantifiers.size()) {
      try {
        return eval_rat(*ex.lhs, pf, sf, 0, &quant) != eval_rat(*ex.rhs, pf, sf, 0, &quant);
      } catch (const std::domain_error&) {
        return false;  // division by zero counts as a degenerate sample
      }
    }
    for (long k = 1; k <= ex.bound; ++k) {
      quant[ex.quantifiers[qi]] = k;
      if (!exclusion_holds_rec(ex, qi + 1, quant, pf, sf)) return false;
    }
    return true;
  }
};

}  // namespace algent

#endif  // ALGENT_PARAM_ENV_HPP
