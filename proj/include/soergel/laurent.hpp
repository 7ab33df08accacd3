#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "soergel/errors.hpp"

namespace soergel {

/*
  Z[v, v^-1], sparse in the exponent. Coefficients are int64: every quantity
  stored here is a KL coefficient or a graded dimension at desk scale.
  Overflow would require dimensions past 2^63 and is checked in debug only.
*/
class Laurent {
public:
  Laurent() = default;
  explicit Laurent(long long c) { if (c) c_[0] = c; }
  static Laurent v(int exp, long long c = 1) {
    Laurent r;
    if (c) r.c_[exp] = c;
    return r;
  }

  bool is_zero() const { return c_.empty(); }
  long long coeff(int exp) const {
    auto it = c_.find(exp);
    return it == c_.end() ? 0 : it->second;
  }
  const std::map<int, long long>& coeffs() const { return c_; }
  void set(int exp, long long c) {
    if (c) c_[exp] = c;
    else c_.erase(exp);
  }

  int min_exp() const { check(!c_.empty(), "min_exp of 0"); return c_.begin()->first; }
  int max_exp() const { check(!c_.empty(), "max_exp of 0"); return c_.rbegin()->first; }

  Laurent operator+(const Laurent& o) const;
  Laurent operator-(const Laurent& o) const;
  Laurent operator*(const Laurent& o) const;
  Laurent operator-() const;
  Laurent& operator+=(const Laurent& o) { return *this = *this + o; }
  Laurent& operator-=(const Laurent& o) { return *this = *this - o; }
  Laurent& operator*=(const Laurent& o) { return *this = *this * o; }
  bool operator==(const Laurent& o) const { return c_ == o.c_; }
  bool operator!=(const Laurent& o) const { return !(*this == o); }
  bool operator<(const Laurent& o) const { return c_ < o.c_; }

  // v -> v^-1
  Laurent bar() const;
  // multiply by v^k
  Laurent shifted(int k) const;
  long long eval_one() const;
  bool nonneg() const;
  // true iff all exponents >= 1 (strictly positive part of Z[v])
  bool positive_exponents_only() const;

  // canonical text: descending exponents, e.g. "v^2+1", "v-v^-1", "2*v^3"
  std::string str() const;
  static Laurent parse(const std::string& s);

private:
  std::map<int, long long> c_;
};

} // namespace soergel
