#include "soergel/laurent.hpp"

#include <cctype>
#include <cstdlib>

namespace soergel {

Laurent Laurent::operator+(const Laurent& o) const {
  Laurent r = *this;
  for (auto& [e, c] : o.c_) {
    long long n = r.coeff(e) + c;
    r.set(e, n);
  }
  return r;
}

Laurent Laurent::operator-() const {
  Laurent r;
  for (auto& [e, c] : c_) r.c_[e] = -c;
  return r;
}

Laurent Laurent::operator-(const Laurent& o) const { return *this + (-o); }

Laurent Laurent::operator*(const Laurent& o) const {
  Laurent r;
  for (auto& [e1, c1] : c_)
    for (auto& [e2, c2] : o.c_) {
      long long n = r.coeff(e1 + e2) + c1 * c2;
      r.set(e1 + e2, n);
    }
  return r;
}

Laurent Laurent::bar() const {
  Laurent r;
  for (auto& [e, c] : c_) r.c_[-e] = c;
  return r;
}

Laurent Laurent::shifted(int k) const {
  Laurent r;
  for (auto& [e, c] : c_) r.c_[e + k] = c;
  return r;
}

long long Laurent::eval_one() const {
  long long s = 0;
  for (auto& [e, c] : c_) s += c;
  return s;
}

bool Laurent::nonneg() const {
  for (auto& [e, c] : c_)
    if (c < 0) return false;
  return true;
}

bool Laurent::positive_exponents_only() const {
  for (auto& [e, c] : c_)
    if (e < 1) return false;
  return true;
}

std::string Laurent::str() const {
  if (c_.empty()) return "0";
  std::string out;
  // descending exponents
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    long long c = it->second;
    int e = it->first;
    std::string term;
    long long ac = c < 0 ? -c : c;
    if (e == 0) term = std::to_string(ac);
    else {
      if (ac != 1) term = std::to_string(ac) + "*";
      term += "v";
      if (e != 1) term += "^" + std::to_string(e);
    }
    if (out.empty()) out = (c < 0 ? "-" : "") + term;
    else out += (c < 0 ? "-" : "+") + term;
  }
  return out;
}

Laurent Laurent::parse(const std::string& s) {
  Laurent r;
  size_t i = 0;
  auto skip_ws = [&] { while (i < s.size() && s[i] == ' ') ++i; };
  skip_ws();
  if (s == "0") return r;
  while (i < s.size()) {
    long long sign = 1;
    skip_ws();
    if (s[i] == '+') { ++i; } else if (s[i] == '-') { sign = -1; ++i; }
    skip_ws();
    long long c = 1;
    bool have_num = false;
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      c = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) c = c * 10 + (s[i++] - '0');
      have_num = true;
    }
    if (i < s.size() && s[i] == '*') ++i;
    int e = 0;
    if (i < s.size() && s[i] == 'v') {
      ++i;
      e = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        int esign = 1;
        if (i < s.size() && s[i] == '-') { esign = -1; ++i; }
        int ev = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ev = ev * 10 + (s[i++] - '0');
        e = esign * ev;
      }
    } else if (!have_num) {
      throw ConfigError("cannot parse Laurent term in '" + s + "'");
    }
    r.set(e, r.coeff(e) + sign * c);
    skip_ws();
  }
  return r;
}

} // namespace soergel
