#include "soergel/poly.hpp"

#include <algorithm>

namespace soergel {

Poly Poly::constant(const Field& f, int rank, const Scalar& c) {
  Poly p(f, rank);
  if (!c.is_zero()) p.t_[Monomial(rank, 0)] = c;
  return p;
}

Poly Poly::variable(const Field& f, int rank, int j) {
  check(j >= 0 && j < rank, "variable index out of range");
  Poly p(f, rank);
  Monomial m(rank, 0);
  m[j] = 1;
  p.t_[m] = Scalar(f, 1);
  return p;
}

Scalar Poly::coeff(const Monomial& m) const {
  auto it = t_.find(m);
  return it == t_.end() ? Scalar(f_) : it->second;
}

Scalar Poly::constant_term() const { return coeff(Monomial(rank_, 0)); }

void Poly::set(const Monomial& m, const Scalar& c) {
  check(static_cast<int>(m.size()) == rank_, "monomial rank mismatch");
  if (c.is_zero()) t_.erase(m);
  else t_[m] = c;
}

Poly Poly::operator+(const Poly& o) const {
  check(rank_ == o.rank_, "rank mismatch in +");
  Poly r = *this;
  for (auto& [m, c] : o.t_) {
    Scalar n = r.coeff(m) + c;
    r.set(m, n);
  }
  return r;
}

Poly Poly::operator-() const {
  Poly r(f_, rank_);
  for (auto& [m, c] : t_) r.t_[m] = -c;
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  check(rank_ == o.rank_, "rank mismatch in *");
  Poly r(f_, rank_);
  for (auto& [m1, c1] : t_)
    for (auto& [m2, c2] : o.t_) {
      Monomial m(rank_);
      for (int i = 0; i < rank_; ++i) m[i] = m1[i] + m2[i];
      Scalar n = r.coeff(m) + c1 * c2;
      r.set(m, n);
    }
  return r;
}

Poly Poly::operator*(const Scalar& c) const {
  Poly r(f_, rank_);
  if (c.is_zero()) return r;
  for (auto& [m, k] : t_) r.t_[m] = k * c;
  return r;
}

Poly Poly::substitute(const std::vector<Poly>& images) const {
  check(static_cast<int>(images.size()) == rank_, "substitute image count");
  Poly r(f_, rank_);
  for (auto& [m, c] : t_) {
    Poly term = Poly::constant(f_, rank_, c);
    for (int j = 0; j < rank_; ++j)
      for (int k = 0; k < m[j]; ++k) term = term * images[j];
    r += term;
  }
  return r;
}

Poly Poly::divide_by_linear(const std::vector<Scalar>& c) const {
  check(static_cast<int>(c.size()) == rank_, "linear form rank");
  int piv = -1;
  for (int j = 0; j < rank_; ++j)
    if (!c[j].is_zero()) { piv = j; break; }
  check(piv >= 0, "division by zero form");

  // synthetic division in x_piv: repeatedly cancel the highest x_piv-degree part
  Poly rem = *this, quot(f_, rank_);
  Scalar lead_inv = c[piv].inv();
  while (!rem.is_zero()) {
    // find a term with maximal exponent of x_piv
    int best = -1;
    const Monomial* bm = nullptr;
    const Scalar* bc = nullptr;
    for (auto& [m, k] : rem.t_)
      if (m[piv] > best) { best = m[piv]; bm = &m; bc = &k; }
    if (best <= 0) break; // no x_piv left; must be zero for exact division
    Monomial qm = *bm;
    qm[piv] -= 1;
    Scalar qc = *bc * lead_inv;
    Poly qterm(f_, rank_);
    qterm.t_[qm] = qc;
    quot += qterm;
    // rem -= qterm * (linear form)
    for (int j = 0; j < rank_; ++j) {
      if (c[j].is_zero()) continue;
      Monomial m = qm;
      m[j] += 1;
      Scalar n = rem.coeff(m) - qc * c[j];
      rem.set(m, n);
    }
  }
  if (!rem.is_zero()) throw InternalError("divide_by_linear: not divisible");
  return quot;
}

bool Poly::is_homogeneous() const {
  int d = -1;
  for (auto& [m, c] : t_) {
    int t = 0;
    for (int e : m) t += e;
    if (d == -1) d = t;
    else if (d != t) return false;
  }
  return true;
}

int Poly::homogeneous_degree() const {
  if (t_.empty()) return -1;
  check(is_homogeneous(), "inhomogeneous polynomial");
  int t = 0;
  for (int e : t_.begin()->first) t += e;
  return 2 * t;
}

int Poly::top_degree() const {
  int d = 0;
  for (auto& [m, c] : t_) {
    int t = 0;
    for (int e : m) t += e;
    d = std::max(d, 2 * t);
  }
  return d;
}

std::vector<Poly> Poly::split_by_least_variable() const {
  if (!constant_term().is_zero())
    throw NotInAugmentation("split_by_least_variable requires zero constant term");
  std::vector<Poly> g(rank_, Poly(f_, rank_));
  for (auto& [m, c] : t_) {
    int j = 0;
    while (j < rank_ && m[j] == 0) ++j;
    check(j < rank_, "constant slipped through split");
    Monomial q = m;
    q[j] -= 1;
    Scalar n = g[j].coeff(q) + c;
    g[j].set(q, n);
  }
  return g;
}

std::string Poly::str() const {
  if (t_.empty()) return "0";
  // order: descending total degree, then ascending lex
  std::vector<const std::pair<const Monomial, Scalar>*> terms;
  for (auto& kv : t_) terms.push_back(&kv);
  auto total = [](const Monomial& m) {
    int t = 0;
    for (int e : m) t += e;
    return t;
  };
  std::sort(terms.begin(), terms.end(), [&](auto* a, auto* b) {
    int ta = total(a->first), tb = total(b->first);
    if (ta != tb) return ta > tb;
    return b->first < a->first; // within a degree, earlier variables first
  });
  std::string out;
  for (auto* kv : terms) {
    const Monomial& m = kv->first;
    std::string cs = kv->second.str();
    // parenthesize compound scalars like "1+sqrt(5)"
    const bool compound = cs.find('+') != std::string::npos ||
                          cs.find('-', 1) != std::string::npos;
    if (compound) cs = "(" + cs + ")";
    std::string mono;
    for (size_t j = 0; j < m.size(); ++j) {
      if (m[j] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(j + 1);
      if (m[j] > 1) mono += "^" + std::to_string(m[j]);
    }
    std::string term;
    if (mono.empty()) term = cs;
    else if (cs == "1") term = mono;
    else if (cs == "-1") term = "-" + mono;
    else term = cs + "*" + mono;
    if (out.empty()) out = term;
    else if (!term.empty() && term[0] == '-') out += term;
    else out += "+" + term;
  }
  return out;
}

} // namespace soergel
