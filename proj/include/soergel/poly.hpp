#pragma once

#include <map>
#include <string>
#include <vector>

#include "soergel/field.hpp"

namespace soergel {

/*
  Sparse multivariate polynomial over a Scalar field, in variables x1..xr
  dual to a fixed basis of h. Every variable has internal degree 2, so a
  monomial of total exponent t has internal degree 2t. All module/bimodule
  gradings in this codebase are internal degrees.

  Monomial keys are exponent vectors of fixed length (the rank).
*/
using Monomial = std::vector<int>;

class Poly {
public:
  Poly() : f_(Field::Q()), rank_(0) {}
  Poly(const Field& f, int rank) : f_(f), rank_(rank) {}
  static Poly constant(const Field& f, int rank, const Scalar& c);
  static Poly constant(const Field& f, int rank, long c) { return constant(f, rank, Scalar(f, c)); }
  static Poly variable(const Field& f, int rank, int j); // x_{j+1}, 0-based j

  const Field& field() const { return f_; }
  int rank() const { return rank_; }
  bool is_zero() const { return t_.empty(); }
  const std::map<Monomial, Scalar>& terms() const { return t_; }

  Scalar coeff(const Monomial& m) const;
  Scalar constant_term() const;
  void set(const Monomial& m, const Scalar& c);

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Scalar& c) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  bool operator==(const Poly& o) const { return rank_ == o.rank_ && t_ == o.t_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  // substitution x_j -> images[j] (ring endomorphism); images must share field/rank
  Poly substitute(const std::vector<Poly>& images) const;

  // exact division by a nonzero linear form sum_j c_j x_j (throws if not divisible)
  Poly divide_by_linear(const std::vector<Scalar>& c) const;

  // internal degree if homogeneous, -1 for 0; throws if inhomogeneous
  int homogeneous_degree() const;
  bool is_homogeneous() const;
  // largest internal degree of any term (0 for the zero polynomial)
  int top_degree() const;

  // split f - f(0) as sum_j x_j * g_j, assigning each monomial to its least
  // variable; returns g (size rank). Requires zero constant term.
  std::vector<Poly> split_by_least_variable() const;

  // canonical text form, e.g. "3*x1^2*x2-1/2*x3"; terms by descending total
  // degree then ascending lex on exponents
  std::string str() const;

private:
  Field f_;
  int rank_;
  std::map<Monomial, Scalar> t_;
};

inline Poly operator*(const Scalar& c, const Poly& p) { return p * c; }

} // namespace soergel
