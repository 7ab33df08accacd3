#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "soergel/errors.hpp"

namespace soergel {

enum class FieldKind : std::uint8_t { Rational, Prime, Quadratic };

/*
  Field descriptor. A Scalar carries one of these by value; all arithmetic
  checks that both operands live in the same field. Supported fields:

    Rational    Q
    Prime       F_p, p an odd prime
    Quadratic   Q(sqrt d), d > 1 squarefree (d not a perfect square is enforced)

  Characteristic 2 is rejected globally: the bimodule calculus divides by 2.
*/
struct Field {
  FieldKind kind = FieldKind::Rational;
  long param = 0; // p for Prime, d for Quadratic

  static Field Q() { return Field{FieldKind::Rational, 0}; }
  static Field Fp(long p);
  static Field Qsqrt(long d);

  // parse "Q" | "Fp:<p>" | "Qsqrt:<d>"
  static Field parse(const std::string& tag);
  std::string tag() const;

  long characteristic() const { return kind == FieldKind::Prime ? param : 0; }

  bool operator==(const Field& o) const { return kind == o.kind && param == o.param; }
  bool operator!=(const Field& o) const { return !(*this == o); }
};

/*
  Exact field element. Value is a_ + b_*sqrt(d) for Quadratic, a_ otherwise;
  Prime elements keep a_ as an integer residue in [0, p).
*/
class Scalar {
public:
  Scalar() : f_(Field::Q()) {} // zero of Q; convenient default
  explicit Scalar(const Field& f) : f_(f) {}
  Scalar(const Field& f, long value);
  Scalar(const Field& f, const mpq_class& a);
  Scalar(const Field& f, const mpq_class& a, const mpq_class& b);

  const Field& field() const { return f_; }
  const mpq_class& rat() const { return a_; }  // rational / residue part
  const mpq_class& surd() const { return b_; } // sqrt(d) coefficient (Quadratic only)

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_one() const { return a_ == 1 && b_ == 0; }

  Scalar operator-() const;
  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar inv() const;

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  // total order (field data, then coefficients); used for canonical containers
  bool operator<(const Scalar& o) const;

  std::string str() const;

private:
  void normalize();

  Field f_;
  mpq_class a_, b_;
};

inline Scalar operator*(long c, const Scalar& s) { return Scalar(s.field(), c) * s; }

} // namespace soergel
