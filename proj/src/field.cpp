#include "soergel/field.hpp"

#include <cmath>
#include <cstdlib>

namespace soergel {

namespace {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool is_square(long n) {
  if (n < 0) return false;
  long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
  for (long x = r - 2; x <= r + 2; ++x)
    if (x >= 0 && x * x == n) return true;
  return false;
}

// residue of a/b mod p
mpq_class reduce_mod(const mpq_class& q, long p) {
  mpz_class pz(p);
  mpz_class num = q.get_num() % pz;
  if (num < 0) num += pz;
  mpz_class den = q.get_den() % pz;
  if (den == 0) throw BadCharacteristic("denominator divisible by p in reduction mod " + std::to_string(p));
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t()) == 0)
    throw BadCharacteristic("no inverse mod p");
  mpz_class r = (num * inv) % pz;
  if (r < 0) r += pz;
  return mpq_class(r);
}

} // namespace

Field Field::Fp(long p) {
  if (p == 2) throw BadCharacteristic("characteristic 2 is not supported");
  if (!is_prime(p)) throw ConfigError("Fp requires an odd prime, got " + std::to_string(p));
  return Field{FieldKind::Prime, p};
}

Field Field::Qsqrt(long d) {
  if (d <= 1 || is_square(d)) throw ConfigError("Qsqrt requires a non-square d > 1, got " + std::to_string(d));
  return Field{FieldKind::Quadratic, d};
}

Field Field::parse(const std::string& tag) {
  if (tag == "Q") return Q();
  auto colon = tag.find(':');
  if (colon != std::string::npos) {
    const std::string head = tag.substr(0, colon), tail = tag.substr(colon + 1);
    char* end = nullptr;
    long n = std::strtol(tail.c_str(), &end, 10);
    if (end && *end == '\0') {
      if (head == "Fp") return Fp(n);
      if (head == "Qsqrt") return Qsqrt(n);
    }
  }
  throw ConfigError("cannot parse field tag '" + tag + "' (expected Q, Fp:<p>, Qsqrt:<d>)");
}

std::string Field::tag() const {
  switch (kind) {
    case FieldKind::Rational: return "Q";
    case FieldKind::Prime: return "Fp:" + std::to_string(param);
    case FieldKind::Quadratic: return "Qsqrt:" + std::to_string(param);
  }
  return "?";
}

Scalar::Scalar(const Field& f, long value) : f_(f), a_(value) { normalize(); }
Scalar::Scalar(const Field& f, const mpq_class& a) : f_(f), a_(a) { normalize(); }

Scalar::Scalar(const Field& f, const mpq_class& a, const mpq_class& b) : f_(f), a_(a), b_(b) {
  if (b_ != 0 && f_.kind != FieldKind::Quadratic)
    throw InternalError("surd part in a non-quadratic field");
  normalize();
}

void Scalar::normalize() {
  a_.canonicalize();
  b_.canonicalize();
  if (f_.kind == FieldKind::Prime) a_ = reduce_mod(a_, f_.param);
}

static void require_same(const Field& x, const Field& y) {
  if (x != y) throw InternalError("mixed-field scalar arithmetic");
}

Scalar Scalar::operator-() const { return Scalar(f_, -a_, -b_); }

Scalar Scalar::operator+(const Scalar& o) const {
  require_same(f_, o.f_);
  return Scalar(f_, a_ + o.a_, b_ + o.b_);
}

Scalar Scalar::operator-(const Scalar& o) const {
  require_same(f_, o.f_);
  return Scalar(f_, a_ - o.a_, b_ - o.b_);
}

Scalar Scalar::operator*(const Scalar& o) const {
  require_same(f_, o.f_);
  if (f_.kind == FieldKind::Quadratic)
    return Scalar(f_, a_ * o.a_ + mpq_class(f_.param) * b_ * o.b_, a_ * o.b_ + b_ * o.a_);
  return Scalar(f_, a_ * o.a_);
}

Scalar Scalar::inv() const {
  if (is_zero()) throw InternalError("inverse of zero");
  switch (f_.kind) {
    case FieldKind::Rational: return Scalar(f_, 1 / a_);
    case FieldKind::Prime: {
      mpz_class inv, pz(f_.param);
      mpz_class num = a_.get_num();
      if (mpz_invert(inv.get_mpz_t(), num.get_mpz_t(), pz.get_mpz_t()) == 0)
        throw InternalError("non-invertible residue");
      return Scalar(f_, mpq_class(inv));
    }
    case FieldKind::Quadratic: {
      // (a + b sqrt d)^-1 = (a - b sqrt d) / (a^2 - d b^2); the norm is nonzero
      // because d is not a square.
      mpq_class n = a_ * a_ - mpq_class(f_.param) * b_ * b_;
      if (n == 0) throw InternalError("zero norm in quadratic field");
      return Scalar(f_, a_ / n, -b_ / n);
    }
  }
  throw InternalError("unreachable");
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inv(); }

bool Scalar::operator==(const Scalar& o) const {
  require_same(f_, o.f_);
  return a_ == o.a_ && b_ == o.b_;
}

bool Scalar::operator<(const Scalar& o) const {
  if (f_.kind != o.f_.kind) return f_.kind < o.f_.kind;
  if (f_.param != o.f_.param) return f_.param < o.f_.param;
  int c = cmp(a_, o.a_);
  if (c != 0) return c < 0;
  return cmp(b_, o.b_) < 0;
}

std::string Scalar::str() const {
  if (f_.kind != FieldKind::Quadratic || b_ == 0) return a_.get_str();
  std::string root = "sqrt(" + std::to_string(f_.param) + ")";
  std::string bs;
  if (b_ == 1) bs = root;
  else if (b_ == -1) bs = "-" + root;
  else bs = b_.get_str() + "*" + root;
  if (a_ == 0) return bs;
  if (b_ > 0) return a_.get_str() + "+" + bs;
  return a_.get_str() + bs;
}

} // namespace soergel
