#include "soergel/polymat.hpp"

#include <sstream>

#include "soergel/errors.hpp"

namespace soergel {

PolyMat PolyMat::identity(Field f, int nv, int n) {
  PolyMat m(f, nv, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Poly::constant(f, nv, Scalar(f, 1));
  return m;
}

PolyMat PolyMat::from_scalar(const ScalarMat& s, int nv) {
  PolyMat m(s.field, nv, s.rows, s.cols);
  for (int i = 0; i < s.rows; ++i)
    for (int j = 0; j < s.cols; ++j)
      if (!s.at(i, j).is_zero()) m.at(i, j) = Poly::constant(s.field, nv, s.at(i, j));
  return m;
}

PolyMat PolyMat::operator+(const PolyMat& o) const {
  check(rows == o.rows && cols == o.cols, "PolyMat+: shape mismatch");
  PolyMat r = *this;
  for (size_t i = 0; i < a.size(); ++i) r.a[i] = r.a[i] + o.a[i];
  return r;
}

PolyMat PolyMat::operator-(const PolyMat& o) const {
  check(rows == o.rows && cols == o.cols, "PolyMat-: shape mismatch");
  PolyMat r = *this;
  for (size_t i = 0; i < a.size(); ++i) r.a[i] = r.a[i] - o.a[i];
  return r;
}

PolyMat PolyMat::operator*(const PolyMat& o) const {
  check(cols == o.rows, "PolyMat*: shape mismatch");
  PolyMat r(field, nvars, rows, o.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const Poly& p = at(i, k);
      if (p.is_zero()) continue;
      for (int j = 0; j < o.cols; ++j) {
        if (o.at(k, j).is_zero()) continue;
        r.at(i, j) = r.at(i, j) + p * o.at(k, j);
      }
    }
  return r;
}

PolyMat PolyMat::operator*(const Poly& p) const {
  PolyMat r = *this;
  for (auto& e : r.a) e = e * p;
  return r;
}

PolyMat PolyMat::operator*(const Scalar& c) const {
  PolyMat r = *this;
  for (auto& e : r.a) e = e * c;
  return r;
}

PolyMat PolyMat::operator-() const {
  PolyMat r = *this;
  for (auto& e : r.a) e = -e;
  return r;
}

bool PolyMat::operator==(const PolyMat& o) const {
  if (rows != o.rows || cols != o.cols) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == o.a[i])) return false;
  return true;
}

bool PolyMat::is_zero() const {
  for (const auto& e : a)
    if (!e.is_zero()) return false;
  return true;
}

bool PolyMat::entries_in_aug() const {
  for (const auto& e : a)
    if (!e.constant_term().is_zero()) return false;
  return true;
}

ScalarMat PolyMat::const_part() const {
  ScalarMat m(field, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(i, j) = at(i, j).constant_term();
  return m;
}

std::string PolyMat::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows; ++i) {
    if (i) os << "; ";
    for (int j = 0; j < cols; ++j) {
      if (j) os << ", ";
      os << at(i, j).str();
    }
  }
  os << "]";
  return os.str();
}

PolyMat hstack(const PolyMat& l, const PolyMat& r) {
  check(l.rows == r.rows, "hstack: row mismatch");
  PolyMat m(l.field, l.nvars, l.rows, l.cols + r.cols);
  for (int i = 0; i < l.rows; ++i) {
    for (int j = 0; j < l.cols; ++j) m.at(i, j) = l.at(i, j);
    for (int j = 0; j < r.cols; ++j) m.at(i, l.cols + j) = r.at(i, j);
  }
  return m;
}

PolyMat vstack(const PolyMat& t, const PolyMat& b) {
  check(t.cols == b.cols, "vstack: col mismatch");
  PolyMat m(t.field, t.nvars, t.rows + b.rows, t.cols);
  for (int i = 0; i < t.rows; ++i)
    for (int j = 0; j < t.cols; ++j) m.at(i, j) = t.at(i, j);
  for (int i = 0; i < b.rows; ++i)
    for (int j = 0; j < t.cols; ++j) m.at(t.rows + i, j) = b.at(i, j);
  return m;
}

} // namespace soergel
