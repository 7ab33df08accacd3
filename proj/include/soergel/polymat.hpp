#pragma once

#include <vector>

#include "soergel/linalg.hpp"
#include "soergel/poly.hpp"

namespace soergel {

// Dense matrix over the polynomial ring. Row-major.
struct PolyMat {
  int rows = 0, cols = 0;
  Field field = Field::Q();
  int nvars = 0;
  std::vector<Poly> a;

  PolyMat() = default;
  PolyMat(Field f, int nv, int r, int c)
      : rows(r), cols(c), field(f), nvars(nv), a(static_cast<size_t>(r) * c, Poly(f, nv)) {}

  static PolyMat identity(Field f, int nv, int n);
  static PolyMat from_scalar(const ScalarMat& m, int nv);

  Poly& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Poly& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  PolyMat operator+(const PolyMat& o) const;
  PolyMat operator-(const PolyMat& o) const;
  PolyMat operator*(const PolyMat& o) const;
  PolyMat operator*(const Poly& p) const;
  PolyMat operator*(const Scalar& c) const;
  PolyMat operator-() const;
  bool operator==(const PolyMat& o) const;
  bool operator!=(const PolyMat& o) const { return !(*this == o); }

  bool is_zero() const;
  // every entry has zero constant term
  bool entries_in_aug() const;
  // matrix of constant terms
  ScalarMat const_part() const;
  std::string str() const;
};

// block-structured assembly helpers
PolyMat hstack(const PolyMat& l, const PolyMat& r);
PolyMat vstack(const PolyMat& t, const PolyMat& b);

} // namespace soergel
