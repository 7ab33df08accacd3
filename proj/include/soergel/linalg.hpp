#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "soergel/field.hpp"

namespace soergel {

// Dense matrix over a Scalar field. Row-major.
struct ScalarMat {
  int rows = 0, cols = 0;
  Field field = Field::Q();
  std::vector<Scalar> a;

  ScalarMat() = default;
  ScalarMat(Field f, int r, int c)
      : rows(r), cols(c), field(f), a(static_cast<size_t>(r) * c, Scalar(f)) {}

  static ScalarMat identity(Field f, int n);

  Scalar& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Scalar& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  ScalarMat operator+(const ScalarMat& o) const;
  ScalarMat operator-(const ScalarMat& o) const;
  ScalarMat operator*(const ScalarMat& o) const;
  ScalarMat operator*(const Scalar& c) const;
  ScalarMat operator-() const;
  bool operator==(const ScalarMat& o) const;
  bool operator!=(const ScalarMat& o) const { return !(*this == o); }

  ScalarMat transpose() const;
  bool is_zero() const;
  bool is_identity() const;
  std::string str() const;
};

int rank(const ScalarMat& m);
// right kernel, canonical basis from the reduced row echelon form
std::vector<std::vector<Scalar>> kernel_basis(const ScalarMat& m);
// one solution of A x = b, if any
std::optional<std::vector<Scalar>> solve(const ScalarMat& A, const std::vector<Scalar>& b);
std::optional<ScalarMat> inverse(const ScalarMat& m);

std::vector<Scalar> mat_vec(const ScalarMat& A, const std::vector<Scalar>& x);

// --- sparse exact elimination -------------------------------------------

using SpRow = std::vector<std::pair<int, Scalar>>; // sorted by column

// Reduced row echelon form of a sparse matrix, held as pivot-column -> row.
// Deterministic and canonical (RREF is unique), independent of row order.
class SpSolver {
public:
  explicit SpSolver(Field f, int cols) : field_(f), cols_(cols) {}

  // reduce a row against current pivots and, if a nonzero remainder is left,
  // install it as a new pivot row; returns false if the row reduced to zero
  bool add_row(SpRow r);

  int rank() const { return static_cast<int>(piv_.size()); }
  int cols() const { return cols_; }
  Field field() const { return field_; }

  // reduce an arbitrary row against the pivots (no insertion)
  SpRow residue(SpRow r) const;

  // canonical kernel basis: one vector per non-pivot column, unit there
  std::vector<SpRow> kernel() const;

  // solve A x = b where rows added so far are the rows of A augmented by b:
  // instead use solve(): pass rhs per original row via the augmented trick
  const std::map<int, SpRow>& pivot_rows() const { return piv_; }

private:
  void back_substitute(SpRow& r) const;
  Field field_;
  int cols_;
  std::map<int, SpRow> piv_; // pivot col -> normalized, fully reduced row
};

// Solve A x = b exactly; A given as sparse rows. Returns one solution.
std::optional<std::vector<Scalar>> sp_solve(Field f, int cols, const std::vector<SpRow>& rows,
                                            const std::vector<Scalar>& rhs);
int sp_rank(Field f, int cols, const std::vector<SpRow>& rows);
std::vector<SpRow> sp_kernel(Field f, int cols, const std::vector<SpRow>& rows);

// --- modular kit ----------------------------------------------------------

// Row echelon elimination over F_p with uint64 arithmetic, p < 2^31.
class ModSolver {
public:
  ModSolver(uint64_t p, int cols) : p_(p), cols_(cols) {}
  // returns false if row reduced to zero
  bool add_row(std::vector<std::pair<int, uint64_t>> r);
  int rank() const { return static_cast<int>(piv_.size()); }
  int nullity() const { return cols_ - rank(); }

private:
  uint64_t inv_mod(uint64_t x) const;
  uint64_t p_;
  int cols_;
  std::map<int, std::vector<std::pair<int, uint64_t>>> piv_;
};

// primes used for modular rank bounds (ascending preference)
inline const std::vector<uint64_t>& modular_primes() {
  static const std::vector<uint64_t> ps = {2147483647ull, 2147483629ull, 2147483587ull,
                                           2147483579ull, 2147483563ull, 2147483549ull};
  return ps;
}

// least square root of a mod p (p an odd prime), if a is a quadratic residue
std::optional<uint64_t> sqrt_mod_p(uint64_t a, uint64_t p);

// image of s under a ring map into F_p: rational parts need denominators
// prime to p; a Quadratic field embeds only when its radicand is a square
// mod p (the smaller root is chosen); a Prime scalar requires matching p
std::optional<uint64_t> scalar_mod_p(const Scalar& s, uint64_t p);

} // namespace soergel
