#include "soergel/linalg.hpp"

#include <algorithm>
#include <sstream>

#include "soergel/errors.hpp"

namespace soergel {

ScalarMat ScalarMat::identity(Field f, int n) {
  ScalarMat m(f, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Scalar(f, 1);
  return m;
}

ScalarMat ScalarMat::operator+(const ScalarMat& o) const {
  check(rows == o.rows && cols == o.cols, "matrix shape mismatch in +");
  ScalarMat r(field, rows, cols);
  for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] + o.a[i];
  return r;
}

ScalarMat ScalarMat::operator-(const ScalarMat& o) const {
  check(rows == o.rows && cols == o.cols, "matrix shape mismatch in -");
  ScalarMat r(field, rows, cols);
  for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] - o.a[i];
  return r;
}

ScalarMat ScalarMat::operator*(const ScalarMat& o) const {
  check(cols == o.rows, "matrix shape mismatch in *");
  ScalarMat r(field, rows, o.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const Scalar& x = at(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < o.cols; ++j) {
        if (o.at(k, j).is_zero()) continue;
        r.at(i, j) = r.at(i, j) + x * o.at(k, j);
      }
    }
  return r;
}

ScalarMat ScalarMat::operator*(const Scalar& c) const {
  ScalarMat r(field, rows, cols);
  for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] * c;
  return r;
}

ScalarMat ScalarMat::operator-() const {
  ScalarMat r(field, rows, cols);
  for (size_t i = 0; i < a.size(); ++i) r.a[i] = -a[i];
  return r;
}

bool ScalarMat::operator==(const ScalarMat& o) const {
  if (rows != o.rows || cols != o.cols) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == o.a[i])) return false;
  return true;
}

ScalarMat ScalarMat::transpose() const {
  ScalarMat r(field, cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
  return r;
}

bool ScalarMat::is_zero() const {
  for (const auto& x : a)
    if (!x.is_zero()) return false;
  return true;
}

bool ScalarMat::is_identity() const {
  if (rows != cols) return false;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (i == j && !at(i, j).is_one()) return false;
      if (i != j && !at(i, j).is_zero()) return false;
    }
  return true;
}

std::string ScalarMat::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows; ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < cols; ++j) os << (j ? " " : "") << at(i, j).str();
  }
  os << "]";
  return os.str();
}

std::vector<Scalar> mat_vec(const ScalarMat& A, const std::vector<Scalar>& x) {
  check(static_cast<int>(x.size()) == A.cols, "mat_vec shape mismatch");
  std::vector<Scalar> r(A.rows, Scalar(A.field));
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j)
      if (!A.at(i, j).is_zero() && !x[j].is_zero()) r[i] = r[i] + A.at(i, j) * x[j];
  return r;
}

static std::vector<SpRow> dense_to_rows(const ScalarMat& m) {
  std::vector<SpRow> rows;
  rows.reserve(m.rows);
  for (int i = 0; i < m.rows; ++i) {
    SpRow r;
    for (int j = 0; j < m.cols; ++j)
      if (!m.at(i, j).is_zero()) r.emplace_back(j, m.at(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

int rank(const ScalarMat& m) { return sp_rank(m.field, m.cols, dense_to_rows(m)); }

std::vector<std::vector<Scalar>> kernel_basis(const ScalarMat& m) {
  std::vector<std::vector<Scalar>> out;
  for (const SpRow& k : sp_kernel(m.field, m.cols, dense_to_rows(m))) {
    std::vector<Scalar> v(m.cols, Scalar(m.field));
    for (const auto& [j, c] : k) v[j] = c;
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<std::vector<Scalar>> solve(const ScalarMat& A, const std::vector<Scalar>& b) {
  return sp_solve(A.field, A.cols, dense_to_rows(A), b);
}

std::optional<ScalarMat> inverse(const ScalarMat& m) {
  if (m.rows != m.cols) return std::nullopt;
  // solve m X = I column by column through one elimination of [m | I]
  const int n = m.rows;
  SpSolver solver(m.field, 2 * n);
  for (int i = 0; i < n; ++i) {
    SpRow r;
    for (int j = 0; j < n; ++j)
      if (!m.at(i, j).is_zero()) r.emplace_back(j, m.at(i, j));
    r.emplace_back(n + i, Scalar(m.field, 1));
    solver.add_row(std::move(r));
  }
  // invertible iff the first n columns are all pivots
  ScalarMat inv(m.field, n, n);
  for (int j = 0; j < n; ++j) {
    auto it = solver.pivot_rows().find(j);
    if (it == solver.pivot_rows().end()) return std::nullopt;
    for (const auto& [col, c] : it->second)
      if (col >= n) inv.at(j, col - n) = c;
  }
  return inv;
}

// --- SpSolver --------------------------------------------------------------

void SpSolver::back_substitute(SpRow& r) const {
  // eliminate every pivot column appearing in r
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < r.size(); ++i) {
      auto it = piv_.find(r[i].first);
      if (it == piv_.end()) continue;
      const Scalar c = r[i].second;
      // r -= c * pivot_row  (pivot row starts with coefficient 1 at the pivot col)
      SpRow merged;
      merged.reserve(r.size() + it->second.size());
      size_t ai = 0, bi = 0;
      const SpRow& p = it->second;
      while (ai < r.size() || bi < p.size()) {
        if (bi == p.size() || (ai < r.size() && r[ai].first < p[bi].first)) {
          merged.push_back(r[ai++]);
        } else if (ai == r.size() || p[bi].first < r[ai].first) {
          merged.emplace_back(p[bi].first, -(c * p[bi].second));
          ++bi;
        } else {
          Scalar s = r[ai].second - c * p[bi].second;
          if (!s.is_zero()) merged.emplace_back(r[ai].first, s);
          ++ai, ++bi;
        }
      }
      r = std::move(merged);
      changed = true;
      break;
    }
  }
}

bool SpSolver::add_row(SpRow r) {
  back_substitute(r);
  if (r.empty()) return false;
  // normalize: leading coefficient 1
  const int pc = r.front().first;
  const Scalar lead_inv = r.front().second.inv();
  for (auto& [j, c] : r) c = c * lead_inv;
  // reduce existing pivot rows against the new one
  for (auto& [col, row] : piv_) {
    (void)col;
    auto pos = std::lower_bound(row.begin(), row.end(), pc,
                                [](const auto& e, int v) { return e.first < v; });
    if (pos == row.end() || pos->first != pc) continue;
    const Scalar c = pos->second;
    if (c.is_zero()) continue;
    SpRow merged;
    size_t ai = 0, bi = 0;
    while (ai < row.size() || bi < r.size()) {
      if (bi == r.size() || (ai < row.size() && row[ai].first < r[bi].first)) {
        merged.push_back(row[ai++]);
      } else if (ai == row.size() || r[bi].first < row[ai].first) {
        merged.emplace_back(r[bi].first, -(c * r[bi].second));
        ++bi;
      } else {
        Scalar s = row[ai].second - c * r[bi].second;
        if (!s.is_zero()) merged.emplace_back(row[ai].first, s);
        ++ai, ++bi;
      }
    }
    row = std::move(merged);
  }
  piv_[pc] = std::move(r);
  return true;
}

SpRow SpSolver::residue(SpRow r) const {
  std::sort(r.begin(), r.end());
  back_substitute(r);
  return r;
}

std::vector<SpRow> SpSolver::kernel() const {
  // bucket pivot-row entries by free column, then one vector per free column:
  // unit there, -(entry) at each pivot column
  std::map<int, SpRow> buckets;
  for (const auto& [pc, row] : piv_)
    for (const auto& [col, c] : row)
      if (col != pc) buckets[col].emplace_back(pc, -c);
  std::vector<SpRow> out;
  for (int j = 0; j < cols_; ++j) {
    if (piv_.count(j)) continue;
    SpRow v;
    auto it = buckets.find(j);
    if (it != buckets.end()) v = it->second;
    v.emplace_back(j, Scalar(field_, 1));
    std::sort(v.begin(), v.end());
    out.push_back(std::move(v));
  }
  return out;
}

int sp_rank(Field f, int cols, const std::vector<SpRow>& rows) {
  SpSolver s(f, cols);
  for (const auto& r : rows) {
    SpRow rr = r;
    std::sort(rr.begin(), rr.end());
    s.add_row(std::move(rr));
  }
  return s.rank();
}

std::vector<SpRow> sp_kernel(Field f, int cols, const std::vector<SpRow>& rows) {
  SpSolver s(f, cols);
  for (const auto& r : rows) {
    SpRow rr = r;
    std::sort(rr.begin(), rr.end());
    s.add_row(std::move(rr));
  }
  return s.kernel();
}

std::optional<std::vector<Scalar>> sp_solve(Field f, int cols, const std::vector<SpRow>& rows,
                                            const std::vector<Scalar>& rhs) {
  check(rows.size() == rhs.size(), "sp_solve shape mismatch");
  SpSolver s(f, cols + 1);
  for (size_t i = 0; i < rows.size(); ++i) {
    SpRow r = rows[i];
    std::sort(r.begin(), r.end());
    if (!rhs[i].is_zero()) r.emplace_back(cols, rhs[i]);
    s.add_row(std::move(r));
  }
  // inconsistent iff the augmented column is a pivot
  if (s.pivot_rows().count(cols)) return std::nullopt;
  // rows encode a.x + b*t = 0; solutions of A x = rhs have t = -1 and, with
  // free variables zeroed, x_pc = (augmented entry of the pivot row)
  std::vector<Scalar> x(cols, Scalar(f));
  for (const auto& [pc, row] : s.pivot_rows()) {
    for (const auto& [col, c] : row)
      if (col == cols) x[pc] = c;
  }
  return x;
}

// --- ModSolver --------------------------------------------------------------

uint64_t ModSolver::inv_mod(uint64_t x) const {
  // extended Euclid
  int64_t t = 0, nt = 1;
  int64_t r = static_cast<int64_t>(p_), nr = static_cast<int64_t>(x % p_);
  while (nr != 0) {
    const int64_t q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  check(r == 1, "inv_mod of non-unit");
  if (t < 0) t += static_cast<int64_t>(p_);
  return static_cast<uint64_t>(t);
}

bool ModSolver::add_row(std::vector<std::pair<int, uint64_t>> r) {
  std::sort(r.begin(), r.end());
  for (auto& [j, c] : r) c %= p_;
  r.erase(std::remove_if(r.begin(), r.end(), [](const auto& e) { return e.second == 0; }),
          r.end());
  while (!r.empty()) {
    auto it = piv_.find(r.front().first);
    if (it == piv_.end()) break;
    const uint64_t c = r.front().second;
    const auto& p = it->second;
    std::vector<std::pair<int, uint64_t>> merged;
    merged.reserve(r.size() + p.size());
    size_t ai = 0, bi = 0;
    while (ai < r.size() || bi < p.size()) {
      if (bi == p.size() || (ai < r.size() && r[ai].first < p[bi].first)) {
        merged.push_back(r[ai++]);
      } else if (ai == r.size() || p[bi].first < r[ai].first) {
        merged.emplace_back(p[bi].first, (p_ - c * p[bi].second % p_) % p_);
        ++bi;
      } else {
        const uint64_t v = (r[ai].second + p_ - c * p[bi].second % p_) % p_;
        if (v != 0) merged.emplace_back(r[ai].first, v);
        ++ai, ++bi;
      }
    }
    r = std::move(merged);
  }
  if (r.empty()) return false;
  const uint64_t li = inv_mod(r.front().second);
  for (auto& [j, c] : r) c = c * li % p_;
  piv_[r.front().first] = std::move(r);
  return true;
}

// --- modular embedding ------------------------------------------------------

namespace {

uint64_t pow_mod(uint64_t b, uint64_t e, uint64_t p) {
  uint64_t r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

uint64_t mpz_mod_u(const mpz_class& z, uint64_t p) {
  return mpz_fdiv_ui(z.get_mpz_t(), static_cast<unsigned long>(p));
}

std::optional<uint64_t> rat_mod_u(const mpq_class& q, uint64_t p) {
  const uint64_t den = mpz_mod_u(q.get_den(), p);
  if (den == 0) return std::nullopt;
  const uint64_t num = mpz_mod_u(q.get_num(), p);
  return num * pow_mod(den, p - 2, p) % p;
}

} // namespace

std::optional<uint64_t> sqrt_mod_p(uint64_t a, uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (pow_mod(a, (p - 1) / 2, p) != 1) return std::nullopt;
  // Tonelli-Shanks
  uint64_t q = p - 1, s = 0;
  while ((q & 1) == 0) q >>= 1, ++s;
  uint64_t r;
  if (s == 1) {
    r = pow_mod(a, (p + 1) / 4, p);
  } else {
    uint64_t z = 2;
    while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
    uint64_t m = s, c = pow_mod(z, q, p), t = pow_mod(a, q, p);
    r = pow_mod(a, (q + 1) / 2, p);
    while (t != 1) {
      uint64_t i = 0, t2 = t;
      while (t2 != 1) t2 = t2 * t2 % p, ++i;
      uint64_t b = pow_mod(c, uint64_t(1) << (m - i - 1), p);
      m = i;
      c = b * b % p;
      t = t * c % p;
      r = r * b % p;
    }
  }
  return std::min(r, p - r);
}

std::optional<uint64_t> scalar_mod_p(const Scalar& s, uint64_t p) {
  switch (s.field().kind) {
    case FieldKind::Rational:
      return rat_mod_u(s.rat(), p);
    case FieldKind::Prime:
      if (static_cast<uint64_t>(s.field().param) != p) return std::nullopt;
      return mpz_mod_u(mpz_class(s.rat().get_num()), p);
    case FieldKind::Quadratic: {
      const auto a = rat_mod_u(s.rat(), p);
      const auto b = rat_mod_u(s.surd(), p);
      if (!a || !b) return std::nullopt;
      const auto rt = sqrt_mod_p(static_cast<uint64_t>(s.field().param) % p, p);
      if (!rt) return std::nullopt;
      return (*a + *b % p * *rt) % p;
    }
  }
  return std::nullopt;
}

} // namespace soergel
