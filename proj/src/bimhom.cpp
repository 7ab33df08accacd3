#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>

#include "soergel/errors.hpp"
#include "soergel/sbim.hpp"

namespace soergel {

namespace {

// exponent vectors of total exponent t in r variables, ascending lex
std::vector<Monomial> monomials_of(int r, int t) {
  std::vector<Monomial> out;
  if (t < 0) return out;
  Monomial cur(static_cast<size_t>(r), 0);
  if (r == 0) {
    if (t == 0) out.push_back(cur);
    return out;
  }
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == r - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[pos] = e;
      rec(pos + 1, left - e);
    }
  };
  rec(0, t);
  return out;
}

long long n_monomials(int r, int t) {
  if (t < 0) return 0;
  if (r == 0) return t == 0 ? 1 : 0;
  long long n = 1;
  for (int i = 1; i <= r - 1; ++i) n = n * (t + i) / i;
  return n;
}

Monomial mon_add(const Monomial& a, const Monomial& b) {
  Monomial c = a;
  for (size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return c;
}

// layout of the unknown matrix entries of a degree-d map M -> N
struct Pattern {
  struct Cell {
    int i, j, edeg, off;
    std::vector<Monomial> mons;
  };
  std::vector<Cell> cells;
  std::vector<int> cell_at; // (i * cols + j) -> index into cells, or -1
  int rows = 0, cols = 0, total = 0;

  int cell_index(int i, int j) const { return cell_at[static_cast<size_t>(i) * cols + j]; }

  int coord(int i, int j, const Monomial& m) const {
    const int c = cell_index(i, j);
    check(c >= 0, "pattern: entry outside the degree pattern");
    const auto& cell = cells[c];
    const auto it = std::lower_bound(cell.mons.begin(), cell.mons.end(), m);
    check(it != cell.mons.end() && *it == m, "pattern: monomial outside the degree pattern");
    return cell.off + static_cast<int>(it - cell.mons.begin());
  }
};

Pattern make_pattern(const std::vector<int>& mdeg, const std::vector<int>& ndeg, int d, int r) {
  Pattern p;
  p.rows = static_cast<int>(ndeg.size());
  p.cols = static_cast<int>(mdeg.size());
  p.cell_at.assign(static_cast<size_t>(p.rows) * p.cols, -1);
  for (int i = 0; i < p.rows; ++i)
    for (int j = 0; j < p.cols; ++j) {
      const int e = d + mdeg[j] - ndeg[i];
      if (e < 0 || e % 2) continue;
      Pattern::Cell c;
      c.i = i;
      c.j = j;
      c.edeg = e;
      c.off = p.total;
      c.mons = monomials_of(r, e / 2);
      p.total += static_cast<int>(c.mons.size());
      p.cell_at[static_cast<size_t>(i) * p.cols + j] = static_cast<int>(p.cells.size());
      p.cells.push_back(std::move(c));
    }
  return p;
}

struct HomSystem {
  const BimSum* M;
  const BimSum* N;
  Field f = Field::Q();
  int r = 0;
  std::vector<int> mdeg, ndeg;
  std::vector<PolyMat> rhoM, rhoN;
};

HomSystem make_system(const BimSum& M, const BimSum& N) {
  check(M.rz == N.rz && M.rz != nullptr, "hom system: different realizations");
  HomSystem s;
  s.M = &M;
  s.N = &N;
  s.f = M.rz->field;
  s.r = M.rz->dim;
  s.mdeg = M.degs();
  s.ndeg = N.degs();
  for (int t = 0; t < s.r; ++t) {
    const Poly xt = Poly::variable(s.f, s.r, t);
    s.rhoM.push_back(M.action_matrix(xt));
    s.rhoN.push_back(N.action_matrix(xt));
  }
  return s;
}

void add_to(std::map<int, Scalar>& row, int col, const Scalar& v) {
  auto [it, fresh] = row.try_emplace(col, v);
  if (!fresh) it->second += v;
}

// commutation constraints A rho_M(x_t) = rho_N(x_t) A at map-degree d,
// as sparse rows over the unknown coordinates of the pattern
std::vector<SpRow> system_rows(const HomSystem& sys, const Pattern& p) {
  std::map<std::tuple<int, int, int, Monomial>, std::map<int, Scalar>> acc;
  for (int t = 0; t < sys.r; ++t) {
    const PolyMat& am = sys.rhoM[t];
    const PolyMat& an = sys.rhoN[t];
    for (const auto& cell : p.cells) {
      for (size_t mi = 0; mi < cell.mons.size(); ++mi) {
        const int col = cell.off + static_cast<int>(mi);
        // (A rho_M)[cell.i][j2] picks up A[cell.i][cell.j] * rho_M[cell.j][j2]
        for (int j2 = 0; j2 < p.cols; ++j2) {
          const Poly& q = am.at(cell.j, j2);
          for (const auto& [m2, c] : q.terms())
            add_to(acc[{t, cell.i, j2, mon_add(cell.mons[mi], m2)}], col, c);
        }
        // (rho_N A)[i2][cell.j] picks up rho_N[i2][cell.i] * A[cell.i][cell.j]
        for (int i2 = 0; i2 < p.rows; ++i2) {
          const Poly& q = an.at(i2, cell.i);
          for (const auto& [m2, c] : q.terms())
            add_to(acc[{t, i2, cell.j, mon_add(cell.mons[mi], m2)}], col, -c);
        }
      }
    }
  }
  std::vector<SpRow> rows;
  rows.reserve(acc.size());
  for (auto& [key, row] : acc) {
    SpRow r;
    for (auto& [col, c] : row)
      if (!c.is_zero()) r.emplace_back(col, c);
    if (!r.empty()) rows.push_back(std::move(r));
  }
  return rows;
}

PolyMat unflatten(const HomSystem& sys, const Pattern& p, const SpRow& vec) {
  PolyMat m(sys.f, sys.r, p.rows, p.cols);
  // cells are ordered by off; binary search each coordinate
  for (const auto& [col, c] : vec) {
    size_t lo = 0, hi = p.cells.size();
    while (hi - lo > 1) {
      const size_t mid = (lo + hi) / 2;
      if (p.cells[mid].off <= col) lo = mid;
      else hi = mid;
    }
    const auto& cell = p.cells[lo];
    m.at(cell.i, cell.j).set(cell.mons[static_cast<size_t>(col - cell.off)], c);
  }
  return m;
}

SpRow flatten(const Pattern& p, const PolyMat& m) {
  std::map<int, Scalar> acc;
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      for (const auto& [mon, c] : m.at(i, j).terms()) add_to(acc, p.coord(i, j, mon), c);
  SpRow r;
  for (auto& [col, c] : acc)
    if (!c.is_zero()) r.emplace_back(col, c);
  return r;
}

std::optional<std::vector<std::pair<int, uint64_t>>> row_mod(const SpRow& r, uint64_t p) {
  std::vector<std::pair<int, uint64_t>> out;
  out.reserve(r.size());
  for (const auto& [col, c] : r) {
    const auto v = scalar_mod_p(c, p);
    if (!v) return std::nullopt;
    if (*v) out.emplace_back(col, *v);
  }
  return out;
}

// monomial * generator products of total degree d: the free-module picture
// of HOM_d over the generators found so far
std::vector<PolyMat> gen_products(const HomSystem& sys, const std::vector<BimoduleMap>& gens,
                                  int d) {
  std::vector<PolyMat> out;
  for (const auto& g : gens) {
    const int e = d - g.degree;
    if (e < 0 || e % 2) continue;
    for (const auto& m : monomials_of(sys.r, e / 2)) {
      Poly mp(sys.f, sys.r);
      mp.set(m, Scalar(sys.f, 1));
      out.push_back(g.mat * mp);
    }
  }
  return out;
}

long long free_prediction(const std::vector<BimoduleMap>& gens, int d, int r) {
  long long n = 0;
  for (const auto& g : gens) {
    const int e = d - g.degree;
    if (e >= 0 && e % 2 == 0) n += n_monomials(r, e / 2);
  }
  return n;
}

// Exact degree-d step: kernel of the constraint system, rank of the span of
// generator products, and completion of the generator list. Returns false
// (with a message) when the products are dependent, i.e. HOM is not free on
// the generators found.
bool exact_step(const HomSystem& sys, std::vector<BimoduleMap>& gens, int d, int* dim_out,
                std::string* err) {
  const Pattern p = make_pattern(sys.mdeg, sys.ndeg, d, sys.r);
  const long long predicted = free_prediction(gens, d, sys.r);
  if (p.total == 0) {
    if (dim_out) *dim_out = 0;
    if (predicted != 0) {
      if (err) {
        std::ostringstream os;
        os << "degree " << d << ": free module predicts " << predicted
           << " but the Hom space is empty";
        *err = os.str();
      }
      return false;
    }
    return true;
  }
  const auto rows = system_rows(sys, p);
  const auto ker = sp_kernel(sys.f, p.total, rows);
  const int dim = static_cast<int>(ker.size());
  if (dim_out) *dim_out = dim;

  SpSolver span(sys.f, p.total);
  long long span_rank = 0;
  for (const auto& prod : gen_products(sys, gens, d))
    if (span.add_row(flatten(p, prod))) ++span_rank;
  if (span_rank < predicted) {
    if (err) {
      std::ostringstream os;
      os << "degree " << d << ": generator products satisfy a relation (rank " << span_rank
         << " < " << predicted << ")";
      *err = os.str();
    }
    return false;
  }
  for (const auto& v : ker) {
    if (span.rank() >= dim) break;
    if (span.add_row(v)) gens.push_back({d, unflatten(sys, p, v)});
  }
  check(span.rank() == dim, "hom scan: kernel vectors failed to span");
  return true;
}

// certificate for one degree: nullity and product rank both equal the free
// prediction modulo a prime; conservative (failure falls back to exact)
bool certify_degree(const HomSystem& sys, const std::vector<BimoduleMap>& gens, int d) {
  const Pattern p = make_pattern(sys.mdeg, sys.ndeg, d, sys.r);
  const long long predicted = free_prediction(gens, d, sys.r);
  if (p.total == 0) return predicted == 0;
  const auto rows = system_rows(sys, p);
  const auto prods = gen_products(sys, gens, d);
  if (static_cast<long long>(prods.size()) != predicted) return false;
  for (const uint64_t prime : modular_primes()) {
    ModSolver ms(prime, p.total);
    bool bad = false;
    for (const auto& r : rows) {
      const auto mr = row_mod(r, prime);
      if (!mr) {
        bad = true;
        break;
      }
      ms.add_row(*mr);
    }
    if (bad) continue;
    if (ms.nullity() != predicted) continue; // upper bound disagrees; try harder
    ModSolver prodrank(prime, p.total);
    long long rank = 0;
    for (const auto& prod : prods) {
      const auto fr = row_mod(flatten(p, prod), prime);
      if (!fr) {
        bad = true;
        break;
      }
      if (prodrank.add_row(*fr)) ++rank;
    }
    if (bad) continue;
    if (rank == predicted) return true; // lower == upper == predicted
  }
  return false;
}

} // namespace

std::vector<PolyMat> bim_hom_basis(const BimSum& M, const BimSum& N, int d) {
  const HomSystem sys = make_system(M, N);
  const Pattern p = make_pattern(sys.mdeg, sys.ndeg, d, sys.r);
  if (p.total == 0) return {};
  const auto ker = sp_kernel(sys.f, p.total, system_rows(sys, p));
  std::vector<PolyMat> out;
  out.reserve(ker.size());
  for (const auto& v : ker) out.push_back(unflatten(sys, p, v));
  return out;
}

std::vector<PolyMat> bim_hom_basis(const BSBimodule& M, const BSBimodule& N, int d) {
  return bim_hom_basis(BimSum(M), BimSum(N), d);
}

std::map<int, int> graded_hom_dims_bim(const BimSum& M, const BimSum& N, int lo, int hi) {
  check(lo <= hi, "graded_hom_dims_bim: empty window");
  const HomSystem sys = make_system(M, N);
  std::map<int, int> out;
  std::vector<PolyMat> below[2]; // basis of HOM_{d-2}, per parity of d
  for (int d = lo - 2; d <= hi; ++d) {
    const int par = ((d % 2) + 2) % 2;
    const Pattern p = make_pattern(sys.mdeg, sys.ndeg, d, sys.r);
    std::vector<PolyMat> basis;
    if (p.total > 0) {
      for (const auto& v : sp_kernel(sys.f, p.total, system_rows(sys, p)))
        basis.push_back(unflatten(sys, p, v));
    }
    if (d >= lo) {
      int span = 0;
      if (p.total > 0 && !below[par].empty()) {
        SpSolver sol(sys.f, p.total);
        for (int t = 0; t < sys.r; ++t) {
          const Poly xt = Poly::variable(sys.f, sys.r, t);
          for (const auto& b : below[par])
            if (sol.add_row(flatten(p, b * xt))) ++span;
        }
      }
      const int c = static_cast<int>(basis.size()) - span;
      if (c) out[d] = c;
    }
    below[par] = std::move(basis);
  }
  return out;
}

std::map<int, int> graded_hom_dims_bim(const BSBimodule& M, const BSBimodule& N, int lo, int hi) {
  return graded_hom_dims_bim(BimSum(M), BimSum(N), lo, hi);
}

std::vector<BimoduleMap> free_basis_hom(const BimSum& M, const BimSum& N, int settle) {
  const HomSystem sys = make_system(M, N);
  std::vector<BimoduleMap> gens;
  if (sys.mdeg.empty() || sys.ndeg.empty()) return gens;
  int dmin = sys.ndeg[0] - sys.mdeg[0];
  for (int nd : sys.ndeg)
    for (int md : sys.mdeg) dmin = std::min(dmin, nd - md);
  int quiet = 0;
  for (int d = dmin; quiet < 2 * settle; ++d) {
    const size_t had = gens.size();
    std::string err;
    if (!exact_step(sys, gens, d, nullptr, &err)) throw FreenessMismatch(err);
    quiet = gens.size() == had ? quiet + 1 : 0;
  }
  return gens;
}

FormalityReport formality_check(const BimSum& M, const BimSum& N, int up_to) {
  const HomSystem sys = make_system(M, N);
  FormalityReport rep;
  rep.checked_to = up_to;
  if (sys.mdeg.empty() || sys.ndeg.empty()) {
    rep.ok = true;
    return rep;
  }
  int dmin = sys.ndeg[0] - sys.mdeg[0];
  for (int nd : sys.ndeg)
    for (int md : sys.mdeg) dmin = std::min(dmin, nd - md);
  std::vector<BimoduleMap> gens;
  for (int d = dmin; d <= up_to; ++d) {
    if (certify_degree(sys, gens, d)) continue;
    std::string err;
    if (!exact_step(sys, gens, d, nullptr, &err)) {
      rep.ok = false;
      rep.detail = err;
      return rep;
    }
  }
  rep.ok = true;
  for (const auto& g : gens) rep.coker_gdim += Laurent::v(g.degree);
  return rep;
}

} // namespace soergel
