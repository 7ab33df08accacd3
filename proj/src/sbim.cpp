#include "soergel/sbim.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

#include "soergel/errors.hpp"

namespace soergel {

namespace {

bool all_zero(const std::vector<Poly>& v) {
  for (const auto& p : v)
    if (!p.is_zero()) return false;
  return true;
}

// right multiplication of a left-coordinate vector over the length-k prefix
// of expr: peel the last slot with the invariant split f = P + Q alpha_s/2
std::vector<Poly> act_rec(const Realization& rz, const Word& expr, int k,
                          const std::vector<Poly>& v, const Poly& f) {
  if (f.is_zero() || all_zero(v))
    return std::vector<Poly>(v.size(), Poly(rz.field, rz.dim));
  if (k == 0) return {v[0] * f};
  const int s = expr[static_cast<size_t>(k) - 1];
  const int half = 1 << (k - 1);
  const Poly half_alpha = rz.root_poly(s) * Scalar(rz.field, mpq_class(1, 2));
  const auto pq = rz.split(s, f);
  const auto pq1 = rz.split(s, half_alpha * f);
  const std::vector<Poly> v0(v.begin(), v.begin() + half), v1(v.begin() + half, v.end());
  const auto o00 = act_rec(rz, expr, k - 1, v0, pq.first);
  const auto o01 = act_rec(rz, expr, k - 1, v1, pq1.first);
  const auto o10 = act_rec(rz, expr, k - 1, v0, pq.second);
  const auto o11 = act_rec(rz, expr, k - 1, v1, pq1.second);
  std::vector<Poly> out;
  out.reserve(v.size());
  for (int i = 0; i < half; ++i) out.push_back(o00[i] + o01[i]);
  for (int i = 0; i < half; ++i) out.push_back(o10[i] + o11[i]);
  return out;
}

int rev_bits(int mask, int k) {
  int r = 0;
  for (int i = 0; i < k; ++i)
    if (mask & (1 << i)) r |= 1 << (k - 1 - i);
  return r;
}

} // namespace

std::vector<Poly> BSBimodule::act(const std::vector<Poly>& v, const Poly& f) const {
  check(static_cast<int>(v.size()) == rank, "act: vector length != rank");
  return act_rec(*rz, expr, static_cast<int>(expr.size()), v, f);
}

PolyMat BSBimodule::action_matrix(const Poly& f) const {
  PolyMat m(rz->field, rz->dim, rank, rank);
  std::vector<Poly> e(rank, Poly(rz->field, rz->dim));
  for (int j = 0; j < rank; ++j) {
    e[j] = Poly::constant(rz->field, rz->dim, Scalar(rz->field, 1));
    const auto w = act(e, f);
    for (int i = 0; i < rank; ++i) m.at(i, j) = w[i];
    e[j] = Poly(rz->field, rz->dim);
  }
  return m;
}

BSBimodule BSBimodule::shifted(int n) const {
  BSBimodule b = *this;
  b.shift += n;
  for (auto& d : b.deg) d -= n;
  return b;
}

Laurent BSBimodule::gdim_left() const {
  Laurent l;
  for (int d : deg) l = l + Laurent::v(d);
  return l;
}

BSBimodule bs_build(const Realization& rz, const Word& expr, int shift) {
  const int k = static_cast<int>(expr.size());
  check(k <= 16, "bs_build: expression too long");
  for (int s : expr) check(s >= 0 && s < rz.W->rank(), "bs_build: letter out of range");
  BSBimodule b;
  b.rz = &rz;
  b.expr = expr;
  b.shift = shift;
  b.rank = 1 << k;
  b.deg.resize(b.rank);
  for (int mask = 0; mask < b.rank; ++mask)
    b.deg[mask] = 2 * std::popcount(static_cast<unsigned>(mask)) - k - shift;
  b.rho.reserve(rz.dim);
  for (int j = 0; j < rz.dim; ++j)
    b.rho.push_back(b.action_matrix(Poly::variable(rz.field, rz.dim, j)));
  return b;
}

BSBimodule tensor_bim(const BSBimodule& a, const BSBimodule& b) {
  check(a.rz == b.rz, "tensor_bim: different realizations");
  Word w = a.expr;
  w.insert(w.end(), b.expr.begin(), b.expr.end());
  return bs_build(*a.rz, w, a.shift + b.shift);
}

int BimSum::rank() const {
  int r = 0;
  for (const auto& p : parts) r += p.rank;
  return r;
}

std::vector<int> BimSum::degs() const {
  std::vector<int> d;
  for (const auto& p : parts) d.insert(d.end(), p.deg.begin(), p.deg.end());
  return d;
}

std::vector<int> BimSum::offsets() const {
  std::vector<int> o;
  int at = 0;
  for (const auto& p : parts) {
    o.push_back(at);
    at += p.rank;
  }
  return o;
}

PolyMat BimSum::action_matrix(const Poly& f) const {
  check(rz != nullptr && !parts.empty(), "BimSum: empty");
  const int n = rank();
  PolyMat m(rz->field, rz->dim, n, n);
  int at = 0;
  for (const auto& p : parts) {
    const PolyMat blk = p.action_matrix(f);
    for (int i = 0; i < p.rank; ++i)
      for (int j = 0; j < p.rank; ++j) m.at(at + i, at + j) = blk.at(i, j);
    at += p.rank;
  }
  return m;
}

BimSum BimSum::shifted(int n) const {
  BimSum s = *this;
  for (auto& p : s.parts) p = p.shifted(n);
  return s;
}

Laurent BimSum::gdim_left() const {
  Laurent l;
  for (const auto& p : parts) l = l + p.gdim_left();
  return l;
}

DotMaps dot_maps(const Realization& rz, int s) {
  check(rz.field.characteristic() != 2, "dot_maps: characteristic 2");
  DotMaps dm;
  dm.Bs = bs_build(rz, Word{s});
  const Poly one = Poly::constant(rz.field, rz.dim, Scalar(rz.field, 1));
  const Poly ha = rz.root_poly(s) * Scalar(rz.field, mpq_class(1, 2));
  dm.mult = PolyMat(rz.field, rz.dim, 1, 2);
  dm.mult.at(0, 0) = one;
  dm.mult.at(0, 1) = ha;
  dm.comult = PolyMat(rz.field, rz.dim, 2, 1);
  dm.comult.at(0, 0) = ha;
  dm.comult.at(1, 0) = one;
  dm.barbell = dm.comult * dm.mult;
  PolyMat mc = dm.mult * dm.comult;
  check(mc.rows == 1 && mc.at(0, 0) == rz.root_poly(s), "dot_maps: mult o comult != alpha_s");
  return dm;
}

bool is_bim_map(const BimSum& M, const BimSum& N, int d, const PolyMat& A) {
  const auto md = M.degs(), nd = N.degs();
  if (A.rows != static_cast<int>(nd.size()) || A.cols != static_cast<int>(md.size())) return false;
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      const Poly& p = A.at(i, j);
      if (p.is_zero()) continue;
      if (!p.is_homogeneous()) return false;
      if (p.homogeneous_degree() != d + md[j] - nd[i]) return false;
    }
  const Field f = M.rz->field;
  for (int t = 0; t < M.rz->dim; ++t) {
    const Poly xt = Poly::variable(f, M.rz->dim, t);
    if (!(A * M.action_matrix(xt) == N.action_matrix(xt) * A)) return false;
  }
  return true;
}

Laurent SoergelModule::gdim() const {
  Laurent l;
  for (int d : deg) l = l + Laurent::v(d);
  return l;
}

SoergelModule SoergelModule::shifted(int n) const {
  SoergelModule m = *this;
  for (auto& d : m.deg) d -= n;
  for (auto& [w, sh] : m.prov) sh += n;
  return m;
}

void SoergelModule::validate() const {
  const int n = dim();
  for (const auto& a : act) {
    check(a.rows == n && a.cols == n, "SoergelModule: action shape");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        check(a.at(i, j).is_zero() || deg[i] == deg[j] + 2, "SoergelModule: action grading");
  }
  for (size_t i = 0; i < act.size(); ++i)
    for (size_t j = i + 1; j < act.size(); ++j)
      check(act[i] * act[j] == act[j] * act[i], "SoergelModule: actions do not commute");
}

SoergelModule SoergelModule::direct_sum(const SoergelModule& a, const SoergelModule& b) {
  check(a.field == b.field && a.left_side == b.left_side, "direct_sum: incompatible modules");
  check(a.act.size() == b.act.size(), "direct_sum: variable count");
  SoergelModule m;
  m.field = a.field;
  m.left_side = a.left_side;
  m.deg = a.deg;
  m.deg.insert(m.deg.end(), b.deg.begin(), b.deg.end());
  const int na = a.dim(), nb = b.dim();
  for (size_t t = 0; t < a.act.size(); ++t) {
    ScalarMat blk(a.field, na + nb, na + nb);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < na; ++j) blk.at(i, j) = a.act[t].at(i, j);
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j) blk.at(na + i, na + j) = b.act[t].at(i, j);
    m.act.push_back(std::move(blk));
  }
  m.prov = a.prov;
  m.prov.insert(m.prov.end(), b.prov.begin(), b.prov.end());
  return m;
}

SoergelModule reduce_right(const BSBimodule& B) {
  SoergelModule m;
  m.field = B.rz->field;
  m.left_side = false;
  m.deg = B.deg;
  for (const auto& r : B.rho) m.act.push_back(r.const_part());
  m.prov = {{B.expr, B.shift}};
  return m;
}

SoergelModule reduce_left(const BSBimodule& B) {
  const int k = static_cast<int>(B.expr.size());
  Word rev(B.expr.rbegin(), B.expr.rend());
  const BSBimodule Brev = bs_build(*B.rz, rev, B.shift);
  SoergelModule m;
  m.field = B.rz->field;
  m.left_side = true;
  m.deg = B.deg;
  for (const auto& r : Brev.rho) {
    ScalarMat a(m.field, B.rank, B.rank);
    for (int i = 0; i < B.rank; ++i)
      for (int j = 0; j < B.rank; ++j)
        a.at(i, j) = r.at(rev_bits(i, k), rev_bits(j, k)).constant_term();
    m.act.push_back(std::move(a));
  }
  m.prov = {{B.expr, B.shift}};
  return m;
}

SoergelModule reduce_right(const BimSum& B) {
  check(!B.parts.empty(), "reduce_right: empty sum");
  SoergelModule m = reduce_right(B.parts[0]);
  for (size_t i = 1; i < B.parts.size(); ++i)
    m = SoergelModule::direct_sum(m, reduce_right(B.parts[i]));
  return m;
}

SoergelModule reduce_left(const BimSum& B) {
  check(!B.parts.empty(), "reduce_left: empty sum");
  SoergelModule m = reduce_left(B.parts[0]);
  for (size_t i = 1; i < B.parts.size(); ++i)
    m = SoergelModule::direct_sum(m, reduce_left(B.parts[i]));
  return m;
}

std::vector<ScalarMat> smod_hom_basis(const SoergelModule& M, const SoergelModule& N, int d) {
  check(M.field == N.field, "smod_hom_basis: field mismatch");
  check(M.left_side == N.left_side, "smod_hom_basis: side mismatch");
  check(M.act.size() == N.act.size(), "smod_hom_basis: variable count");
  const int nm = M.dim(), nn = N.dim();
  // unknown cells (a in N, b in M) with deg N_a = deg M_b + d
  std::vector<int> cell(static_cast<size_t>(nn) * nm, -1);
  std::vector<std::pair<int, int>> cells;
  for (int a = 0; a < nn; ++a)
    for (int b = 0; b < nm; ++b)
      if (N.deg[a] == M.deg[b] + d) {
        cell[static_cast<size_t>(a) * nm + b] = static_cast<int>(cells.size());
        cells.emplace_back(a, b);
      }
  if (cells.empty()) return {};
  std::vector<SpRow> rows;
  for (size_t t = 0; t < M.act.size(); ++t) {
    for (int a = 0; a < nn; ++a)
      for (int b = 0; b < nm; ++b) {
        if (N.deg[a] != M.deg[b] + d + 2) continue;
        std::map<int, Scalar> row;
        for (int c = 0; c < nm; ++c) {
          const int u = cell[static_cast<size_t>(a) * nm + c];
          if (u >= 0 && !M.act[t].at(c, b).is_zero()) {
            auto [it, fresh] = row.try_emplace(u, M.act[t].at(c, b));
            if (!fresh) it->second += M.act[t].at(c, b);
          }
        }
        for (int c = 0; c < nn; ++c) {
          const int u = cell[static_cast<size_t>(c) * nm + b];
          if (u >= 0 && !N.act[t].at(a, c).is_zero()) {
            auto [it, fresh] = row.try_emplace(u, -N.act[t].at(a, c));
            if (!fresh) it->second -= N.act[t].at(a, c);
          }
        }
        SpRow r;
        for (auto& [u, s] : row)
          if (!s.is_zero()) r.emplace_back(u, s);
        if (!r.empty()) rows.push_back(std::move(r));
      }
  }
  const auto ker = sp_kernel(M.field, static_cast<int>(cells.size()), rows);
  std::vector<ScalarMat> out;
  for (const auto& k : ker) {
    ScalarMat m(M.field, nn, nm);
    for (const auto& [u, s] : k) m.at(cells[u].first, cells[u].second) = s;
    out.push_back(std::move(m));
  }
  return out;
}

std::map<int, int> smod_hom_dims(const SoergelModule& M, const SoergelModule& N) {
  std::map<int, int> dims;
  if (M.dim() == 0 || N.dim() == 0) return dims;
  const int mlo = *std::min_element(M.deg.begin(), M.deg.end());
  const int mhi = *std::max_element(M.deg.begin(), M.deg.end());
  const int nlo = *std::min_element(N.deg.begin(), N.deg.end());
  const int nhi = *std::max_element(N.deg.begin(), N.deg.end());
  for (int d = nlo - mhi; d <= nhi - mlo; ++d) {
    const int k = static_cast<int>(smod_hom_basis(M, N, d).size());
    if (k) dims[d] = k;
  }
  return dims;
}

Laurent smod_gdim_hom(const SoergelModule& M, const SoergelModule& N) {
  Laurent l;
  for (const auto& [d, k] : smod_hom_dims(M, N)) l = l + Laurent::v(d, k);
  return l;
}

HeckeElt character(const Hecke& H, const BSBimodule& B) {
  return H.kl_product(B.expr) * Laurent::v(B.shift);
}

std::string decomposition_str(const CoxeterSystem& W, const Decomposition& d) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [key, mult] : d) {
    if (mult == 0) continue;
    if (!first) os << ", ";
    first = false;
    os << "(" << CoxeterSystem::word_str(W.canonical_word(key.first)) << ", " << key.second << ")";
    if (mult > 1) os << " x" << mult;
  }
  os << "}";
  return os.str();
}

} // namespace soergel
