#include <algorithm>
#include <climits>
#include <random>
#include <sstream>

#include "json.hpp"
#include "soergel/errors.hpp"
#include "soergel/mixed.hpp"

namespace soergel {

namespace {

bool is_module_map(const SoergelModule& M, const SoergelModule& N, const ScalarMat& A) {
  if (A.rows != N.dim() || A.cols != M.dim()) return false;
  for (int a = 0; a < A.rows; ++a)
    for (int b = 0; b < A.cols; ++b)
      if (!A.at(a, b).is_zero() && N.deg[a] != M.deg[b]) return false;
  for (size_t t = 0; t < M.act.size(); ++t)
    if (A * M.act[t] != N.act[t] * A) return false;
  return true;
}

ScalarMat block_diag(const Field& f, const ScalarMat& a, const ScalarMat& b) {
  ScalarMat m(f, a.rows + b.rows, a.cols + b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) m.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows; ++i)
    for (int j = 0; j < b.cols; ++j) m.at(a.rows + i, a.cols + j) = b.at(i, j);
  return m;
}

// A (x) I pattern with the second factor fast: entry ((u,a),(u,b)) = A(a,b)
ScalarMat kron_id(const Field& f, int copies, const ScalarMat& A) {
  ScalarMat m(f, copies * A.rows, copies * A.cols);
  for (int u = 0; u < copies; ++u)
    for (int a = 0; a < A.rows; ++a)
      for (int b = 0; b < A.cols; ++b) m.at(u * A.rows + a, u * A.cols + b) = A.at(a, b);
  return m;
}

ScalarMat poly_on_module(const SoergelModule& M, const Poly& p) {
  const int n = M.dim();
  ScalarMat out(M.field, n, n);
  for (const auto& [mono, c] : p.terms()) {
    ScalarMat t = ScalarMat::identity(M.field, n);
    for (size_t j = 0; j < mono.size(); ++j)
      for (int e = 0; e < mono[j]; ++e) t = t * M.act[j];
    out = out + t * c;
  }
  return out;
}

// entry ((u',a'),(u,a)) = rho_M(P(u',u))(a',a): the bimodule map P with its
// polynomial entries pushed through the residual action of M
ScalarMat kron_eval(const PolyMat& P, const SoergelModule& M) {
  const int n = M.dim();
  ScalarMat m(M.field, P.rows * n, P.cols * n);
  for (int u2 = 0; u2 < P.rows; ++u2)
    for (int u = 0; u < P.cols; ++u) {
      const Poly& p = P.at(u2, u);
      if (p.terms().empty()) continue;
      const ScalarMat blk = poly_on_module(M, p);
      for (int a2 = 0; a2 < n; ++a2)
        for (int a = 0; a < n; ++a)
          if (!blk.at(a2, a).is_zero()) m.at(u2 * n + a2, u * n + a) = blk.at(a2, a);
    }
  return m;
}

void acc(std::map<int, Scalar>& row, int key, const Scalar& v) {
  auto [it, fresh] = row.try_emplace(key, v);
  if (!fresh) it->second += v;
}

void degree_span(const MixComplex& F, int& dmin, int& dmax) {
  dmin = INT_MAX;
  dmax = INT_MIN;
  for (const auto& t : F.terms)
    for (int d : t.deg) {
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
}

} // namespace

SoergelModule zero_smod(const Realization& rz) {
  SoergelModule m;
  m.field = rz.field;
  m.left_side = false;
  m.act.assign(static_cast<size_t>(rz.dim), ScalarMat(rz.field, 0, 0));
  return m;
}

bool MixComplex::is_zero() const {
  for (const auto& t : terms)
    if (t.dim() > 0) return false;
  return true;
}

SoergelModule MixComplex::term(int i) const {
  check(rz != nullptr, "MixComplex: no realization");
  if (i < lo || i > hi()) return zero_smod(*rz);
  return terms[static_cast<size_t>(i - lo)];
}

ScalarMat MixComplex::diff(int i) const {
  if (i >= lo && i < hi()) return diffs[static_cast<size_t>(i - lo)];
  return ScalarMat(rz->field, term(i + 1).dim(), term(i).dim());
}

void MixComplex::validate() const {
  check(rz != nullptr, "MixComplex: no realization");
  check(diffs.size() == (terms.empty() ? 0 : terms.size() - 1), "MixComplex: differential count");
  for (const auto& t : terms) {
    check(t.field == rz->field, "MixComplex: term field mismatch");
    check(t.act.size() == static_cast<size_t>(rz->dim), "MixComplex: term variable count");
    check(terms.empty() || t.left_side == terms[0].left_side, "MixComplex: mixed sides");
    t.validate();
  }
  for (size_t k = 0; k < diffs.size(); ++k)
    if (!is_module_map(terms[k], terms[k + 1], diffs[k]))
      throw NotChainMap("differential is not a degree-0 module map");
  for (size_t k = 0; k + 1 < diffs.size(); ++k)
    if (!(diffs[k + 1] * diffs[k]).is_zero()) throw NotChainMap("differential does not square to zero");
}

MixComplex MixComplex::shifted_internal(int n) const {
  MixComplex m = *this;
  for (auto& t : m.terms) t = t.shifted(n);
  return m;
}

MixComplex MixComplex::shifted_cohom(int k) const {
  MixComplex m = *this;
  m.lo -= k;
  return m;
}

MixComplex MixComplex::tate(int n) const { return shifted_cohom(n).shifted_internal(-n); }

MixComplex MixComplex::trimmed() const {
  int a = 0, b = static_cast<int>(terms.size());
  while (a < b && terms[static_cast<size_t>(a)].dim() == 0) ++a;
  while (b > a && terms[static_cast<size_t>(b - 1)].dim() == 0) --b;
  MixComplex m;
  m.rz = rz;
  if (a == b) return m;
  m.lo = lo + a;
  m.terms.assign(terms.begin() + a, terms.begin() + b);
  m.diffs.assign(diffs.begin() + a, diffs.begin() + (b - 1));
  return m;
}

MixComplex MixComplex::direct_sum(const MixComplex& a, const MixComplex& b) {
  check(a.rz == b.rz && a.rz != nullptr, "direct_sum: realizations differ");
  if (a.terms.empty()) return b;
  if (b.terms.empty()) return a;
  MixComplex m;
  m.rz = a.rz;
  m.lo = std::min(a.lo, b.lo);
  const int hi = std::max(a.hi(), b.hi());
  for (int i = m.lo; i <= hi; ++i) m.terms.push_back(SoergelModule::direct_sum(a.term(i), b.term(i)));
  for (int i = m.lo; i < hi; ++i) m.diffs.push_back(block_diag(m.rz->field, a.diff(i), b.diff(i)));
  return m;
}

MixComplex shift(const MixComplex& F, ShiftKind kind, int n) {
  switch (kind) {
    case ShiftKind::Internal: return F.shifted_internal(n);
    case ShiftKind::Cohomological: return F.shifted_cohom(n);
    case ShiftKind::Tate: return F.tate(n);
  }
  throw InternalError("shift: bad kind");
}

MixComplex one_term_complex(const Realization& rz, SoergelModule M, int at) {
  MixComplex m;
  m.rz = &rz;
  m.lo = at;
  m.terms.push_back(std::move(M));
  m.validate();
  return m;
}

MixComplex delta_complex(const Realization& rz) {
  return one_term_complex(rz, reduce_right(bs_build(rz, Word{})), 0);
}

ScalarMat ChainMap::at(int i) const {
  auto it = comp.find(i);
  if (it != comp.end()) return it->second;
  return ScalarMat(F.rz->field, G.term(i + k).dim(), F.term(i).dim());
}

void ChainMap::validate() const {
  check(F.rz == G.rz && F.rz != nullptr, "chain map: realizations differ");
  F.validate();
  G.validate();
  int a = F.lo, b = F.hi();
  for (const auto& [i, m] : comp) {
    a = std::min(a, i);
    b = std::max(b, i);
    (void)m;
  }
  for (int i = a; i <= b; ++i)
    if (!is_module_map(F.term(i), G.term(i + k), at(i)))
      throw NotChainMap("component is not a degree-0 module map");
  for (int i = a - 1; i <= b; ++i)
    if (G.diff(i + k) * at(i) != at(i + 1) * F.diff(i))
      throw NotChainMap("components do not commute with the differentials");
}

ChainMap identity_map(const MixComplex& F) {
  ChainMap f;
  f.F = F;
  f.G = F;
  for (int i = F.lo; i <= F.hi(); ++i)
    if (F.term(i).dim() > 0) f.comp[i] = ScalarMat::identity(F.rz->field, F.term(i).dim());
  f.validate();
  return f;
}

ChainMap zero_map(const MixComplex& F, const MixComplex& G) {
  ChainMap f;
  f.F = F;
  f.G = G;
  f.validate();
  return f;
}

namespace {

// assemble the cone terms and differential; sign = -1 gives the right cone
// block (-1)^i f, sign = +1 the left cone, dsign scales the F differential
MixComplex cone_build(const ChainMap& f, bool left) {
  f.validate();
  check(f.k == 0, "cone: map must have no shift");
  const MixComplex &F = f.F, &G = f.G;
  MixComplex C;
  C.rz = F.rz;
  C.lo = std::min(F.lo - 1, G.lo);
  const int hi = std::max(F.hi() - 1, G.hi());
  const Field& fld = F.rz->field;
  for (int i = C.lo; i <= hi; ++i) C.terms.push_back(SoergelModule::direct_sum(F.term(i + 1), G.term(i)));
  for (int i = C.lo; i < hi; ++i) {
    const int rF = F.term(i + 2).dim(), rG = G.term(i + 1).dim();
    const int cF = F.term(i + 1).dim(), cG = G.term(i).dim();
    ScalarMat d(fld, rF + rG, cF + cG);
    const ScalarMat dF = F.diff(i + 1), dG = G.diff(i), fc = f.at(i + 1);
    const Scalar sg(fld, left ? 1 : (((i % 2) + 2) % 2 == 0 ? 1 : -1));
    for (int r = 0; r < rF; ++r)
      for (int c = 0; c < cF; ++c) d.at(r, c) = left ? -dF.at(r, c) : dF.at(r, c);
    for (int r = 0; r < rG; ++r)
      for (int c = 0; c < cF; ++c) d.at(rF + r, c) = sg * fc.at(r, c);
    for (int r = 0; r < rG; ++r)
      for (int c = 0; c < cG; ++c) d.at(rF + r, cF + c) = dG.at(r, c);
    C.diffs.push_back(std::move(d));
  }
  C.validate();
  return C;
}

} // namespace

MixComplex cone(const ChainMap& f) { return cone_build(f, false); }
MixComplex left_cone(const ChainMap& f) { return cone_build(f, true); }

Triangle standard_triangle(const ChainMap& f) {
  Triangle t;
  t.A = f.F;
  t.B = f.G;
  t.C = cone(f);
  t.f = f;
  const Field& fld = f.F.rz->field;
  t.alpha.F = t.B;
  t.alpha.G = t.C;
  for (int i = t.B.lo; i <= t.B.hi(); ++i) {
    const int nF = t.A.term(i + 1).dim(), nG = t.B.term(i).dim();
    if (nG == 0) continue;
    ScalarMat m(fld, nF + nG, nG);
    for (int r = 0; r < nG; ++r) m.at(nF + r, r) = Scalar(fld, 1);
    t.alpha.comp[i] = std::move(m);
  }
  t.alpha.validate();
  t.beta.F = t.C;
  t.beta.G = t.A;
  t.beta.k = 1;
  for (int i = t.C.lo; i <= t.C.hi(); ++i) {
    const int nF = t.A.term(i + 1).dim(), nG = t.B.term(i).dim();
    if (nF == 0) continue;
    ScalarMat m(fld, nF, nF + nG);
    for (int r = 0; r < nF; ++r) m.at(r, r) = Scalar(fld, 1);
    t.beta.comp[i] = std::move(m);
  }
  t.beta.validate();
  return t;
}

MixComplex left_shift(const MixComplex& F) {
  MixComplex m = F.shifted_cohom(1);
  for (auto& d : m.diffs) d = -d;
  m.validate();
  return m;
}

ChainMap sigma_convention_iso(const MixComplex& F) {
  ChainMap f;
  f.F = left_shift(F);
  f.G = F.shifted_cohom(1);
  for (int i = f.F.lo; i <= f.F.hi(); ++i) {
    const int n = f.F.term(i).dim();
    if (n == 0) continue;
    const long s = ((i % 2) + 2) % 2 == 0 ? 1 : -1;
    f.comp[i] = ScalarMat::identity(F.rz->field, n) * Scalar(F.rz->field, s);
  }
  f.validate();
  return f;
}

ChainMap cone_convention_iso(const ChainMap& g) {
  ChainMap f;
  f.F = left_cone(g);
  f.G = cone(g);
  const Field& fld = g.F.rz->field;
  for (int i = f.F.lo; i <= f.F.hi(); ++i) {
    const int nF = g.F.term(i + 1).dim(), nG = g.G.term(i).dim();
    if (nF + nG == 0) continue;
    ScalarMat m(fld, nF + nG, nF + nG);
    const Scalar s(fld, ((i % 2) + 2) % 2 == 0 ? 1 : -1);
    for (int r = 0; r < nF; ++r) m.at(r, r) = s;
    for (int r = 0; r < nG; ++r) m.at(nF + r, nF + r) = Scalar(fld, 1);
    f.comp[i] = std::move(m);
  }
  f.validate();
  return f;
}

KbHom kb_hom(const MixComplex& F, const MixComplex& G, int n, int m) {
  check(F.rz == G.rz && F.rz != nullptr, "kb_hom: realizations differ");
  const Field& fld = F.rz->field;
  const MixComplex T = G.tate(n).shifted_cohom(m);
  KbHom out;
  const int vlo = std::max(F.lo, T.lo), vhi = std::min(F.hi(), T.hi());
  if (vlo > vhi) return out;
  std::vector<std::vector<ScalarMat>> basis;
  std::vector<int> off;
  int nv = 0;
  for (int i = vlo; i <= vhi; ++i) {
    basis.push_back(smod_hom_basis(F.term(i), T.term(i), 0));
    off.push_back(nv);
    nv += static_cast<int>(basis.back().size());
  }
  if (nv == 0) return out;

  // chain condition d_T . phi^i = phi^{i+1} . d_F, one equation block per i
  std::vector<SpRow> rows;
  for (int i = vlo - 1; i <= vhi; ++i) {
    const int rT = T.term(i + 1).dim(), cF = F.term(i).dim();
    if (rT == 0 || cF == 0) continue;
    std::vector<std::map<int, Scalar>> eq(static_cast<size_t>(rT) * cF);
    if (i >= vlo) {
      const ScalarMat dT = T.diff(i);
      for (size_t u = 0; u < basis[static_cast<size_t>(i - vlo)].size(); ++u) {
        const ScalarMat c = dT * basis[static_cast<size_t>(i - vlo)][u];
        for (int a = 0; a < rT; ++a)
          for (int b = 0; b < cF; ++b)
            if (!c.at(a, b).is_zero())
              acc(eq[static_cast<size_t>(a) * cF + b],
                  off[static_cast<size_t>(i - vlo)] + static_cast<int>(u), c.at(a, b));
      }
    }
    if (i + 1 >= vlo && i + 1 <= vhi) {
      const ScalarMat dF = F.diff(i);
      for (size_t u = 0; u < basis[static_cast<size_t>(i + 1 - vlo)].size(); ++u) {
        const ScalarMat c = basis[static_cast<size_t>(i + 1 - vlo)][u] * dF;
        for (int a = 0; a < rT; ++a)
          for (int b = 0; b < cF; ++b)
            if (!c.at(a, b).is_zero())
              acc(eq[static_cast<size_t>(a) * cF + b],
                  off[static_cast<size_t>(i + 1 - vlo)] + static_cast<int>(u), -c.at(a, b));
      }
    }
    for (auto& cell : eq) {
      SpRow r;
      for (auto& [u, s] : cell)
        if (!s.is_zero()) r.emplace_back(u, s);
      if (!r.empty()) rows.push_back(std::move(r));
    }
  }
  const auto ker = sp_kernel(fld, nv, rows);
  for (const auto& kv : ker) {
    Components c;
    for (const auto& [u, s] : kv) {
      int i = vlo;
      while (i < vhi && off[static_cast<size_t>(i - vlo + 1)] <= u) ++i;
      const ScalarMat& E = basis[static_cast<size_t>(i - vlo)][static_cast<size_t>(u - off[static_cast<size_t>(i - vlo)])];
      auto it = c.find(i);
      if (it == c.end())
        c.emplace(i, E * s);
      else
        it->second = it->second + E * s;
    }
    out.chain_basis.push_back(std::move(c));
  }
  const int z = static_cast<int>(out.chain_basis.size());
  if (z == 0) return out;

  // homotopy image rank inside the component-entry space
  std::vector<int> eoff(static_cast<size_t>(vhi - vlo + 1), 0);
  int ne = 0;
  for (int i = vlo; i <= vhi; ++i) {
    eoff[static_cast<size_t>(i - vlo)] = ne;
    ne += T.term(i).dim() * F.term(i).dim();
  }
  std::vector<SpRow> hrows;
  for (int i = std::max(F.lo, T.lo + 1); i <= std::min(F.hi(), T.hi() + 1); ++i) {
    for (const ScalarMat& E : smod_hom_basis(F.term(i), T.term(i - 1), 0)) {
      std::map<int, Scalar> img;
      if (i >= vlo && i <= vhi) {
        const ScalarMat c = T.diff(i - 1) * E; // component at i
        const int cF = F.term(i).dim();
        for (int a = 0; a < c.rows; ++a)
          for (int b = 0; b < cF; ++b)
            if (!c.at(a, b).is_zero())
              acc(img, eoff[static_cast<size_t>(i - vlo)] + a * cF + b, c.at(a, b));
      }
      if (i - 1 >= vlo && i - 1 <= vhi) {
        const ScalarMat c = E * F.diff(i - 1); // component at i - 1
        const int cF = F.term(i - 1).dim();
        for (int a = 0; a < c.rows; ++a)
          for (int b = 0; b < cF; ++b)
            if (!c.at(a, b).is_zero())
              acc(img, eoff[static_cast<size_t>(i - 1 - vlo)] + a * cF + b, c.at(a, b));
      }
      SpRow r;
      for (auto& [u, s] : img)
        if (!s.is_zero()) r.emplace_back(u, s);
      if (!r.empty()) hrows.push_back(std::move(r));
    }
  }
  out.dim = z - sp_rank(fld, ne, hrows);
  return out;
}

std::map<std::pair<int, int>, int> kb_hom_dims(const MixComplex& F0, const MixComplex& G0) {
  const MixComplex F = F0.trimmed(), G = G0.trimmed();
  std::map<std::pair<int, int>, int> out;
  if (F.terms.empty() || G.terms.empty()) return out;
  int minF, maxF, minG, maxG;
  degree_span(F, minF, maxF);
  degree_span(G, minG, maxG);
  for (int n = minF - maxG; n <= maxF - minG; ++n)
    for (int m = G.lo - n - F.hi(); m <= G.hi() - n - F.lo; ++m) {
      const int d = kb_hom(F, G, n, m).dim;
      if (d != 0) out[{n, m}] = d;
    }
  return out;
}

std::map<std::pair<int, int>, int> kb_hom_dims(const MixComplex& F0, const MixComplex& G0, int n_lo,
                                               int n_hi, int m_lo, int m_hi) {
  const MixComplex F = F0.trimmed(), G = G0.trimmed();
  std::map<std::pair<int, int>, int> out;
  if (F.terms.empty() || G.terms.empty()) return out;
  int minF, maxF, minG, maxG;
  degree_span(F, minF, maxF);
  degree_span(G, minG, maxG);
  for (int n = std::max(n_lo, minF - maxG); n <= std::min(n_hi, maxF - minG); ++n)
    for (int m = std::max(m_lo, G.lo - n - F.hi()); m <= std::min(m_hi, G.hi() - n - F.lo); ++m) {
      const int d = kb_hom(F, G, n, m).dim;
      if (d != 0) out[{n, m}] = d;
    }
  return out;
}

namespace {

struct Rest {
  SoergelModule mod;
  ScalarMat incl, proj; // mod -> M, M -> mod
};

Rest rest_of(const Realization& rz, const SoergelModule& M, const std::vector<SplitPart>& S,
             size_t skip) {
  Rest r{zero_smod(rz), ScalarMat(rz.field, M.dim(), 0), ScalarMat(rz.field, 0, M.dim())};
  for (size_t c = 0; c < S.size(); ++c) {
    if (c == skip) continue;
    r.mod = SoergelModule::direct_sum(r.mod, S[c].part);
    ScalarMat incl(rz.field, M.dim(), r.incl.cols + S[c].incl.cols);
    for (int i = 0; i < M.dim(); ++i) {
      for (int j = 0; j < r.incl.cols; ++j) incl.at(i, j) = r.incl.at(i, j);
      for (int j = 0; j < S[c].incl.cols; ++j) incl.at(i, r.incl.cols + j) = S[c].incl.at(i, j);
    }
    r.incl = std::move(incl);
    ScalarMat proj(rz.field, r.proj.rows + S[c].proj.rows, M.dim());
    for (int j = 0; j < M.dim(); ++j) {
      for (int i = 0; i < r.proj.rows; ++i) proj.at(i, j) = r.proj.at(i, j);
      for (int i = 0; i < S[c].proj.rows; ++i) proj.at(r.proj.rows + i, j) = S[c].proj.at(i, j);
    }
    r.proj = std::move(proj);
  }
  return r;
}

} // namespace

MixComplex minimal_model(const MixComplex& F, DecompositionEngine& eng) {
  MixComplex M = F.trimmed();
  M.validate();
  for (;;) {
    bool changed = false;
    for (int i = M.lo; i < M.hi() && !changed; ++i) {
      const size_t ia = static_cast<size_t>(i - M.lo);
      if (M.terms[ia].dim() == 0 || M.terms[ia + 1].dim() == 0) continue;
      const auto S = eng.split(M.terms[ia]);
      const auto T = eng.split(M.terms[ia + 1]);
      const ScalarMat d = M.diffs[ia];
      for (size_t a = 0; a < S.size() && !changed; ++a)
        for (size_t b = 0; b < T.size() && !changed; ++b) {
          if (S[a].part.dim() != T[b].part.dim()) continue;
          const auto binv = inverse(T[b].proj * d * S[a].incl);
          if (!binv) continue;
          const Rest rs = rest_of(*M.rz, M.terms[ia], S, a);
          const Rest rt = rest_of(*M.rz, M.terms[ia + 1], T, b);
          const ScalarMat nd = rt.proj * d * rs.incl - (rt.proj * d * S[a].incl) * *binv *
                                                           (T[b].proj * d * rs.incl);
          if (i > M.lo) M.diffs[ia - 1] = rs.proj * M.diffs[ia - 1];
          if (i + 1 < M.hi()) M.diffs[ia + 1] = M.diffs[ia + 1] * rt.incl;
          M.terms[ia] = rs.mod;
          M.terms[ia + 1] = rt.mod;
          M.diffs[ia] = nd;
          changed = true;
        }
    }
    if (!changed) break;
  }
  M = M.trimmed();
  M.validate();
  return M;
}

void BimComplex::validate() const {
  check(rz != nullptr, "BimComplex: no realization");
  check(diffs.size() == (terms.empty() ? 0 : terms.size() - 1), "BimComplex: differential count");
  for (size_t k = 0; k < diffs.size(); ++k)
    if (!is_bim_map(terms[k], terms[k + 1], 0, diffs[k]))
      throw NotChainMap("bimodule differential is not a degree-0 map");
  for (size_t k = 0; k + 1 < diffs.size(); ++k)
    if (!(diffs[k + 1] * diffs[k]).is_zero())
      throw NotChainMap("bimodule differential does not square to zero");
}

BimComplex delta_gen(const Realization& rz, int s) {
  const DotMaps dm = dot_maps(rz, s);
  BimComplex c;
  c.rz = &rz;
  c.lo = 0;
  c.terms = {BimSum(dm.Bs), BimSum(bs_build(rz, Word{}, 1))};
  c.diffs = {dm.mult};
  c.validate();
  return c;
}

BimComplex nabla_gen(const Realization& rz, int s) {
  const DotMaps dm = dot_maps(rz, s);
  BimComplex c;
  c.rz = &rz;
  c.lo = -1;
  c.terms = {BimSum(bs_build(rz, Word{}, -1)), BimSum(dm.Bs)};
  c.diffs = {dm.comult};
  c.validate();
  return c;
}

SoergelModule module_tensor(const SoergelModule& M, const BimSum& S) {
  check(S.rz != nullptr, "module_tensor: no realization");
  check(M.field == S.rz->field, "module_tensor: field mismatch");
  check(!M.left_side, "module_tensor: needs a right module");
  check(M.act.size() == static_cast<size_t>(S.rz->dim), "module_tensor: variable count");
  const auto sdeg = S.degs();
  SoergelModule out;
  out.field = M.field;
  out.left_side = false;
  for (int d : sdeg)
    for (int md : M.deg) out.deg.push_back(d + md);
  for (int t = 0; t < S.rz->dim; ++t)
    out.act.push_back(kron_eval(S.action_matrix(Poly::variable(M.field, S.rz->dim, t)), M));
  return out;
}

MixComplex convolve(const MixComplex& F0, const BimComplex& G) {
  check(F0.rz != nullptr && F0.rz == G.rz, "convolve: realizations differ");
  G.validate();
  MixComplex F = F0.trimmed();
  F.validate();
  MixComplex H;
  H.rz = F.rz;
  if (F.terms.empty() || G.terms.empty()) return H;
  const Field& fld = F.rz->field;
  H.lo = F.lo + G.lo;
  const int hhi = F.hi() + G.hi();
  auto lo_i = [&](int n) { return std::max(F.lo, n - G.hi()); };
  auto hi_i = [&](int n) { return std::min(F.hi(), n - G.lo); };
  std::map<std::pair<int, int>, SoergelModule> piece;
  for (int n = H.lo; n <= hhi; ++n)
    for (int i = lo_i(n); i <= hi_i(n); ++i)
      piece.emplace(std::make_pair(i, n - i),
                    module_tensor(F.term(i), G.terms[static_cast<size_t>(n - i - G.lo)]));
  for (int n = H.lo; n <= hhi; ++n) {
    SoergelModule t = zero_smod(*F.rz);
    for (int i = lo_i(n); i <= hi_i(n); ++i) t = SoergelModule::direct_sum(t, piece.at({i, n - i}));
    H.terms.push_back(std::move(t));
  }
  for (int n = H.lo; n < hhi; ++n) {
    std::map<int, int> roff, coff;
    int rows = 0, cols = 0;
    for (int i = lo_i(n + 1); i <= hi_i(n + 1); ++i) {
      roff[i] = rows;
      rows += piece.at({i, n + 1 - i}).dim();
    }
    for (int i = lo_i(n); i <= hi_i(n); ++i) {
      coff[i] = cols;
      cols += piece.at({i, n - i}).dim();
    }
    ScalarMat d(fld, rows, cols);
    auto put = [&](int r0, int c0, const ScalarMat& blk, const Scalar& s) {
      for (int r = 0; r < blk.rows; ++r)
        for (int c = 0; c < blk.cols; ++c)
          if (!blk.at(r, c).is_zero()) d.at(r0 + r, c0 + c) = blk.at(r, c) * s;
    };
    for (int i = lo_i(n); i <= hi_i(n); ++i) {
      const int j = n - i;
      if (roff.count(i + 1)) {
        const int rank = G.terms[static_cast<size_t>(j - G.lo)].rank();
        put(roff.at(i + 1), coff.at(i), kron_id(fld, rank, F.diff(i)), Scalar(fld, 1));
      }
      if (roff.count(i)) {
        const Scalar s(fld, ((i % 2) + 2) % 2 == 0 ? 1 : -1);
        put(roff.at(i), coff.at(i),
            kron_eval(G.diffs[static_cast<size_t>(j - G.lo)], F.term(i)), s);
      }
    }
    H.diffs.push_back(std::move(d));
  }
  H.validate();
  return H;
}

MixComplex std_delta_word(const Realization& rz, const Word& word) {
  MixComplex F = delta_complex(rz);
  for (int s : word) F = convolve(F, delta_gen(rz, s));
  return F;
}

MixComplex std_nabla_word(const Realization& rz, const Word& word) {
  MixComplex F = delta_complex(rz);
  for (int s : word) F = convolve(F, nabla_gen(rz, s));
  return F;
}

MixComplex std_delta(const Realization& rz, int w) {
  return std_delta_word(rz, rz.W->canonical_word(w));
}

MixComplex std_nabla(const Realization& rz, int w) {
  return std_nabla_word(rz, rz.W->canonical_word(w));
}

MixComplex tilting_gen(const Realization& rz, int s) {
  const DotMaps dm = dot_maps(rz, s);
  MixComplex T;
  T.rz = &rz;
  T.lo = -1;
  T.terms = {reduce_right(bs_build(rz, Word{}, -1)), reduce_right(dm.Bs),
             reduce_right(bs_build(rz, Word{}, 1))};
  T.diffs = {dm.comult.const_part(), dm.mult.const_part()};
  T.validate();
  return T;
}

HeckeElt k0_class(DecompositionEngine& eng, const MixComplex& F0) {
  const MixComplex F = F0.trimmed();
  const Hecke& H = eng.hecke();
  HeckeElt out;
  for (int i = F.lo; i <= F.hi(); ++i) {
    const SoergelModule& M = F.terms[static_cast<size_t>(i - F.lo)];
    if (M.dim() == 0) continue;
    int covered = 0;
    for (const auto& [w, sh] : M.prov) covered += 1 << w.size();
    HeckeElt c;
    if (!M.prov.empty() && covered == M.dim()) {
      for (const auto& [w, sh] : M.prov) c = c + H.kl_product(w) * Laurent::v(sh);
    } else {
      c = eng.hecke_character(eng.decompose(M));
    }
    out = ((i % 2) + 2) % 2 == 0 ? out + c : out - c;
  }
  return out;
}

namespace {

std::pair<bool, Decomposition> delta_filtration_core(DecompositionEngine& eng,
                                                     const MixComplex& F) {
  const Realization& rz = eng.realization();
  Decomposition D;
  for (int x = 0; x < rz.W->order(); ++x) {
    const MixComplex Nx = std_nabla(rz, x);
    for (const auto& [nm, d] : kb_hom_dims(F, Nx)) {
      if (nm.second != 0) return {false, {}};
      D[{x, nm.first}] = d;
    }
  }
  return {true, D};
}

} // namespace

bool has_delta_filtration(DecompositionEngine& eng, const MixComplex& F) {
  return delta_filtration_core(eng, F).first;
}

Decomposition delta_multiplicities(DecompositionEngine& eng, const MixComplex& F) {
  auto [ok, D] = delta_filtration_core(eng, F);
  if (!ok) throw NotFiltered("complex has no standard filtration");
  return D;
}

bool complexes_isomorphic(const MixComplex& A0, const MixComplex& B0, unsigned seed) {
  const MixComplex A = A0.trimmed(), B = B0.trimmed();
  if (A.terms.empty() && B.terms.empty()) return true;
  if (A.lo != B.lo || A.terms.size() != B.terms.size()) return false;
  const Field& fld = A.rz->field;
  for (size_t k = 0; k < A.terms.size(); ++k) {
    std::vector<int> da = A.terms[k].deg, db = B.terms[k].deg;
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    if (da != db) return false;
  }
  const auto basis = kb_hom(A, B, 0, 0).chain_basis;
  if (basis.empty()) return false;
  auto invertible = [&](const Components& c) {
    for (int i = A.lo; i <= A.hi(); ++i) {
      if (A.term(i).dim() == 0) continue;
      auto it = c.find(i);
      if (it == c.end() || !inverse(it->second).has_value()) return false;
    }
    return true;
  };
  for (const auto& c : basis)
    if (invertible(c)) return true;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int t = 0; t < 64; ++t) {
    Components cand;
    for (int i = A.lo; i <= A.hi(); ++i)
      cand[i] = ScalarMat(fld, B.term(i).dim(), A.term(i).dim());
    for (const auto& c : basis) {
      const Scalar s(fld, coeff(rng));
      if (s.is_zero()) continue;
      for (const auto& [i, m] : c) cand[i] = cand[i] + m * s;
    }
    if (invertible(cand)) return true;
  }
  return false;
}

namespace {

// flatten a degree-(0,0) chain endomorphism over the total space of F
ScalarMat flatten_endo(const MixComplex& F, const Components& c) {
  int total = 0;
  for (const auto& t : F.terms) total += t.dim();
  ScalarMat m(F.rz->field, total, total);
  int off = 0;
  for (int i = F.lo; i <= F.hi(); ++i) {
    const int n = F.term(i).dim();
    auto it = c.find(i);
    if (it != c.end())
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) m.at(off + a, off + b) = it->second.at(a, b);
    off += n;
  }
  return m;
}

} // namespace

EndAlgebra end_chain_algebra(const MixComplex& F0) {
  const MixComplex F = F0.trimmed();
  int total = 0;
  for (const auto& t : F.terms) total += t.dim();
  std::vector<ScalarMat> flat;
  for (const auto& c : kb_hom(F, F, 0, 0).chain_basis) flat.push_back(flatten_endo(F, c));
  return end_algebra_from(F.rz ? F.rz->field : Field::Q(), std::move(flat), total);
}

KbEngine::KbEngine(DecompositionEngine& eng) : eng_(&eng) {
  register_complex(delta_complex(eng.realization()), 0);
}

int KbEngine::find_element(int w) const {
  if (w < 0) return -1;
  for (size_t i = 0; i < elt_.size(); ++i)
    if (elt_[i] == w) return static_cast<int>(i);
  return -1;
}

int KbEngine::register_complex(const MixComplex& C, int w) {
  MixComplex M = minimal_model(C, *eng_);
  if (w >= 0) {
    const int have = find_element(w);
    if (have >= 0) {
      check(complexes_isomorphic(M, lib_[static_cast<size_t>(have)]),
            "register_complex: element already registered with a different complex");
      return have;
    }
  }
  check(!M.terms.empty(), "register_complex: zero complex");
  for (int id = 0; id < size(); ++id)
    if (lib_[static_cast<size_t>(id)].lo == M.lo &&
        lib_[static_cast<size_t>(id)].terms.size() == M.terms.size() &&
        complexes_isomorphic(M, lib_[static_cast<size_t>(id)])) {
      if (w >= 0 && elt_[static_cast<size_t>(id)] < 0) elt_[static_cast<size_t>(id)] = w;
      return id;
    }
  EndAlgebra E = end_chain_algebra(M);
  check(E.semisimple_dim() == 1, "register_complex: complex is decomposable");
  lib_.push_back(std::move(M));
  ends_.push_back(std::move(E));
  elt_.push_back(w);
  return size() - 1;
}

KbDecomposition KbEngine::split_kb(const MixComplex& F) {
  KbDecomposition out;
  MixComplex M = minimal_model(F, *eng_);
  while (!M.terms.empty()) {
    int minM, maxM;
    degree_span(M, minM, maxM);
    bool found = false;
    for (int id = 0; id < size() && !found; ++id) {
      const MixComplex& U = lib_[static_cast<size_t>(id)];
      int minU, maxU;
      degree_span(U, minU, maxU);
      for (int a = minM - minU; a <= maxM - maxU && !found; ++a)
        for (int c = U.hi() - M.hi(); c <= U.lo - M.lo && !found; ++c) {
          const int b = c - a;
          const MixComplex V = U.tate(a).shifted_cohom(b);
          bool fits = true;
          for (int i = V.lo; i <= V.hi() && fits; ++i)
            fits = V.term(i).dim() <= M.term(i).dim();
          if (!fits) continue;
          const auto A = kb_hom(V, M, 0, 0).chain_basis;
          if (A.empty()) continue;
          const auto B = kb_hom(M, V, 0, 0).chain_basis;
          for (size_t ii = 0; ii < A.size() && !found; ++ii)
            for (size_t jj = 0; jj < B.size() && !found; ++jj) {
              Components g;
              for (int i = V.lo; i <= V.hi(); ++i) {
                const auto ai = A[ii].find(i);
                const auto bi = B[jj].find(i);
                if (ai == A[ii].end() || bi == B[jj].end()) continue;
                g[i] = bi->second * ai->second;
              }
              const auto cls = ends_[static_cast<size_t>(id)].residue_class(flatten_endo(V, g));
              check(cls.has_value(), "split_kb: residue algebra is not the ground field");
              if (cls->is_zero()) continue;
              // rescale the projection to a strict section, then peel
              Components e; // idempotent on M
              for (int i = V.lo; i <= V.hi(); ++i) {
                if (V.term(i).dim() == 0) continue;
                const auto gi = g.find(i);
                check(gi != g.end(), "split_kb: missing composite component");
                const auto ginv = inverse(gi->second);
                check(ginv.has_value(), "split_kb: unit class but singular composite");
                e[i] = A[ii].at(i) * *ginv * B[jj].at(i);
              }
              MixComplex M2;
              M2.rz = M.rz;
              M2.lo = M.lo;
              std::map<int, ScalarMat> bases;
              for (int i = M.lo; i <= M.hi(); ++i) {
                ScalarMat P = ScalarMat::identity(M.rz->field, M.term(i).dim());
                if (auto it = e.find(i); it != e.end()) P = P - it->second;
                auto [sub, Bs] = image_submodule(M.term(i), P);
                M2.terms.push_back(std::move(sub));
                bases.emplace(i, std::move(Bs));
              }
              for (int i = M.lo; i < M.hi(); ++i) {
                const ScalarMat rhs = M.diff(i) * bases.at(i);
                const ScalarMat& Bn = bases.at(i + 1);
                ScalarMat nd(M.rz->field, Bn.cols, rhs.cols);
                for (int col = 0; col < rhs.cols; ++col) {
                  std::vector<Scalar> v(static_cast<size_t>(rhs.rows), Scalar(M.rz->field));
                  for (int r = 0; r < rhs.rows; ++r) v[static_cast<size_t>(r)] = rhs.at(r, col);
                  const auto sol = solve(Bn, v);
                  check(sol.has_value(), "split_kb: complement is not a subcomplex");
                  for (int r = 0; r < Bn.cols; ++r) nd.at(r, col) = (*sol)[static_cast<size_t>(r)];
                }
                M2.diffs.push_back(std::move(nd));
              }
              M2.validate();
              M = M2.trimmed();
              out[{id, a, b}] += 1;
              found = true;
            }
        }
    }
    if (!found) {
      EndAlgebra E = end_chain_algebra(M);
      check(E.semisimple_dim() == 1,
            "split_kb: residual complex matches no library object and is decomposable");
      lib_.push_back(M);
      ends_.push_back(std::move(E));
      elt_.push_back(-1);
      out[{size() - 1, 0, 0}] += 1;
      break;
    }
  }
  return out;
}

namespace {

nlohmann::ordered_json scalar_json(const Scalar& s) {
  return nlohmann::ordered_json::array({s.rat().get_str(), s.surd().get_str()});
}

Scalar scalar_from_json(const Field& f, const nlohmann::json& j) {
  check(j.is_array() && j.size() == 2, "complex JSON: bad scalar");
  mpq_class a, b;
  try {
    a = mpq_class(j[0].get<std::string>());
    b = mpq_class(j[1].get<std::string>());
  } catch (const std::exception&) {
    throw ConfigError("complex JSON: bad rational");
  }
  check(a.get_den() != 0 && b.get_den() != 0, "complex JSON: zero denominator");
  a.canonicalize();
  b.canonicalize();
  return Scalar(f, a, b);
}

nlohmann::ordered_json matrix_json(const ScalarMat& m) {
  nlohmann::ordered_json j;
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  auto entries = nlohmann::ordered_json::array();
  for (int i = 0; i < m.rows; ++i)
    for (int c = 0; c < m.cols; ++c)
      if (!m.at(i, c).is_zero())
        entries.push_back(nlohmann::ordered_json::array({i, c, scalar_json(m.at(i, c))}));
  j["entries"] = std::move(entries);
  return j;
}

ScalarMat matrix_from_json(const Field& f, const nlohmann::json& j) {
  check(j.is_object() && j.contains("rows") && j.contains("cols") && j.contains("entries"),
        "complex JSON: bad matrix");
  ScalarMat m(f, j["rows"].get<int>(), j["cols"].get<int>());
  for (const auto& e : j["entries"]) {
    check(e.is_array() && e.size() == 3, "complex JSON: bad matrix entry");
    const int r = e[0].get<int>(), c = e[1].get<int>();
    check(r >= 0 && r < m.rows && c >= 0 && c < m.cols, "complex JSON: entry out of range");
    m.at(r, c) = scalar_from_json(f, e[2]);
  }
  return m;
}

} // namespace

std::string mix_to_json(const MixComplex& F) {
  check(F.rz != nullptr, "mix_to_json: no realization");
  nlohmann::ordered_json j;
  j["field"] = F.rz->field.tag();
  j["lo"] = F.lo;
  auto terms = nlohmann::ordered_json::array();
  for (const auto& t : F.terms) {
    nlohmann::ordered_json tj;
    tj["side"] = t.left_side ? "left" : "right";
    tj["deg"] = t.deg;
    auto prov = nlohmann::ordered_json::array();
    for (const auto& [w, sh] : t.prov) prov.push_back(nlohmann::ordered_json::array({w, sh}));
    tj["prov"] = std::move(prov);
    auto act = nlohmann::ordered_json::array();
    for (const auto& a : t.act) act.push_back(matrix_json(a));
    tj["act"] = std::move(act);
    terms.push_back(std::move(tj));
  }
  j["terms"] = std::move(terms);
  auto diffs = nlohmann::ordered_json::array();
  for (const auto& d : F.diffs) diffs.push_back(matrix_json(d));
  j["diffs"] = std::move(diffs);
  return j.dump();
}

MixComplex mix_from_json(const Realization& rz, const std::string& json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("complex JSON: ") + e.what());
  }
  if (!(j.is_object() && j.contains("field") && j.contains("lo") && j.contains("terms") &&
        j.contains("diffs")))
    throw ConfigError("complex JSON: missing fields");
  MixComplex F;
  F.rz = &rz;
  try {
    if (j["field"].get<std::string>() != rz.field.tag())
      throw ConfigError("complex JSON: field mismatch");
    F.lo = j["lo"].get<int>();
    for (const auto& tj : j["terms"]) {
      SoergelModule m;
      m.field = rz.field;
      m.left_side = tj["side"].get<std::string>() == "left";
      m.deg = tj["deg"].get<std::vector<int>>();
      for (const auto& p : tj["prov"]) {
        if (!(p.is_array() && p.size() == 2)) throw ConfigError("complex JSON: bad provenance");
        m.prov.emplace_back(p[0].get<Word>(), p[1].get<int>());
      }
      for (const auto& a : tj["act"]) m.act.push_back(matrix_from_json(rz.field, a));
      if (m.act.size() != static_cast<size_t>(rz.dim))
        throw ConfigError("complex JSON: action count");
      F.terms.push_back(std::move(m));
    }
    for (const auto& d : j["diffs"]) F.diffs.push_back(matrix_from_json(rz.field, d));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("complex JSON: ") + e.what());
  }
  F.validate();
  return F;
}

} // namespace soergel
