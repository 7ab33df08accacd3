#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "soergel/errors.hpp"
#include "soergel/monodromy.hpp"

namespace soergel {

namespace {

// reduction of a tower term; rank-0 sums reduce to the zero module
SoergelModule reduce_term(const Realization& rz, const BimSum& B) {
  if (B.parts.empty()) return zero_smod(rz);
  return reduce_right(B);
}

// is_bim_map with empty sums allowed: only the shape can be checked there
bool is_tower_map(const BimSum& A, const BimSum& B, int d, const PolyMat& m) {
  if (A.parts.empty() || B.parts.empty())
    return m.rows == B.rank() && m.cols == A.rank() && m.is_zero();
  return is_bim_map(A, B, d, m);
}

bool modules_equal(const SoergelModule& a, const SoergelModule& b) {
  if (a.field != b.field || a.left_side != b.left_side || a.deg != b.deg) return false;
  if (a.act.size() != b.act.size()) return false;
  for (size_t t = 0; t < a.act.size(); ++t)
    if (a.act[t] != b.act[t]) return false;
  return true;
}

// solve f = sum_k x_k . const(basis_k) exactly; the RREF solution is the
// canonical lift (free variables zero), so repeated calls agree
PolyMat combine_lift(const Realization& rz, const std::vector<PolyMat>& basis, const ScalarMat& f,
                     const char* what) {
  const int n = static_cast<int>(basis.size());
  std::vector<SpRow> rows;
  std::vector<Scalar> rhs;
  for (int a = 0; a < f.rows; ++a)
    for (int b = 0; b < f.cols; ++b) {
      SpRow r;
      for (int k = 0; k < n; ++k) {
        const Scalar c = basis[static_cast<size_t>(k)].at(a, b).constant_term();
        if (!c.is_zero()) r.emplace_back(k, c);
      }
      rows.push_back(std::move(r));
      rhs.push_back(f.at(a, b));
    }
  const auto sol = sp_solve(rz.field, n, rows, rhs);
  if (!sol) throw NoLift(std::string(what) + ": no preimage under constant reduction");
  PolyMat out(rz.field, rz.dim, f.rows, f.cols);
  for (int k = 0; k < n; ++k)
    if (!(*sol)[static_cast<size_t>(k)].is_zero())
      out = out + basis[static_cast<size_t>(k)] * (*sol)[static_cast<size_t>(k)];
  return out;
}

// coordinate extraction of one polynomial with entries in the augmentation
// ideal: the x_j-linear coefficients contracted against X
Scalar phi_poly(const Poly& p, const std::vector<Scalar>& X) {
  Scalar v(p.field());
  if (p.is_zero()) return v;
  const auto parts = p.split_by_least_variable(); // NotInAugmentation
  for (size_t j = 0; j < X.size(); ++j) v += X[j] * parts[j].constant_term();
  return v;
}

bool towers_line_up(const PseudoComplex& A, const PseudoComplex& B) {
  if (A.rz != B.rz || A.lo != B.lo || A.terms.size() != B.terms.size()) return false;
  for (size_t k = 0; k < A.terms.size(); ++k)
    if (A.terms[k].degs() != B.terms[k].degs()) return false;
  for (size_t k = 0; k < A.diffs.size(); ++k)
    if (A.diffs[k] != B.diffs[k]) return false;
  return true;
}

} // namespace

BimSum PseudoComplex::term(int i) const {
  if (i >= lo && i <= hi()) return terms[static_cast<size_t>(i - lo)];
  BimSum b;
  b.rz = rz;
  return b;
}

PolyMat PseudoComplex::diff(int i) const {
  if (i >= lo && i < hi()) return diffs[static_cast<size_t>(i - lo)];
  check(rz != nullptr, "pseudo complex: no realization");
  return PolyMat(rz->field, rz->dim, term(i + 1).rank(), term(i).rank());
}

void PseudoComplex::validate() const {
  check(rz != nullptr, "pseudo complex: no realization");
  check(terms.empty() ? diffs.empty() : diffs.size() == terms.size() - 1,
        "pseudo complex: differential count");
  base.validate();
  check(base.rz == rz, "pseudo complex: base over a different realization");
  check(base.lo == lo && base.terms.size() == terms.size(),
        "pseudo complex: base window mismatch");
  for (int i = lo; i < hi(); ++i)
    if (!is_tower_map(term(i), term(i + 1), 0, diff(i)))
      throw NotChainMap("pseudo differential is not a degree-0 bimodule map");
  for (int i = lo; i + 2 <= hi(); ++i)
    if (!(diff(i + 1) * diff(i)).entries_in_aug())
      throw NotChainMap("curvature escapes the augmentation ideal");
  for (int i = lo; i <= hi(); ++i)
    if (!modules_equal(reduce_term(*rz, term(i)), base.term(i)))
      throw NotChainMap("tower does not reduce to the base term");
  for (int i = lo; i < hi(); ++i)
    if (diff(i).const_part() != base.diff(i))
      throw NotChainMap("tower does not reduce to the base differential");
}

MixComplex reduce_complex(const BimComplex& C) {
  check(C.rz != nullptr, "reduce_complex: no realization");
  MixComplex F;
  F.rz = C.rz;
  F.lo = C.lo;
  for (const auto& t : C.terms) F.terms.push_back(reduce_term(*C.rz, t));
  for (const auto& d : C.diffs) F.diffs.push_back(d.const_part());
  F.validate();
  return F;
}

PseudoComplex pseudo_of(const BimComplex& C) {
  C.validate();
  PseudoComplex P;
  P.rz = C.rz;
  P.lo = C.lo;
  P.terms = C.terms;
  P.diffs = C.diffs;
  P.base = reduce_complex(C);
  P.validate();
  return P;
}

PseudoComplex lift_complex(const MixComplex& F) {
  check(F.rz != nullptr, "lift_complex: no realization");
  const Realization& rz = *F.rz;
  PseudoComplex P;
  P.rz = &rz;
  P.lo = F.lo;
  P.base = F;
  for (int i = F.lo; i <= F.hi(); ++i) {
    const SoergelModule& M = F.term(i);
    BimSum B;
    B.rz = &rz;
    int covered = 0;
    for (const auto& [w, sh] : M.prov) {
      B.parts.push_back(bs_build(rz, w, sh));
      covered += 1 << w.size();
    }
    if (covered != M.dim())
      throw NoLift("lift_complex: term provenance does not cover the module");
    if (!modules_equal(reduce_term(rz, B), M))
      throw NoLift("lift_complex: term provenance does not reduce back to the term");
    P.terms.push_back(std::move(B));
  }
  for (int i = F.lo; i < F.hi(); ++i) {
    if (P.term(i).rank() == 0 || P.term(i + 1).rank() == 0) {
      P.diffs.push_back(PolyMat(rz.field, rz.dim, P.term(i + 1).rank(), P.term(i).rank()));
      continue;
    }
    const auto basis = bim_hom_basis(P.term(i), P.term(i + 1), 0);
    P.diffs.push_back(combine_lift(rz, basis, F.diff(i), "lift_complex"));
  }
  P.validate();
  return P;
}

PolyMat PseudoMap::at(int i) const {
  auto it = comp.find(i);
  if (it != comp.end()) return it->second;
  check(F.rz != nullptr, "pseudo map: no realization");
  return PolyMat(F.rz->field, F.rz->dim, G.term(i).rank(), F.term(i).rank());
}

void PseudoMap::validate() const {
  check(F.rz != nullptr && F.rz == G.rz, "pseudo map: realizations differ");
  F.validate();
  G.validate();
  int a = std::min(F.lo, G.lo), b = std::max(F.hi(), G.hi());
  for (const auto& [i, m] : comp) {
    a = std::min(a, i);
    b = std::max(b, i);
    (void)m;
  }
  for (int i = a; i <= b; ++i)
    if (!is_tower_map(F.term(i), G.term(i), 0, at(i)))
      throw NotChainMap("pseudo map component is not a degree-0 bimodule map");
  for (int i = a - 1; i <= b; ++i)
    if (!(G.diff(i) * at(i) - at(i + 1) * F.diff(i)).entries_in_aug())
      throw NotChainMap("pseudo map fails to commute modulo the augmentation ideal");
}

PseudoMap pseudo_identity(const PseudoComplex& F) {
  PseudoMap p;
  p.F = F;
  p.G = F;
  for (int i = F.lo; i <= F.hi(); ++i)
    if (F.term(i).rank() > 0)
      p.comp[i] = PolyMat::identity(F.rz->field, F.rz->dim, F.term(i).rank());
  return p;
}

PseudoMap pseudo_compose(const PseudoMap& g, const PseudoMap& f) {
  check(towers_line_up(g.F, f.G), "pseudo_compose: inner target differs from outer source");
  PseudoMap p;
  p.F = f.F;
  p.G = g.G;
  int a = std::min(f.F.lo, g.G.lo), b = std::max(f.F.hi(), g.G.hi());
  for (int i = a; i <= b; ++i) {
    PolyMat m = g.at(i) * f.at(i);
    if (!m.is_zero()) p.comp[i] = std::move(m);
  }
  return p;
}

PseudoMap lift_map(const PseudoComplex& F, const PseudoComplex& G, const ChainMap& f) {
  check(f.k == 0, "lift_map: only degree-(0,0) maps lift");
  if (mix_to_json(f.F) != mix_to_json(F.base) || mix_to_json(f.G) != mix_to_json(G.base))
    throw NoLift("lift_map: map does not connect the given bases");
  f.validate();
  PseudoMap p;
  p.F = F;
  p.G = G;
  for (const auto& [i, m] : f.comp) {
    if (m.is_zero()) continue;
    if (F.term(i).rank() == 0 || G.term(i).rank() == 0)
      throw NoLift("lift_map: nonzero component against an empty term");
    const auto basis = bim_hom_basis(F.term(i), G.term(i), 0);
    PolyMat lifted = combine_lift(*F.rz, basis, m, "lift_map");
    if (!lifted.is_zero()) p.comp[i] = std::move(lifted);
  }
  p.validate();
  return p;
}

std::vector<Scalar> phi(const Realization& rz, const std::vector<Poly>& m,
                        const std::vector<Scalar>& X) {
  check(static_cast<int>(X.size()) == rz.dim, "phi: direction has the wrong length");
  std::vector<Scalar> out;
  out.reserve(m.size());
  for (const Poly& p : m) {
    check(p.rank() == rz.dim && p.field() == rz.field, "phi: entry in the wrong ring");
    out.push_back(phi_poly(p, X));
  }
  return out;
}

ScalarMat phi_mat(const PolyMat& m, const std::vector<Scalar>& X) {
  check(static_cast<int>(X.size()) == m.nvars, "phi_mat: direction has the wrong length");
  ScalarMat out(m.field, m.rows, m.cols);
  for (int a = 0; a < m.rows; ++a)
    for (int b = 0; b < m.cols; ++b) out.at(a, b) = phi_poly(m.at(a, b), X);
  return out;
}

ScalarMat MonodromyOperator::at(int i) const {
  auto it = comp.find(i);
  if (it != comp.end()) return it->second;
  check(F.rz != nullptr, "monodromy operator: no base complex");
  return ScalarMat(F.rz->field, F.term(i + 2).dim(), F.term(i).dim());
}

ChainMap MonodromyOperator::as_chain_map() const {
  ChainMap f;
  f.F = F;
  f.G = F.tate(2);
  f.k = 0;
  f.comp = comp;
  return f;
}

MonodromyOperator mu(const PseudoComplex& F, const std::vector<Scalar>& X) {
  F.validate();
  MonodromyOperator op;
  op.F = F.base;
  op.X = X;
  for (int i = F.lo; i + 2 <= F.hi(); ++i) {
    ScalarMat m = phi_mat(F.diff(i + 1) * F.diff(i), X);
    if (!m.is_zero()) op.comp[i] = std::move(m);
  }
  op.as_chain_map().validate(); // commutes with the reduced differential
  return op;
}

MonodromyOperator mu(const MixComplex& F, const std::vector<Scalar>& X) {
  return mu(lift_complex(F), X);
}

std::map<int, ScalarMat> nu(const PseudoMap& p, const std::vector<Scalar>& X) {
  p.validate();
  std::map<int, ScalarMat> out;
  const int a = std::min(p.F.lo, p.G.lo) - 1, b = std::max(p.F.hi(), p.G.hi());
  for (int i = a; i <= b; ++i) {
    ScalarMat m = phi_mat(p.G.diff(i) * p.at(i) - p.at(i + 1) * p.F.diff(i), X);
    if (!m.is_zero()) out[i] = std::move(m);
  }
  return out;
}

ChainMap mu_algebra(const PseudoComplex& F, const Poly& f) {
  F.validate();
  const Realization& rz = *F.rz;
  check(f.rank() == rz.dim && f.field() == rz.field, "mu_algebra: direction in the wrong ring");
  const int hd = f.homogeneous_degree(); // throws on an inhomogeneous input
  const int deg = hd < 0 ? 0 : hd;

  std::vector<MonodromyOperator> single;
  if (deg > 0)
    for (int j = 0; j < rz.dim; ++j) {
      std::vector<Scalar> X(static_cast<size_t>(rz.dim), Scalar(rz.field));
      X[static_cast<size_t>(j)] = Scalar(rz.field, 1);
      single.push_back(mu(F, X));
    }

  std::map<int, ScalarMat> total;
  for (const auto& [mono, c] : f.terms()) {
    std::vector<int> factors;
    for (size_t j = 0; j < mono.size(); ++j)
      for (int e = 0; e < mono[j]; ++e) factors.push_back(static_cast<int>(j));
    for (int i = F.base.lo; i <= F.base.hi(); ++i) {
      ScalarMat run = ScalarMat::identity(rz.field, F.base.term(i).dim());
      int t = 0;
      for (int j : factors) {
        run = single[static_cast<size_t>(j)].at(i + 2 * t) * run;
        ++t;
      }
      run = run * c;
      if (run.is_zero()) continue;
      auto it = total.find(i);
      if (it == total.end())
        total.emplace(i, std::move(run));
      else
        it->second = it->second + run;
    }
  }
  for (auto it = total.begin(); it != total.end();)
    it = it->second.is_zero() ? total.erase(it) : std::next(it);

  ChainMap out;
  out.F = F.base;
  out.G = F.base.tate(deg);
  out.k = 0;
  out.comp = std::move(total);
  out.validate();
  return out;
}

ChainMap mu_algebra(const MixComplex& F, const Poly& f) { return mu_algebra(lift_complex(F), f); }

std::optional<std::map<int, ScalarMat>> null_homotopy(const MixComplex& F, const MixComplex& G,
                                                      int n, int m,
                                                      const std::map<int, ScalarMat>& c) {
  check(F.rz != nullptr && F.rz == G.rz, "null_homotopy: realizations differ");
  const Field fld = F.rz->field;
  const MixComplex T = G.tate(n).shifted_cohom(m);
  {
    ChainMap cm;
    cm.F = F;
    cm.G = T;
    cm.k = 0;
    cm.comp = c;
    cm.validate();
  }

  struct Block {
    int i = 0;
    std::vector<ScalarMat> basis;
    int off = 0;
  };
  std::vector<Block> blocks;
  int nvar = 0;
  for (int i = F.lo; i <= F.hi(); ++i) {
    auto bas = smod_hom_basis(F.term(i), T.term(i - 1), 0);
    if (bas.empty()) continue;
    blocks.push_back({i, std::move(bas), nvar});
    nvar += static_cast<int>(blocks.back().basis.size());
  }
  auto block_at = [&](int i) -> const Block* {
    for (const auto& bl : blocks)
      if (bl.i == i) return &bl;
    return nullptr;
  };

  std::vector<SpRow> rows;
  std::vector<Scalar> rhs;
  for (int i = F.lo; i <= F.hi(); ++i) {
    const int sd = F.term(i).dim(), td = T.term(i).dim();
    if (sd == 0 || td == 0) continue;
    const auto ci = c.find(i);
    const ScalarMat dT = T.diff(i - 1);
    const ScalarMat dF = F.diff(i);
    const Block* left = block_at(i);      // d_T . h^i
    const Block* right = block_at(i + 1); // h^{i+1} . d_F
    for (int a = 0; a < td; ++a)
      for (int b = 0; b < sd; ++b) {
        SpRow r;
        if (left)
          for (size_t k = 0; k < left->basis.size(); ++k) {
            Scalar v(fld);
            for (int x = 0; x < dT.cols; ++x) v += dT.at(a, x) * left->basis[k].at(x, b);
            if (!v.is_zero()) r.emplace_back(left->off + static_cast<int>(k), v);
          }
        if (right)
          for (size_t k = 0; k < right->basis.size(); ++k) {
            Scalar v(fld);
            for (int x = 0; x < dF.rows; ++x) v += right->basis[k].at(a, x) * dF.at(x, b);
            if (!v.is_zero()) r.emplace_back(right->off + static_cast<int>(k), v);
          }
        std::sort(r.begin(), r.end(),
                  [](const auto& p, const auto& q) { return p.first < q.first; });
        rows.push_back(std::move(r));
        rhs.push_back(ci == c.end() ? Scalar(fld) : ci->second.at(a, b));
      }
  }
  const auto sol = sp_solve(fld, nvar, rows, rhs);
  if (!sol) return std::nullopt;
  std::map<int, ScalarMat> out;
  for (const auto& bl : blocks) {
    ScalarMat h(fld, T.term(bl.i - 1).dim(), F.term(bl.i).dim());
    for (size_t k = 0; k < bl.basis.size(); ++k) {
      const Scalar& v = (*sol)[static_cast<size_t>(bl.off) + k];
      if (!v.is_zero()) h = h + bl.basis[k] * v;
    }
    if (!h.is_zero()) out[bl.i] = std::move(h);
  }
  return out;
}

bool is_equivariant_image(const PseudoComplex& F) {
  F.validate();
  const Realization& rz = *F.rz;
  for (int j = 0; j < rz.dim; ++j) {
    std::vector<Scalar> X(static_cast<size_t>(rz.dim), Scalar(rz.field));
    X[static_cast<size_t>(j)] = Scalar(rz.field, 1);
    const MonodromyOperator op = mu(F, X);
    if (op.comp.empty()) continue;
    if (!null_homotopy(F.base, F.base, 2, 0, op.comp)) return false;
  }
  return true;
}

bool is_equivariant_image(const MixComplex& F) { return is_equivariant_image(lift_complex(F)); }

std::string mix_hash(const MixComplex& F) {
  const std::string s = mix_to_json(F);
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace {

nlohmann::ordered_json scalar_json(const Scalar& s) {
  return nlohmann::ordered_json::array({s.rat().get_str(), s.surd().get_str()});
}

Scalar scalar_from_json(const Field& f, const nlohmann::json& j) {
  if (!(j.is_array() && j.size() == 2 && j[0].is_string() && j[1].is_string()))
    throw ConfigError("monodromy JSON: bad scalar");
  mpq_class a, b;
  try {
    a = mpq_class(j[0].get<std::string>());
    b = mpq_class(j[1].get<std::string>());
  } catch (const std::exception&) {
    throw ConfigError("monodromy JSON: bad rational");
  }
  if (a.get_den() == 0 || b.get_den() == 0) throw ConfigError("monodromy JSON: zero denominator");
  a.canonicalize();
  b.canonicalize();
  return Scalar(f, a, b);
}

} // namespace

std::string mu_to_json(const MonodromyOperator& op) {
  check(op.F.rz != nullptr, "mu_to_json: no base complex");
  nlohmann::ordered_json j;
  j["base"] = mix_hash(op.F);
  auto dir = nlohmann::ordered_json::array();
  for (const auto& s : op.X) dir.push_back(scalar_json(s));
  j["dir"] = std::move(dir);
  auto comps = nlohmann::ordered_json::array();
  for (const auto& [i, m] : op.comp) {
    auto entries = nlohmann::ordered_json::array();
    for (int a = 0; a < m.rows; ++a)
      for (int b = 0; b < m.cols; ++b)
        if (!m.at(a, b).is_zero())
          entries.push_back(nlohmann::ordered_json::array({a, b, scalar_json(m.at(a, b))}));
    comps.push_back(nlohmann::ordered_json::array({i, std::move(entries)}));
  }
  j["comp"] = std::move(comps);
  return j.dump();
}

MonodromyOperator mu_from_json(const MixComplex& base, const std::string& json) {
  check(base.rz != nullptr, "mu_from_json: no base complex");
  const Field fld = base.rz->field;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("monodromy JSON: ") + e.what());
  }
  if (!(j.is_object() && j.contains("base") && j.contains("dir") && j.contains("comp")))
    throw ConfigError("monodromy JSON: missing fields");
  try {
    if (j["base"].get<std::string>() != mix_hash(base))
      throw ConfigError("monodromy JSON: operator was computed from a different complex");
    MonodromyOperator op;
    op.F = base;
    for (const auto& s : j["dir"]) op.X.push_back(scalar_from_json(fld, s));
    if (static_cast<int>(op.X.size()) != base.rz->dim)
      throw ConfigError("monodromy JSON: direction has the wrong length");
    for (const auto& cj : j["comp"]) {
      if (!(cj.is_array() && cj.size() == 2)) throw ConfigError("monodromy JSON: bad component");
      const int i = cj[0].get<int>();
      ScalarMat m(fld, base.term(i + 2).dim(), base.term(i).dim());
      for (const auto& e : cj[1]) {
        if (!(e.is_array() && e.size() == 3)) throw ConfigError("monodromy JSON: bad entry");
        const int a = e[0].get<int>(), b = e[1].get<int>();
        if (a < 0 || a >= m.rows || b < 0 || b >= m.cols)
          throw ConfigError("monodromy JSON: entry out of range");
        m.at(a, b) = scalar_from_json(fld, e[2]);
      }
      if (!m.is_zero()) op.comp[i] = std::move(m);
    }
    try {
      op.as_chain_map().validate();
    } catch (const SoergelError& e) {
      throw ConfigError(std::string("monodromy JSON: ") + e.what());
    }
    return op;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("monodromy JSON: ") + e.what());
  }
}

} // namespace soergel
