#include <algorithm>
#include <sstream>

#include "soergel/errors.hpp"
#include "soergel/sbim.hpp"

namespace soergel {

namespace {

Scalar trace_of(const ScalarMat& a) {
  Scalar t(a.field);
  for (int i = 0; i < a.rows; ++i) t += a.at(i, i);
  return t;
}

} // namespace

// homogeneous basis of the image of a degree-0 module endomorphism P whose
// image is an invariant submodule, together with the restricted action
std::pair<SoergelModule, ScalarMat> image_submodule(const SoergelModule& M, const ScalarMat& P) {
  const int n = M.dim();
  std::vector<int> chosen;
  std::map<int, SpSolver> per_deg;
  for (int b = 0; b < n; ++b) {
    SpRow col;
    for (int i = 0; i < n; ++i)
      if (!P.at(i, b).is_zero()) col.emplace_back(i, P.at(i, b));
    if (col.empty()) continue;
    auto it = per_deg.try_emplace(M.deg[b], SpSolver(M.field, n)).first;
    if (it->second.add_row(col)) chosen.push_back(b);
  }
  const int m = static_cast<int>(chosen.size());
  SoergelModule S;
  S.field = M.field;
  S.left_side = M.left_side;
  for (int b : chosen) S.deg.push_back(M.deg[b]);
  ScalarMat B(M.field, n, m);
  for (int c = 0; c < m; ++c)
    for (int i = 0; i < n; ++i) B.at(i, c) = P.at(i, chosen[c]);
  for (const auto& a : M.act) {
    const ScalarMat AB = a * B;
    ScalarMat restr(M.field, m, m);
    for (int c = 0; c < m; ++c) {
      std::vector<Scalar> w(static_cast<size_t>(n), Scalar(M.field));
      for (int i = 0; i < n; ++i) w[i] = AB.at(i, c);
      const auto x = solve(B, w);
      check(x.has_value(), "image_submodule: image is not an invariant submodule");
      for (int i = 0; i < m; ++i) restr.at(i, c) = (*x)[i];
    }
    S.act.push_back(std::move(restr));
  }
  return {std::move(S), std::move(B)};
}

std::optional<Scalar> EndAlgebra::residue_class(const ScalarMat& e) const {
  const int n = e.rows;
  const int cols = 1 + static_cast<int>(rad.size());
  std::vector<SpRow> rows;
  std::vector<Scalar> rhs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      SpRow r;
      if (i == j) r.emplace_back(0, Scalar(e.field, 1));
      for (size_t k = 0; k < rad.size(); ++k)
        if (!rad[k].at(i, j).is_zero()) r.emplace_back(1 + static_cast<int>(k), rad[k].at(i, j));
      rows.push_back(std::move(r));
      rhs.push_back(e.at(i, j));
    }
  const auto x = sp_solve(e.field, cols, rows, rhs);
  if (!x) return std::nullopt;
  return (*x)[0];
}

EndAlgebra end_algebra_from(const Field& f, std::vector<ScalarMat> basis, int rep_dim) {
  EndAlgebra E;
  E.basis = std::move(basis);
  if (E.basis.empty()) return E;
  const long p = f.characteristic();
  if (p != 0 && p <= rep_dim) {
    std::ostringstream os;
    os << "trace-form radical needs characteristic 0 or p > " << rep_dim << ", got p = " << p;
    throw RadicalFailure(os.str());
  }
  const int n = static_cast<int>(E.basis.size());
  const int d = E.basis[0].rows;
  ScalarMat G(f, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      G.at(i, j) = trace_of(E.basis[i] * E.basis[j]);
      G.at(j, i) = G.at(i, j);
    }
  for (const auto& v : kernel_basis(G)) {
    ScalarMat r(f, d, d);
    for (int k = 0; k < n; ++k)
      if (!v[k].is_zero()) r = r + E.basis[k] * v[k];
    E.rad.push_back(std::move(r));
  }
  return E;
}

EndAlgebra end_algebra(const SoergelModule& M) {
  return end_algebra_from(M.field, smod_hom_basis(M, M, 0), M.dim());
}

DecompositionEngine::DecompositionEngine(const Realization& rz) : rz_(&rz), hecke_(*rz.W) {}

void DecompositionEngine::ensure_library(int w) {
  const CoxeterSystem& W = *rz_->W;
  for (int x = 0; x <= w; ++x) {
    if (lib_.count(x)) continue;
    SoergelModule M = reduce_right(bs_build(*rz_, W.canonical_word(x)));
    for (int y = 0; y < x; ++y) {
      const SoergelModule& U = lib_.at(y);
      const EndAlgebra& EU = lib_end_.at(y);
      const int maxU = *std::max_element(U.deg.begin(), U.deg.end());
      const int minU = *std::min_element(U.deg.begin(), U.deg.end());
      for (int n = maxU - W.length(x); n <= minU + W.length(x); ++n) {
        for (;;) {
          if (M.dim() < U.dim()) break;
          const SoergelModule Un = U.shifted(n);
          const auto A = smod_hom_basis(Un, M, 0);
          if (A.empty()) break;
          const auto B = smod_hom_basis(M, Un, 0);
          bool stripped = false;
          for (size_t i = 0; i < A.size() && !stripped; ++i)
            for (size_t j = 0; j < B.size() && !stripped; ++j) {
              const ScalarMat g = B[j] * A[i];
              const auto cls = EU.residue_class(g);
              check(cls.has_value(), "library: residue algebra is not the ground field");
              if (cls->is_zero()) continue;
              const auto ginv = inverse(g);
              check(ginv.has_value(), "library: unit class but singular composite");
              const ScalarMat e = A[i] * *ginv * B[j];
              M = image_submodule(M, ScalarMat::identity(M.field, M.dim()) - e).first;
              stripped = true;
            }
          if (!stripped) break;
        }
      }
    }
    check(M.dim() > 0, "library: canonical word reduced to zero");
    EndAlgebra E = end_algebra(M);
    check(E.semisimple_dim() == 1, "library: residual summand is not indecomposable");
    lib_.emplace(x, std::move(M));
    lib_end_.emplace(x, std::move(E));
  }
}

const SoergelModule& DecompositionEngine::indecomposable(int w) {
  ensure_library(w);
  return lib_.at(w);
}

int DecompositionEngine::pairing_rank(const SoergelModule& U, const EndAlgebra& EU, int n,
                                      const SoergelModule& M) {
  const SoergelModule Un = U.shifted(n);
  const auto A = smod_hom_basis(Un, M, 0);
  if (A.empty()) return 0;
  const auto B = smod_hom_basis(M, Un, 0);
  if (B.empty()) return 0;
  ScalarMat P(M.field, static_cast<int>(B.size()), static_cast<int>(A.size()));
  for (size_t j = 0; j < B.size(); ++j)
    for (size_t i = 0; i < A.size(); ++i) {
      const auto cls = EU.residue_class(B[j] * A[i]);
      check(cls.has_value(), "pairing: residue algebra is not the ground field");
      P.at(static_cast<int>(j), static_cast<int>(i)) = *cls;
    }
  return rank(P);
}

Decomposition DecompositionEngine::decompose(const SoergelModule& M) {
  Decomposition D;
  if (M.dim() == 0) return D;
  check(M.field == rz_->field, "decompose: field mismatch");
  const CoxeterSystem& W = *rz_->W;
  const int maxM = *std::max_element(M.deg.begin(), M.deg.end());
  const int minM = *std::min_element(M.deg.begin(), M.deg.end());
  const int width = maxM - minM;
  Laurent seen;
  for (int x = 0; x < W.order() && 2 * W.length(x) <= width; ++x) {
    ensure_library(x);
    const SoergelModule& U = lib_.at(x);
    const EndAlgebra& EU = lib_end_.at(x);
    const int maxU = *std::max_element(U.deg.begin(), U.deg.end());
    const int minU = *std::min_element(U.deg.begin(), U.deg.end());
    for (int n = maxU - maxM; n <= minU - minM; ++n) {
      const int r = pairing_rank(U, EU, n, M);
      if (r > 0) {
        D[{x, n}] = r;
        seen += U.shifted(n).gdim() * Laurent(r);
      }
    }
  }
  check(seen == M.gdim(), "decompose: summands do not account for the graded dimension");
  return D;
}

Decomposition DecompositionEngine::decompose(const BSBimodule& B) {
  return decompose(reduce_right(B));
}

// peel one certified summand at a time, maintaining a section
// J : C -> M, Q : M -> C of the running complement with Q . J = id
std::vector<SplitPart> DecompositionEngine::split(const SoergelModule& M) {
  std::vector<SplitPart> out;
  if (M.dim() == 0) return out;
  check(M.field == rz_->field, "split: field mismatch");
  const CoxeterSystem& W = *rz_->W;
  SoergelModule C = M;
  ScalarMat J = ScalarMat::identity(M.field, M.dim());
  ScalarMat Q = J;
  while (C.dim() > 0) {
    const int maxC = *std::max_element(C.deg.begin(), C.deg.end());
    const int minC = *std::min_element(C.deg.begin(), C.deg.end());
    bool found = false;
    for (int x = 0; x < W.order() && 2 * W.length(x) <= maxC - minC && !found; ++x) {
      ensure_library(x);
      const SoergelModule& U = lib_.at(x);
      const EndAlgebra& EU = lib_end_.at(x);
      const int maxU = *std::max_element(U.deg.begin(), U.deg.end());
      const int minU = *std::min_element(U.deg.begin(), U.deg.end());
      for (int n = maxU - maxC; n <= minU - minC && !found; ++n) {
        const SoergelModule Un = U.shifted(n);
        const auto A = smod_hom_basis(Un, C, 0);
        if (A.empty()) continue;
        const auto B = smod_hom_basis(C, Un, 0);
        for (size_t i = 0; i < A.size() && !found; ++i)
          for (size_t j = 0; j < B.size() && !found; ++j) {
            const ScalarMat g = B[j] * A[i];
            const auto cls = EU.residue_class(g);
            check(cls.has_value(), "split: residue algebra is not the ground field");
            if (cls->is_zero()) continue;
            const auto ginv = inverse(g);
            check(ginv.has_value(), "split: unit class but singular composite");
            SplitPart sp;
            sp.label = {x, n};
            sp.part = Un;
            sp.incl = J * A[i];
            sp.proj = *ginv * B[j] * Q;
            out.push_back(std::move(sp));
            const ScalarMat e = A[i] * *ginv * B[j];
            const ScalarMat P = ScalarMat::identity(C.field, C.dim()) - e;
            auto [C2, Bc] = image_submodule(C, P);
            ScalarMat Qc(C.field, C2.dim(), C.dim());
            for (int c = 0; c < C.dim(); ++c) {
              std::vector<Scalar> w(static_cast<size_t>(C.dim()), Scalar(C.field));
              for (int r = 0; r < C.dim(); ++r) w[r] = P.at(r, c);
              const auto sol = solve(Bc, w);
              check(sol.has_value(), "split: complement projection failed");
              for (int r = 0; r < C2.dim(); ++r) Qc.at(r, c) = (*sol)[r];
            }
            J = J * Bc;
            Q = Qc * Q;
            C = std::move(C2);
            found = true;
          }
      }
    }
    check(found, "split: no summand matched the library");
  }
  ScalarMat tot(M.field, M.dim(), M.dim());
  for (const auto& sp : out) tot = tot + sp.incl * sp.proj;
  check(tot.is_identity(), "split: sections do not sum to the identity");
  return out;
}

HeckeElt DecompositionEngine::hecke_character(const Decomposition& d) {
  HeckeElt h;
  for (const auto& [key, mult] : d)
    h = h + hecke_.kl_basis(key.first) * Laurent::v(key.second, mult);
  return h;
}

// character of the indecomposable B_x, by induction on length:
// [B_x] = [BS(canonical word of x)] - sum of v^n [B_y] over the other summands
const HeckeElt& DecompositionEngine::ch_indecomposable(int x) {
  if (auto it = chind_.find(x); it != chind_.end()) return it->second;
  const Word word = rz_->W->canonical_word(x);
  Decomposition D = decompose(bs_build(*rz_, word));
  check(D.count({x, 0}) == 1 && D[{x, 0}] == 1,
        "character induction: top summand missing from its canonical word");
  HeckeElt c = hecke_.kl_product(word);
  for (const auto& [key, mult] : D) {
    if (key == std::make_pair(x, 0)) continue;
    c = c - ch_indecomposable(key.first) * Laurent::v(key.second, mult);
  }
  return chind_.emplace(x, std::move(c)).first->second;
}

bool DecompositionEngine::soergel_conjecture(int w) {
  return ch_indecomposable(w) == hecke_.kl_basis(w);
}

std::vector<std::vector<Laurent>> DecompositionEngine::parity_algebra_dims() {
  const CoxeterSystem& W = *rz_->W;
  ensure_library(W.order() - 1);
  std::vector<std::vector<Laurent>> grid(W.order(), std::vector<Laurent>(W.order()));
  for (int x = 0; x < W.order(); ++x)
    for (int y = 0; y < W.order(); ++y) grid[x][y] = smod_gdim_hom(lib_.at(x), lib_.at(y));
  return grid;
}

bool soergel_conjecture_check(DecompositionEngine& eng, int w) { return eng.soergel_conjecture(w); }

std::vector<std::vector<Laurent>> parity_algebra_dims(DecompositionEngine& eng) {
  return eng.parity_algebra_dims();
}

} // namespace soergel
