#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "soergel/hecke.hpp"
#include "soergel/laurent.hpp"
#include "soergel/polymat.hpp"
#include "soergel/realization.hpp"

namespace soergel {

/*
  Bott-Samelson bimodule attached to an expression s_1 ... s_k (not
  necessarily reduced) with an internal grading shift {n}:

      B(s_1 ... s_k){n},   where B_s = R tensor_{R^s} R {1}.

  Free as a left R-module of rank 2^k on basis b_eps, eps a bitmask whose
  bit i chooses 1 (bit 0) or alpha_{s_i}/2 (bit 1) in slot i; the degree is
  deg b_eps = 2|eps| - k - n, so {n} lowers degrees by n. The right action
  of each polynomial variable is stored as a rank x rank matrix over R
  acting on left-coordinate columns (column = input basis element).
*/
struct BSBimodule {
  const Realization* rz = nullptr;
  Word expr;
  int shift = 0;
  int rank = 1;
  std::vector<int> deg;
  std::vector<PolyMat> rho;

  // right multiplication on a left-coordinate vector: v |-> v . f
  std::vector<Poly> act(const std::vector<Poly>& v, const Poly& f) const;
  // matrix of right multiplication by an arbitrary polynomial
  PolyMat action_matrix(const Poly& f) const;
  BSBimodule shifted(int n) const;
  // graded rank as a free left module: sum of v^(basis degree)
  Laurent gdim_left() const;
};

BSBimodule bs_build(const Realization& rz, const Word& expr, int shift = 0);
// B(x) tensor_R B(y) = B(xy) with added shifts
BSBimodule tensor_bim(const BSBimodule& a, const BSBimodule& b);

// finite direct sum of Bott-Samelson bimodules (a chain-complex term)
struct BimSum {
  const Realization* rz = nullptr;
  std::vector<BSBimodule> parts;

  BimSum() = default;
  explicit BimSum(BSBimodule b) : rz(b.rz) { parts.push_back(std::move(b)); }

  int rank() const;
  std::vector<int> degs() const;          // concatenated basis degrees
  std::vector<int> offsets() const;       // start index of each part
  PolyMat action_matrix(const Poly& f) const; // block diagonal
  BimSum shifted(int n) const;
  Laurent gdim_left() const;
};

/*
  The structure maps of B_s, as matrices in the left bases:
    mult:    B_s -> R{1}        1x2  [1, alpha_s/2]    (f tensor g -> fg)
    comult:  R{-1} -> B_s       2x1  [alpha_s/2; 1]    (1 -> a/2 tensor 1 + 1 tensor a/2)
    barbell: B_s -> B_s{2}      comult o mult
  All three are degree-0 against the indicated shifts; equivalently mult is
  a degree +1 map to R and barbell a degree +2 endomorphism.
*/
struct DotMaps {
  BSBimodule Bs;
  PolyMat mult, comult, barbell;
};
DotMaps dot_maps(const Realization& rz, int s);

/*
  Homogeneous degree-d left-R-linear map M -> N commuting with the right
  action; entry (i, j) is a polynomial of degree d + M.deg[j] - N.deg[i].
*/
struct BimoduleMap {
  int degree = 0;
  PolyMat mat;
};

// entry degrees and right-action commutation hold exactly
bool is_bim_map(const BimSum& M, const BimSum& N, int d, const PolyMat& A);

// basis of the degree-d part of HOM(M, N) as a k-vector space
std::vector<PolyMat> bim_hom_basis(const BimSum& M, const BimSum& N, int d);
std::vector<PolyMat> bim_hom_basis(const BSBimodule& M, const BSBimodule& N, int d);

// dimensions of k tensor_R HOM(M, N) per degree over [lo, hi], computed as
// coker(m . HOM -> HOM) degreewise (m = the ideal of positive-degree
// polynomials); keys with dimension 0 are omitted
std::map<int, int> graded_hom_dims_bim(const BimSum& M, const BimSum& N, int lo, int hi);
std::map<int, int> graded_hom_dims_bim(const BSBimodule& M, const BSBimodule& N, int lo, int hi);

/*
  Free left-R-module basis of HOM(M, N): homogeneous maps g_1..g_m with
  HOM = free module on the g_i. Degrees are found by scanning upward from
  the least possible degree; the scan window is grown until the Hilbert
  series of the free module on the generators found so far matches the
  solved dimension for `settle` consecutive degrees past the last
  generator. Throws FreenessMismatch if the solved dimensions ever fall
  below the free prediction (they can never exceed it).
*/
std::vector<BimoduleMap> free_basis_hom(const BimSum& M, const BimSum& N, int settle = 4);

/*
  Certified check of the Hilbert-series identity

      gdim HOM_R(M, N) = gdim(R) . gdim(k tensor_R HOM(M, N))

  for all internal degrees <= up_to. Generator degrees come from exact
  solves in low degrees; each higher degree d is certified by sandwiching:
  products (monomial . generator) give independent elements (a lower bound
  for dim HOM_d, verified modulo a large prime), while the nullity of the
  constraint system modulo the same prime is an upper bound. When the two
  bounds meet the predicted coefficient the degree is exact; any degree the
  certificate cannot close is re-solved exactly.
*/
struct FormalityReport {
  bool ok = false;
  Laurent coker_gdim;       // gdim of k tensor HOM (the generator degrees)
  int checked_to = 0;
  std::string detail;       // first failing degree, when not ok
};
FormalityReport formality_check(const BimSum& M, const BimSum& N, int up_to = 20);

/*
  Reduction of a Bott-Samelson bimodule to a graded module over R on one
  side: reduce_right kills the left action (k tensor_R B, a right module),
  reduce_left kills the right action (B tensor_R k, a left module, realized
  through the side-swapping flip onto the reversed expression). Summands
  extracted during decomposition are SoergelModules too.
*/
struct SoergelModule {
  Field field = Field::Q();
  bool left_side = false;
  std::vector<int> deg;
  std::vector<ScalarMat> act; // residual action of each variable, degree +2
  // provenance as a sum of (expression, shift) blocks of ranks 2^k, in
  // order; empty for extracted summands
  std::vector<std::pair<Word, int>> prov;

  int dim() const { return static_cast<int>(deg.size()); }
  Laurent gdim() const;
  SoergelModule shifted(int n) const;
  void validate() const;
  static SoergelModule direct_sum(const SoergelModule& a, const SoergelModule& b);
};

SoergelModule reduce_right(const BSBimodule& B);
SoergelModule reduce_left(const BSBimodule& B);
SoergelModule reduce_right(const BimSum& B);
SoergelModule reduce_left(const BimSum& B);

// basis of degree-d module maps M -> N (commute with the residual action)
std::vector<ScalarMat> smod_hom_basis(const SoergelModule& M, const SoergelModule& N, int d);
// all nonzero graded Hom dimensions (complete: support is finite)
std::map<int, int> smod_hom_dims(const SoergelModule& M, const SoergelModule& N);
Laurent smod_gdim_hom(const SoergelModule& M, const SoergelModule& N);

// Hecke character ch(B(w){n}) = v^n b_{s_1} ... b_{s_k}
HeckeElt character(const Hecke& H, const BSBimodule& B);

/*
  Degree-0 endomorphism algebra of a module with its Jacobson radical,
  computed from the trace form of the defining representation; valid in
  characteristic 0 or p > dim M, otherwise RadicalFailure.
*/
struct EndAlgebra {
  std::vector<ScalarMat> basis;
  std::vector<ScalarMat> rad;
  int plain_dim() const { return static_cast<int>(basis.size()); }
  int semisimple_dim() const { return static_cast<int>(basis.size() - rad.size()); }
  // scalar c with e = c . id modulo the radical; nullopt if e is not of
  // that shape (the residue algebra is bigger than the ground field)
  std::optional<Scalar> residue_class(const ScalarMat& e) const;
};
EndAlgebra end_algebra(const SoergelModule& M);
// same computation for an arbitrary matrix algebra given by a spanning set;
// rep_dim gates the trace form (characteristic 0 or p > rep_dim)
EndAlgebra end_algebra_from(const Field& f, std::vector<ScalarMat> basis, int rep_dim);

// image of an idempotent-like map P as a module, together with the chosen
// basis B (columns, a map image -> M); the action is restricted along B
std::pair<SoergelModule, ScalarMat> image_submodule(const SoergelModule& M, const ScalarMat& P);

// multiset of (element id, shift); the decomposition M = (+) B_w {n}
using Decomposition = std::map<std::pair<int, int>, int>;
std::string decomposition_str(const CoxeterSystem& W, const Decomposition& d);

// one indecomposable summand B_w{n} of a module M, with a section:
// proj . incl = id on the part, and the incl . proj sum to id over a split
struct SplitPart {
  std::pair<int, int> label; // (element id, shift)
  SoergelModule part;
  ScalarMat incl; // part -> M
  ScalarMat proj; // M -> part
};

/*
  Karoubi decomposition engine for one realization. Maintains the library
  of indecomposable Soergel modules B_w (w in W), built inductively: the
  reduction of the canonical-word Bott-Samelson module of w splits off
  library summands of shorter elements until the unique new indecomposable
  remains. Multiplicities are ranks of the composition pairing
  Hom(B_w{n}, M) x Hom(M, B_w{n}) -> End(B_w)/rad, and every decomposition
  is certified by graded-dimension bookkeeping.
*/
class DecompositionEngine {
public:
  explicit DecompositionEngine(const Realization& rz);

  const Realization& realization() const { return *rz_; }
  const Hecke& hecke() const { return hecke_; }

  // the indecomposable module B_w, normalized as it appears in the
  // canonical-word Bott-Samelson module
  const SoergelModule& indecomposable(int w);

  Decomposition decompose(const SoergelModule& M);
  Decomposition decompose(const BSBimodule& B); // via reduce_right
  // explicit direct-sum decomposition with inclusion/projection matrices
  std::vector<SplitPart> split(const SoergelModule& M);
  // sum over the multiset of v^n . kl_basis(w)
  HeckeElt hecke_character(const Decomposition& d);

  // [B_w] = kl_basis(w): decompose the canonical-word module of w and
  // compare characters
  bool soergel_conjecture(int w);

  // graded dims of Hom(k (x) B_x, k (x) B_y) for all x, y in W (by id)
  std::vector<std::vector<Laurent>> parity_algebra_dims();

private:
  void ensure_library(int w);
  // rank of the composition pairing for summand U{n} inside M
  int pairing_rank(const SoergelModule& U, const EndAlgebra& EU, int n, const SoergelModule& M);
  const HeckeElt& ch_indecomposable(int x);

  const Realization* rz_;
  Hecke hecke_;
  std::map<int, SoergelModule> lib_;
  std::map<int, EndAlgebra> lib_end_;
  std::map<int, HeckeElt> chind_; // memoized characters of indecomposables
};

// convenience entry points on a shared engine
bool soergel_conjecture_check(DecompositionEngine& eng, int w);
std::vector<std::vector<Laurent>> parity_algebra_dims(DecompositionEngine& eng);

} // namespace soergel
