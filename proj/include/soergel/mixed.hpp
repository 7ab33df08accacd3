#pragma once

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "soergel/hecke.hpp"
#include "soergel/sbim.hpp"

namespace soergel {

/*
  Bounded cochain complex of reduced Soergel modules. terms[k] sits in
  cohomological degree lo + k; diffs[k] : terms[k] -> terms[k+1] is a
  degree-0 module map with d . d = 0. Zero-dimensional terms are allowed
  (term(i) outside the stored range is the zero module).

  Shifts: {n} lowers internal degrees by n, [k] moves a term from degree i
  to i - k with the differential unchanged (the "right" convention), and
  the Tate twist <n> = [n]{-n}.
*/
struct MixComplex {
  const Realization* rz = nullptr;
  int lo = 0;
  std::vector<SoergelModule> terms;
  std::vector<ScalarMat> diffs;

  int hi() const { return lo + static_cast<int>(terms.size()) - 1; }
  bool is_zero() const;
  SoergelModule term(int i) const;
  ScalarMat diff(int i) const; // term(i) -> term(i+1)
  void validate() const;       // NotChainMap on a bad differential

  MixComplex shifted_internal(int n) const; // {n}
  MixComplex shifted_cohom(int k) const;    // [k]
  MixComplex tate(int n) const;             // <n>
  MixComplex trimmed() const;               // drop zero terms at both ends

  static MixComplex direct_sum(const MixComplex& a, const MixComplex& b);
};

enum class ShiftKind { Internal, Cohomological, Tate };
MixComplex shift(const MixComplex& F, ShiftKind kind, int n);

SoergelModule zero_smod(const Realization& rz);
MixComplex one_term_complex(const Realization& rz, SoergelModule M, int at = 0);
// the unit object: k in cohomological degree 0
MixComplex delta_complex(const Realization& rz);

/*
  Map of complexes F -> G with components comp[i] : F^i -> G^{i+k} (missing
  keys are zero). The chain condition is unsigned on both sides:
  d_G . phi = phi . d_F componentwise against the stored differentials.
*/
using Components = std::map<int, ScalarMat>;

struct ChainMap {
  MixComplex F, G;
  int k = 0;
  Components comp;
  ScalarMat at(int i) const; // zero-shaped when absent
  void validate() const;     // NotChainMap
};

ChainMap identity_map(const MixComplex& F);
ChainMap zero_map(const MixComplex& F, const MixComplex& G);

/*
  Right cone of f : F -> G: C^i = F^{i+1} (+) G^i (F block first) with
  differential [[d_F, 0], [(-1)^i f^{i+1}, d_G]], and the standard triangle
  F -> G -> C -> F[1] whose last map is the unsigned projection.
*/
struct Triangle {
  MixComplex A, B, C;
  ChainMap f;     // A -> B
  ChainMap alpha; // B -> C, inclusion
  ChainMap beta;  // C -> A[1] (k = 1), projection
};

MixComplex cone(const ChainMap& f);
Triangle standard_triangle(const ChainMap& f);

// the "left" convention: shift negates the differential, the cone carries
// [[-d_F, 0], [f^{i+1}, d_G]]; the comparison isomorphisms are diagonal
// with entries (-1)^i on the F block
MixComplex left_shift(const MixComplex& F);  // Sigma_l
MixComplex left_cone(const ChainMap& f);
ChainMap sigma_convention_iso(const MixComplex& F); // Sigma_l F -> F[1]
ChainMap cone_convention_iso(const ChainMap& f);    // left_cone(f) -> cone(f)

/*
  Hom in the bounded homotopy category: chain maps F -> G<n>[m] modulo the
  null-homotopic ones (maps of the form d h + h d with module-map
  components). chain_basis spans the chain maps before the quotient.
*/
struct KbHom {
  std::vector<Components> chain_basis;
  int dim = 0;
};
KbHom kb_hom(const MixComplex& F, const MixComplex& G, int n, int m);

// all nonzero dim Hom(F, G<n>[m]), keyed (n, m); the support is finite and
// the natural window is scanned completely
std::map<std::pair<int, int>, int> kb_hom_dims(const MixComplex& F, const MixComplex& G);
// the same restricted to n in [n_lo, n_hi], m in [m_lo, m_hi]
std::map<std::pair<int, int>, int> kb_hom_dims(const MixComplex& F, const MixComplex& G,
                                               int n_lo, int n_hi, int m_lo, int m_hi);

// homotopy-equivalent complex with no invertible component between
// indecomposable summands of adjacent terms (Gaussian elimination)
MixComplex minimal_model(const MixComplex& F, DecompositionEngine& eng);

/*
  Bounded complex of (sums of shifted) Bott-Samelson bimodules, used as the
  right tensor factor of convolution.
*/
struct BimComplex {
  const Realization* rz = nullptr;
  int lo = 0;
  std::vector<BimSum> terms;
  std::vector<PolyMat> diffs;
  int hi() const { return lo + static_cast<int>(terms.size()) - 1; }
  void validate() const; // NotChainMap
};

// two-term generator complexes: B_s -> R{1} in degrees 0, 1 (multiplication)
// and R{-1} -> B_s in degrees -1, 0 (comultiplication)
BimComplex delta_gen(const Realization& rz, int s);
BimComplex nabla_gen(const Realization& rz, int s);

// the reduction of M along the left action of S: M (x)_R S, a right module
SoergelModule module_tensor(const SoergelModule& M, const BimSum& S);

// convolution F * G with d(m (x) b) = dm (x) b + (-1)^{deg m} m (x) db
MixComplex convolve(const MixComplex& F, const BimComplex& G);

// standard/costandard objects: convolution towers over a reduced word
// (independence of the word is checked in tests, not assumed here)
MixComplex std_delta(const Realization& rz, int w);
MixComplex std_nabla(const Realization& rz, int w);
MixComplex std_delta_word(const Realization& rz, const Word& word);
MixComplex std_nabla_word(const Realization& rz, const Word& word);

// the three-term complex k{-1} -> k (x) B_s -> k{1} in degrees -1, 0, 1
MixComplex tilting_gen(const Realization& rz, int s);

// Euler characteristic sum (-1)^i ch(F^i) in the Hecke algebra
HeckeElt k0_class(DecompositionEngine& eng, const MixComplex& F);

// F admits a standard filtration iff Hom(F, nabla_x<n>[m]) vanishes for all
// m != 0; the multiplicity of Delta_x<n> is then dim Hom(F, nabla_x<n>)
bool has_delta_filtration(DecompositionEngine& eng, const MixComplex& F);
Decomposition delta_multiplicities(DecompositionEngine& eng, const MixComplex& F); // NotFiltered

// strict isomorphism test: searches the degree-(0,0) chain-map space for a
// termwise invertible element (deterministic seed; a miss returns false).
// For isomorphism in the homotopy category compare minimal models.
bool complexes_isomorphic(const MixComplex& A, const MixComplex& B, unsigned seed = 1);

// chain endomorphisms in degree (0,0) as a matrix algebra over the total
// space, with its radical
EndAlgebra end_chain_algebra(const MixComplex& F);

// multiset of (library id, a, b) meaning library(id)<a>[b]
using KbDecomposition = std::map<std::tuple<int, int, int>, int>;

/*
  Karoubi decomposition in the homotopy category against a growable library
  of minimal indecomposable complexes. The unit object is seeded at id 0;
  longer tilting complexes are registered by their builders. Splitting uses
  strict idempotents: a composite through a library object with nonzero
  residue class is rescaled to a section, and the complement is carried as
  an honest subcomplex.
*/
class KbEngine {
public:
  explicit KbEngine(DecompositionEngine& eng);

  DecompositionEngine& modules() { return *eng_; }

  // register an indecomposable complex (minimalized here); w labels it as
  // the tilting object of a group element when known, -1 otherwise
  int register_complex(const MixComplex& C, int w = -1);
  int size() const { return static_cast<int>(lib_.size()); }
  const MixComplex& library(int id) const { return lib_.at(static_cast<size_t>(id)); }
  int element_of(int id) const { return elt_.at(static_cast<size_t>(id)); }
  int find_element(int w) const; // registered id with that label, or -1

  // split F into library summands; an unmatched indecomposable residual is
  // auto-registered (label -1), a decomposable one is an error
  KbDecomposition split_kb(const MixComplex& F);

private:
  DecompositionEngine* eng_;
  std::vector<MixComplex> lib_;
  std::vector<EndAlgebra> ends_; // chain endomorphism algebras
  std::vector<int> elt_;
};

// JSON round-trip (terms with provenance and explicit action matrices,
// scalars in canonical text form)
std::string mix_to_json(const MixComplex& F);
MixComplex mix_from_json(const Realization& rz, const std::string& json);

} // namespace soergel
