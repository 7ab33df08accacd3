#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "soergel/mixed.hpp"

namespace soergel {

/*
  Bimodule tower over a reduced complex.  Term i is a sum of shifted
  Bott-Samelson bimodules, each differential is a matrix of degree-0
  bimodule maps, and the square of the differential is only required to
  have every entry in the augmentation ideal.  `base` is the reduced
  complex the tower presents; reducing the tower (constant parts of the
  differentials, reduce_right of the terms) must reproduce it on the nose.
*/
struct PseudoComplex {
  const Realization* rz = nullptr;
  int lo = 0;
  std::vector<BimSum> terms;
  std::vector<PolyMat> diffs;
  MixComplex base;

  int hi() const { return lo + static_cast<int>(terms.size()) - 1; }
  BimSum term(int i) const;  // empty outside range
  PolyMat diff(int i) const; // term(i) -> term(i+1), zero-shaped outside
  void validate() const;
};

// reduction of an honest bimodule complex, provenance recorded per term
MixComplex reduce_complex(const BimComplex& C);

// tautological tower on an honest complex; base is its reduction
PseudoComplex pseudo_of(const BimComplex& C);

/*
  Reconstruct a tower presenting F.  Every term is rebuilt from its
  recorded Bott-Samelson provenance (NoLift when that is missing or does
  not reduce back to the term), and every differential is lifted through
  the constant reduction of a degree-0 Hom basis.  The solve is an exact
  RREF, so the chosen lift is deterministic; different choices differ by
  maps with all entries in the augmentation ideal.
*/
PseudoComplex lift_complex(const MixComplex& F);

/*
  Degree-0 bimodule maps phi^i : F^i -> G^i that commute with the tower
  differentials up to the augmentation ideal.  Missing keys are zero.
*/
struct PseudoMap {
  PseudoComplex F, G;
  std::map<int, PolyMat> comp;

  PolyMat at(int i) const; // zero-shaped when absent
  void validate() const;
};

PseudoMap pseudo_identity(const PseudoComplex& F);
PseudoMap pseudo_compose(const PseudoMap& g, const PseudoMap& f);
// lift a degree-0 chain map F.base -> G.base through the towers; NoLift
PseudoMap lift_map(const PseudoComplex& F, const PseudoComplex& G, const ChainMap& f);

/*
  Linear coordinate extraction in direction X (coordinates in the fixed
  basis of the defining representation, one per variable).  Each entry is
  split by its least variable, m = sum_j x_j m_j, and the result is
  sum_j X_j (constant term of m_j); graded freeness makes this the value
  of the contraction on any homogeneous splitting.  Every entry must lie
  in the augmentation ideal (NotInAugmentation otherwise).
*/
std::vector<Scalar> phi(const Realization& rz, const std::vector<Poly>& m,
                        const std::vector<Scalar>& X);
ScalarMat phi_mat(const PolyMat& m, const std::vector<Scalar>& X);

/*
  Monodromy operator of a tower in direction X: the coordinate extraction
  of the curvature d.d, with components F^i -> F^{i+2} lowering internal
  degree by 2.  It is a chain map F -> F<2> (checked on construction),
  linear in X, and vanishes up to homotopy exactly on the complexes that
  admit an honest bimodule-level structure.
*/
struct MonodromyOperator {
  MixComplex F;
  std::vector<Scalar> X;
  std::map<int, ScalarMat> comp; // key i: F^i -> F^{i+2}{-2}

  ScalarMat at(int i) const;
  ChainMap as_chain_map() const; // F -> F.tate(2)
};

MonodromyOperator mu(const PseudoComplex& F, const std::vector<Scalar>& X);
// lifts first; NoLift when F carries no usable provenance
MonodromyOperator mu(const MixComplex& F, const std::vector<Scalar>& X);

/*
  Secondary operator of a pseudo map: coordinate extraction of the failure
  d.phi - phi.d, with components F^i -> G^{i+1}{-2}.  Its boundary in the
  Hom complex measures how far phi is from intertwining the monodromy
  operators: d(nu) = mu_G . phi0 - phi0 . mu_F componentwise.
*/
std::map<int, ScalarMat> nu(const PseudoMap& p, const std::vector<Scalar>& X);

/*
  Monodromy of a homogeneous polynomial direction f in the coordinate
  variables: monomials act by composing single operators left to right
  (x_j x_k |-> mu_k<2> . mu_j), extended linearly.  The result is a chain
  map F -> F<deg f>; f = 1 gives the identity.
*/
ChainMap mu_algebra(const PseudoComplex& F, const Poly& f);
ChainMap mu_algebra(const MixComplex& F, const Poly& f); // lifts first

/*
  Solve d h + h d = c where c holds the components F^i -> T^i of a
  degree-(0,0) chain map F -> T = G<n>[m].  Returns components
  h^i : F^i -> T^{i-1} of a homotopy, or nullopt when c is not a
  boundary.  The solve is exact and module-structure aware.
*/
std::optional<std::map<int, ScalarMat>> null_homotopy(const MixComplex& F, const MixComplex& G,
                                                      int n, int m,
                                                      const std::map<int, ScalarMat>& c);

// true iff the monodromy operator in every coordinate direction is
// null-homotopic; by linearity this tests the whole space of directions
bool is_equivariant_image(const PseudoComplex& F);
bool is_equivariant_image(const MixComplex& F); // lifts first

// stable content hash of a complex (shared by equal complexes across runs)
std::string mix_hash(const MixComplex& F);

// operators are stored with the hash of their base complex so cached
// values are only replayed against the complex they were computed from
std::string mu_to_json(const MonodromyOperator& op);
MonodromyOperator mu_from_json(const MixComplex& base, const std::string& json); // ConfigError

} // namespace soergel
