#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "soergel/coxeter.hpp"
#include "soergel/linalg.hpp"
#include "soergel/poly.hpp"

namespace soergel {

/*
  A representation V of (W, S) with chosen simple roots alpha_s in V* and
  simple coroots alpha_s^vee in V, acting by

    s(v)    = v - <v, alpha_s> alpha_s^vee           on V
    s(f)    = f - <alpha_s^vee, f> alpha_s           on V*

  Coordinates: V has a fixed basis e_1..e_r; the polynomial ring R = Sym(V*)
  uses variables x_1..x_r dual to that basis, graded with deg x_i = 2.
  Demands: the generator matrices satisfy the defining relations, and
  <alpha_s^vee, alpha_s> = 2 for every s.
*/
struct Realization {
  const CoxeterSystem* W = nullptr;
  Field field = Field::Q();
  int dim = 0;
  std::vector<std::vector<Scalar>> coroot; // alpha_s^vee in the basis of V
  std::vector<std::vector<Scalar>> root;   // alpha_s in the dual basis (coeffs of x_j)

  // standard realization on the span of the coroots; simple coroots form the
  // basis, so the Cartan pairings determine the roots. Bond m = 3 and m = 2
  // work over any field; m in {4, 6} use the integral asymmetric pairings
  // (-1, -m/2) oriented from the lower-numbered generator; m = 5 needs
  // sqrt(5) in the field. Anything else raises InexpressibleCosine.
  static Realization geometric(const CoxeterSystem& W, Field f);

  // swap the roles of roots and coroots
  Realization dual() const;

  // <alpha_s^vee, alpha_t>
  Scalar cartan(int s, int t) const;

  // action of a generator / element on V (matrix acts on coordinate columns)
  ScalarMat gen_matrix(int s) const;
  ScalarMat matrix_of(int w) const;

  // alpha_s as a linear polynomial in x_1..x_r
  Poly root_poly(int s) const;
  // action of generator s on R = Sym(V*)
  Poly apply_gen(int s, const Poly& f) const;
  Poly apply_word(const Word& w, const Poly& f) const;

  // Demazure operator (f - s f) / alpha_s; drops degree by 2
  Poly demazure(int s, const Poly& f) const;

  // decomposition f = P + Q * (alpha_s / 2) with P, Q symmetric under s:
  // P = f - demazure(f) alpha_s / 2, Q = demazure(f)
  std::pair<Poly, Poly> split(int s, const Poly& f) const;

  // verify generator relations hold (called by geometric(); available for
  // hand-built realizations)
  void validate() const;
};

// every non-identity element acts nontrivially, and w fixes a hyperplane
// (rank(M_w - 1) == 1) exactly when w is a reflection; on failure returns
// the offending element
struct FaithfulnessReport {
  bool faithful = true;
  int witness = -1;     // element id of the failure, or -1
  std::string reason;   // empty when faithful
};
FaithfulnessReport reflection_faithful(const Realization& rz);

// invertible P: V1 -> V2 with P(coroot1_s) = coroot2_s and P^T(root2_s) = root1_s
std::optional<ScalarMat> realization_isomorphism(const Realization& a, const Realization& b);

} // namespace soergel
