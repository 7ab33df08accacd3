#pragma once

#include <map>
#include <string>

#include "soergel/coxeter.hpp"
#include "soergel/laurent.hpp"

namespace soergel {

/*
  Hecke algebra of (W, S) over Z[v, v^-1] in the normalization where

    H_w H_s = H_{ws}                          if ws > w
    H_w H_s = (v^-1 - v) H_w + H_{ws}         if ws < w

  and the canonical basis element of a generator is b_s = H_s + v H_e.
  Elements are sparse maps (element id -> Laurent).
*/
class HeckeElt {
public:
  HeckeElt() = default;
  explicit HeckeElt(int w) { c_[w] = Laurent(1); }

  const std::map<int, Laurent>& coeffs() const { return c_; }
  Laurent coeff(int w) const {
    auto it = c_.find(w);
    return it == c_.end() ? Laurent() : it->second;
  }
  void set(int w, const Laurent& l) {
    if (l.is_zero()) c_.erase(w);
    else c_[w] = l;
  }
  bool is_zero() const { return c_.empty(); }

  HeckeElt operator+(const HeckeElt& o) const;
  HeckeElt operator-(const HeckeElt& o) const;
  HeckeElt operator*(const Laurent& l) const;
  bool operator==(const HeckeElt& o) const { return c_ == o.c_; }
  bool operator!=(const HeckeElt& o) const { return !(*this == o); }

private:
  std::map<int, Laurent> c_;
};

class Hecke {
public:
  explicit Hecke(const CoxeterSystem& W) : W_(&W), kl_cache_(W.order()), have_kl_(W.order(), 0) {}

  const CoxeterSystem& system() const { return *W_; }

  HeckeElt unit() const { return HeckeElt(0); }
  HeckeElt std_basis(int w) const { return HeckeElt(w); }

  // right multiplication by H_s
  HeckeElt mul_gen(const HeckeElt& a, int s) const;
  HeckeElt mul(const HeckeElt& a, const HeckeElt& b) const;

  // bar involution: v -> v^-1, H_s -> H_s + (v - v^-1) H_e
  HeckeElt bar(const HeckeElt& a) const;

  // canonical basis element b_w (memoized); coefficients of b_w lie in
  // H_w + sum_{x<w} v Z[v] H_x and b_w is bar-invariant
  const HeckeElt& kl_basis(int w) const;

  // b_{s_1} ... b_{s_k} for an arbitrary word
  HeckeElt kl_product(const Word& word) const;

  // expansion of a in the canonical basis: map w -> coefficient
  std::map<int, Laurent> kl_expand(const HeckeElt& a) const;

  // bilinear form with <H_x, H_y> = delta_{xy}
  Laurent pairing(const HeckeElt& a, const HeckeElt& b) const;

  // {"H": {"0.1": "v^2+1", ...}}; identity key "e"
  std::string to_json(const HeckeElt& a) const;
  HeckeElt from_json(const std::string& json) const;

private:
  const CoxeterSystem* W_;
  mutable std::vector<HeckeElt> kl_cache_;
  mutable std::vector<char> have_kl_;
};

} // namespace soergel
