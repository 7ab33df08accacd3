#include "soergel/hecke.hpp"

#include <algorithm>
#include <sstream>

#include "soergel/errors.hpp"
#include "json.hpp"

namespace soergel {

HeckeElt HeckeElt::operator+(const HeckeElt& o) const {
  HeckeElt r = *this;
  for (const auto& [w, l] : o.c_) r.set(w, r.coeff(w) + l);
  return r;
}

HeckeElt HeckeElt::operator-(const HeckeElt& o) const {
  HeckeElt r = *this;
  for (const auto& [w, l] : o.c_) r.set(w, r.coeff(w) - l);
  return r;
}

HeckeElt HeckeElt::operator*(const Laurent& l) const {
  HeckeElt r;
  for (const auto& [w, c] : c_) r.set(w, c * l);
  return r;
}

HeckeElt Hecke::mul_gen(const HeckeElt& a, int s) const {
  HeckeElt r;
  const Laurent vinv_minus_v = Laurent::v(-1) - Laurent::v(1);
  for (const auto& [w, c] : a.coeffs()) {
    const int ws = W_->mult_gen(w, s);
    if (W_->length(ws) > W_->length(w)) {
      r.set(ws, r.coeff(ws) + c);
    } else {
      r.set(w, r.coeff(w) + c * vinv_minus_v);
      r.set(ws, r.coeff(ws) + c);
    }
  }
  return r;
}

HeckeElt Hecke::mul(const HeckeElt& a, const HeckeElt& b) const {
  HeckeElt r;
  for (const auto& [y, cy] : b.coeffs()) {
    HeckeElt t = a;
    for (int s : W_->canonical_word(y)) t = mul_gen(t, s);
    r = r + t * cy;
  }
  return r;
}

HeckeElt Hecke::bar(const HeckeElt& a) const {
  // bar(H_w) = (bar H_{s_1}) ... (bar H_{s_k}) for any reduced word of w,
  // with bar(H_s) = H_s + (v - v^-1) H_e.
  HeckeElt r;
  const Laurent v_minus_vinv = Laurent::v(1) - Laurent::v(-1);
  for (const auto& [w, c] : a.coeffs()) {
    HeckeElt t = unit();
    for (int s : W_->canonical_word(w)) {
      HeckeElt u = mul_gen(t, s);
      u = u + t * v_minus_vinv;
      t = u;
    }
    r = r + t * c.bar();
  }
  return r;
}

const HeckeElt& Hecke::kl_basis(int w) const {
  if (have_kl_[w]) return kl_cache_[w];
  HeckeElt b;
  if (w == 0) {
    b = unit();
  } else {
    const Word& cw = W_->canonical_word(w);
    const int s = cw.back();
    Word head(cw.begin(), cw.end() - 1);
    const int wp = W_->element_of_word(head);
    // b_{w'} (H_s + v H_e), then strip canonical-basis terms with constant term
    const HeckeElt& bp = kl_basis(wp);
    HeckeElt c = mul_gen(bp, s) + bp * Laurent::v(1);
    // subtract corrections in decreasing length order
    std::vector<int> support;
    for (const auto& [x, l] : c.coeffs()) (void)l, support.push_back(x);
    std::sort(support.begin(), support.end(), [&](int a2, int b2) {
      return W_->length(a2) > W_->length(b2);
    });
    for (int x : support) {
      if (x == w) continue;
      const Laurent cx = c.coeff(x);
      const long long c0 = cx.coeff(0);
      if (c0 != 0) c = c - kl_basis(x) * Laurent(c0);
    }
    check(c.coeff(w) == Laurent(1), "canonical basis leading coefficient");
    for (const auto& [x, l] : c.coeffs())
      if (x != w) check(l.positive_exponents_only(), "canonical basis degree bound");
    b = c;
  }
  kl_cache_[w] = b;
  have_kl_[w] = 1;
  return kl_cache_[w];
}

HeckeElt Hecke::kl_product(const Word& word) const {
  HeckeElt r = unit();
  for (int s : word) {
    r = mul_gen(r, s) + r * Laurent::v(1);
  }
  return r;
}

std::map<int, Laurent> Hecke::kl_expand(const HeckeElt& a) const {
  std::map<int, Laurent> out;
  HeckeElt rem = a;
  while (!rem.is_zero()) {
    int top = -1;
    for (const auto& [w, l] : rem.coeffs()) {
      (void)l;
      if (top < 0 || W_->length(w) > W_->length(top)) top = w;
    }
    const Laurent c = rem.coeff(top);
    out[top] = c;
    rem = rem - kl_basis(top) * c;
    check(rem.coeff(top).is_zero(), "canonical expansion eliminates top term");
  }
  return out;
}

Laurent Hecke::pairing(const HeckeElt& a, const HeckeElt& b) const {
  Laurent r;
  for (const auto& [w, c] : a.coeffs()) r = r + c * b.coeff(w);
  return r;
}

std::string Hecke::to_json(const HeckeElt& a) const {
  nlohmann::ordered_json h = nlohmann::ordered_json::object();
  for (const auto& [w, c] : a.coeffs()) h[W_->word_str(W_->canonical_word(w))] = c.str();
  nlohmann::ordered_json j;
  j["H"] = h;
  return j.dump();
}

HeckeElt Hecke::from_json(const std::string& json) const {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad Hecke element JSON: ") + e.what());
  }
  if (!j.contains("H") || !j["H"].is_object()) throw ConfigError("Hecke element JSON needs an \"H\" object");
  HeckeElt r;
  for (auto it = j["H"].begin(); it != j["H"].end(); ++it) {
    const int w = W_->element_of_word(CoxeterSystem::parse_word(it.key()));
    r.set(w, r.coeff(w) + Laurent::parse(it.value().get<std::string>()));
  }
  return r;
}

} // namespace soergel
