#pragma once

#include <map>
#include <string>
#include <vector>

#include "soergel/errors.hpp"

namespace soergel {

using Word = std::vector<int>;

/*
  Finite Coxeter system with fully enumerated elements.

  Elements are ids, assigned in (length, ShortLex) order; id 0 is the
  identity. Every element stores its canonical (ShortLex-least) reduced
  word; the set of all reduced words of an element — the braid-move closure
  of any one of them, by the Matsumoto property — is computed on demand.
  Words are over generator indices 0..rank-1 and serialize as "0.1.0".

  Supported type tags: A<n>, B<n> (n >= 2), D<n> (n >= 4), I2(<m>), H3.
*/
class CoxeterSystem {
public:
  static CoxeterSystem create(const std::string& type_tag);

  const std::string& type() const { return type_; }
  int rank() const { return rank_; }
  int order() const { return static_cast<int>(canonical_.size()); }
  int coxeter_m(int s, int t) const { return m_[s][t]; }
  const std::vector<std::vector<int>>& coxeter_matrix() const { return m_; }

  int identity() const { return 0; }
  int generator(int s) const { return gen_id_[s]; }
  int length(int w) const { return static_cast<int>(canonical_[w].size()); }
  const Word& canonical_word(int w) const { return canonical_[w]; }
  // all reduced expressions, sorted
  std::vector<Word> reduced_words(int w) const;
  int longest_element() const { return w0_; }

  int mult_gen(int w, int s) const { return right_mult_[w][s]; }
  int mult(int x, int y) const;
  int inverse(int w) const { return inverse_[w]; }
  bool right_descent(int w, int s) const { return length(mult_gen(w, s)) < length(w); }
  bool left_descent(int w, int s) const { return length(mult(gen_id_[s], w)) < length(w); }

  bool is_reflection(int w) const { return is_reflection_[w]; }
  std::vector<int> reflections() const;

  // Bruhat order via the lifting recursion (memoized); brute-force subword
  // check kept for cross-validation in tests
  bool bruhat_leq(int x, int y) const;
  bool bruhat_leq_bruteforce(int x, int y) const;

  // fold a (not necessarily reduced) word into an element
  int element_of_word(const Word& w) const;
  // id of the element with this exact reduced word, or -1 if not reduced
  int lookup_reduced(const Word& w) const;

  static Word parse_word(const std::string& s);
  static std::string word_str(const Word& w);

private:
  CoxeterSystem() = default;
  void enumerate(long expected_order);
  // explore braid moves from `start`; when a word with an adjacent repeated
  // letter appears, stop and store it in *repeat (empty otherwise). With no
  // repeat the returned set is every reduced expression of the element.
  std::vector<Word> braid_scan(const Word& start, Word* repeat) const;
  // canonical reduced word of the element a word folds to
  Word canonicalize(Word w) const;

  std::string type_;
  int rank_ = 0;
  std::vector<std::vector<int>> m_;
  std::vector<Word> canonical_;
  std::map<Word, int> canon_to_id_;
  std::vector<std::vector<int>> right_mult_;
  std::vector<int> inverse_;
  std::vector<int> gen_id_;
  std::vector<char> is_reflection_;
  int w0_ = 0;
  mutable std::vector<std::vector<signed char>> bruhat_; // -1 unknown, 0/1 known
};

} // namespace soergel
