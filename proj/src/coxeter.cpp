#include "soergel/coxeter.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

namespace soergel {

namespace {

constexpr long kMaxOrder = 2000;

std::vector<std::vector<int>> build_coxeter_matrix(const std::string& tag, int& rank, long& order) {
  auto factorial = [](int n) {
    long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  auto chain = [](int n, int first_bond) {
    std::vector<std::vector<int>> m(n, std::vector<int>(n, 2));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    for (int i = 0; i + 1 < n; ++i) m[i][i + 1] = m[i + 1][i] = 3;
    if (n >= 2) m[0][1] = m[1][0] = first_bond;
    return m;
  };
  if (tag.size() >= 2 && tag[0] == 'A' && std::isdigit(static_cast<unsigned char>(tag[1]))) {
    rank = std::stoi(tag.substr(1));
    if (rank < 1) throw ConfigError("bad type " + tag);
    order = factorial(rank + 1);
    return chain(rank, rank >= 2 ? 3 : 2);
  }
  if (tag.size() >= 2 && tag[0] == 'B' && std::isdigit(static_cast<unsigned char>(tag[1]))) {
    rank = std::stoi(tag.substr(1));
    if (rank < 2) throw ConfigError("bad type " + tag);
    order = factorial(rank) << rank;
    return chain(rank, 4);
  }
  if (tag.size() >= 2 && tag[0] == 'D' && std::isdigit(static_cast<unsigned char>(tag[1]))) {
    rank = std::stoi(tag.substr(1));
    if (rank < 4) throw ConfigError("bad type " + tag);
    order = factorial(rank) << (rank - 1);
    std::vector<std::vector<int>> m(rank, std::vector<int>(rank, 2));
    for (int i = 0; i < rank; ++i) m[i][i] = 1;
    // fork: 0 and 1 both bonded to 2, then a chain 2-3-...-(rank-1)
    m[0][2] = m[2][0] = 3;
    m[1][2] = m[2][1] = 3;
    for (int i = 2; i + 1 < rank; ++i) m[i][i + 1] = m[i + 1][i] = 3;
    return m;
  }
  if (tag.rfind("I2(", 0) == 0 && tag.back() == ')') {
    const int mm = std::stoi(tag.substr(3, tag.size() - 4));
    if (mm < 3) throw ConfigError("I2(m) needs m >= 3");
    rank = 2;
    order = 2L * mm;
    return {{1, mm}, {mm, 1}};
  }
  if (tag == "H3") {
    rank = 3;
    order = 120;
    std::vector<std::vector<int>> m(3, std::vector<int>(3, 2));
    for (int i = 0; i < 3; ++i) m[i][i] = 1;
    m[0][1] = m[1][0] = 5;
    m[1][2] = m[2][1] = 3;
    return m;
  }
  throw ConfigError("unknown Coxeter type tag '" + tag + "'");
}

} // namespace

CoxeterSystem CoxeterSystem::create(const std::string& type_tag) {
  CoxeterSystem W;
  W.type_ = type_tag;
  long expected = 0;
  W.m_ = build_coxeter_matrix(type_tag, W.rank_, expected);
  if (expected > kMaxOrder) throw ConfigError("Coxeter group too large to enumerate: " + type_tag);
  W.enumerate(expected);
  return W;
}

std::vector<Word> CoxeterSystem::braid_scan(const Word& start, Word* repeat) const {
  repeat->clear();
  auto has_repeat = [](const Word& u) {
    for (size_t i = 0; i + 1 < u.size(); ++i)
      if (u[i] == u[i + 1]) return true;
    return false;
  };
  if (has_repeat(start)) {
    *repeat = start;
    return {};
  }
  std::set<Word> seen{start};
  std::deque<const Word*> queue{&*seen.begin()};
  while (!queue.empty()) {
    const Word& w = *queue.front();
    queue.pop_front();
    const int n = static_cast<int>(w.size());
    for (int s = 0; s < rank_; ++s)
      for (int t = 0; t < rank_; ++t) {
        if (s == t) continue;
        const int mm = m_[s][t];
        if (mm < 2 || mm > n) continue;
        for (int pos = 0; pos + mm <= n; ++pos) {
          bool match = true;
          for (int k = 0; k < mm; ++k)
            if (w[pos + k] != ((k % 2 == 0) ? s : t)) { match = false; break; }
          if (!match) continue;
          Word w2 = w;
          for (int k = 0; k < mm; ++k) w2[pos + k] = (k % 2 == 0) ? t : s;
          if (has_repeat(w2)) {
            *repeat = w2;
            return {};
          }
          auto [it, fresh] = seen.insert(std::move(w2));
          if (fresh) queue.push_back(&*it);
        }
      }
  }
  return {seen.begin(), seen.end()};
}

Word CoxeterSystem::canonicalize(Word w) const {
  for (;;) {
    Word rep;
    std::vector<Word> closure = braid_scan(w, &rep);
    if (rep.empty()) {
      check(!closure.empty(), "closure of a reduced word is nonempty");
      return closure.front(); // set iteration yields the ShortLex-least first
    }
    // delete an adjacent repeated pair (s s = identity) and retry
    for (size_t i = 0; i + 1 < rep.size(); ++i)
      if (rep[i] == rep[i + 1]) {
        rep.erase(rep.begin() + i, rep.begin() + i + 2);
        break;
      }
    w = std::move(rep);
  }
}

void CoxeterSystem::enumerate(long expected_order) {
  canonical_.assign(1, {});
  canon_to_id_.clear();
  canon_to_id_[Word{}] = 0;
  right_mult_.assign(1, std::vector<int>(rank_, -1));

  std::vector<int> level{0};
  while (!level.empty()) {
    std::vector<int> next;
    for (int w : level) {
      for (int s = 0; s < rank_; ++s) {
        Word ws = canonical_[w];
        ws.push_back(s);
        Word rep;
        std::vector<Word> closure = braid_scan(ws, &rep);
        if (!rep.empty()) {
          // not reduced: the element is shorter; find it
          right_mult_[w][s] = canon_to_id_.at(canonicalize(std::move(rep)));
          continue;
        }
        const Word& canon = closure.front();
        auto [it, fresh] = canon_to_id_.try_emplace(canon, static_cast<int>(canonical_.size()));
        if (fresh) {
          canonical_.push_back(canon);
          right_mult_.emplace_back(rank_, -1);
          next.push_back(it->second);
        }
        right_mult_[w][s] = it->second;
      }
    }
    level = std::move(next);
  }

  const int n = order();
  check(n == expected_order, "group order mismatch after enumeration");
  w0_ = n - 1; // ids are assigned by length, so the last one is longest

  gen_id_.resize(rank_);
  for (int s = 0; s < rank_; ++s) gen_id_[s] = right_mult_[0][s];

  inverse_.resize(n);
  for (int w = 0; w < n; ++w) {
    Word rev = canonical_[w];
    std::reverse(rev.begin(), rev.end()); // reverse of a reduced word is reduced
    inverse_[w] = canon_to_id_.at(canonicalize(std::move(rev)));
  }

  is_reflection_.assign(n, 0);
  for (int x = 0; x < n; ++x)
    for (int s = 0; s < rank_; ++s) {
      const int t = mult(mult(x, gen_id_[s]), inverse_[x]);
      is_reflection_[t] = 1;
    }
  is_reflection_[0] = 0;

  bruhat_.assign(n, std::vector<signed char>(n, -1));
}

std::vector<Word> CoxeterSystem::reduced_words(int w) const {
  Word rep;
  std::vector<Word> closure = braid_scan(canonical_[w], &rep);
  check(rep.empty(), "canonical word must be reduced");
  return closure;
}

int CoxeterSystem::mult(int x, int y) const {
  int r = x;
  for (int s : canonical_[y]) r = right_mult_[r][s];
  return r;
}

int CoxeterSystem::element_of_word(const Word& w) const {
  int r = 0;
  for (int s : w) {
    check(s >= 0 && s < rank_, "letter out of range");
    r = right_mult_[r][s];
  }
  return r;
}

int CoxeterSystem::lookup_reduced(const Word& w) const {
  int r = 0;
  for (int s : w) {
    if (s < 0 || s >= rank_) return -1;
    const int rs = right_mult_[r][s];
    if (length(rs) <= length(r)) return -1;
    r = rs;
  }
  return r;
}

std::vector<int> CoxeterSystem::reflections() const {
  std::vector<int> t;
  for (int w = 0; w < order(); ++w)
    if (is_reflection_[w]) t.push_back(w);
  return t;
}

bool CoxeterSystem::bruhat_leq(int x, int y) const {
  if (x == y) return true;
  if (length(x) >= length(y)) return false;
  signed char& memo = bruhat_[x][y];
  if (memo >= 0) return memo == 1;
  // lifting property: for s a right descent of y,
  //   x <= y  iff  (xs <= ys when xs < x)  else  (x <= ys)
  const int s = canonical_[y].back();
  const int ys = right_mult_[y][s];
  const int xs = right_mult_[x][s];
  const bool r = (length(xs) < length(x)) ? bruhat_leq(xs, ys) : bruhat_leq(x, ys);
  memo = r ? 1 : 0;
  return r;
}

bool CoxeterSystem::bruhat_leq_bruteforce(int x, int y) const {
  // x <= y iff some subword of a fixed reduced word of y equals x
  const Word& wy = canonical_[y];
  const int n = static_cast<int>(wy.size());
  check(n <= 20, "brute-force Bruhat limited to short words");
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Word sub;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) sub.push_back(wy[i]);
    if (element_of_word(sub) == x) return true;
  }
  return false;
}

Word CoxeterSystem::parse_word(const std::string& s) {
  Word w;
  if (s.empty() || s == "e") return w;
  size_t i = 0;
  while (i < s.size()) {
    size_t j = s.find('.', i);
    if (j == std::string::npos) j = s.size();
    if (j == i) throw ConfigError("bad word '" + s + "'");
    size_t used = 0;
    int letter = 0;
    try {
      letter = std::stoi(s.substr(i, j - i), &used);
    } catch (const std::exception&) {
      throw ConfigError("bad word '" + s + "'");
    }
    if (used != j - i || letter < 0) throw ConfigError("bad word '" + s + "'");
    w.push_back(letter);
    i = j + 1;
  }
  return w;
}

std::string CoxeterSystem::word_str(const Word& w) {
  if (w.empty()) return "e";
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(w[i]);
  }
  return out;
}

} // namespace soergel
