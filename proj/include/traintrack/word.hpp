#pragma once

// Reduced words, conjugacy classes and basis automorphisms of a finitely
// generated free group F_n.  A letter is a nonzero integer: +g denotes the
// g-th basis element (1-based), -g its inverse.  Words are kept freely
// reduced; every function below returns reduced output.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace traintrack {

using Letter = int;
using Word = std::vector<Letter>;

inline Letter letter_inverse(Letter x) { return -x; }
inline int generator_index(Letter x) { return x > 0 ? x : -x; }

// Canonical letter order: x1 < x1' < x2 < x2' < ...
inline bool letter_less(Letter a, Letter b) {
  return std::pair(generator_index(a), a < 0) < std::pair(generator_index(b), b < 0);
}

inline bool word_less(const Word& a, const Word& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      letter_less);
}

inline bool is_reduced(std::span<const Letter> w) {
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] == -w[i + 1]) return false;
  return true;
}

// Free reduction by a stack scan.  Idempotent.
inline Word reduce(std::span<const Letter> letters) {
  Word out;
  out.reserve(letters.size());
  for (Letter x : letters) {
    if (x == 0) throw std::invalid_argument("zero letter");
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

inline Word reduce(const Word& w) { return reduce(std::span<const Letter>(w)); }

inline Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (Letter& x : out) x = -x;
  return out;
}

inline Word concat(const Word& a, const Word& b) {
  Word s = a;
  s.insert(s.end(), b.begin(), b.end());
  return reduce(s);
}

inline Word concat(const Word& a, const Word& b, const Word& c) {
  return concat(concat(a, b), c);
}

inline Word pow(const Word& w, int k) {
  Word base = k >= 0 ? w : inverse(w);
  int n = k >= 0 ? k : -k;
  Word out;
  for (int i = 0; i < n; ++i) out = concat(out, base);
  return out;
}

// w = conjugator * core * conjugator^{-1} with core cyclically reduced.
inline std::pair<Word, Word> cyclic_reduce(const Word& w0) {
  Word w = reduce(w0);
  size_t a = 0, b = w.size();
  while (b - a >= 2 && w[a] == -w[b - 1]) {
    ++a;
    --b;
  }
  Word conj(w.begin(), w.begin() + a);
  Word core(w.begin() + a, w.begin() + b);
  return {core, conj};
}

inline bool is_cyclically_reduced(const Word& w) {
  if (!is_reduced(w)) return false;
  return w.size() < 2 || w.front() != -w.back();
}

// Maximal root: w = root^exponent with root root-free.  Input must be
// cyclically reduced and nonempty.
inline std::pair<Word, int> root_decomposition(const Word& w) {
  if (w.empty()) throw std::invalid_argument("root_decomposition: empty word");
  if (!is_cyclically_reduced(w))
    throw std::invalid_argument("root_decomposition: not cyclically reduced");
  const int n = static_cast<int>(w.size());
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (int i = d; i < n && ok; ++i)
      if (w[i] != w[i % d]) ok = false;
    if (ok) return {Word(w.begin(), w.begin() + d), n / d};
  }
  return {w, 1};  // unreachable
}

// Least cyclic rotation under the canonical letter order.
inline Word least_rotation(const Word& w) {
  if (w.size() < 2) return w;
  Word best = w;
  Word cur = w;
  for (size_t i = 1; i < w.size(); ++i) {
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    if (word_less(cur, best)) best = cur;
  }
  return best;
}

// Conjugacy class of a word; canonical representative is the least rotation
// of the cyclic reduction, minimised over inversion when unoriented.
struct ConjClass {
  Word representative;
  bool oriented = true;

  static ConjClass of(const Word& w, bool oriented = true) {
    auto [core, conj] = cyclic_reduce(w);
    (void)conj;
    Word a = least_rotation(core);
    if (!oriented) {
      Word b = least_rotation(inverse(core));
      if (word_less(b, a)) a = b;
    }
    return ConjClass{a, oriented};
  }

  bool operator==(const ConjClass& o) const {
    return representative == o.representative && oriented == o.oriented;
  }
  bool operator<(const ConjClass& o) const {
    return representative < o.representative;
  }
};

// An automorphism of F_n given by images of the basis.  The inverse is never
// computed by a general algorithm at this level; callers either supply it or
// use invert_basis (Nielsen reduction, valid only because the images form a
// basis) where a move demands it.
struct BasisAutomorphism {
  int rank = 0;
  std::vector<Word> images;                         // one per generator
  std::optional<std::vector<Word>> declared_inverse;

  static BasisAutomorphism identity(int rank) {
    BasisAutomorphism a;
    a.rank = rank;
    for (int i = 1; i <= rank; ++i) a.images.push_back({i});
    a.declared_inverse = a.images;
    return a;
  }
};

inline Word apply_automorphism(const BasisAutomorphism& phi, const Word& w) {
  Word out;
  for (Letter x : w) {
    int g = generator_index(x);
    if (g < 1 || g > phi.rank) throw std::invalid_argument("letter out of rank");
    const Word& im = phi.images[g - 1];
    if (x > 0)
      out.insert(out.end(), im.begin(), im.end());
    else {
      Word iv = inverse(im);
      out.insert(out.end(), iv.begin(), iv.end());
    }
  }
  return reduce(out);
}

// (phi ∘ psi)(x) = phi(psi(x))
inline BasisAutomorphism compose(const BasisAutomorphism& phi,
                                 const BasisAutomorphism& psi) {
  if (phi.rank != psi.rank) throw std::invalid_argument("rank mismatch");
  BasisAutomorphism out;
  out.rank = phi.rank;
  for (const Word& w : psi.images) out.images.push_back(apply_automorphism(phi, w));
  return out;
}

// True iff psi(phi(x_i)) = x_i for every generator.
inline bool verify_inverse_pair(const BasisAutomorphism& phi,
                                const BasisAutomorphism& psi) {
  if (phi.rank != psi.rank) throw std::invalid_argument("rank mismatch");
  for (int i = 1; i <= phi.rank; ++i) {
    Word got = apply_automorphism(psi, phi.images[i - 1]);
    if (got != Word{i}) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Nielsen reduction of a basis tuple, with expression tracking.  Used to
// invert an automorphism that arises internally from a graph move (the images
// are known to form a basis, so reduction terminates at single letters).
// ---------------------------------------------------------------------------

namespace detail {

// Expressions are words in abstract symbols 1..n naming the original tuple.
struct TrackedTuple {
  std::vector<Word> words;  // current elements
  std::vector<Word> exprs;  // each element written in the original tuple

  size_t total_length() const {
    size_t s = 0;
    for (auto& w : words) s += w.size();
    return s;
  }
};

inline bool nielsen_reduce_step(TrackedTuple& t) {
  const int n = static_cast<int>(t.words.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int ei : {1, -1}) {
        for (int ej : {1, -1}) {
          // candidate: replace u_i by u_i^{ei} u_j^{ej}, stored un-inverted
          Word a = ei > 0 ? t.words[i] : inverse(t.words[i]);
          Word b = ej > 0 ? t.words[j] : inverse(t.words[j]);
          Word cand = concat(a, b);
          if (cand.size() < t.words[i].size() && !cand.empty()) {
            Word ea = ei > 0 ? t.exprs[i] : inverse(t.exprs[i]);
            Word eb = ej > 0 ? t.exprs[j] : inverse(t.exprs[j]);
            t.words[i] = cand;
            t.exprs[i] = concat(ea, eb);
            return true;
          }
        }
      }
    }
  }
  return false;
}

inline bool tuple_is_standard(const std::vector<Word>& ws) {
  std::set<int> seen;
  for (auto& w : ws) {
    if (w.size() != 1) return false;
    seen.insert(generator_index(w[0]));
  }
  return static_cast<int>(seen.size()) == static_cast<int>(ws.size());
}

}  // namespace detail

// Given images of a basis under an automorphism, return the inverse images
// (v_1..v_n with v_i(images) = x_i), or nullopt if reduction stalls (the
// input was not a basis, or a length plateau beyond the search bound).
inline std::optional<std::vector<Word>> invert_basis(
    const std::vector<Word>& images) {
  const int n = static_cast<int>(images.size());
  detail::TrackedTuple t;
  for (int i = 0; i < n; ++i) {
    t.words.push_back(reduce(images[i]));
    t.exprs.push_back({i + 1});
    if (t.words.back().empty()) return std::nullopt;
  }
  // Greedy length reduction, with a bounded breadth search across
  // length-preserving moves when the greedy phase plateaus.
  auto greedy = [](detail::TrackedTuple& tt) {
    while (detail::nielsen_reduce_step(tt)) {
    }
  };
  greedy(t);
  if (!detail::tuple_is_standard(t.words)) {
    std::set<std::vector<Word>> visited;
    std::vector<detail::TrackedTuple> frontier{t};
    visited.insert(t.words);
    bool done = false;
    for (int round = 0; round < 64 && !done && !frontier.empty(); ++round) {
      std::vector<detail::TrackedTuple> next;
      for (auto& cur : frontier) {
        const int m = static_cast<int>(cur.words.size());
        for (int i = 0; i < m && !done; ++i)
          for (int j = 0; j < m && !done; ++j) {
            if (i == j) continue;
            for (int ej : {1, -1}) {
              Word b = ej > 0 ? cur.words[j] : inverse(cur.words[j]);
              Word cand = concat(cur.words[i], b);
              if (cand.empty() || cand.size() > cur.words[i].size()) continue;
              detail::TrackedTuple nt = cur;
              nt.words[i] = cand;
              Word eb = ej > 0 ? cur.exprs[j] : inverse(cur.exprs[j]);
              nt.exprs[i] = concat(cur.exprs[i], eb);
              greedy(nt);
              if (detail::tuple_is_standard(nt.words)) {
                t = nt;
                done = true;
                break;
              }
              if (visited.size() < 4096 && visited.insert(nt.words).second)
                next.push_back(std::move(nt));
            }
          }
      }
      frontier = std::move(next);
    }
    if (!done && !detail::tuple_is_standard(t.words)) return std::nullopt;
  }
  // t.words[i] = x_{sigma(i)}^{eps}; solve for each generator.
  std::vector<Word> inv(n);
  std::vector<bool> filled(n, false);
  for (int i = 0; i < n; ++i) {
    Letter x = t.words[i][0];
    int g = generator_index(x);
    Word e = x > 0 ? t.exprs[i] : inverse(t.exprs[i]);
    inv[g - 1] = e;  // e is a word in symbols naming the original images
    filled[g - 1] = true;
  }
  for (bool b : filled)
    if (!b) return std::nullopt;
  return inv;
}

// Invert a BasisAutomorphism whose images are known to form a basis.
inline std::optional<BasisAutomorphism> invert_automorphism(
    const BasisAutomorphism& phi) {
  if (phi.declared_inverse) {
    BasisAutomorphism psi;
    psi.rank = phi.rank;
    psi.images = *phi.declared_inverse;
    return psi;
  }
  auto inv = invert_basis(phi.images);
  if (!inv) return std::nullopt;
  BasisAutomorphism psi;
  psi.rank = phi.rank;
  psi.images = *inv;
  if (!verify_inverse_pair(phi, psi)) return std::nullopt;
  return psi;
}

// Is phi = i_c (conjugation by a single word) ?  Returns c when so.
inline std::optional<Word> inner_conjugator(const BasisAutomorphism& phi) {
  // c x_i c^{-1} = images[i] for all i.  Candidate cs are limited: from the
  // first generator, c must satisfy c x_1 = images[0] c, so we scan prefixes
  // of images[0] extended by powers of its cyclic root.
  std::vector<Word> candidates;
  candidates.push_back({});
  const Word& w0 = phi.images[0];
  for (size_t k = 1; k <= w0.size(); ++k)
    candidates.emplace_back(w0.begin(), w0.begin() + k);
  // also allow c starting with x_1^{-1} patterns: prefixes of x_1^{-1}*w0...
  Word alt = concat(Word{-1}, w0);
  for (size_t k = 1; k <= alt.size(); ++k)
    candidates.emplace_back(alt.begin(), alt.begin() + k);
  for (const Word& c : candidates) {
    bool ok = true;
    for (int i = 1; i <= phi.rank && ok; ++i) {
      Word lhs = concat(c, Word{i}, inverse(c));
      if (lhs != phi.images[i - 1]) ok = false;
    }
    if (ok) return c;
  }
  return std::nullopt;
}

// True iff phi and psi agree as OUTER automorphisms; when they do and out_c
// is non-null, *out_c is the conjugator with psi = i_c ∘ phi.
inline bool same_outer_class(const BasisAutomorphism& phi,
                             const BasisAutomorphism& psi, Word* out_c = nullptr) {
  if (phi.rank != psi.rank) return false;
  auto phinv = invert_automorphism(phi);
  if (!phinv) return false;
  BasisAutomorphism comp = compose(psi, *phinv);  // psi ∘ phi^{-1}
  auto c = inner_conjugator(comp);
  if (!c) return false;
  if (out_c) *out_c = *c;
  return true;
}

// ---------------------------------------------------------------------------
// Stallings subgroup graph: folded labeled graph for a finitely generated
// subgroup, supporting membership queries.
// ---------------------------------------------------------------------------

class SubgroupGraph {
 public:
  explicit SubgroupGraph(const std::vector<Word>& generators) {
    int nv = 1;  // base = 0
    std::vector<std::array<int, 3>> triples;  // (vertex, letter, vertex)
    for (const Word& w : generators) {
      int v = 0;
      for (size_t i = 0; i < w.size(); ++i) {
        int u = (i + 1 == w.size()) ? 0 : nv++;
        triples.push_back({v, w[i], u});
        v = u;
      }
    }
    rep_.resize(nv);
    std::iota(rep_.begin(), rep_.end(), 0);
    // Fold to a fixpoint: two arcs with the same label out of one vertex
    // force their endpoints to merge.
    bool changed = true;
    while (changed) {
      changed = false;
      std::map<std::pair<int, Letter>, int> slot;
      for (auto& [a, x, b] : triples) {
        int u = find(a), v = find(b);
        for (auto [from, lab, to] : {std::tuple{u, x, v}, std::tuple{v, -x, u}}) {
          auto key = std::make_pair(from, lab);
          auto it = slot.find(key);
          if (it == slot.end())
            slot[key] = to;
          else if (it->second != to) {
            unite(it->second, to);
            changed = true;
          }
        }
        if (changed) break;
      }
    }
    for (auto& [a, x, b] : triples) {
      adj_[{find(a), x}] = find(b);
      adj_[{find(b), -x}] = find(a);
    }
  }

  bool contains(const Word& w) const {
    int v = find_const(0);
    for (Letter x : w) {
      auto it = adj_.find({v, x});
      if (it == adj_.end()) return false;
      v = it->second;
    }
    return v == find_const(0);
  }

 private:
  mutable std::vector<int> rep_;
  std::map<std::pair<int, Letter>, int> adj_;

  int find(int v) {
    while (rep_[v] != v) v = rep_[v] = rep_[rep_[v]];
    return v;
  }
  int find_const(int v) const {
    while (rep_[v] != v) v = rep_[v];
    return v;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b == 0) std::swap(a, b);
    rep_[b] = a;
  }
};

// Printing helpers (generator names default to x1..xn or A..Z given names).
inline std::string word_to_string(const Word& w,
                                  const std::vector<std::string>& names) {
  if (w.empty()) return "1";
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    int g = generator_index(w[i]);
    s += names.at(g - 1);
    if (w[i] < 0) s += '\'';
  }
  return s;
}

}  // namespace traintrack
