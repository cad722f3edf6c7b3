#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qbo/error.hpp"

namespace qbo {

// Symbols are 1-based: 1..N are z-type, N+1..N+M are y-type. Index 0 is
// reserved for the constant slot of affine-constraint coefficient vectors and
// never appears inside a word.
using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

struct Alphabet {
  int N = 0;
  int M = 0;
  int size() const { return N + M; }
  bool is_z(Symbol s) const { return s >= 1 && s <= static_cast<Symbol>(N); }
  bool is_y(Symbol s) const {
    return s > static_cast<Symbol>(N) && s <= static_cast<Symbol>(N + M);
  }
};

enum class EquivalenceKind { None, ZYCommutation, Cyclic };

// Global word order: shorter first, ties lexicographic by symbol index. All
// moment-matrix layouts inherit this order, so runs are reproducible
// bit-for-bit.
bool graded_lex_less(const Word& a, const Word& b);

Word involution(const Word& w);
Word concat(const Word& u, const Word& v);

// Number of words of length <= n over S symbols: (S^{n+1}-1)/(S-1).
// Saturates at SIZE_MAX on overflow (callers compare against caps).
std::size_t words_up_to(int S, int n);

// Enumeration/word cap, overridable via environment QBO_WORD_CAP.
std::size_t default_word_cap();
// Oracle enumeration cap, overridable via environment QBO_ENUM_CAP.
std::size_t default_enum_cap();

// All words of length <= n over the N+M symbols in graded-lex order, the
// empty word first. Throws LevelTooLarge past the cap.
std::vector<Word> enumerate_words(int N, int M, int n, std::size_t cap = default_word_cap());

// Position of w in the enumerate_words order over S = N+M symbols.
std::size_t word_rank(const Word& w, int S);

// Lexicographically minimal rotation (Booth's algorithm, linear time).
Word min_rotation(const Word& w);

// None: identity. ZYCommutation: z-subword then y-subword, relative orders
// preserved (the graded-lex minimum of the commutation class). Cyclic:
// minimal rotation.
Word canonicalize(const Word& w, EquivalenceKind kind, const Alphabet& ab);

// (z-subsequence, y-subsequence), relative orders preserved.
std::pair<Word, Word> subwords_by_type(const Word& w, const Alphabet& ab);

// Projective-measurement rewrite rules: symbols sharing a positive group id
// are outcomes of one question. Adjacent equal symbols collapse; adjacent
// distinct symbols of one group annihilate the word when allow_zero is set.
struct RewriteRules {
  std::vector<int> group;  // indexed by symbol (entry 0 unused); 0 = no rule
  bool allow_zero = true;

  bool active() const {
    for (int g : group)
      if (g != 0) return true;
    return false;
  }
  int group_of(Symbol s) const {
    return s < group.size() ? group[s] : 0;
  }
};

// Applies the rules to fixpoint via a stack scan; nullopt means the word
// rewrote to the zero element. Never increases length.
std::optional<Word> rewrite(const Word& w, const RewriteRules& rules);

struct WordHash {
  std::size_t operator()(const Word& w) const {
    std::size_t h = 1469598103934665603ull;
    for (Symbol s : w) {
      h ^= s;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Append-only interning arena; downstream modules address words by handle.
class WordArena {
 public:
  std::uint32_t intern(const Word& w);
  std::optional<std::uint32_t> find(const Word& w) const;
  const Word& operator[](std::uint32_t h) const { return words_[h]; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(words_.size()); }
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

 private:
  std::vector<Word> words_;
  std::unordered_map<Word, std::uint32_t, WordHash> index_;
  bool frozen_ = false;
};

// "e" for the empty word, otherwise symbols joined by '.': "z1.z2.y1" with an
// alphabet, "3.1" without.
std::string to_string(const Word& w);
std::string to_string(const Word& w, const Alphabet& ab);

}  // namespace qbo
