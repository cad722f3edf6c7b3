#include "qbo/words.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

namespace qbo {

const char* to_string(Error::Code c) {
  switch (c) {
    case Error::Code::LevelTooLarge: return "LevelTooLarge";
    case Error::Code::ValidationFailed: return "ValidationFailed";
    case Error::Code::WordOutOfRange: return "WordOutOfRange";
    case Error::Code::DimensionMismatch: return "DimensionMismatch";
    case Error::Code::UnboundedVariable: return "UnboundedVariable";
    case Error::Code::FamilyViolation: return "FamilyViolation";
    case Error::Code::EnumerationTooLarge: return "EnumerationTooLarge";
    case Error::Code::NonIntegralSupport: return "NonIntegralSupport";
    case Error::Code::CapExceeded: return "CapExceeded";
    case Error::Code::InvalidPOVM: return "InvalidPOVM";
    case Error::Code::NotAState: return "NotAState";
    case Error::Code::UnsupportedStructure: return "UnsupportedStructure";
    case Error::Code::ParseError: return "ParseError";
    case Error::Code::IOFailure: return "IOFailure";
    case Error::Code::BackendFailure: return "BackendFailure";
  }
  return "Unknown";
}

bool graded_lex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Word involution(const Word& w) { return Word(w.rbegin(), w.rend()); }

Word concat(const Word& u, const Word& v) {
  Word r;
  r.reserve(u.size() + v.size());
  r.insert(r.end(), u.begin(), u.end());
  r.insert(r.end(), v.begin(), v.end());
  return r;
}

std::size_t words_up_to(int S, int n) {
  if (n < 0) return 0;
  const std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 1, layer = 1;
  for (int l = 1; l <= n; ++l) {
    if (layer > kMax / static_cast<std::size_t>(S)) return kMax;
    layer *= static_cast<std::size_t>(S);
    if (total > kMax - layer) return kMax;
    total += layer;
  }
  return total;
}

static std::size_t env_cap(const char* name, std::size_t fallback) {
  if (const char* v = std::getenv(name)) {
    char* end = nullptr;
    unsigned long long parsed = std::strtoull(v, &end, 10);
    if (end != v && parsed > 0) return static_cast<std::size_t>(parsed);
  }
  return fallback;
}

std::size_t default_word_cap() { return env_cap("QBO_WORD_CAP", 1000000); }
std::size_t default_enum_cap() { return env_cap("QBO_ENUM_CAP", 10000000); }

std::vector<Word> enumerate_words(int N, int M, int n, std::size_t cap) {
  const int S = N + M;
  if (S < 1) throw Error(Error::Code::DimensionMismatch, "alphabet must have at least one symbol");
  if (n < 0) throw Error(Error::Code::DimensionMismatch, "negative word length");
  const std::size_t total = words_up_to(S, n);
  if (total > cap)
    throw Error(Error::Code::LevelTooLarge,
                "word count " + std::to_string(total) + " exceeds cap " + std::to_string(cap));
  std::vector<Word> out;
  out.reserve(total);
  out.emplace_back();  // empty word first
  for (int l = 1; l <= n; ++l) {
    Word w(l, 1);
    while (true) {
      out.push_back(w);
      int pos = l - 1;
      while (pos >= 0 && w[pos] == static_cast<Symbol>(S)) {
        w[pos] = 1;
        --pos;
      }
      if (pos < 0) break;
      ++w[pos];
    }
  }
  return out;
}

std::size_t word_rank(const Word& w, int S) {
  std::size_t rank = words_up_to(S, static_cast<int>(w.size()) - 1);
  std::size_t offset = 0;
  for (Symbol s : w) offset = offset * static_cast<std::size_t>(S) + (s - 1);
  return rank + offset;
}

Word min_rotation(const Word& w) {
  const std::size_t n = w.size();
  if (n <= 1) return w;
  // Booth's least-rotation algorithm over the doubled word.
  std::vector<std::ptrdiff_t> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    const Symbol sj = w[j % n];
    std::ptrdiff_t i = f[j - k - 1];
    while (i != -1 && sj != w[(k + i + 1) % n]) {
      if (sj < w[(k + i + 1) % n]) k = j - i - 1;
      i = f[i];
    }
    if (sj != w[(k + i + 1) % n]) {
      if (sj < w[(k + i + 1) % n]) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  Word r(n);
  for (std::size_t t = 0; t < n; ++t) r[t] = w[(k + t) % n];
  return r;
}

Word canonicalize(const Word& w, EquivalenceKind kind, const Alphabet& ab) {
  switch (kind) {
    case EquivalenceKind::None:
      return w;
    case EquivalenceKind::ZYCommutation: {
      auto [wz, wy] = subwords_by_type(w, ab);
      return concat(wz, wy);
    }
    case EquivalenceKind::Cyclic:
      return min_rotation(w);
  }
  return w;
}

std::pair<Word, Word> subwords_by_type(const Word& w, const Alphabet& ab) {
  Word wz, wy;
  for (Symbol s : w) {
    if (ab.is_z(s))
      wz.push_back(s);
    else
      wy.push_back(s);
  }
  return {wz, wy};
}

std::optional<Word> rewrite(const Word& w, const RewriteRules& rules) {
  if (!rules.active()) return w;
  Word stack;
  stack.reserve(w.size());
  for (Symbol s : w) {
    const int gs = rules.group_of(s);
    if (gs != 0 && !stack.empty() && rules.group_of(stack.back()) == gs) {
      if (stack.back() == s) continue;  // projector idempotence
      if (rules.allow_zero) return std::nullopt;  // orthogonal outcomes annihilate
    }
    stack.push_back(s);
  }
  return stack;
}

std::uint32_t WordArena::intern(const Word& w) {
  auto it = index_.find(w);
  if (it != index_.end()) return it->second;
  if (frozen_) throw Error(Error::Code::WordOutOfRange, "intern after freeze: " + to_string(w));
  const std::uint32_t h = static_cast<std::uint32_t>(words_.size());
  words_.push_back(w);
  index_.emplace(w, h);
  return h;
}

std::optional<std::uint32_t> WordArena::find(const Word& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(w[i]);
  }
  return s;
}

std::string to_string(const Word& w, const Alphabet& ab) {
  if (w.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += '.';
    if (ab.is_z(w[i]))
      s += "z" + std::to_string(w[i]);
    else
      s += "y" + std::to_string(w[i] - ab.N);
  }
  return s;
}

}  // namespace qbo
