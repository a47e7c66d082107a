#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gemlab/feistel.hpp"
#include "gemlab/group.hpp"
#include "gemlab/oracle.hpp"
#include "gemlab/random.hpp"

namespace gemlab {

enum class Sign { plus, minus };

/// One cipher query-answer pair <x, y> with y = P(x), and the direction it
/// was asked in.
struct CipherRecord {
  FeistelPair x;
  FeistelPair y;
  Sign sign = Sign::plus;

  friend bool operator==(const CipherRecord&, const CipherRecord&) = default;
};

struct FunctionRecord {
  Element x;
  Element y;

  friend bool operator==(const FunctionRecord&, const FunctionRecord&) = default;
};

/// (T_P, T_f, T_g) in query order.
struct Transcript {
  std::vector<CipherRecord> cipher;
  std::vector<FunctionRecord> f;
  std::vector<FunctionRecord> g;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

/// k = (k^L, k^R).
struct PsiKey {
  Element left;
  Element right;

  friend bool operator==(const PsiKey&, const PsiKey&) = default;
};

/// False iff two cipher pairs clash (x_i = x_j but y_i != y_j, or
/// x_i != x_j but y_i = y_j), or an f or g pair contradicts an earlier one.
bool check_consistency(const Transcript& tr);

/// BG1: x_i^R k^R = x''_j, or BG2: y_i^L (k^L)^-1 = x''_j, for some i, j.
bool detect_badg(const GroupHandle& G, const Transcript& tr, const PsiKey& k);

/// Which of B1..B5 hold.
struct BadEvents {
  bool b1 = false;
  bool b2 = false;
  bool b3 = false;
  bool b4 = false;
  bool b5 = false;

  bool any() const { return b1 || b2 || b3 || b4 || b5; }
};

/// With X_i = x_i^L k^L g(x_i^R k^R) and
///      Y_i = y_i^R (k^R)^-1 g(y_i^L (k^L)^-1)^-1:
///   B1: X_i = X_j (i < j)       B2: Y_i = Y_j (i < j)
///   B3: X_i = Y_j (any i, j)    B4: X_i = x'_j    B5: Y_i = x'_j
/// g is evaluated lazily, which may define new points of it.
BadEvents bad_events(const GroupHandle& G, const Transcript& tr, const PsiKey& k, LazyFunction& g);
bool detect_bad(const GroupHandle& G, const Transcript& tr, const PsiKey& k, LazyFunction& g);

/// Consistent, non-repeating transcript with uniform entries: cipher inputs
/// and outputs distinct in G^2, f and g inputs distinct in G.
Transcript random_transcript(const GroupHandle& G, std::uint64_t qc, std::uint64_t qf,
                             std::uint64_t qg, Rng& rng);

/// The final E/D pairs S = {(m, c)} and P pairs T = {(x, y)} of an
/// Even-Mansour game.
struct EmTranscript {
  std::vector<std::pair<Element, Element>> s;
  std::vector<std::pair<Element, Element>> t;
};

/// k is bad iff m_i k = x_j or c_i k^-1 = y_j for some i, j.
bool is_bad_key(const GroupHandle& G, const EmTranscript& tr, const Element& k);

/// Number of bad keys, by enumerating G.
std::uint64_t count_bad_keys(const GroupHandle& G, const EmTranscript& tr);

/// s E/D pairs and t P pairs, each a partial bijection with uniform entries.
EmTranscript random_em_transcript(const GroupHandle& G, std::uint64_t s, std::uint64_t t,
                                  Rng& rng);

}  // namespace gemlab
