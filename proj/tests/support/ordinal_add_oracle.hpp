#pragma once

// Independent cross-check for ordinal addition that avoids the library's CNF
// merge entirely. An ordinal below w^w is expanded into the weakly decreasing
// list of its natural exponents with coefficients unrolled:
//   w^2*3 + w + 5  ->  [2, 2, 2, 1, 0, 0, 0, 0, 0].
// The sum of two such lists is their concatenation, normalized by the
// absorption law: a summand w^a vanishes exactly when some strictly larger
// exponent occurs later in the list. Comparing expansions of results keeps
// the oracle free of any CNF-merging code path.

#include <cstdint>
#include <optional>
#include <vector>

#include "tdlc/ordinal.hpp"

namespace tdlc_test {

using ExpandedOrdinal = std::vector<std::uint64_t>;

// Expansion is defined only for ordinals below w^w with small coefficients;
// anything else is outside the oracle's domain.
inline std::optional<ExpandedOrdinal> expand(const tdlc::Ordinal& a) {
  ExpandedOrdinal xs;
  for (const auto& t : a.terms()) {
    std::optional<std::uint64_t> e = t.exponent.as_nat();
    if (!e || t.coefficient > 64) return std::nullopt;
    for (std::uint64_t i = 0; i < t.coefficient; ++i) xs.push_back(*e);
  }
  return xs;
}

inline ExpandedOrdinal oracle_add(const ExpandedOrdinal& a, const ExpandedOrdinal& b) {
  ExpandedOrdinal cat = a;
  cat.insert(cat.end(), b.begin(), b.end());
  ExpandedOrdinal kept_reversed;
  std::uint64_t max_later = 0;
  bool have_later = false;
  for (auto it = cat.rbegin(); it != cat.rend(); ++it) {
    if (!have_later || *it >= max_later) {
      kept_reversed.push_back(*it);
      max_later = *it;
      have_later = true;
    }
  }
  return ExpandedOrdinal(kept_reversed.rbegin(), kept_reversed.rend());
}

}  // namespace tdlc_test
