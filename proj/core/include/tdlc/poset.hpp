#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tdlc/errors.hpp"
#include "tdlc/ordinal.hpp"

namespace tdlc {

// Finite strict partial order. Input is a set of labelled elements plus
// generating pairs (lower, upper); the strict order is the transitive
// closure of the pairs, and construction rejects cycles. Element ranks and
// the poset rank are computed eagerly; all values on finite posets are
// naturals, exposed as Ordinal at the API boundary.
class FinitePoset {
 public:
  FinitePoset(std::vector<std::string> elements,
              const std::vector<std::pair<std::string, std::string>>& covers);
  // Index-based overload for bulk construction (labels indexed 0..n-1).
  FinitePoset(std::vector<std::string> elements,
              std::vector<std::pair<std::size_t, std::size_t>> covers);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& elements() const noexcept { return labels_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& cover_pairs() const noexcept {
    return covers_;
  }

  std::size_t index_of(const std::string& label) const;
  bool less(std::size_t a, std::size_t b) const;
  bool less(const std::string& a, const std::string& b) const;

  // rho_P as raw naturals, indexed like elements().
  const std::vector<std::size_t>& rank_values() const noexcept { return ranks_; }
  // rho_P(p) = 0 for minimal p, otherwise sup{rho_P(q) : q < p} + 1.
  std::map<std::string, Ordinal> rank_function() const;
  // rho(P) = sup{rho_P(p)} + 1; equals 1 for the empty poset.
  Ordinal poset_rank() const;

  // True iff candidate satisfies both defining clauses of the rank function:
  // (a) value 0 exactly at minimal elements, (b) each value is the least
  // ordinal strictly above the values at all smaller elements. By uniqueness
  // this holds iff candidate == rank_function().
  static bool check_rank_axioms(const FinitePoset& poset,
                                const std::map<std::string, Ordinal>& candidate);

  // {"elements":[...], "covers":[["a","b"],...]}
  std::string to_json() const;
  static FinitePoset from_json(const std::string& text);

 private:
  void build();
  bool closure_bit(std::size_t a, std::size_t b) const {
    return (closure_[a * words_ + b / 64] >> (b % 64)) & 1u;
  }

  std::vector<std::string> labels_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::pair<std::size_t, std::size_t>> covers_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> closure_;  // row a: bits b with a < b
  std::vector<std::size_t> ranks_;
};

}  // namespace tdlc
