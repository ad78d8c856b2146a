#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tdlc/errors.hpp"
#include "tdlc/ordinal.hpp"
#include "tdlc/poset.hpp"

namespace tdlc {

enum class ParabolicOrder { equal, strictly_below, strictly_above, incomparable };

// Coxeter system (W, S) given by its matrix. Entry 0 encodes an infinite
// bond; otherwise m(s,s) = 1 and m(s,t) >= 2 off the diagonal. Generator
// subsets are bitmasks over 0..size-1, which caps the size at 31.
class CoxeterSystem {
 public:
  static constexpr int max_size = 31;        // mask representation
  static constexpr int max_rank_size = 20;   // subset enumeration bound
  static constexpr std::size_t materialize_cap = 2048;  // lambda_f elements

  explicit CoxeterSystem(std::vector<std::vector<std::uint32_t>> m);

  // {"size": n, "m": [[1,3],[3,1]]}, 0 meaning an infinite bond
  static CoxeterSystem from_json(const std::string& text);
  std::string to_json() const;

  int size() const { return static_cast<int>(m_.size()); }
  std::uint32_t m(int s, int t) const;
  std::uint32_t full_set() const;

  // Connected components of the diagram induced on the subset; s, t are
  // adjacent iff m(s,t) >= 3 or infinite. Ordered by least generator.
  std::vector<std::uint32_t> components(std::uint32_t subset) const;

  // Finite-type recognition per irreducible component.
  bool is_spherical(std::uint32_t subset) const;

  // The subset minus its spherical components.
  std::uint32_t essential_part(std::uint32_t subset) const;
  bool is_essential(std::uint32_t subset) const;

  // Poset of essential subsets of S under inclusion. The commensurability
  // classes of standard parabolics order-embed onto it by taking essential
  // parts, so its rank bounds the well-founded rank computations downstream.
  FinitePoset lambda_f() const;

  // Length of the longest chain of essential subsets; equals the rank of
  // lambda_f() but is computed by dynamic programming over subsets, so it
  // also covers systems too large to materialize.
  Ordinal lambda_f_rank() const;

  ParabolicOrder parabolic_compare(std::uint32_t j, std::uint32_t j2) const;

  // Floating-point cross-check: the bilinear form with B(s,t) =
  // -cos(pi/m(s,t)) (and -1 on infinite bonds) restricted to the subset,
  // tested for positive definiteness via leading principal minors.
  bool gram_is_positive_definite(std::uint32_t subset) const;

  // "{}", "{1}", "{1 3}": 1-based generator indices, ascending.
  static std::string subset_label(std::uint32_t subset);

 private:
  void check_subset(std::uint32_t subset) const;
  bool component_is_finite(std::uint32_t comp) const;

  std::vector<std::vector<std::uint32_t>> m_;
};

}  // namespace tdlc
