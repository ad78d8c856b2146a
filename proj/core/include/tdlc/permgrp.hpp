#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "tdlc/errors.hpp"

namespace tdlc {

// Permutation of {1..degree}. Images are stored 0-based; the public
// point-valued API is 1-based.
class Perm {
 public:
  static constexpr int max_degree = 65535;

  static Perm identity(int degree);

  // images[i] is the 0-based image of point i+1; must be a bijection.
  static Perm from_images(std::vector<std::uint16_t> images);

  // Cycle notation: "(1 2)(3 4)", identity "()". Points are decimal and
  // 1-based, separated by whitespace; cycles must be disjoint.
  static Perm from_cycles(int degree, std::string_view text);

  int degree() const { return static_cast<int>(img_.size()); }
  int apply(int point) const;  // 1-based
  bool is_identity() const;
  bool fixes(int point) const;  // 1-based
  Perm inverse() const;

  // (a * b)(x) = a(b(x)): b acts first.
  friend Perm operator*(const Perm& a, const Perm& b);

  std::string format() const;  // canonical disjoint-cycle notation
  std::string key() const;     // raw image bytes; equality token for hashing

  friend bool operator==(const Perm&, const Perm&) = default;
  friend bool operator<(const Perm& a, const Perm& b) { return a.img_ < b.img_; }

  const std::vector<std::uint16_t>& images() const { return img_; }

 private:
  explicit Perm(std::vector<std::uint16_t> img) : img_(std::move(img)) {}
  std::vector<std::uint16_t> img_;
};

// Comma-separated permutations in cycle notation; blank text means none.
std::vector<Perm> parse_generators(int degree, std::string_view text);

struct PrimitivityReport {
  bool primitive = false;
  // Primitivity was asked of an intransitive action; the answer is false by
  // convention, and this flag lets callers surface that.
  bool intransitive_input = false;
};

// Finite permutation group given by generators. Elements are enumerated by
// breadth-first closure, computed once on demand and shared between copies.
class PermGroup {
 public:
  static constexpr std::size_t default_cap = 2'000'000;

  PermGroup(int degree, std::vector<Perm> generators,
            std::size_t cap = default_cap);

  // Installs a precomputed element list directly; empty `generators` means
  // the elements generate themselves. The list must be closed under product
  // and contain the identity; the caller vouches for that.
  static PermGroup from_elements(int degree, std::vector<Perm> elements,
                                 std::vector<Perm> generators = {});

  int degree() const { return degree_; }
  const std::vector<Perm>& generators() const { return generators_; }
  std::size_t cap() const { return cap_; }

  std::size_t order() const;
  const std::vector<Perm>& elements() const;

  // Orbit partition of 1..degree; each orbit sorted, orbits ordered by least
  // point. Needs only the generators, never the full enumeration.
  std::vector<std::vector<int>> orbits() const;
  bool is_transitive() const;
  bool is_regular() const;  // transitive with order == degree
  bool is_free() const;     // every point stabilizer is trivial

  // Minimal block systems via union-find refinement seeded with {1, b}.
  PrimitivityReport primitivity() const;
  bool is_primitive() const { return primitivity().primitive; }

  // Lower central series reaches the trivial group.
  bool is_nilpotent() const;

  PermGroup point_stabilizer(int point) const;  // 1-based
  PermGroup stabilizer_generated_subgroup() const;

 private:
  struct Cache {
    std::once_flag flag;
    std::vector<Perm> elements;
  };

  PermGroup() = default;
  void populate() const;

  int degree_ = 1;
  std::vector<Perm> generators_;
  std::size_t cap_ = default_cap;
  std::shared_ptr<Cache> cache_;
};

}  // namespace tdlc
