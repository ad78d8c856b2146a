#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tdlc/errors.hpp"

namespace tdlc {

// Ordinal below epsilon_0 in Cantor normal form:
//   w^e1 * c1 + w^e2 * c2 + ... + w^ek * ck
// with e1 > e2 > ... > ek (ordinals) and every ci >= 1 (machine naturals).
// The empty term list is 0. The representation is unique per value, so
// equality is structural.
//
// Exponent nesting depth is capped (default 8); arithmetic that would nest
// deeper, and coefficient arithmetic that would overflow, raise errors
// rather than wrap or approximate.
class Ordinal {
 public:
  struct Term;

  static constexpr std::size_t depth_cap = 8;

  Ordinal();  // 0
  Ordinal(const Ordinal&);
  Ordinal(Ordinal&&) noexcept;
  Ordinal& operator=(const Ordinal&);
  Ordinal& operator=(Ordinal&&) noexcept;
  ~Ordinal();

  static Ordinal nat(std::uint64_t n);
  static Ordinal omega();
  // w^exponent. Checks the depth cap.
  static Ordinal omega_pow(const Ordinal& exponent);
  // w^exponent * coefficient; coefficient 0 gives 0.
  static Ordinal omega_pow_times(const Ordinal& exponent, std::uint64_t coefficient);

  bool is_zero() const noexcept;
  bool is_finite() const noexcept;
  std::optional<std::uint64_t> as_nat() const noexcept;
  // Successor: nonzero with a finite last term. Limit: nonzero, not a successor.
  bool is_successor() const noexcept;
  bool is_limit() const noexcept;

  Ordinal successor() const;
  // a - 1 for successor a; errors with not_a_successor on 0 and limits.
  Ordinal predecessor() const;

  friend Ordinal operator+(const Ordinal& a, const Ordinal& b);
  friend Ordinal operator*(const Ordinal& a, const Ordinal& b);

  std::strong_ordering operator<=>(const Ordinal& other) const noexcept;
  bool operator==(const Ordinal& other) const noexcept;

  // max of the values; 0 for the empty span.
  static Ordinal sup(std::span<const Ordinal> values);
  // Least successor ordinal >= sup(values); 1 for the empty span.
  static Ordinal sup_plus(std::span<const Ordinal> values);

  // Grammar:  expr := term ('+' term)*
  //           term := 'w' ('^' atom)? ('*' nat)? | nat
  //           atom := nat | '(' expr ')'
  // evaluated left to right with ordinal addition/multiplication, so
  // "1 + w" is w and "w*0" is 0. Whitespace is ignored. Errors carry the
  // offending position.
  static Ordinal parse(std::string_view text);

  // Canonical form: terms joined by " + "; "w^2*3 + w + 5"; infinite
  // exponents parenthesized ("w^(w+1)"); 0 renders as "0".
  std::string format() const;

  const std::vector<Term>& terms() const noexcept { return terms_; }
  // 0 has depth 0; otherwise 1 + max depth of the exponents.
  std::size_t depth() const noexcept;

 private:
  explicit Ordinal(std::vector<Term> terms);
  void check_depth() const;

  std::vector<Term> terms_;
};

struct Ordinal::Term {
  Ordinal exponent;
  std::uint64_t coefficient;
};

}  // namespace tdlc
