#include "tdlc/ordinal.hpp"

#include <algorithm>
#include <cctype>

namespace tdlc {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r))
    fail(errc::overflow, "ordinal coefficient addition overflows");
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    fail(errc::overflow, "ordinal coefficient multiplication overflows");
  return r;
}

}  // namespace

Ordinal::Ordinal() = default;
Ordinal::Ordinal(const Ordinal&) = default;
Ordinal::Ordinal(Ordinal&&) noexcept = default;
Ordinal& Ordinal::operator=(const Ordinal&) = default;
Ordinal& Ordinal::operator=(Ordinal&&) noexcept = default;
Ordinal::~Ordinal() = default;

Ordinal::Ordinal(std::vector<Term> terms) : terms_(std::move(terms)) { check_depth(); }

Ordinal Ordinal::nat(std::uint64_t n) {
  if (n == 0) return Ordinal();
  std::vector<Term> t;
  t.push_back(Term{Ordinal(), n});
  return Ordinal(std::move(t));
}

Ordinal Ordinal::omega() { return omega_pow(nat(1)); }

Ordinal Ordinal::omega_pow(const Ordinal& exponent) {
  return omega_pow_times(exponent, 1);
}

Ordinal Ordinal::omega_pow_times(const Ordinal& exponent, std::uint64_t coefficient) {
  if (coefficient == 0) return Ordinal();
  std::vector<Term> t;
  t.push_back(Term{exponent, coefficient});
  return Ordinal(std::move(t));
}

bool Ordinal::is_zero() const noexcept { return terms_.empty(); }

bool Ordinal::is_finite() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

std::optional<std::uint64_t> Ordinal::as_nat() const noexcept {
  if (terms_.empty()) return 0;
  if (terms_.size() == 1 && terms_[0].exponent.is_zero()) return terms_[0].coefficient;
  return std::nullopt;
}

bool Ordinal::is_successor() const noexcept {
  return !terms_.empty() && terms_.back().exponent.is_zero();
}

bool Ordinal::is_limit() const noexcept { return !terms_.empty() && !is_successor(); }

Ordinal Ordinal::successor() const { return *this + nat(1); }

Ordinal Ordinal::predecessor() const {
  if (!is_successor())
    fail(errc::not_a_successor,
         "predecessor undefined for " + format() + " (zero or a limit ordinal)");
  std::vector<Term> t = terms_;
  if (t.back().coefficient == 1)
    t.pop_back();
  else
    t.back().coefficient -= 1;
  return Ordinal(std::move(t));
}

std::strong_ordering Ordinal::operator<=>(const Ordinal& other) const noexcept {
  const std::size_t n = std::min(terms_.size(), other.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto ec = terms_[i].exponent <=> other.terms_[i].exponent;
    if (ec != std::strong_ordering::equal) return ec;
    auto cc = terms_[i].coefficient <=> other.terms_[i].coefficient;
    if (cc != std::strong_ordering::equal) return cc;
  }
  return terms_.size() <=> other.terms_.size();
}

bool Ordinal::operator==(const Ordinal& other) const noexcept {
  return (*this <=> other) == std::strong_ordering::equal;
}

Ordinal operator+(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  const Ordinal& e = b.terms_[0].exponent;
  std::vector<Ordinal::Term> t;
  std::size_t i = 0;
  while (i < a.terms_.size() && a.terms_[i].exponent > e) t.push_back(a.terms_[i++]);
  std::uint64_t head = b.terms_[0].coefficient;
  if (i < a.terms_.size() && a.terms_[i].exponent == e)
    head = checked_add(a.terms_[i].coefficient, head);
  t.push_back(Ordinal::Term{e, head});
  t.insert(t.end(), b.terms_.begin() + 1, b.terms_.end());
  return Ordinal(std::move(t));
}

Ordinal operator*(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal();
  Ordinal result;
  for (const Ordinal::Term& t : b.terms_) {
    Ordinal contribution;
    if (t.exponent.is_zero()) {
      // a * n scales the leading coefficient and keeps the tail.
      std::vector<Ordinal::Term> scaled = a.terms_;
      scaled[0].coefficient = checked_mul(scaled[0].coefficient, t.coefficient);
      contribution = Ordinal(std::move(scaled));
    } else {
      // a * w^e * c = w^(lead(a) + e) * c for e > 0.
      contribution =
          Ordinal::omega_pow_times(a.terms_[0].exponent + t.exponent, t.coefficient);
    }
    result = result + contribution;
  }
  return result;
}

Ordinal Ordinal::sup(std::span<const Ordinal> values) {
  Ordinal best;
  for (const Ordinal& v : values)
    if (v > best) best = v;
  return best;
}

Ordinal Ordinal::sup_plus(std::span<const Ordinal> values) {
  Ordinal s = sup(values);
  return s.is_successor() ? s : s.successor();
}

std::size_t Ordinal::depth() const noexcept {
  std::size_t d = 0;
  for (const Term& t : terms_) d = std::max(d, t.exponent.depth());
  return terms_.empty() ? 0 : d + 1;
}

void Ordinal::check_depth() const {
  if (depth() > depth_cap)
    fail(errc::depth_cap, "ordinal exponent nesting exceeds the depth cap of " +
                              std::to_string(depth_cap));
}

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool consume(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }
  [[noreturn]] void error(const std::string& what) {
    fail(errc::parse_error,
         "ordinal syntax error at position " + std::to_string(pos) + ": " + what);
  }
};

std::uint64_t parse_nat_token(Cursor& c) {
  c.skip_ws();
  if (c.pos >= c.text.size() || !std::isdigit(static_cast<unsigned char>(c.text[c.pos])))
    c.error("expected a number");
  std::uint64_t v = 0;
  while (c.pos < c.text.size() && std::isdigit(static_cast<unsigned char>(c.text[c.pos]))) {
    std::uint64_t d = static_cast<std::uint64_t>(c.text[c.pos] - '0');
    v = checked_add(checked_mul(v, 10), d);
    ++c.pos;
  }
  return v;
}

Ordinal parse_expr(Cursor& c);

Ordinal parse_atom(Cursor& c) {
  if (c.consume('(')) {
    Ordinal inner = parse_expr(c);
    if (!c.consume(')')) c.error("expected ')'");
    return inner;
  }
  return Ordinal::nat(parse_nat_token(c));
}

Ordinal parse_term(Cursor& c) {
  char p = c.peek();
  if (p == 'w') {
    ++c.pos;
    Ordinal exponent = Ordinal::nat(1);
    if (c.consume('^')) exponent = parse_atom(c);
    std::uint64_t coefficient = 1;
    if (c.consume('*')) coefficient = parse_nat_token(c);
    return Ordinal::omega_pow_times(exponent, coefficient);
  }
  if (std::isdigit(static_cast<unsigned char>(p))) return Ordinal::nat(parse_nat_token(c));
  c.error("expected a term ('w...' or a number)");
}

Ordinal parse_expr(Cursor& c) {
  Ordinal acc = parse_term(c);
  while (c.consume('+')) acc = acc + parse_term(c);
  return acc;
}

}  // namespace

Ordinal Ordinal::parse(std::string_view text) {
  Cursor c{text};
  Ordinal value = parse_expr(c);
  if (!c.at_end()) c.error("trailing input");
  return value;
}

std::string Ordinal::format() const {
  if (is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const Term& t : terms_) {
    if (!first) out += " + ";
    first = false;
    if (t.exponent.is_zero()) {
      out += std::to_string(t.coefficient);
      continue;
    }
    out += 'w';
    if (!(t.exponent == nat(1))) {
      out += '^';
      if (t.exponent.is_finite())
        out += t.exponent.format();
      else
        out += "(" + t.exponent.format() + ")";
    }
    if (t.coefficient != 1) out += "*" + std::to_string(t.coefficient);
  }
  return out;
}

}  // namespace tdlc
