#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tdlc/rank.hpp"

namespace tdlc {

namespace {

enum class Tok { lparen, rparen, lbracket, rbracket, comma, word, str, end };

struct Token {
  Tok type = Tok::end;
  std::string text;
  int line = 1;
  int col = 1;
};

[[noreturn]] void err_at(const Token& t, const std::string& msg) {
  fail(errc::parse_error, msg + " at line " + std::to_string(t.line) + ", column " +
                              std::to_string(t.col));
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto bump = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ';') {
      while (i < src.size() && src[i] != '\n') {
        bump(src[i]);
        ++i;
      }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump(c);
      ++i;
      continue;
    }
    Token t{Tok::end, {}, line, col};
    if (c == '(' || c == ')' || c == '[' || c == ']' || c == ',') {
      t.type = c == '(' ? Tok::lparen
               : c == ')' ? Tok::rparen
               : c == '[' ? Tok::lbracket
               : c == ']' ? Tok::rbracket
                          : Tok::comma;
      t.text = c;
      bump(c);
      ++i;
      out.push_back(std::move(t));
      continue;
    }
    if (c == '"') {
      t.type = Tok::str;
      bump(c);
      ++i;
      bool closed = false;
      while (i < src.size()) {
        char d = src[i];
        bump(d);
        ++i;
        if (d == '\\' && i < src.size()) {
          t.text += src[i];
          bump(src[i]);
          ++i;
          continue;
        }
        if (d == '"') {
          closed = true;
          break;
        }
        t.text += d;
      }
      if (!closed) err_at(t, "unterminated string literal");
      out.push_back(std::move(t));
      continue;
    }
    auto word_char = [](char d) {
      return std::isalnum(static_cast<unsigned char>(d)) || d == '-' || d == '_' ||
             d == ':' || d == '.';
    };
    if (word_char(c)) {
      t.type = Tok::word;
      while (i < src.size() && word_char(src[i])) {
        t.text += src[i];
        bump(src[i]);
        ++i;
      }
      out.push_back(std::move(t));
      continue;
    }
    err_at(t, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;
  std::map<std::string, ExprPtr> names;
  std::size_t group_cap = PermGroup::default_cap;

  const Token& peek() const { return toks[pos]; }
  Token take() { return toks[pos++]; }
  bool at(Tok t) const { return peek().type == t; }

  Token expect(Tok t, const char* what) {
    if (!at(t)) err_at(peek(), std::string("expected ") + what);
    return take();
  }

  // Re-raises construction errors (bad permutation, bad matrix, bad
  // interval, ...) as parse errors carrying the source position.
  template <typename F>
  auto guarded(const Token& where, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const Error& e) {
      err_at(where, e.what());
    }
  }

  std::uint64_t parse_nat(const char* what) {
    Token t = expect(Tok::word, what);
    if (t.text.empty() || t.text.find_first_not_of("0123456789") != std::string::npos) {
      err_at(t, std::string("expected ") + what + ", got '" + t.text + "'");
    }
    if (t.text.size() > 19) err_at(t, "number out of range");
    return std::stoull(t.text);
  }

  bool parse_bool() {
    Token t = expect(Tok::word, "true or false");
    if (t.text == "true") return true;
    if (t.text == "false") return false;
    err_at(t, "expected true or false, got '" + t.text + "'");
  }

  Tristate parse_tristate() {
    Token t = expect(Tok::word, "yes, no, or unknown");
    if (t.text == "yes") return Tristate::yes;
    if (t.text == "no") return Tristate::no;
    if (t.text == "unknown") return Tristate::unknown;
    err_at(t, "expected yes, no, or unknown, got '" + t.text + "'");
  }

  Ordinal parse_ordinal() {
    Token t = expect(Tok::str, "an ordinal string");
    return guarded(t, [&] { return Ordinal::parse(t.text); });
  }

  // ["LOWER", "UPPER"] with "unbounded" allowed as the upper entry.
  RankInterval parse_interval() {
    Token open = expect(Tok::lbracket, "an interval [\"lo\", \"up\"]");
    Token lo = expect(Tok::str, "the lower endpoint string");
    expect(Tok::comma, "a comma");
    Token up = expect(Tok::str, "the upper endpoint string");
    expect(Tok::rbracket, "']'");
    return guarded(open, [&] {
      std::optional<Ordinal> upper;
      if (up.text != "unbounded") upper = Ordinal::parse(up.text);
      return RankInterval(Ordinal::parse(lo.text), std::move(upper));
    });
  }

  CoxeterSystem parse_coxeter_literal() {
    expect(Tok::lparen, "a Coxeter literal (coxeter [[...]])");
    Token kw = expect(Tok::word, "coxeter");
    if (kw.text != "coxeter") err_at(kw, "expected coxeter, got '" + kw.text + "'");
    Token open = expect(Tok::lbracket, "a matrix [[...]]");
    std::vector<std::vector<std::uint32_t>> m;
    while (true) {
      expect(Tok::lbracket, "a matrix row");
      std::vector<std::uint32_t> row;
      while (true) {
        std::uint64_t v = parse_nat("a matrix entry");
        if (v > 0xffffffffULL) err_at(toks[pos - 1], "matrix entry out of range");
        row.push_back(static_cast<std::uint32_t>(v));
        if (at(Tok::comma)) {
          take();
          continue;
        }
        break;
      }
      expect(Tok::rbracket, "']'");
      m.push_back(std::move(row));
      if (at(Tok::comma)) {
        take();
        continue;
      }
      break;
    }
    expect(Tok::rbracket, "']'");
    expect(Tok::rparen, "')'");
    return guarded(open, [&] { return CoxeterSystem(std::move(m)); });
  }

  // Keeps the later static_cast<int> exact.
  int parse_degree(const char* what, std::uint64_t min) {
    Token t = peek();
    std::uint64_t deg = parse_nat(what);
    if (deg < min || deg > static_cast<std::uint64_t>(Perm::max_degree)) {
      err_at(t, std::string(what) + " must lie in " + std::to_string(min) + ".." +
                    std::to_string(Perm::max_degree));
    }
    return static_cast<int>(deg);
  }

  PermGroup parse_perm_body() {
    // after "(perm": DEGREE "CYCLES"
    Token at_deg = peek();
    int d = parse_degree("a degree", 1);
    Token cycles = expect(Tok::str, "a cycle string");
    expect(Tok::rparen, "')'");
    return guarded(at_deg, [&] {
      return PermGroup(d, parse_generators(d, cycles.text), group_cap);
    });
  }

  LocalAction parse_local_action() {
    expect(Tok::lparen, "a local action (perm ...) or (local ...)");
    Token kw = expect(Tok::word, "perm or local");
    if (kw.text == "perm") {
      return LocalAction::finite(parse_perm_body());
    }
    if (kw.text != "local") err_at(kw, "expected perm or local, got '" + kw.text + "'");
    LocalAction::Declared d;
    std::set<std::string> seen;
    while (!at(Tok::rparen)) {
      Token key = expect(Tok::word, "a :flag");
      if (key.text.empty() || key.text[0] != ':') {
        err_at(key, "expected a :flag, got '" + key.text + "'");
      }
      if (!seen.insert(key.text).second) err_at(key, "duplicate flag " + key.text);
      if (key.text == ":transitive") d.transitive = parse_bool();
      else if (key.text == ":primitive") d.primitive = parse_bool();
      else if (key.text == ":regular") d.regular = parse_bool();
      else if (key.text == ":free") d.free_action = parse_bool();
      else if (key.text == ":discrete") d.discrete = parse_bool();
      else if (key.text == ":infinite") d.infinite = parse_bool();
      else if (key.text == ":member-es") d.member_es = parse_tristate();
      else if (key.text == ":xi-s") d.xi_s = parse_interval();
      else err_at(key, "unknown flag " + key.text + " for local");
    }
    Token close = take();  // rparen
    return guarded(close, [&] { return LocalAction::declared(std::move(d)); });
  }

  ExprPtr parse_expr() {
    if (at(Tok::word)) {
      Token name = take();
      auto it = names.find(name.text);
      if (it == names.end()) err_at(name, "unknown name '" + name.text + "'");
      return it->second;
    }
    expect(Tok::lparen, "an expression or a defined name");
    Token kw = expect(Tok::word, "a node kind");
    const std::string& kind = kw.text;
    auto g = std::make_shared<GroupExpr>();

    auto finish = [&]() -> ExprPtr {
      expect(Tok::rparen, "')'");
      return g;
    };
    auto flags_only = [&](auto&& handle) {
      std::set<std::string> seen;
      while (!at(Tok::rparen)) {
        Token key = expect(Tok::word, "a :flag");
        if (key.text.empty() || key.text[0] != ':') {
          err_at(key, "expected a :flag, got '" + key.text + "'");
        }
        if (!seen.insert(key.text).second) err_at(key, "duplicate flag " + key.text);
        if (!handle(key)) err_at(key, "unknown flag " + key.text + " for " + kind);
      }
    };
    // Positional child expressions with optional :flags interleaved.
    auto children_and_flags = [&](auto&& handle_flag) {
      std::set<std::string> seen;
      while (!at(Tok::rparen)) {
        if (at(Tok::word) && !peek().text.empty() && peek().text[0] == ':') {
          Token key = take();
          if (!seen.insert(key.text).second) err_at(key, "duplicate flag " + key.text);
          if (!handle_flag(key)) err_at(key, "unknown flag " + key.text + " for " + kind);
          continue;
        }
        g->children.push_back(parse_expr());
      }
    };
    auto no_flags = [&](const Token&) { return false; };
    auto need_children = [&](std::size_t lo, std::size_t hi) {
      if (g->children.size() < lo || g->children.size() > hi) {
        err_at(peek(), kind + " expects " +
                           (lo == hi ? std::to_string(lo)
                                     : "at least " + std::to_string(lo)) +
                           " child expression" + (lo == 1 && hi == 1 ? "" : "s") +
                           ", got " + std::to_string(g->children.size()));
      }
    };
    constexpr std::size_t many = static_cast<std::size_t>(-1);

    if (kind == "trivial" || kind == "compact" || kind == "regionally-elliptic" ||
        kind == "simple-algebraic" || kind == "locally-linear") {
      g->kind = kind == "trivial"              ? NodeKind::trivial
                : kind == "compact"            ? NodeKind::compact
                : kind == "regionally-elliptic" ? NodeKind::regionally_elliptic
                : kind == "simple-algebraic"   ? NodeKind::simple_algebraic
                                               : NodeKind::locally_linear;
      flags_only([&](const Token&) { return false; });
      return finish();
    }
    if (kind == "discrete") {
      g->kind = NodeKind::discrete_group;
      flags_only([&](const Token& key) {
        if (key.text == ":infinite") {
          g->flag_infinite = parse_bool();
          return true;
        }
        return false;
      });
      return finish();
    }
    if (kind == "sin" || kind == "locally-soluble") {
      g->kind = kind == "sin" ? NodeKind::sin : NodeKind::locally_soluble;
      flags_only([&](const Token& key) {
        if (key.text == ":noncompact") {
          g->flag_noncompact = parse_bool();
          return true;
        }
        return false;
      });
      return finish();
    }
    if (kind == "locally-ld") {
      g->kind = NodeKind::locally_ld;
      flags_only([&](const Token& key) {
        if (key.text == ":qz-trivial") g->qz_trivial = parse_bool();
        else if (key.text == ":noetherian") g->noetherian = parse_bool();
        else return false;
        return true;
      });
      return finish();
    }
    if (kind == "kac-moody") {
      g->kind = NodeKind::kac_moody;
      g->coxeter = parse_coxeter_literal();
      return finish();
    }
    if (kind == "tree-p") {
      g->kind = NodeKind::tree_p;
      flags_only([&](const Token& key) {
        if (key.text == ":x") g->local_x = parse_local_action();
        else if (key.text == ":y") g->local_y = parse_local_action();
        else if (key.text == ":noetherian") g->noetherian = parse_bool();
        else return false;
        return true;
      });
      if (!g->local_x || !g->local_y) {
        err_at(peek(), "tree-p needs both :x and :y local actions");
      }
      return finish();
    }
    if (kind == "burger-mozes") {
      g->kind = NodeKind::burger_mozes;
      Token at_deg = peek();
      g->bm_degree = parse_degree("a tree degree", 3);
      Token cycles = expect(Tok::str, "a cycle string");
      g->local_f = guarded(at_deg, [&] {
        return PermGroup(g->bm_degree, parse_generators(g->bm_degree, cycles.text),
                         group_cap);
      });
      return finish();
    }
    if (kind == "extension") {
      g->kind = NodeKind::extension;
      children_and_flags(no_flags);
      need_children(2, 2);
      return finish();
    }
    if (kind == "directed-union" || kind == "quasi-product" ||
        kind == "local-sum-omega") {
      g->kind = kind == "directed-union" ? NodeKind::directed_union
                : kind == "quasi-product" ? NodeKind::quasi_product
                                          : NodeKind::local_sum_omega;
      children_and_flags(no_flags);
      need_children(1, many);
      return finish();
    }
    if (kind == "wreath-local") {
      g->kind = NodeKind::wreath_local;
      ExprPtr h, k;
      children_and_flags([&](const Token& key) {
        if (key.text == ":h") h = parse_expr();
        else if (key.text == ":k") k = parse_expr();
        else if (key.text == ":k-transitive") g->k_transitive = parse_bool();
        else if (key.text == ":k-res-omega-nontrivial")
          g->k_res_omega_nontrivial = parse_bool();
        else if (key.text == ":h-compactly-generated")
          g->h_compactly_generated = parse_bool();
        else if (key.text == ":k-compactly-generated")
          g->k_compactly_generated = parse_bool();
        else return false;
        return true;
      });
      if (!g->children.empty()) {
        err_at(peek(), "wreath-local takes its factors as :h and :k, not positionally");
      }
      if (!h || !k) err_at(peek(), "wreath-local needs both :h and :k");
      g->children = {std::move(h), std::move(k)};
      return finish();
    }
    if (kind == "ended-tree" || kind == "ended-tower") {
      g->kind = kind == "ended-tree" ? NodeKind::ended_tree : NodeKind::ended_tower;
      children_and_flags([&](const Token& key) {
        if (key.text == ":transitive") g->transitive = parse_bool();
        else if (key.text == ":res-omega-nontrivial")
          g->res_omega_nontrivial = parse_bool();
        else return false;
        return true;
      });
      need_children(1, 1);
      return finish();
    }
    if (kind == "quotient" || kind == "cocompact-rio" || kind == "normal-compression") {
      g->kind = kind == "quotient"        ? NodeKind::quotient
                : kind == "cocompact-rio" ? NodeKind::cocompact_rio
                                          : NodeKind::normal_compression;
      children_and_flags(no_flags);
      need_children(1, 1);
      return finish();
    }
    if (kind == "subdirect") {
      g->kind = NodeKind::subdirect;
      children_and_flags([&](const Token& key) {
        if (key.text == ":filtering") {
          g->filtering = parse_bool();
          return true;
        }
        return false;
      });
      need_children(1, many);
      return finish();
    }
    if (kind == "atom") {
      g->kind = NodeKind::atom;
      AtomSpec spec;
      flags_only([&](const Token& key) {
        if (key.text == ":member-e") spec.member_e = parse_tristate();
        else if (key.text == ":member-es") spec.member_es = parse_tristate();
        else if (key.text == ":member-esim") spec.member_esim = parse_tristate();
        else if (key.text == ":xi-s") spec.xi_s = parse_interval();
        else if (key.text == ":xi-sim") spec.xi_sim = parse_interval();
        else if (key.text == ":xi-e") {
          Token where = peek();
          Ordinal xe = parse_ordinal();
          if (!xe.is_successor()) {
            err_at(where, "declared elementary rank " + xe.format() +
                              " is not a successor ordinal");
          }
          spec.xi_e = std::move(xe);
        } else if (key.text == ":note") {
          spec.note = expect(Tok::str, "a note string").text;
        } else {
          return false;
        }
        return true;
      });
      g->atom = std::move(spec);
      return finish();
    }
    err_at(kw, "unknown node kind '" + kind + "'");
  }
};

}  // namespace

std::vector<Definition> parse_definitions(std::string_view text,
                                          std::size_t group_cap) {
  Parser p{lex(text), 0, {}, group_cap};
  std::vector<Definition> defs;
  while (!p.at(Tok::end)) {
    p.expect(Tok::lparen, "a (def NAME expr) form");
    Token kw = p.expect(Tok::word, "def");
    if (kw.text != "def") err_at(kw, "expected def, got '" + kw.text + "'");
    Token name = p.expect(Tok::word, "a definition name");
    if (name.text.empty() || name.text[0] == ':') {
      err_at(name, "definition name may not start with ':'");
    }
    if (p.names.count(name.text)) err_at(name, "redefinition of '" + name.text + "'");
    ExprPtr ex = p.parse_expr();
    p.expect(Tok::rparen, "')'");
    p.names.emplace(name.text, ex);
    defs.push_back({std::move(name.text), std::move(ex)});
  }
  return defs;
}

}  // namespace tdlc
