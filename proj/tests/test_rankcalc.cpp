#include <functional>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "tdlc/permgrp.hpp"
#include "tdlc/rank.hpp"

using tdlc::assess;
using tdlc::Assessment;
using tdlc::AtomSpec;
using tdlc::errc;
using tdlc::Error;
using tdlc::ExprPtr;
using tdlc::GroupExpr;
using tdlc::LocalAction;
using tdlc::NodeKind;
using tdlc::Ordinal;
using tdlc::parse_definitions;
using tdlc::RankInterval;
using tdlc::Tristate;

namespace {

// Assessment of the last definition in the source.
Assessment rank_of(const std::string& src) {
  auto defs = parse_definitions(src);
  REQUIRE(!defs.empty());
  return assess(*defs.back().expr);
}

errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a tdlc::Error");
  return errc::parse_error;
}

bool trace_has_rule(const Assessment& a, const std::string& rule) {
  for (const auto& t : a.trace) {
    if (t.rule == rule) return true;
  }
  return false;
}

ExprPtr atom_es(const std::string& lo, const std::string& up) {
  auto g = std::make_shared<GroupExpr>();
  g->kind = NodeKind::atom;
  AtomSpec s;
  s.member_es = Tristate::yes;
  s.xi_s = RankInterval(Ordinal::parse(lo), Ordinal::parse(up));
  g->atom = std::move(s);
  return g;
}

// b refines a when b's constraints are at least as tight everywhere.
bool refines(const Assessment& a, const Assessment& b) {
  auto t_ok = [](Tristate was, Tristate now) {
    return was == Tristate::unknown || was == now;
  };
  auto i_ok = [](const RankInterval& was, const RankInterval& now) {
    if (now.lower() < was.lower()) return false;
    if (was.is_bounded() && (!now.is_bounded() || *now.upper() > *was.upper()))
      return false;
    return true;
  };
  return t_ok(a.member_e, b.member_e) && t_ok(a.member_es, b.member_es) &&
         t_ok(a.member_esim, b.member_esim) && i_ok(a.xi_s, b.xi_s) &&
         i_ok(a.xi_sim, b.xi_sim);
}

// Cross-class shape every assessment must satisfy.
void check_assessment_invariants(const Assessment& a) {
  if (a.member_e == Tristate::yes) CHECK(a.member_es == Tristate::yes);
  if (a.member_es == Tristate::yes) {
    CHECK(a.member_esim == Tristate::yes);
    if (a.xi_s.is_bounded()) {
      REQUIRE(a.xi_sim.is_bounded());
      CHECK(*a.xi_sim.upper() <= *a.xi_s.upper());
    }
  }
  if (a.member_esim == Tristate::no) CHECK(a.member_es == Tristate::no);
  if (a.member_es == Tristate::no) CHECK(a.member_e == Tristate::no);
}

}  // namespace

TEST_SUITE("rankcalc") {

TEST_CASE("rank intervals validate successor endpoints and ordering") {
  CHECK(RankInterval().format() == "[1, unbounded]");
  CHECK(RankInterval::exact(Ordinal::nat(2)).format() == "[2, 2]");
  CHECK(RankInterval(Ordinal::parse("w + 1"), Ordinal::parse("w + 2")).format() ==
        "[w + 1, w + 2]");

  CHECK(code_of([] { RankInterval(Ordinal::nat(0), std::nullopt); }) ==
        errc::invalid_argument);
  CHECK(code_of([] { RankInterval(Ordinal::omega(), std::nullopt); }) ==
        errc::invalid_argument);
  CHECK(code_of([] { RankInterval(Ordinal::nat(1), Ordinal::omega()); }) ==
        errc::invalid_argument);
  CHECK(code_of([] { RankInterval(Ordinal::nat(3), Ordinal::nat(2)); }) ==
        errc::invalid_argument);

  RankInterval a(Ordinal::nat(2), Ordinal::nat(5));
  RankInterval b(Ordinal::nat(3), Ordinal::nat(7));
  CHECK(a.intersect(b, "t").format() == "[3, 5]");
  CHECK(code_of([&] {
          RankInterval(Ordinal::nat(6), Ordinal::nat(7)).intersect(a, "t");
        }) == errc::inconsistent);

  CHECK(tdlc::merge_tristate(Tristate::unknown, Tristate::yes, "t") == Tristate::yes);
  CHECK(tdlc::merge_tristate(Tristate::no, Tristate::unknown, "t") == Tristate::no);
  CHECK(code_of([] { tdlc::merge_tristate(Tristate::yes, Tristate::no, "t"); }) ==
        errc::inconsistent);
}

TEST_CASE("leaf classes get their fixed intervals") {
  for (const char* k : {"trivial", "compact", "regionally-elliptic"}) {
    Assessment a = rank_of("(def g (" + std::string(k) + "))");
    CHECK(a.member_es == Tristate::yes);
    CHECK(a.member_esim == Tristate::yes);
    CHECK(a.xi_s.format() == "[1, 1]");
    CHECK(a.xi_sim.format() == "[1, 1]");
    CHECK(trace_has_rule(a, "R1"));
  }

  CHECK(rank_of("(def g (discrete))").xi_s.format() == "[1, 2]");
  CHECK(rank_of("(def g (discrete :infinite true))").xi_s.format() == "[2, 2]");
  CHECK(rank_of("(def g (sin))").xi_s.format() == "[1, 2]");
  CHECK(rank_of("(def g (sin :noncompact true))").xi_s.format() == "[2, 2]");
  CHECK(rank_of("(def g (locally-soluble :noncompact true))").xi_s.format() == "[2, 2]");
  CHECK(rank_of("(def g (locally-soluble))").member_es == Tristate::yes);

  Assessment alg = rank_of("(def g (simple-algebraic))");
  CHECK(alg.member_es == Tristate::yes);
  CHECK(alg.xi_s.format() == "[2, 2]");
  CHECK(alg.xi_sim.format() == "[1, 2]");

  Assessment lin = rank_of("(def g (locally-linear))");
  CHECK(lin.member_es == Tristate::yes);
  CHECK(lin.xi_s.format() == "[1, 4]");

  Assessment ld = rank_of("(def g (locally-ld))");
  CHECK(ld.member_es == Tristate::unknown);
  CHECK(ld.member_esim == Tristate::yes);
  CHECK(ld.xi_sim.format() == "[1, 4]");
  CHECK(ld.xi_s.format() == "[1, unbounded]");

  CHECK(rank_of("(def g (locally-ld :qz-trivial true))").xi_sim.format() == "[1, 3]");
  Assessment ldn = rank_of("(def g (locally-ld :qz-trivial true :noetherian true))");
  CHECK(ldn.member_es == Tristate::yes);
  CHECK(ldn.xi_s.format() == "[1, 3]");
  CHECK(ldn.xi_sim.format() == "[1, 3]");
}

TEST_CASE("full tree automorphism groups have rank exactly 2") {
  for (int d : {3, 4, 5}) {
    std::string cycle = "(1";
    for (int i = 2; i <= d; ++i) cycle += " " + std::to_string(i);
    cycle += ")";
    std::string gens = "(1 2)," + cycle;
    std::string src = "(def t (tree-p :x (perm " + std::to_string(d) + " \"" + gens +
                      "\") :y (perm " + std::to_string(d) + " \"" + gens + "\")))";
    Assessment a = rank_of(src);
    CHECK(a.member_es == Tristate::yes);
    CHECK(a.xi_s.format() == "[2, 2]");
    CHECK(trace_has_rule(a, "R15"));
    check_assessment_invariants(a);
  }
}

TEST_CASE("an infinite discrete primitive local action lifts the tree value to 3") {
  Assessment a = rank_of(
      "(def s (tree-p"
      "  :x (perm 3 \"(1 2),(1 2 3)\")"
      "  :y (local :transitive true :primitive true :regular false"
      "            :infinite true :discrete true :member-es yes"
      "            :xi-s [\"2\", \"2\"])))");
  CHECK(a.member_es == Tristate::yes);
  CHECK(a.xi_s.format() == "[3, 3]");
  CHECK(trace_has_rule(a, "R15"));
}

TEST_CASE("tree-p side rules") {
  // Noetherian bound without the primitivity hypotheses.
  Assessment noeth = rank_of(
      "(def t (tree-p :noetherian true"
      "  :x (perm 3 \"(1 2)\")"
      "  :y (perm 3 \"(1 2)\")))");
  CHECK(noeth.member_es == Tristate::yes);
  CHECK(noeth.xi_s.format() == "[1, 3]");
  CHECK(trace_has_rule(noeth, "R16"));
  CHECK(!trace_has_rule(noeth, "R15"));

  // Noetherian bound grows with the declared local rank: max(up + 1, 3).
  Assessment big = rank_of(
      "(def t (tree-p :noetherian true"
      "  :x (local :transitive true :member-es yes :xi-s [\"4\", \"4\"])"
      "  :y (perm 3 \"(1 2)\")))");
  CHECK(big.xi_s.format() == "[1, 5]");

  // A local action declared outside the class poisons the tree group.
  Assessment out = rank_of(
      "(def t (tree-p"
      "  :x (perm 3 \"(1 2),(1 2 3)\")"
      "  :y (local :transitive true :member-es no)))");
  CHECK(out.member_es == Tristate::no);
  CHECK(out.member_e == Tristate::no);
  CHECK(trace_has_rule(out, "R17"));

  // No rule applies: everything stays unknown.
  Assessment idle = rank_of(
      "(def t (tree-p :x (perm 3 \"(1 2)\") :y (perm 3 \"(1 2)\")))");
  CHECK(idle.member_es == Tristate::unknown);
  CHECK(idle.xi_s.format() == "[1, unbounded]");
  CHECK(idle.trace.empty());
}

TEST_CASE("nilpotent non-free local actions make U(F) fail S-well-foundedness") {
  Assessment a = rank_of("(def b (burger-mozes 3 \"(1 2)\"))");
  CHECK(a.member_es == Tristate::no);
  CHECK(a.member_e == Tristate::no);
  CHECK(a.member_esim == Tristate::yes);
  CHECK(a.xi_sim.format() == "[1, 3]");
  CHECK(a.xi_s.format() == "[1, unbounded]");
  CHECK(trace_has_rule(a, "R18"));
  check_assessment_invariants(a);

  // Sym(3) is primitive and not regular: the exact tree formula applies.
  Assessment full = rank_of("(def b (burger-mozes 3 \"(1 2),(1 2 3)\"))");
  CHECK(full.member_es == Tristate::yes);
  CHECK(full.xi_s.format() == "[2, 2]");
  CHECK(trace_has_rule(full, "R19"));
  CHECK(!trace_has_rule(full, "R18"));

  // A free local action (here regular C3) triggers nothing.
  Assessment free_f = rank_of("(def b (burger-mozes 3 \"(1 2 3)\"))");
  CHECK(free_f.member_es == Tristate::unknown);
  CHECK(free_f.trace.empty());
}

TEST_CASE("extension combines child intervals") {
  Assessment a = rank_of(
      "(def n (atom :member-es yes :xi-s [\"2\", \"2\"]))"
      "(def q (atom :member-es yes :xi-s [\"3\", \"3\"]))"
      "(def g (extension n q))");
  CHECK(a.member_es == Tristate::yes);
  CHECK(a.xi_s.format() == "[3, 4]");
  CHECK(trace_has_rule(a, "R6"));

  // Membership: no wins, unknown holds back yes.
  Assessment half = rank_of(
      "(def n (atom :member-es yes :xi-s [\"2\", \"2\"]))"
      "(def g (extension n (atom :xi-s [\"3\", \"3\"])))");
  CHECK(half.member_es == Tristate::unknown);
  CHECK(half.xi_s.format() == "[3, 4]");

  Assessment bad = rank_of(
      "(def n (atom :member-es no))"
      "(def g (extension n (atom :member-es yes)))");
  CHECK(bad.member_es == Tristate::no);

  // Unbounded children leave the upper end open.
  Assessment open = rank_of(
      "(def n (atom :member-es yes :xi-s [\"2\", \"unbounded\"]))"
      "(def g (extension n (atom :member-es yes :xi-s [\"3\", \"3\"])))");
  CHECK(open.xi_s.format() == "[3, unbounded]");
}

TEST_CASE("union-like nodes take the least successor over their children") {
  Assessment u = rank_of(
      "(def a (atom :member-es yes :xi-s [\"2\", \"2\"]))"
      "(def b (atom :member-es yes :xi-s [\"3\", \"3\"]))"
      "(def g (directed-union a b))");
  CHECK(u.member_es == Tristate::yes);
  CHECK(u.xi_s.format() == "[3, 3]");
  CHECK(trace_has_rule(u, "R7"));

  Assessment q = rank_of(
      "(def a (atom :member-es yes :xi-s [\"2\", \"4\"]))"
      "(def b (atom :member-es no :xi-s [\"3\", \"3\"]))"
      "(def g (quasi-product a b))");
  CHECK(q.member_es == Tristate::no);
  CHECK(q.xi_s.format() == "[3, 4]");
  CHECK(trace_has_rule(q, "R8"));

  Assessment s = rank_of(
      "(def a (atom :member-es yes :xi-s [\"2\", \"2\"]))"
      "(def g (local-sum-omega a))");
  CHECK(s.member_es == Tristate::yes);
  CHECK(s.xi_s.format() == "[2, 2]");
}

TEST_CASE("quotients inherit membership and the upper bound") {
  Assessment a = rank_of(
      "(def g (atom :member-es yes :xi-s [\"2\", \"5\"]))"
      "(def q (quotient g))");
  CHECK(a.member_es == Tristate::yes);
  CHECK(a.xi_s.format() == "[1, 5]");
  CHECK(trace_has_rule(a, "R9"));

  Assessment idle = rank_of("(def q (quotient (atom :xi-s [\"2\", \"5\"])))");
  CHECK(idle.member_es == Tristate::unknown);
  CHECK(idle.xi_s.format() == "[1, unbounded]");
  CHECK(!trace_has_rule(idle, "R9"));

  Assessment no = rank_of("(def q (quotient (atom :member-es no)))");
  CHECK(no.member_es == Tristate::unknown);
}

TEST_CASE("cocompact RIO subgroups copy the whole assessment") {
  Assessment a = rank_of(
      "(def h (atom :member-es yes :xi-s [\"2\", \"3\"] :xi-sim [\"2\", \"2\"]))"
      "(def g (cocompact-rio h))");
  CHECK(a.member_es == Tristate::yes);
  CHECK(a.member_esim == Tristate::yes);
  CHECK(a.xi_s.format() == "[2, 3]");
  CHECK(a.xi_sim.format() == "[2, 2]");
  CHECK(trace_has_rule(a, "R10"));

  Assessment no = rank_of("(def g (cocompact-rio (atom :member-es no)))");
  CHECK(no.member_es == Tristate::no);
}

TEST_CASE("normal compressions shift the lower bound down by one finite step") {
  CHECK(rank_of("(def g (normal-compression (atom :member-es yes :xi-s [\"1\", \"1\"])))")
            .xi_s.format() == "[1, 1]");
  CHECK(rank_of("(def g (normal-compression (atom :member-es yes :xi-s [\"2\", \"2\"])))")
            .xi_s.format() == "[1, 2]");
  CHECK(rank_of("(def g (normal-compression (atom :member-es yes :xi-s [\"5\", \"7\"])))")
            .xi_s.format() == "[4, 7]");
  // Infinite lower bounds absorb the finite shift.
  Assessment inf = rank_of(
      "(def g (normal-compression (atom :member-es yes :xi-s [\"w + 1\", \"w + 3\"])))");
  CHECK(inf.xi_s.format() == "[w + 1, w + 3]");
  CHECK(trace_has_rule(inf, "R11"));
}

TEST_CASE("local wreath products compose the extension bound with a strict growth flag") {
  std::string hk =
      "(def h (atom :member-es yes :xi-s [\"2\", \"2\"]))"
      "(def k (atom :member-es yes :xi-s [\"2\", \"2\"]))";
  Assessment base = rank_of(hk + "(def g (wreath-local :h h :k k))");
  CHECK(base.member_es == Tristate::yes);
  CHECK(base.xi_s.format() == "[2, 3]");
  CHECK(trace_has_rule(base, "R12"));

  Assessment strict = rank_of(
      hk +
      "(def g (wreath-local :h h :k k :k-transitive true :k-res-omega-nontrivial true"
      " :h-compactly-generated true :k-compactly-generated true))");
  CHECK(strict.xi_s.format() == "[3, 3]");

  // Any missing hypothesis keeps only the composition interval.
  Assessment partial = rank_of(
      hk +
      "(def g (wreath-local :h h :k k :k-transitive true :k-res-omega-nontrivial true"
      " :h-compactly-generated true))");
  CHECK(partial.xi_s.format() == "[2, 3]");
}

TEST_CASE("ended-tree folds climb by w per stage") {
  std::string seed = "(def seed (atom :member-es yes :xi-s [\"2\", \"2\"]))";
  std::string flags = " :transitive true :res-omega-nontrivial true";

  Assessment f1 = rank_of(seed + "(def e1 (ended-tree seed" + flags + "))");
  CHECK(f1.member_es == Tristate::yes);
  CHECK(f1.xi_s.format() == "[w + 1, w + 2]");
  CHECK(trace_has_rule(f1, "R13"));

  Assessment f2 = rank_of(seed + "(def e1 (ended-tree seed" + flags +
                          "))(def e2 (ended-tree e1" + flags + "))");
  CHECK(f2.xi_s.format() == "[w*2 + 1, w^2 + 2]");

  Assessment f3 = rank_of(seed + "(def e1 (ended-tree seed" + flags +
                          "))(def e2 (ended-tree e1" + flags +
                          "))(def e3 (ended-tree e2" + flags + "))");
  CHECK(f3.xi_s.format() == "[w*3 + 1, w^3 + 2]");

  // Without the flags only the coarse bounds remain, and membership still
  // tracks the seed.
  Assessment plain = rank_of(seed + "(def e1 (ended-tree seed))");
  CHECK(plain.member_es == Tristate::yes);
  CHECK(plain.xi_s.format() == "[2, w + 2]");

  Assessment no = rank_of("(def e (ended-tree (atom :member-es no)))");
  CHECK(no.member_es == Tristate::no);
}

TEST_CASE("the ended-tree tower reaches past w squared") {
  Assessment t = rank_of(
      "(def seed (atom :member-es yes :xi-s [\"2\", \"2\"]))"
      "(def tower (ended-tower seed :transitive true :res-omega-nontrivial true))");
  CHECK(t.member_es == Tristate::yes);
  CHECK(t.xi_s.format() == "[w^2 + 1, w^(w) + 1]");
  CHECK(trace_has_rule(t, "R24"));
  CHECK(Ordinal::parse("w^2 + 1") <= t.xi_s.lower());

  Assessment plain = rank_of(
      "(def seed (atom :member-es yes :xi-s [\"2\", \"2\"]))"
      "(def tower (ended-tower seed))");
  CHECK(plain.xi_s.format() == "[2, w^(w) + 1]");
}

TEST_CASE("subdirect products stay within one successor of the factor maximum") {
  std::string ab =
      "(def a (atom :member-es yes :xi-s [\"2\", \"2\"]))"
      "(def b (atom :member-es yes :xi-s [\"3\", \"3\"]))";
  Assessment plain = rank_of(ab + "(def g (subdirect a b))");
  CHECK(plain.member_es == Tristate::yes);
  CHECK(plain.xi_s.format() == "[3, 4]");
  CHECK(trace_has_rule(plain, "R14"));

  // Finite bounds make the filtering refinement invisible...
  Assessment filt = rank_of(ab + "(def g (subdirect a b :filtering true))");
  CHECK(filt.xi_s.format() == "[3, 4]");

  // ...but infinite ones show it: 1 + (w+1) = w+1 versus (w+1) + 1.
  std::string inf = "(def a (atom :member-es yes :xi-s [\"w + 1\", \"w + 1\"]))";
  CHECK(rank_of(inf + "(def g (subdirect a))").xi_s.format() == "[w + 1, w + 2]");
  CHECK(rank_of(inf + "(def g (subdirect a :filtering true))").xi_s.format() ==
        "[w + 1, w + 1]");

  Assessment mixed = rank_of(
      "(def a (atom :member-es yes :xi-s [\"2\", \"2\"]))"
      "(def g (subdirect a (atom :member-es no :xi-s [\"3\", \"3\"])))");
  CHECK(mixed.member_es == Tristate::no);
}

TEST_CASE("Kac-Moody bounds come from the essential-subset poset") {
  CHECK(rank_of("(def g (kac-moody (coxeter [[1, 0], [0, 1]])))").xi_s.format() ==
        "[1, 2]");
  CHECK(rank_of("(def g (kac-moody (coxeter [[1, 3, 3], [3, 1, 3], [3, 3, 1]])))")
            .xi_s.format() == "[1, 2]");
  CHECK(rank_of("(def g (kac-moody (coxeter [[1, 0, 0], [0, 1, 0], [0, 0, 1]])))")
            .xi_s.format() == "[1, 3]");
  // Spherical diagrams leave only the empty essential subset.
  Assessment sph = rank_of("(def g (kac-moody (coxeter [[1, 3], [3, 1]])))");
  CHECK(sph.xi_s.format() == "[1, 1]");
  CHECK(sph.member_es == Tristate::yes);
  CHECK(trace_has_rule(sph, "R5"));
}

TEST_CASE("declared elementary rank bridges to the S-rank") {
  Assessment small = rank_of("(def g (atom :xi-e \"2\"))");
  CHECK(small.member_e == Tristate::yes);
  CHECK(small.member_es == Tristate::yes);
  CHECK(small.xi_s.format() == "[1, 2]");
  CHECK(trace_has_rule(small, "R22"));

  CHECK(rank_of("(def g (atom :xi-e \"w + 1\"))").xi_s.format() == "[1, 2]");
  CHECK(rank_of("(def g (atom :xi-e \"w*2 + 1\"))").xi_s.format() == "[1, w*2 + 1]");

  // Declaring rank 1 (regionally elliptic) alongside a large elementary rank
  // contradicts xi_e <= w*up(xi_s) + 1.
  CHECK(code_of([] {
          rank_of("(def g (atom :xi-s [\"1\", \"1\"] :xi-e \"w*2 + 1\"))");
        }) == errc::inconsistent);
}

TEST_CASE("contradictory constraints surface as inconsistent") {
  CHECK(code_of([] {
          rank_of("(def g (atom :member-es yes :member-esim no))");
        }) == errc::inconsistent);
  CHECK(code_of([] {
          rank_of("(def g (atom :xi-s [\"3\", \"3\"] :xi-e \"2\"))");
        }) == errc::inconsistent);
  // Declared member_e=yes propagates to member_es and collides with the
  // declared no.
  CHECK(code_of([] {
          rank_of("(def g (atom :member-e yes :member-es no))");
        }) == errc::inconsistent);
}

TEST_CASE("adding hypotheses only tightens the result") {
  // ended-tree flag subsets
  ExprPtr seed = atom_es("2", "2");
  auto ended = [&](bool t, bool r) {
    auto g = std::make_shared<GroupExpr>();
    g->kind = NodeKind::ended_tree;
    g->children = {seed};
    g->transitive = t;
    g->res_omega_nontrivial = r;
    return g;
  };
  Assessment e00 = assess(*ended(false, false));
  Assessment e10 = assess(*ended(true, false));
  Assessment e11 = assess(*ended(true, true));
  CHECK(refines(e00, e10));
  CHECK(refines(e00, e11));
  CHECK(refines(e10, e11));

  // wreath-local: each flag subset refines every subset of it
  auto wreath = [&](unsigned mask) {
    auto g = std::make_shared<GroupExpr>();
    g->kind = NodeKind::wreath_local;
    g->children = {seed, seed};
    g->k_transitive = mask & 1;
    g->k_res_omega_nontrivial = mask & 2;
    g->h_compactly_generated = mask & 4;
    g->k_compactly_generated = mask & 8;
    return g;
  };
  std::vector<Assessment> w;
  for (unsigned m = 0; m < 16; ++m) w.push_back(assess(*wreath(m)));
  for (unsigned m = 0; m < 16; ++m) {
    for (unsigned sub = m;; sub = (sub - 1) & m) {
      CHECK(refines(w[sub], w[m]));
      if (sub == 0) break;
    }
  }

  // locally-ld flag subsets
  auto ld = [](bool qz, bool noeth) {
    GroupExpr g;
    g.kind = NodeKind::locally_ld;
    g.qz_trivial = qz;
    g.noetherian = noeth;
    return assess(g);
  };
  CHECK(refines(ld(false, false), ld(true, false)));
  CHECK(refines(ld(false, false), ld(false, true)));
  CHECK(refines(ld(true, false), ld(true, true)));
  CHECK(refines(ld(false, true), ld(true, true)));
}

TEST_CASE("assessment invariants hold across a corpus of expressions") {
  const std::string defs =
      "(def seed (atom :member-es yes :xi-s [\"2\", \"2\"]))"
      "(def t3 (tree-p :x (perm 3 \"(1 2),(1 2 3)\") :y (perm 3 \"(1 2),(1 2 3)\")))"
      "(def bm (burger-mozes 3 \"(1 2)\"))"
      "(def km (kac-moody (coxeter [[1, 0], [0, 1]])))"
      "(def ld (locally-ld :qz-trivial true))"
      "(def ext (extension seed t3))"
      "(def du (directed-union seed t3 km))"
      "(def wr (wreath-local :h seed :k t3 :k-transitive true))"
      "(def et (ended-tree seed :transitive true :res-omega-nontrivial true))"
      "(def tow (ended-tower seed :transitive true :res-omega-nontrivial true))"
      "(def quo (quotient t3))"
      "(def rio (cocompact-rio t3))"
      "(def nc (normal-compression t3))"
      "(def sd (subdirect seed t3 :filtering true))"
      "(def mix (extension (quasi-product bm et) (local-sum-omega seed)))";
  auto parsed = parse_definitions(defs);
  CHECK(parsed.size() == 15);
  for (const auto& def : parsed) {
    Assessment a = assess(*def.expr);
    check_assessment_invariants(a);
    // Determinism: identical reruns produce identical traces.
    Assessment b = assess(*def.expr);
    CHECK(a.trace.size() == b.trace.size());
    CHECK(tdlc::explain(a) == tdlc::explain(b));
    CHECK(a.xi_s == b.xi_s);
    CHECK(a.xi_sim == b.xi_sim);
  }
}

TEST_CASE("parser reports positions and rejects malformed input") {
  auto perr = [](const std::string& src) {
    try {
      parse_definitions(src);
    } catch (const Error& e) {
      CHECK(e.code() == errc::parse_error);
      CHECK(std::string(e.what()).find("line") != std::string::npos);
      return std::string(e.what());
    }
    FAIL("expected a parse error for: ", src);
    return std::string();
  };

  perr("(def g (frobnicate))");
  perr("(def g (tree-p :x (perm 3 \"(1 2)\")))");
  perr("(def g (extension (trivial)))");
  perr("(def g (discrete :infinite maybe))");
  perr("(def g (discrete :infinite true :infinite false))");
  perr("(def g (atom :member-es sometimes))");
  perr("(def g (atom :xi-s [\"2\"]))");
  perr("(def g (atom :xi-s [\"3\", \"2\"]))");
  perr("(def g (atom :xi-e \"w\"))");
  perr("(def g (atom :note \"unterminated");
  perr("(def g undefined-name)");
  perr("(def g (trivial)) (def g (compact))");
  perr("(def g (burger-mozes 2 \"(1 2)\"))");
  perr("(def g (burger-mozes 3 \"(1 4)\"))");
  perr("(def g (kac-moody (coxeter [[1, 1], [1, 1]])))");
  perr("(def g (local-sum-omega))");
  perr("(def g (wreath-local :h (trivial)))");
  perr("(def g (tree-p :x (local :regular true) :y (perm 3 \"(1 2)\")))");
  perr("(def g (trivial)) trailing");
  perr("#");

  // Positions point at the offending token.
  std::string msg = perr("(def g\n  (unknown-kind))");
  CHECK(msg.find("line 2") != std::string::npos);
}

TEST_CASE("burger-mozes degree is validated against programmatic construction too") {
  GroupExpr g;
  g.kind = NodeKind::burger_mozes;
  g.bm_degree = 4;
  g.local_f = tdlc::PermGroup(3, tdlc::parse_generators(3, "(1 2)"));
  CHECK(code_of([&] { assess(g); }) == errc::invalid_argument);

  GroupExpr ext;
  ext.kind = NodeKind::extension;
  ext.children = {atom_es("2", "2")};
  CHECK(code_of([&] { assess(ext); }) == errc::invalid_argument);

  GroupExpr km;
  km.kind = NodeKind::kac_moody;
  CHECK(code_of([&] { assess(km); }) == errc::invalid_argument);
}

TEST_CASE("text and JSON rendering are stable and round-trip") {
  auto defs = parse_definitions(
      "(def t3 (tree-p :x (perm 3 \"(1 2),(1 2 3)\") :y (perm 3 \"(1 2),(1 2 3)\")))"
      "(def bm (burger-mozes 3 \"(1 2)\"))");
  std::vector<std::pair<std::string, Assessment>> items;
  for (const auto& d : defs) items.emplace_back(d.name, assess(*d.expr));

  std::string text = tdlc::render_assessment_text(items[0].first, items[0].second, false);
  CHECK(text ==
        "t3: member_e=unknown member_es=yes member_esim=yes xi_s=[2, 2] "
        "xi_sim=[1, 2]\n");
  std::string traced = tdlc::render_assessment_text(items[0].first, items[0].second, true);
  CHECK(traced.find("R15") != std::string::npos);
  CHECK(traced.find("R23") != std::string::npos);

  std::string json = tdlc::render_assessments_json(items);
  auto parsed = nlohmann::ordered_json::parse(json);
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0]["name"] == "t3");
  CHECK(parsed[0]["xi_s"]["lower"] == "2");
  CHECK(parsed[0]["xi_s"]["upper"] == "2");
  CHECK(parsed[1]["member_es"] == "no");
  CHECK(parsed[1]["member_esim"] == "yes");
  CHECK(parsed[1]["xi_s"]["upper"] == "unbounded");
  CHECK(parsed[1]["xi_sim"]["upper"] == "3");
  REQUIRE(parsed[0]["trace"].is_array());
  CHECK(parsed[0]["trace"].size() > 0);
  CHECK(parsed[0]["trace"][0].contains("node"));
  CHECK(parsed[0]["trace"][0].contains("rule"));
  CHECK(parsed[0]["trace"][0].contains("statement"));
  CHECK(parsed[0]["trace"][0].contains("detail"));

  // Byte-identical round trip.
  CHECK(parsed.dump(2) + "\n" == json);
}

TEST_CASE("traces walk the tree bottom-up with path labels") {
  Assessment a = rank_of(
      "(def seed (atom :member-es yes :xi-s [\"2\", \"2\"]))"
      "(def g (extension seed (ended-tree seed :transitive true"
      " :res-omega-nontrivial true)))");
  REQUIRE(!a.trace.empty());
  // The deepest nodes come first, the root last.
  CHECK(a.trace.front().node == "/1 (atom)");
  CHECK(a.trace.back().node == "/ (extension)");
  bool saw_nested = false;
  for (const auto& t : a.trace) {
    if (t.node == "/2/1 (atom)") saw_nested = true;
  }
  CHECK(saw_nested);
  std::string lines = tdlc::explain(a);
  CHECK(lines.find("R6 / (extension):") != std::string::npos);
}

}  // TEST_SUITE
