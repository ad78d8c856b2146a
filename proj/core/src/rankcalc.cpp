#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tdlc/rank.hpp"

namespace tdlc {

const char* kind_name(NodeKind k) noexcept {
  switch (k) {
    case NodeKind::trivial: return "trivial";
    case NodeKind::compact: return "compact";
    case NodeKind::discrete_group: return "discrete";
    case NodeKind::regionally_elliptic: return "regionally-elliptic";
    case NodeKind::sin: return "sin";
    case NodeKind::locally_soluble: return "locally-soluble";
    case NodeKind::simple_algebraic: return "simple-algebraic";
    case NodeKind::locally_linear: return "locally-linear";
    case NodeKind::locally_ld: return "locally-ld";
    case NodeKind::kac_moody: return "kac-moody";
    case NodeKind::tree_p: return "tree-p";
    case NodeKind::burger_mozes: return "burger-mozes";
    case NodeKind::extension: return "extension";
    case NodeKind::directed_union: return "directed-union";
    case NodeKind::quasi_product: return "quasi-product";
    case NodeKind::local_sum_omega: return "local-sum-omega";
    case NodeKind::wreath_local: return "wreath-local";
    case NodeKind::ended_tree: return "ended-tree";
    case NodeKind::ended_tower: return "ended-tower";
    case NodeKind::quotient: return "quotient";
    case NodeKind::cocompact_rio: return "cocompact-rio";
    case NodeKind::normal_compression: return "normal-compression";
    case NodeKind::subdirect: return "subdirect";
    case NodeKind::atom: return "atom";
  }
  return "?";
}

namespace {

Ordinal nat(std::uint64_t n) { return Ordinal::nat(n); }

Ordinal omax(const Ordinal& a, const Ordinal& b) { return a < b ? b : a; }

// yes only when every part is yes; no as soon as one part is no.
Tristate conjunction(const std::vector<Tristate>& parts) {
  Tristate out = Tristate::yes;
  for (Tristate t : parts) {
    if (t == Tristate::no) return Tristate::no;
    if (t == Tristate::unknown) out = Tristate::unknown;
  }
  return out;
}

// (up_n - 1) + up_q: the extension bound. Unbounded swallows everything.
std::optional<Ordinal> extension_upper(const std::optional<Ordinal>& up_n,
                                       const std::optional<Ordinal>& up_q) {
  if (!up_n || !up_q) return std::nullopt;
  return up_n->predecessor() + *up_q;
}

std::string fmt_upper(const std::optional<Ordinal>& up) {
  return up ? up->format() : "unbounded";
}

std::string child_summary(const Assessment& k) {
  return "member_es=" + std::string(tristate_name(k.member_es)) +
         " xi_s=" + k.xi_s.format();
}

// Constraint sink for one node; conflicts surface as `inconsistent`
// tagged with the node's path.
struct Acc {
  std::string where;
  std::vector<TraceEntry>* trace;
  Assessment a;

  void fire(const char* rule, std::string statement, std::string detail) {
    trace->push_back({where, rule, std::move(statement), std::move(detail)});
  }
  std::string ctx(const char* rule) const { return std::string(rule) + " at " + where; }
  void es(Tristate t, const char* rule) {
    a.member_es = merge_tristate(a.member_es, t, ctx(rule));
  }
  void esim(Tristate t, const char* rule) {
    a.member_esim = merge_tristate(a.member_esim, t, ctx(rule));
  }
  void e(Tristate t, const char* rule) {
    a.member_e = merge_tristate(a.member_e, t, ctx(rule));
  }
  void xi_s(const RankInterval& r, const char* rule) {
    a.xi_s = a.xi_s.intersect(r, ctx(rule));
  }
  void xi_sim(const RankInterval& r, const char* rule) {
    a.xi_sim = a.xi_sim.intersect(r, ctx(rule));
  }
};

void check_shape(const GroupExpr& e) {
  const char* name = kind_name(e.kind);
  for (const ExprPtr& c : e.children) {
    if (!c) fail(errc::invalid_argument, std::string(name) + " has a null child");
  }
  auto need = [&](std::size_t n) {
    if (e.children.size() != n) {
      fail(errc::invalid_argument, std::string(name) + " expects " + std::to_string(n) +
                                       " children, got " +
                                       std::to_string(e.children.size()));
    }
  };
  auto need_some = [&] {
    if (e.children.empty()) {
      fail(errc::invalid_argument, std::string(name) + " expects at least one child");
    }
  };
  switch (e.kind) {
    case NodeKind::extension:
    case NodeKind::wreath_local:
      need(2);
      break;
    case NodeKind::ended_tree:
    case NodeKind::ended_tower:
    case NodeKind::quotient:
    case NodeKind::cocompact_rio:
    case NodeKind::normal_compression:
      need(1);
      break;
    case NodeKind::directed_union:
    case NodeKind::quasi_product:
    case NodeKind::local_sum_omega:
    case NodeKind::subdirect:
      need_some();
      break;
    default:
      need(0);
      break;
  }
  if (e.kind == NodeKind::kac_moody && !e.coxeter) {
    fail(errc::invalid_argument, "kac-moody needs a Coxeter system");
  }
  if (e.kind == NodeKind::tree_p && (!e.local_x || !e.local_y)) {
    fail(errc::invalid_argument, "tree-p needs local actions for both vertex classes");
  }
  if (e.kind == NodeKind::burger_mozes) {
    if (!e.local_f) fail(errc::invalid_argument, "burger-mozes needs a local action group");
    if (e.bm_degree < 3) {
      fail(errc::invalid_argument, "burger-mozes tree degree must be at least 3");
    }
    if (e.local_f->degree() != e.bm_degree) {
      fail(errc::invalid_argument,
           "burger-mozes local action degree " + std::to_string(e.local_f->degree()) +
               " does not match tree degree " + std::to_string(e.bm_degree));
    }
  }
  if (e.kind == NodeKind::atom) {
    if (!e.atom) fail(errc::invalid_argument, "atom needs a declared-fact record");
    if (e.atom->xi_e && !e.atom->xi_e->is_successor()) {
      fail(errc::invalid_argument, "declared elementary rank " + e.atom->xi_e->format() +
                                       " is not a successor ordinal");
    }
  }
}

void rank_one_class(Acc& acc) {
  acc.fire("R1",
           "trivial, compact, and regionally elliptic groups form exactly the rank-1 "
           "class: every compactly generated open subgroup is compact",
           "member_es=yes, xi_s = [1, 1]");
  acc.es(Tristate::yes, "R1");
  acc.xi_s(RankInterval::exact(nat(1)), "R1");
}

void small_elementary_class(Acc& acc, bool sharp, const char* sharp_flag) {
  std::string detail = "member_es=yes, xi_s <= 2";
  if (sharp) {
    detail += std::string("; flagged ") + sharp_flag +
              " (not regionally elliptic), so xi_s = [2, 2]";
  }
  acc.fire("R2",
           "discrete, SIN, and locally soluble groups are elementary of low "
           "decomposition rank, hence S-well-founded of rank at most 2",
           std::move(detail));
  acc.es(Tristate::yes, "R2");
  acc.xi_s(RankInterval::at_most(nat(2)), "R2");
  if (sharp) acc.xi_s(RankInterval::at_least(nat(2)), "R2");
}

void atom_rules(Acc& acc, const AtomSpec& s) {
  std::string decl;
  auto add = [&decl](const std::string& piece) {
    if (!decl.empty()) decl += ", ";
    decl += piece;
  };
  if (s.member_e != Tristate::unknown)
    add("member_e=" + std::string(tristate_name(s.member_e)));
  if (s.member_es != Tristate::unknown)
    add("member_es=" + std::string(tristate_name(s.member_es)));
  if (s.member_esim != Tristate::unknown)
    add("member_esim=" + std::string(tristate_name(s.member_esim)));
  if (s.xi_s) add("xi_s in " + s.xi_s->format());
  if (s.xi_sim) add("xi_sim in " + s.xi_sim->format());
  if (s.xi_e) add("xi_e = " + s.xi_e->format());
  if (!s.note.empty()) add("note: " + s.note);
  if (decl.empty()) decl = "no declared constraints";
  acc.fire("R21", "user-declared facts, taken on trust", std::move(decl));
  acc.e(s.member_e, "R21");
  acc.es(s.member_es, "R21");
  acc.esim(s.member_esim, "R21");
  if (s.xi_s) acc.xi_s(*s.xi_s, "R21");
  if (s.xi_sim) acc.xi_sim(*s.xi_sim, "R21");

  if (s.xi_e) {
    const Ordinal& xe = *s.xi_e;
    bool small = xe <= Ordinal::omega() + nat(1);
    std::string detail = "xi_e = " + xe.format() + ": member_e=yes, xi_s <= " + xe.format();
    if (small) detail += "; xi_e <= w + 1 forces xi_s <= 2";
    acc.fire("R22",
             "the elementary decomposition rank bounds the S-rank, and decomposition "
             "rank at most w + 1 forces S-rank at most 2; conversely "
             "xi_e <= w*up(xi_s) + 1",
             std::move(detail));
    acc.e(Tristate::yes, "R22");
    acc.xi_s(RankInterval::at_most(xe), "R22");
    if (small) acc.xi_s(RankInterval::at_most(nat(2)), "R22");
    // xi_s is final for an atom here, so the converse bound is checkable.
    const std::optional<Ordinal>& up = acc.a.xi_s.upper();
    if (up) {
      Ordinal cap = Ordinal::omega() * *up + nat(1);
      if (xe > cap) {
        fail(errc::inconsistent,
             acc.ctx("R22") + ": declared elementary rank " + xe.format() +
                 " exceeds w*up(xi_s) + 1 = " + cap.format());
      }
    }
  }
}

void tree_p_rules(Acc& acc, const GroupExpr& e) {
  const LocalAction& x = *e.local_x;
  const LocalAction& y = *e.local_y;
  const bool both_yes =
      x.member_es() == Tristate::yes && y.member_es() == Tristate::yes;

  const bool legal_exact = both_yes && x.transitive() && x.primitive() &&
                           !x.regular() && y.transitive() && y.primitive() &&
                           !y.regular();
  if (legal_exact) {
    RankInterval xs = x.xi_s();
    RankInterval ys = y.xi_s();
    Ordinal lo = omax(omax(xs.lower(), ys.lower()), nat(2));
    std::optional<Ordinal> up;
    if (xs.is_bounded() && ys.is_bounded()) {
      up = omax(omax(*xs.upper(), *ys.upper()), nat(2));
    }
    const bool inf_disc = (x.infinite() && x.discrete()) || (y.infinite() && y.discrete());
    if (inf_disc) {
      lo = omax(lo, nat(3));
      if (up) up = omax(*up, nat(3));
    }
    std::string detail = "x: " + x.describe() + "; y: " + y.describe() +
                         (inf_disc ? "; an infinite discrete local action lifts the value 2 to 3"
                                   : "") +
                         "; xi_s in [" + lo.format() + ", " + fmt_upper(up) + "]";
    acc.fire("R15",
             "with both local actions transitive, primitive, and not regular, the rank "
             "is exactly max{rank(x), rank(y), 2}, except that the value 2 becomes 3 "
             "when some local action is an infinite discrete group",
             std::move(detail));
    acc.es(Tristate::yes, "R15");
    acc.xi_s(RankInterval(std::move(lo), std::move(up)), "R15");
  }

  if (e.noetherian && both_yes) {
    RankInterval xs = x.xi_s();
    RankInterval ys = y.xi_s();
    std::optional<Ordinal> up;
    if (xs.is_bounded() && ys.is_bounded()) {
      up = omax(omax(*xs.upper(), *ys.upper()) + nat(1), nat(3));
    }
    acc.fire("R16",
             "a Noetherian group acting on the tree with S-well-founded local actions "
             "is S-well-founded of rank at most max{(max local rank) + 1, 3}",
             "x: " + x.describe() + "; y: " + y.describe() + "; xi_s <= " + fmt_upper(up));
    acc.es(Tristate::yes, "R16");
    if (up) acc.xi_s(RankInterval::at_most(*up), "R16");
  }

  if (x.member_es() == Tristate::no || y.member_es() == Tristate::no) {
    acc.fire("R17",
             "vertex stabilizers are open and induce the local actions, so a local "
             "action outside the S-well-founded class pulls the whole group out",
             std::string("offending action: ") +
                 (x.member_es() == Tristate::no ? x.describe() : y.describe()));
    acc.es(Tristate::no, "R17");
  }
}

void burger_mozes_rules(Acc& acc, const GroupExpr& e) {
  const PermGroup& f = *e.local_f;
  if (f.is_nilpotent() && !f.is_free()) {
    acc.fire("R18",
             "for F nilpotent with a nontrivial point stabilizer, U(F) is not "
             "S-well-founded, yet is [Sim]-well-founded of rank at most 3; no RIO "
             "subgroup of U(F) has a quotient in S",
             "F: order " + std::to_string(f.order()) + " on " +
                 std::to_string(f.degree()) + " points; member_es=no, member_esim=yes, "
                                              "xi_sim <= 3");
    acc.es(Tristate::no, "R18");
    acc.esim(Tristate::yes, "R18");
    acc.xi_sim(RankInterval::at_most(nat(3)), "R18");
  }
  if (f.is_primitive() && !f.is_regular()) {
    acc.fire("R19",
             "for F primitive and not regular, U(F) acts on the tree with both local "
             "actions F, and the legal-action rank formula gives the exact value 2",
             "F: order " + std::to_string(f.order()) + " on " +
                 std::to_string(f.degree()) + " points; member_es=yes, xi_s = [2, 2]");
    acc.es(Tristate::yes, "R19");
    acc.xi_s(RankInterval::exact(nat(2)), "R19");
  }
}

Assessment assess_node(const GroupExpr& e, const std::string& path,
                       std::vector<TraceEntry>& trace);

std::vector<Assessment> assess_children(const GroupExpr& e, const std::string& path,
                                        std::vector<TraceEntry>& trace) {
  std::vector<Assessment> kids;
  kids.reserve(e.children.size());
  for (std::size_t i = 0; i < e.children.size(); ++i) {
    std::string sub = (path == "/" ? "/" : path + "/") + std::to_string(i + 1);
    kids.push_back(assess_node(*e.children[i], sub, trace));
  }
  return kids;
}

std::vector<Tristate> es_of(const std::vector<Assessment>& kids) {
  std::vector<Tristate> out;
  out.reserve(kids.size());
  for (const Assessment& k : kids) out.push_back(k.member_es);
  return out;
}

std::string list_children(const std::vector<Assessment>& kids) {
  std::string out;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i) out += "; ";
    out += "child " + std::to_string(i + 1) + ": " + child_summary(kids[i]);
  }
  return out;
}

// Least successor ordinal above every child lower resp. upper bound; the
// upper variant is absent as soon as one child is unbounded.
Ordinal sup_plus_lowers(const std::vector<Assessment>& kids) {
  std::vector<Ordinal> los;
  los.reserve(kids.size());
  for (const Assessment& k : kids) los.push_back(k.xi_s.lower());
  return Ordinal::sup_plus(los);
}

std::optional<Ordinal> sup_plus_uppers(const std::vector<Assessment>& kids) {
  std::vector<Ordinal> ups;
  ups.reserve(kids.size());
  for (const Assessment& k : kids) {
    if (!k.xi_s.is_bounded()) return std::nullopt;
    ups.push_back(*k.xi_s.upper());
  }
  return Ordinal::sup_plus(ups);
}

void union_like_rules(Acc& acc, const std::vector<Assessment>& kids, const char* rule,
                      const char* statement) {
  Ordinal lo = sup_plus_lowers(kids);
  std::optional<Ordinal> up = sup_plus_uppers(kids);
  acc.fire(rule, statement,
           list_children(kids) + "; xi_s in [" + lo.format() + ", " + fmt_upper(up) + "]");
  acc.es(conjunction(es_of(kids)), rule);
  acc.xi_s(RankInterval(std::move(lo), std::move(up)), rule);
}

// Membership chain and the S-to-[Sim] transfer, applied after a node's own
// rules. member_e=yes forces member_es=yes forces member_esim=yes, and the
// contrapositives run downward; an S-well-founded group is [Sim]-well-founded
// with no larger rank.
void finalize(Acc& acc) {
  Assessment& a = acc.a;
  const std::string chain = "membership chain at " + acc.where;
  if (a.member_esim == Tristate::no) a.member_es = merge_tristate(a.member_es, Tristate::no, chain);
  if (a.member_es == Tristate::no) a.member_e = merge_tristate(a.member_e, Tristate::no, chain);
  if (a.member_e == Tristate::yes) a.member_es = merge_tristate(a.member_es, Tristate::yes, chain);
  if (a.member_es == Tristate::yes) {
    a.member_esim = merge_tristate(a.member_esim, Tristate::yes, chain);
    std::string detail = "member_esim=yes";
    if (a.xi_s.is_bounded()) detail += "; xi_sim <= " + a.xi_s.upper()->format();
    acc.fire("R23",
             "an S-well-founded group is [Sim]-well-founded with no larger rank",
             std::move(detail));
    if (a.xi_s.is_bounded()) acc.xi_sim(RankInterval::at_most(*a.xi_s.upper()), "R23");
  }
}

Assessment assess_node(const GroupExpr& e, const std::string& path,
                       std::vector<TraceEntry>& trace) {
  check_shape(e);
  std::vector<Assessment> kids = assess_children(e, path, trace);
  Acc acc{path + " (" + kind_name(e.kind) + ")", &trace, {}};

  switch (e.kind) {
    case NodeKind::trivial:
    case NodeKind::compact:
    case NodeKind::regionally_elliptic:
      rank_one_class(acc);
      break;

    case NodeKind::discrete_group:
      small_elementary_class(acc, e.flag_infinite, "infinite");
      break;
    case NodeKind::sin:
    case NodeKind::locally_soluble:
      small_elementary_class(acc, e.flag_noncompact, "noncompact");
      break;

    case NodeKind::simple_algebraic:
      acc.fire("R3",
               "in a topologically simple algebraic group over a local field, every "
               "proper open subgroup is compact",
               "member_es=yes, xi_s = [2, 2]");
      acc.es(Tristate::yes, "R3");
      acc.xi_s(RankInterval::exact(nat(2)), "R3");
      break;

    case NodeKind::locally_linear:
      acc.fire("R4",
               "a group with a linear open subgroup is S-well-founded of rank at most 4",
               "member_es=yes, xi_s <= 4");
      acc.es(Tristate::yes, "R4");
      acc.xi_s(RankInterval::at_most(nat(4)), "R4");
      break;

    case NodeKind::locally_ld: {
      Ordinal up = nat(e.qz_trivial ? 3 : 4);
      std::string detail = std::string(e.qz_trivial ? "trivial quasi-centre: " : "") +
                           "member_esim=yes, xi_sim <= " + up.format();
      if (e.noetherian) detail += "; Noetherian: member_es=yes, xi_s <= " + up.format();
      acc.fire("R20",
               "locally decomposable groups (every closed locally normal subgroup has "
               "an open direct-factor part) are [Sim]-well-founded of rank at most 4, "
               "at most 3 with trivial quasi-centre; Noetherian ones are also "
               "S-well-founded with the same bound",
               std::move(detail));
      acc.esim(Tristate::yes, "R20");
      acc.xi_sim(RankInterval::at_most(up), "R20");
      if (e.noetherian) {
        acc.es(Tristate::yes, "R20");
        acc.xi_s(RankInterval::at_most(up), "R20");
      }
      break;
    }

    case NodeKind::kac_moody: {
      Ordinal r = e.coxeter->lambda_f_rank();
      acc.fire("R5",
               "a complete Kac-Moody group is S-well-founded, with rank bounded by the "
               "rank of the poset of essential generator subsets",
               "essential-subset poset rank = " + r.format() + "; xi_s <= " + r.format());
      acc.es(Tristate::yes, "R5");
      acc.xi_s(RankInterval::at_most(r), "R5");
      break;
    }

    case NodeKind::tree_p:
      tree_p_rules(acc, e);
      break;

    case NodeKind::burger_mozes:
      burger_mozes_rules(acc, e);
      break;

    case NodeKind::extension: {
      Ordinal lo = omax(kids[0].xi_s.lower(), kids[1].xi_s.lower());
      std::optional<Ordinal> up = extension_upper(kids[0].xi_s.upper(), kids[1].xi_s.upper());
      acc.fire("R6",
               "an extension of S-well-founded groups is S-well-founded with rank at "
               "most (rank(N) - 1) + rank(Q); N and Q sit as a closed normal subgroup "
               "and a quotient, so each bounds the rank below",
               "n: " + child_summary(kids[0]) + "; q: " + child_summary(kids[1]) +
                   "; xi_s in [" + lo.format() + ", " + fmt_upper(up) + "]");
      acc.es(conjunction(es_of(kids)), "R6");
      acc.xi_s(RankInterval(std::move(lo), std::move(up)), "R6");
      break;
    }

    case NodeKind::directed_union:
      union_like_rules(acc, kids, "R7",
                       "a directed union of open subgroups is S-well-founded exactly "
                       "when all members are; the rank is the least successor above "
                       "the member ranks");
      break;

    case NodeKind::quasi_product:
      union_like_rules(acc, kids, "R8",
                       "a quasi-product is bounded by the least successor above the "
                       "factor ranks, and each factor is a closed normal subgroup");
      break;

    case NodeKind::local_sum_omega:
      union_like_rules(acc, kids, "R8",
                       "a local direct sum over compact open subgroups is a "
                       "quasi-product of its summands repeated omega-fold");
      break;

    case NodeKind::wreath_local: {
      const bool strict = e.k_transitive && e.k_res_omega_nontrivial &&
                          e.h_compactly_generated && e.k_compactly_generated;
      Ordinal lo = omax(kids[0].xi_s.lower(), kids[1].xi_s.lower());
      std::optional<Ordinal> up = extension_upper(kids[0].xi_s.upper(), kids[1].xi_s.upper());
      Ordinal strict_lo = kids[0].xi_s.lower() + nat(1);
      std::string detail = "h: " + child_summary(kids[0]) +
                           "; k: " + child_summary(kids[1]) + "; xi_s in [" +
                           (strict ? omax(lo, strict_lo) : lo).format() + ", " +
                           fmt_upper(up) + "]";
      if (strict) {
        detail +=
            "; K transitive with nontrivial Res_omega and both factors compactly "
            "generated: xi_s > rank(H)";
      }
      acc.fire("R12",
               "a local wreath product is the local sum of copies of H extended by K, "
               "so the extension bound applies; with K transitive, Res_omega(K) "
               "nontrivial, and H, K compactly generated, the rank strictly exceeds "
               "the rank of H",
               std::move(detail));
      acc.es(conjunction(es_of(kids)), "R12");
      acc.xi_s(RankInterval(std::move(lo), std::move(up)), "R12");
      if (strict) acc.xi_s(RankInterval::at_least(strict_lo), "R12");
      break;
    }

    case NodeKind::ended_tree: {
      const Assessment& g = kids[0];
      const bool flags = e.transitive && e.res_omega_nontrivial;
      Ordinal lo = g.xi_s.lower();
      std::optional<Ordinal> up;
      if (g.xi_s.is_bounded()) up = *g.xi_s.upper() * Ordinal::omega() + nat(2);
      Ordinal flag_lo = g.xi_s.lower() + Ordinal::omega() + nat(1);
      std::string detail = "g: " + child_summary(g) + "; xi_s in [" +
                           (flags ? omax(lo, flag_lo) : lo).format() + ", " +
                           fmt_upper(up) + "]";
      if (flags) {
        detail += "; transitive with nontrivial Res_omega: xi_s >= rank(G) + w + 1";
      }
      acc.fire("R13",
               "the end-fixing tree construction over G is S-well-founded exactly when "
               "G is, with rank at most rank(G)*w + 2; acting transitively with "
               "nontrivial Res_omega forces rank at least rank(G) + w + 1",
               std::move(detail));
      acc.es(g.member_es, "R13");
      acc.xi_s(RankInterval(std::move(lo), std::move(up)), "R13");
      if (flags) acc.xi_s(RankInterval::at_least(flag_lo), "R13");
      break;
    }

    case NodeKind::ended_tower: {
      const Assessment& g = kids[0];
      const bool flags = e.transitive && e.res_omega_nontrivial;
      Ordinal lo = g.xi_s.lower();
      if (flags) lo = g.xi_s.lower() + Ordinal::omega_pow(nat(2)) + nat(1);
      std::optional<Ordinal> up;
      if (g.xi_s.is_bounded()) {
        up = *g.xi_s.upper() * Ordinal::omega_pow(Ordinal::omega()) + nat(1);
      }
      acc.fire("R24",
               "the local direct sum of the full omega-indexed tower of end-fixing "
               "iterates: stage n has rank in [rank(G) + w*n + 1, rank(G)*w^n + 2], "
               "and the sum takes the least successor above the stages",
               "g: " + child_summary(g) +
                   (flags ? "" : "; without the transitivity and Res_omega flags the "
                                 "stage lower bounds collapse to rank(G)") +
                   "; xi_s in [" + lo.format() + ", " + fmt_upper(up) + "]");
      acc.es(g.member_es, "R24");
      acc.xi_s(RankInterval(std::move(lo), std::move(up)), "R24");
      break;
    }

    case NodeKind::quotient: {
      const Assessment& g = kids[0];
      if (g.member_es == Tristate::yes) {
        acc.fire("R9",
                 "a quotient of an S-well-founded group is S-well-founded with rank at "
                 "most the ambient rank",
                 "g: " + child_summary(g) + "; xi_s in [1, " + fmt_upper(g.xi_s.upper()) +
                     "]");
        acc.es(Tristate::yes, "R9");
        if (g.xi_s.is_bounded()) {
          acc.xi_s(RankInterval::at_most(*g.xi_s.upper()), "R9");
        }
      }
      break;
    }

    case NodeKind::cocompact_rio: {
      const Assessment& h = kids[0];
      acc.fire("R10",
               "a closed cocompact RIO subgroup has the same rank as the ambient "
               "group, on both the S and [Sim] sides",
               "h: " + child_summary(h) + "; member_esim=" +
                   tristate_name(h.member_esim) + ", xi_sim=" + h.xi_sim.format());
      acc.es(h.member_es, "R10");
      acc.xi_s(h.xi_s, "R10");
      acc.esim(h.member_esim, "R10");
      acc.xi_sim(h.xi_sim, "R10");
      break;
    }

    case NodeKind::normal_compression: {
      const Assessment& g = kids[0];
      // Least successor gamma with 1 + gamma >= lower(G).
      Ordinal lo = g.xi_s.lower();
      if (lo.is_finite()) {
        std::uint64_t n = *lo.as_nat();
        lo = nat(n > 1 ? n - 1 : 1);
      }
      acc.fire("R11",
               "the target of a regionally normal compression from G inherits "
               "S-well-foundedness both ways; rank(H) <= rank(G) and "
               "rank(G) <= 1 + rank(H)",
               "g: " + child_summary(g) + "; xi_s in [" + lo.format() + ", " +
                   fmt_upper(g.xi_s.upper()) + "]; conversely up(G) <= 1 + up(H)");
      acc.es(g.member_es, "R11");
      acc.xi_s(RankInterval::at_least(lo), "R11");
      if (g.xi_s.is_bounded()) acc.xi_s(RankInterval::at_most(*g.xi_s.upper()), "R11");
      break;
    }

    case NodeKind::subdirect: {
      std::vector<Ordinal> los;
      for (const Assessment& k : kids) los.push_back(k.xi_s.lower());
      Ordinal lo = Ordinal::sup(los);
      std::optional<Ordinal> up = sup_plus_uppers(kids);
      if (up) up = e.filtering ? nat(1) + *up : *up + nat(1);
      acc.fire("R14",
               std::string("a subdirect product with trivially intersecting kernels "
                           "surjects onto each factor and is S-well-founded exactly "
                           "when all factors are; rank at most (max factor rank) ") +
                   (e.filtering ? "prepended" : "followed") + " by 1",
               list_children(kids) + (e.filtering ? "; filtering family" : "") +
                   "; xi_s in [" + lo.format() + ", " + fmt_upper(up) + "]");
      acc.es(conjunction(es_of(kids)), "R14");
      acc.xi_s(RankInterval(std::move(lo), std::move(up)), "R14");
      break;
    }

    case NodeKind::atom:
      atom_rules(acc, *e.atom);
      break;
  }

  finalize(acc);
  return std::move(acc.a);
}

}  // namespace

Assessment assess(const GroupExpr& root) {
  std::vector<TraceEntry> trace;
  Assessment a = assess_node(root, "/", trace);
  a.trace = std::move(trace);
  return a;
}

std::string explain(const Assessment& a) {
  std::string out;
  for (const TraceEntry& t : a.trace) {
    out += t.format();
    out += '\n';
  }
  return out;
}

std::string render_assessment_text(const std::string& name, const Assessment& a,
                                   bool include_trace) {
  std::string out = name + ": member_e=" + tristate_name(a.member_e) +
                    " member_es=" + tristate_name(a.member_es) +
                    " member_esim=" + tristate_name(a.member_esim) +
                    " xi_s=" + a.xi_s.format() + " xi_sim=" + a.xi_sim.format() + "\n";
  if (include_trace) {
    for (const TraceEntry& t : a.trace) {
      out += "  " + t.format() + "\n";
    }
  }
  return out;
}

std::string render_assessments_json(
    const std::vector<std::pair<std::string, Assessment>>& items) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& [name, a] : items) {
    nlohmann::ordered_json item;
    item["name"] = name;
    item["member_e"] = tristate_name(a.member_e);
    item["member_es"] = tristate_name(a.member_es);
    item["member_esim"] = tristate_name(a.member_esim);
    auto interval = [](const RankInterval& r) {
      nlohmann::ordered_json j;
      j["lower"] = r.lower().format();
      j["upper"] = r.is_bounded() ? r.upper()->format() : "unbounded";
      return j;
    };
    item["xi_s"] = interval(a.xi_s);
    item["xi_sim"] = interval(a.xi_sim);
    nlohmann::ordered_json tr = nlohmann::ordered_json::array();
    for (const TraceEntry& t : a.trace) {
      tr.push_back({{"node", t.node}, {"rule", t.rule}, {"statement", t.statement},
                    {"detail", t.detail}});
    }
    item["trace"] = std::move(tr);
    arr.push_back(std::move(item));
  }
  return arr.dump(2) + "\n";
}

}  // namespace tdlc
