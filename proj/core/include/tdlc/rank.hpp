#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdlc/coxeter.hpp"
#include "tdlc/errors.hpp"
#include "tdlc/ordinal.hpp"
#include "tdlc/permgrp.hpp"

namespace tdlc {

// Three-valued class membership. `unknown` means no rule decided it, not
// that the answer is negative.
enum class Tristate { unknown, yes, no };

const char* tristate_name(Tristate t) noexcept;

// yes/no conflict raises `inconsistent`; `context` names the culprit.
Tristate merge_tristate(Tristate a, Tristate b, const std::string& context);

// Closed ordinal interval housing a rank value. Ranks only take successor
// ordinal values, so both endpoints must be successors, the lower one >= 1;
// an absent upper endpoint means no upper bound is known.
class RankInterval {
 public:
  RankInterval();  // [1, unbounded]
  RankInterval(Ordinal lower, std::optional<Ordinal> upper);

  static RankInterval exact(const Ordinal& v);
  static RankInterval at_least(const Ordinal& lo);
  static RankInterval at_most(const Ordinal& up);  // [1, up]

  const Ordinal& lower() const { return lower_; }
  const std::optional<Ordinal>& upper() const { return upper_; }
  bool is_bounded() const { return upper_.has_value(); }
  bool is_exact() const { return upper_ && *upper_ == lower_; }

  // Empty intersection raises `inconsistent`; `context` names the culprit.
  RankInterval intersect(const RankInterval& other, const std::string& context) const;

  std::string format() const;  // "[2, 2]", "[w + 1, unbounded]"

  friend bool operator==(const RankInterval&, const RankInterval&) = default;

 private:
  Ordinal lower_;
  std::optional<Ordinal> upper_;
};

// Action of a vertex stabilizer on the arcs at its vertex: either a finite
// permutation group, whose properties are computed, or a declared action,
// whose properties are taken on trust.
class LocalAction {
 public:
  struct Declared {
    bool transitive = false;
    bool primitive = false;
    bool regular = false;
    bool free_action = false;
    bool discrete = false;
    bool infinite = false;
    Tristate member_es = Tristate::unknown;
    RankInterval xi_s;
  };

  static LocalAction finite(PermGroup g);
  // Checks regular => transitive and primitive => transitive.
  static LocalAction declared(Declared d);

  bool is_finite_group() const { return group_.has_value(); }
  const PermGroup& group() const;  // finite case only

  bool transitive() const;
  bool primitive() const;
  bool regular() const;
  bool free_action() const;
  bool discrete() const;
  bool infinite() const;
  Tristate member_es() const;
  RankInterval xi_s() const;

  std::string describe() const;  // one-line summary for traces

 private:
  LocalAction() = default;
  std::optional<PermGroup> group_;
  Declared decl_;
};

enum class NodeKind {
  trivial,
  compact,
  discrete_group,
  regionally_elliptic,
  sin,
  locally_soluble,
  simple_algebraic,
  locally_linear,
  locally_ld,
  kac_moody,
  tree_p,
  burger_mozes,
  extension,
  directed_union,
  quasi_product,
  local_sum_omega,
  wreath_local,
  ended_tree,
  ended_tower,
  quotient,
  cocompact_rio,
  normal_compression,
  subdirect,
  atom,
};

// DSL keyword for the kind ("tree-p", "burger-mozes", ...).
const char* kind_name(NodeKind k) noexcept;

// User-declared facts on an `atom` node, taken on trust.
struct AtomSpec {
  Tristate member_e = Tristate::unknown;
  Tristate member_es = Tristate::unknown;
  Tristate member_esim = Tristate::unknown;
  std::optional<RankInterval> xi_s;
  std::optional<RankInterval> xi_sim;
  // Declared elementary decomposition rank; must be a successor ordinal and
  // asserts member_e = yes.
  std::optional<Ordinal> xi_e;
  std::string note;
};

struct GroupExpr;
using ExprPtr = std::shared_ptr<const GroupExpr>;

// Compositional description of a t.d.l.c. group. Only the fields relevant
// to `kind` are meaningful; assess() checks arity and payload presence.
struct GroupExpr {
  NodeKind kind = NodeKind::trivial;
  std::vector<ExprPtr> children;

  bool flag_infinite = false;            // discrete_group
  bool flag_noncompact = false;          // sin, locally_soluble
  bool qz_trivial = false;               // locally_ld
  bool noetherian = false;               // locally_ld, tree_p
  bool transitive = false;               // ended_tree, ended_tower
  bool res_omega_nontrivial = false;     // ended_tree, ended_tower
  bool k_transitive = false;             // wreath_local
  bool k_res_omega_nontrivial = false;   // wreath_local
  bool h_compactly_generated = false;    // wreath_local
  bool k_compactly_generated = false;    // wreath_local
  bool filtering = false;                // subdirect

  std::optional<CoxeterSystem> coxeter;  // kac_moody
  std::optional<LocalAction> local_x;    // tree_p
  std::optional<LocalAction> local_y;    // tree_p
  std::optional<PermGroup> local_f;      // burger_mozes
  int bm_degree = 0;                     // burger_mozes: tree degree >= 3
  std::optional<AtomSpec> atom;          // atom
};

// One rule firing. `node` is the path from the root plus the node kind,
// `rule` a stable identifier, `statement` the mathematical fact applied,
// `detail` the inputs and the constraint produced.
struct TraceEntry {
  std::string node;
  std::string rule;
  std::string statement;
  std::string detail;

  std::string format() const;
};

struct Assessment {
  Tristate member_e = Tristate::unknown;
  Tristate member_es = Tristate::unknown;
  Tristate member_esim = Tristate::unknown;
  // Meaningful only while the matching membership is not `no`.
  RankInterval xi_s;
  RankInterval xi_sim;
  std::vector<TraceEntry> trace;
};

// Bottom-up rule evaluation. Every applicable rule contributes a membership
// or interval constraint; constraints are intersected and each firing lands
// in the trace (children first, rule ids ascending per node). Contradictory
// constraints raise `inconsistent`.
Assessment assess(const GroupExpr& root);

// The trace, one line per firing, in firing order.
std::string explain(const Assessment& a);

struct Definition {
  std::string name;
  ExprPtr expr;
};

// DSL source: `file := (def NAME expr)* ; expr := (KIND args...) | NAME`.
// Names resolve to prior definitions; errors carry line and column.
// `group_cap` bounds every finite-group enumeration the definitions trigger.
std::vector<Definition> parse_definitions(
    std::string_view text, std::size_t group_cap = PermGroup::default_cap);

// "name: member_e=... member_es=... member_esim=... xi_s=... xi_sim=..."
// plus indented trace lines when `include_trace` is set.
std::string render_assessment_text(const std::string& name, const Assessment& a,
                                   bool include_trace);

// JSON array of {name, member_e, member_es, member_esim, xi_s, xi_sim,
// trace}; ordinals as canonical strings, "unbounded" for a missing upper
// endpoint, 2-space indent.
std::string render_assessments_json(
    const std::vector<std::pair<std::string, Assessment>>& items);

}  // namespace tdlc
