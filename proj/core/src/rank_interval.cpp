#include <sstream>
#include <utility>

#include "tdlc/rank.hpp"

namespace tdlc {

const char* tristate_name(Tristate t) noexcept {
  switch (t) {
    case Tristate::yes: return "yes";
    case Tristate::no: return "no";
    case Tristate::unknown: return "unknown";
  }
  return "unknown";
}

Tristate merge_tristate(Tristate a, Tristate b, const std::string& context) {
  if (a == Tristate::unknown) return b;
  if (b == Tristate::unknown) return a;
  if (a != b) {
    fail(errc::inconsistent, context + ": membership is both yes and no");
  }
  return a;
}

namespace {

void check_endpoint(const Ordinal& v, const char* which) {
  if (!v.is_successor()) {
    fail(errc::invalid_argument,
         std::string("rank interval ") + which + " endpoint " + v.format() +
             " is not a successor ordinal");
  }
}

}  // namespace

RankInterval::RankInterval() : lower_(Ordinal::nat(1)) {}

RankInterval::RankInterval(Ordinal lower, std::optional<Ordinal> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  check_endpoint(lower_, "lower");
  if (upper_) {
    check_endpoint(*upper_, "upper");
    if (lower_ > *upper_) {
      fail(errc::invalid_argument, "rank interval lower endpoint " + lower_.format() +
                                       " exceeds upper endpoint " + upper_->format());
    }
  }
}

RankInterval RankInterval::exact(const Ordinal& v) { return {v, v}; }

RankInterval RankInterval::at_least(const Ordinal& lo) { return {lo, std::nullopt}; }

RankInterval RankInterval::at_most(const Ordinal& up) { return {Ordinal::nat(1), up}; }

RankInterval RankInterval::intersect(const RankInterval& other,
                                     const std::string& context) const {
  Ordinal lo = lower_ > other.lower_ ? lower_ : other.lower_;
  std::optional<Ordinal> up = upper_;
  if (other.upper_ && (!up || *other.upper_ < *up)) up = other.upper_;
  if (up && lo > *up) {
    fail(errc::inconsistent, context + ": rank intervals " + format() + " and " +
                                 other.format() + " do not intersect");
  }
  return {std::move(lo), std::move(up)};
}

std::string RankInterval::format() const {
  return "[" + lower_.format() + ", " + (upper_ ? upper_->format() : "unbounded") + "]";
}

LocalAction LocalAction::finite(PermGroup g) {
  LocalAction a;
  a.group_ = std::move(g);
  return a;
}

LocalAction LocalAction::declared(Declared d) {
  if (d.regular && !d.transitive) {
    fail(errc::invalid_argument, "local action declared regular but not transitive");
  }
  if (d.primitive && !d.transitive) {
    fail(errc::invalid_argument, "local action declared primitive but not transitive");
  }
  LocalAction a;
  a.decl_ = std::move(d);
  return a;
}

const PermGroup& LocalAction::group() const {
  if (!group_) fail(errc::invalid_argument, "declared local action has no group");
  return *group_;
}

bool LocalAction::transitive() const {
  return group_ ? group_->is_transitive() : decl_.transitive;
}

bool LocalAction::primitive() const {
  return group_ ? group_->is_primitive() : decl_.primitive;
}

bool LocalAction::regular() const {
  return group_ ? group_->is_regular() : decl_.regular;
}

bool LocalAction::free_action() const {
  return group_ ? group_->is_free() : decl_.free_action;
}

// Finite groups are discrete and never infinite.
bool LocalAction::discrete() const { return group_ ? true : decl_.discrete; }

bool LocalAction::infinite() const { return group_ ? false : decl_.infinite; }

Tristate LocalAction::member_es() const {
  return group_ ? Tristate::yes : decl_.member_es;
}

RankInterval LocalAction::xi_s() const {
  return group_ ? RankInterval::exact(Ordinal::nat(1)) : decl_.xi_s;
}

std::string LocalAction::describe() const {
  std::ostringstream out;
  if (group_) {
    out << "finite action of order " << group_->order() << " on " << group_->degree()
        << " points";
  } else {
    out << "declared action";
  }
  auto tag = [&out](bool v, const char* name) {
    if (v) out << " " << name;
  };
  tag(transitive(), "transitive");
  tag(primitive(), "primitive");
  tag(regular(), "regular");
  tag(free_action(), "free");
  tag(infinite(), "infinite");
  tag(!group_ && discrete(), "discrete");
  out << ", member_es=" << tristate_name(member_es()) << ", xi_s=" << xi_s().format();
  return out.str();
}

std::string TraceEntry::format() const {
  std::string line = rule + " " + node + ": " + statement;
  if (!detail.empty()) line += " -- " + detail;
  return line;
}

}  // namespace tdlc
