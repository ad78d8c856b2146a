#include "tdlc_cli.hpp"

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tdlc/coxeter.hpp"
#include "tdlc/errors.hpp"
#include "tdlc/ordinal.hpp"
#include "tdlc/permgrp.hpp"
#include "tdlc/poset.hpp"
#include "tdlc/rank.hpp"
#include "tdlc/treeball.hpp"

namespace tdlc::cli {
namespace {

using nlohmann::ordered_json;

// Enumeration caps accepted from the command line or the environment.
constexpr std::uint64_t cap_floor = PermGroup::default_cap / 10;
constexpr std::uint64_t cap_ceiling = 100'000'000;

// --cap wins over TDLC_RANK_CAP; both must lie in [cap_floor, cap_ceiling].
std::size_t resolve_cap(const std::optional<std::uint64_t>& flag) {
  std::uint64_t value = 0;
  std::string source;
  if (flag) {
    value = *flag;
    source = "--cap";
  } else if (const char* env = std::getenv("TDLC_RANK_CAP")) {
    std::string text(env);
    const char* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || p != end)
      fail(errc::invalid_argument,
           "TDLC_RANK_CAP must be a decimal cap, got '" + text + "'");
    source = "TDLC_RANK_CAP";
  } else {
    return PermGroup::default_cap;
  }
  if (value < cap_floor || value > cap_ceiling)
    fail(errc::invalid_argument,
         source + " must lie between " + std::to_string(cap_floor) + " and " +
             std::to_string(cap_ceiling) + ", got " + std::to_string(value));
  return static_cast<std::size_t>(value);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::invalid_argument, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(std::ostream& out, const ordered_json& j) { out << j.dump(2) << "\n"; }

struct RankOpts {
  std::string file;
  bool json = false;
  bool trace = false;
  std::optional<std::uint64_t> cap;
};

int run_rank(const RankOpts& o, std::ostream& out) {
  std::size_t cap = resolve_cap(o.cap);
  auto defs = parse_definitions(read_file(o.file), cap);
  if (o.json) {
    std::vector<std::pair<std::string, Assessment>> items;
    items.reserve(defs.size());
    for (const auto& d : defs) items.emplace_back(d.name, assess(*d.expr));
    out << render_assessments_json(items);
  } else {
    for (const auto& d : defs)
      out << render_assessment_text(d.name, assess(*d.expr), o.trace);
  }
  return 0;
}

struct PermOpts {
  int degree = 0;
  std::string gens;
  std::optional<std::uint64_t> cap;
};

int run_perm_analyze(const PermOpts& o, std::ostream& out) {
  std::size_t cap = resolve_cap(o.cap);
  PermGroup g(o.degree, parse_generators(o.degree, o.gens), cap);
  ordered_json j;
  j["degree"] = o.degree;
  j["order"] = g.order();
  j["orbits"] = g.orbits();
  j["transitive"] = g.is_transitive();
  j["regular"] = g.is_regular();
  j["free"] = g.is_free();
  j["primitive"] = g.is_primitive();
  j["nilpotent"] = g.is_nilpotent();
  j["stabilizer_subgroup_orbits"] = g.stabilizer_generated_subgroup().orbits();
  emit(out, j);
  return 0;
}

struct CoxeterOpts {
  std::string file;
  bool json = false;
};

int run_coxeter_lambda_f(const CoxeterOpts& o, std::ostream& out) {
  CoxeterSystem w = CoxeterSystem::from_json(read_file(o.file));
  Ordinal rank = w.lambda_f_rank();

  // The poset is a finite object only up to the materialization cap; the
  // rank is computed without it and survives the size limit.
  std::optional<FinitePoset> poset;
  try {
    poset = w.lambda_f();
  } catch (const Error& e) {
    if (e.code() != errc::size_limit) throw;
  }

  if (o.json) {
    ordered_json j;
    j["size"] = w.size();
    if (poset) {
      j["elements"] = poset->elements();
      ordered_json covers = ordered_json::array();
      for (const auto& [lo, hi] : poset->cover_pairs())
        covers.push_back({poset->elements()[lo], poset->elements()[hi]});
      j["covers"] = std::move(covers);
      ordered_json ranks;
      for (const auto& [label, value] : poset->rank_function())
        ranks[label] = value.format();
      j["rank_function"] = std::move(ranks);
    } else {
      j["elements"] = nullptr;
      j["covers"] = nullptr;
      j["rank_function"] = nullptr;
    }
    j["lambda_f_rank"] = rank.format();
    emit(out, j);
    return 0;
  }

  out << "coxeter system on " << w.size() << " generators\n";
  if (poset) {
    out << "essential subsets: " << poset->size() << "\n";
    out << "covers:\n";
    for (const auto& [lo, hi] : poset->cover_pairs())
      out << "  " << poset->elements()[lo] << " < " << poset->elements()[hi]
          << "\n";
    out << "rank function:\n";
    for (const auto& [label, value] : poset->rank_function())
      out << "  " << label << ": " << value.format() << "\n";
  } else {
    out << "essential subsets: too many to list\n";
  }
  out << "lambda_f rank: " << rank.format() << "\n";
  return 0;
}

struct BallOpts {
  int degree = 0;
  int depth = 0;
  std::string action;
  std::string check;
  std::optional<std::uint64_t> cap;
};

int run_ball(const BallOpts& o, std::ostream& out) {
  std::size_t cap = resolve_cap(o.cap);
  PermGroup f(o.degree, parse_generators(o.degree, o.action), cap);

  ordered_json j;
  j["check"] = o.check;
  j["degree"] = o.degree;
  j["depth"] = o.depth;
  std::string gens;
  for (const Perm& g : f.generators()) {
    if (!gens.empty()) gens += ", ";
    gens += g.format();
  }
  j["local_action"] = gens;
  // Every statement below is about the finite ball, not the full tree.
  j["truncation"] = "at depth " + std::to_string(o.depth);

  if (o.check == "order") {
    Ball ball = Ball::build(o.degree, o.depth);
    PermGroup g = ball_group(f, o.degree, o.depth, cap);
    j["vertices"] = ball.vertex_count();
    j["order"] = g.order();
  } else if (o.check == "gplus") {
    GPlusReport r = g_plus_vertex_check(f, o.degree, o.depth, cap);
    j["holds"] = r.holds;
    j["lhs_order"] = r.lhs_order;
    j["rhs_order"] = r.rhs_order;
  } else if (o.check == "colouring") {
    Ball ball = Ball::build(o.degree, o.depth);
    FocusedColouring fc = focused_colouring(ball, f);
    j["verified"] = verify_focused(fc, f);
    std::vector<int> edges;
    edges.reserve(static_cast<std::size_t>(ball.edge_count()));
    for (int e = 0; e < ball.edge_count(); ++e)
      edges.push_back(fc.colour[static_cast<std::size_t>(2 * e)]);
    j["edge_colours"] = std::move(edges);
  } else {
    j["holds"] = property_p_edge_check(f, o.degree, o.depth, cap);
  }
  emit(out, j);
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Ordinal rank bounds for totally disconnected locally compact "
               "groups built from finite local data"};
  app.require_subcommand(1);

  RankOpts rank_opts;
  CLI::App* rank_cmd = app.add_subcommand(
      "rank", "Assess membership and rank intervals for group definitions");
  rank_cmd->add_option("file", rank_opts.file, "definitions file (.grp)")
      ->required();
  rank_cmd->add_flag("--json", rank_opts.json, "JSON report with traces");
  rank_cmd->add_flag("--trace", rank_opts.trace,
                     "include rule traces in text output");
  rank_cmd->add_option("--cap", rank_opts.cap, "group enumeration cap");

  CLI::App* perm_cmd =
      app.add_subcommand("perm", "Finite permutation group utilities");
  perm_cmd->require_subcommand(1);
  PermOpts perm_opts;
  CLI::App* analyze_cmd = perm_cmd->add_subcommand(
      "analyze", "Orbits, transitivity, primitivity, nilpotency");
  analyze_cmd->add_option("--degree", perm_opts.degree, "number of points")
      ->required()
      ->check(CLI::Range(1, Perm::max_degree));
  analyze_cmd
      ->add_option("--gens", perm_opts.gens,
                   "generators in cycle notation, comma separated")
      ->required();
  analyze_cmd->add_option("--cap", perm_opts.cap, "group enumeration cap");

  CLI::App* coxeter_cmd =
      app.add_subcommand("coxeter", "Coxeter system utilities");
  coxeter_cmd->require_subcommand(1);
  CoxeterOpts coxeter_opts;
  CLI::App* lambda_cmd = coxeter_cmd->add_subcommand(
      "lambda-f", "Poset of essential generator subsets and its rank");
  lambda_cmd
      ->add_option("file", coxeter_opts.file,
                   "JSON file {\"size\": n, \"m\": [[...]]}, 0 for an "
                   "infinite bond")
      ->required();
  lambda_cmd->add_flag("--json", coxeter_opts.json, "JSON report");

  BallOpts ball_opts;
  CLI::App* ball_cmd = app.add_subcommand(
      "ball", "Automorphisms of a finite tree ball with a local action");
  ball_cmd->add_option("--degree", ball_opts.degree, "tree degree (>= 3)")
      ->required();
  ball_cmd->add_option("--depth", ball_opts.depth, "ball radius (>= 1)")
      ->required();
  ball_cmd
      ->add_option("--local-action", ball_opts.action,
                   "generators of the local action in cycle notation")
      ->required();
  ball_cmd->add_option("--check", ball_opts.check, "what to compute")
      ->required()
      ->check(CLI::IsMember({"order", "gplus", "colouring", "propP"}));
  ball_cmd->add_option("--cap", ball_opts.cap, "portrait enumeration cap");

  CLI::App* ordinal_cmd =
      app.add_subcommand("ordinal", "Ordinal arithmetic below epsilon_0");
  ordinal_cmd->require_subcommand(1);
  std::string ordinal_expr;
  CLI::App* eval_cmd = ordinal_cmd->add_subcommand(
      "eval", "Evaluate an ordinal expression to Cantor normal form");
  eval_cmd->add_option("expr", ordinal_expr, "expression, e.g. \"w*2 + 1\"")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    // Help prints for the innermost subcommand on the parsed path.
    CLI::App* scope = &app;
    for (;;) {
      auto parsed = scope->get_subcommands();
      if (parsed.empty()) break;
      scope = parsed.front();
    }
    out << scope->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;
    err << "tdlc: " << e.what() << "\n";
    return 2;
  }

  try {
    if (rank_cmd->parsed()) return run_rank(rank_opts, out);
    if (analyze_cmd->parsed()) return run_perm_analyze(perm_opts, out);
    if (lambda_cmd->parsed()) return run_coxeter_lambda_f(coxeter_opts, out);
    if (ball_cmd->parsed()) return run_ball(ball_opts, out);
    if (eval_cmd->parsed()) {
      out << Ordinal::parse(ordinal_expr).format() << "\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "tdlc: " << errc_name(e.code()) << ": " << e.what() << "\n";
    bool usage = e.code() == errc::parse_error ||
                 e.code() == errc::invalid_argument;
    return usage ? 2 : 1;
  } catch (const std::exception& e) {
    err << "tdlc: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace tdlc::cli
