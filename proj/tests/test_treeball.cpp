#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "support/ball_oracle.hpp"
#include "tdlc/permgrp.hpp"
#include "tdlc/treeball.hpp"

using tdlc::Ball;
using tdlc::ball_group;
using tdlc::errc;
using tdlc::Error;
using tdlc::focused_colouring;
using tdlc::FocusedColouring;
using tdlc::g_plus_vertex_check;
using tdlc::local_action_of;
using tdlc::parse_generators;
using tdlc::Perm;
using tdlc::PermGroup;
using tdlc::portrait_count;
using tdlc::property_p_edge_check;
using tdlc::verify_focused;

namespace {

PermGroup group(int degree, const std::string& gens) {
  return PermGroup(degree, parse_generators(degree, gens));
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

std::set<std::string> keys_of(const std::vector<Perm>& elems) {
  std::set<std::string> out;
  for (const auto& e : elems) out.insert(e.key());
  return out;
}

std::uint64_t closed_form_vertices(int d, int k) {
  std::uint64_t total = 1, sphere = static_cast<std::uint64_t>(d);
  for (int t = 1; t <= k; ++t) {
    total += sphere;
    sphere *= static_cast<std::uint64_t>(d - 1);
  }
  return total;
}

}  // namespace

TEST_SUITE("treeball") {

TEST_CASE("vertex and edge counts match the closed form") {
  Ball b31 = Ball::build(3, 1);
  CHECK(b31.vertex_count() == 4);
  CHECK(b31.edge_count() == 3);
  CHECK(b31.arc_count() == 6);
  CHECK(Ball::build(3, 2).vertex_count() == 10);
  CHECK(Ball::build(4, 2).vertex_count() == 17);
  CHECK(Ball::build(5, 3).vertex_count() == 106);
  for (int d = 3; d <= 5; ++d)
    for (int k = 1; k <= 3; ++k) {
      Ball b = Ball::build(d, k);
      CHECK(static_cast<std::uint64_t>(b.vertex_count()) ==
            closed_form_vertices(d, k));
      CHECK(b.degree() == d);
      CHECK(b.depth() == k);
    }
}

TEST_CASE("breadth-first layout and neighbour arithmetic agree") {
  Ball b = Ball::build(3, 2);
  CHECK(b.parent_of(Ball::centre) == -1);
  CHECK(b.depth_of(Ball::centre) == 0);
  // first sphere in colour order
  for (int c = 1; c <= 3; ++c) {
    CHECK(b.parent_of(c) == 0);
    CHECK(b.parent_colour(c) == c);
    CHECK(b.depth_of(c) == 1);
    CHECK_FALSE(b.is_leaf(c));
  }
  // children of vertex 1 skip its inward colour 1
  CHECK(b.parent_of(4) == 1);
  CHECK(b.parent_colour(4) == 2);
  CHECK(b.parent_of(5) == 1);
  CHECK(b.parent_colour(5) == 3);
  CHECK(b.parent_of(6) == 2);
  CHECK(b.parent_colour(6) == 1);
  CHECK(b.parent_of(9) == 3);
  CHECK(b.parent_colour(9) == 2);
  CHECK(b.is_leaf(9));

  for (int v = 0; v < b.vertex_count(); ++v)
    for (int c = 1; c <= 3; ++c) {
      int u = b.neighbour(v, c);
      if (u == -1) continue;
      CHECK(b.edge_colour(v, u) == c);
      CHECK(b.edge_colour(u, v) == c);
      CHECK(b.neighbour(u, c) == v);
    }
}

TEST_CASE("the edge colouring is legal") {
  for (auto [d, k] : {std::pair{3, 2}, {4, 2}, {3, 3}, {5, 2}}) {
    Ball b = Ball::build(d, k);
    for (int v = 0; v < b.vertex_count(); ++v) {
      std::set<int> seen;
      for (int a : b.arcs_at(v)) {
        CHECK(b.arc_origin(a) == v);
        CHECK(b.arc_target(b.arc_reverse(a)) == v);
        CHECK(b.arc_colour(a) == b.arc_colour(b.arc_reverse(a)));
        CHECK(seen.insert(b.arc_colour(a)).second);
      }
      if (!b.is_leaf(v)) {
        // interior vertices have full degree, so every colour appears
        CHECK(static_cast<int>(seen.size()) == d);
      } else {
        CHECK(seen.size() == 1);
      }
    }
  }
}

TEST_CASE("bad shapes and out-of-range accesses are rejected") {
  CHECK(code_of([] { Ball::build(2, 1); }) == errc::invalid_argument);
  CHECK(code_of([] { Ball::build(3, 0); }) == errc::invalid_argument);
  CHECK(code_of([] { Ball::build(3, 17); }) == errc::size_limit);

  Ball b = Ball::build(3, 1);
  CHECK(code_of([&] { b.parent_of(4); }) == errc::invalid_argument);
  CHECK(code_of([&] { b.parent_colour(0); }) == errc::invalid_argument);
  CHECK(code_of([&] { b.neighbour(0, 4); }) == errc::invalid_argument);
  CHECK(code_of([&] { b.edge_colour(1, 2); }) == errc::invalid_argument);
  CHECK(code_of([&] { b.arc_origin(6); }) == errc::invalid_argument);
}

TEST_CASE("portrait groups hit the expected orders") {
  auto sym3 = group(3, "(1 2),(1 2 3)");
  auto c3 = group(3, "(1 2 3)");
  auto flip = group(3, "(1 2)");
  auto sym4 = group(4, "(1 2),(1 2 3 4)");
  auto d4 = group(4, "(1 2 3 4),(1 3)");

  CHECK(ball_group(sym3, 3, 1).order() == 6);
  CHECK(ball_group(sym3, 3, 2).order() == 48);
  CHECK(ball_group(sym3, 3, 3).order() == 3072);
  CHECK(ball_group(c3, 3, 2).order() == 3);
  CHECK(ball_group(flip, 3, 2).order() == 4);
  CHECK(ball_group(sym4, 4, 2).order() == 31104);
  CHECK(ball_group(d4, 4, 2).order() == 128);

  for (auto [f, d] : {std::pair<const PermGroup&, int>{sym3, 3},
                      {c3, 3},
                      {flip, 3},
                      {sym4, 4},
                      {d4, 4}})
    for (int k = 1; k <= 2; ++k)
      CHECK(ball_group(f, d, k).order() == portrait_count(f, d, k));
}

TEST_CASE("portrait groups match the adjacency-backtracking oracle") {
  auto sym3 = group(3, "(1 2),(1 2 3)");
  auto c3 = group(3, "(1 2 3)");
  auto flip = group(3, "(1 2)");

  // every graph automorphism of the depth-2 ball has local actions in Sym(3)
  CHECK(tdlc_test::oracle_ball_automorphisms(Ball::build(3, 2)).size() == 48);

  for (int k = 1; k <= 2; ++k)
    for (const PermGroup* f : {&sym3, &c3, &flip}) {
      auto lib = ball_group(*f, 3, k).elements();
      auto ref = tdlc_test::oracle_constrained_automorphisms(Ball::build(3, k), *f);
      CHECK(tdlc_test::same_element_set(lib, ref));
    }

  auto sym4 = group(4, "(1 2),(1 2 3 4)");
  auto d4 = group(4, "(1 2 3 4),(1 3)");
  Ball b42 = Ball::build(4, 2);
  CHECK(tdlc_test::same_element_set(ball_group(sym4, 4, 2).elements(),
                                    tdlc_test::oracle_constrained_automorphisms(b42, sym4)));
  CHECK(tdlc_test::same_element_set(ball_group(d4, 4, 2).elements(),
                                    tdlc_test::oracle_constrained_automorphisms(b42, d4)));
}

TEST_CASE("every element acts locally inside its local action group") {
  for (auto [d, gens] : {std::pair<int, const char*>{3, "(1 2 3)"},
                         {3, "(1 2)"},
                         {3, "(1 2),(1 2 3)"},
                         {4, "(1 2 3 4),(1 3)"}}) {
    auto f = group(d, gens);
    Ball ball = Ball::build(d, 2);
    auto allowed = keys_of(f.elements());
    std::set<std::string> roots;
    PermGroup bg = ball_group(f, d, 2);
    for (const auto& g : bg.elements()) {
      for (int v = 0; v < ball.vertex_count(); ++v) {
        if (ball.is_leaf(v)) continue;
        CHECK(allowed.count(local_action_of(ball, g, v).key()) == 1);
      }
      roots.insert(local_action_of(ball, g, Ball::centre).key());
    }
    // the root action runs over all of f exactly
    CHECK(roots == allowed);
  }
}

TEST_CASE("local action rejects leaves and non-automorphisms") {
  Ball b = Ball::build(3, 2);
  Perm id = Perm::identity(b.vertex_count());
  CHECK(code_of([&] { local_action_of(b, id, 4); }) == errc::invalid_argument);
  CHECK(code_of([&] { local_action_of(b, Perm::identity(4), 0); }) ==
        errc::invalid_argument);
  // swapping vertices 0 and 4 (points 1 and 5) breaks adjacency
  Perm bad = Perm::from_cycles(b.vertex_count(), "(1 5)");
  CHECK(code_of([&] { local_action_of(b, bad, 0); }) == errc::invalid_argument);
}

TEST_CASE("enumeration order is stable") {
  auto sym3 = group(3, "(1 2),(1 2 3)");
  auto first = ball_group(sym3, 3, 2).elements();
  auto second = ball_group(sym3, 3, 2).elements();
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) CHECK(first[i] == second[i]);
}

TEST_CASE("deeper groups restrict onto shallower ones") {
  auto sym3 = group(3, "(1 2),(1 2 3)");
  for (int k = 1; k <= 2; ++k) {
    auto shallow = keys_of(ball_group(sym3, 3, k).elements());
    int prefix = Ball::build(3, k).vertex_count();
    std::set<std::string> restricted;
    PermGroup deep = ball_group(sym3, 3, k + 1);
    for (const auto& g : deep.elements()) {
      std::vector<std::uint16_t> img(g.images().begin(),
                                     g.images().begin() + prefix);
      restricted.insert(Perm::from_images(std::move(img)).key());
    }
    CHECK(restricted == shallow);
  }
}

TEST_CASE("enumeration caps and degree limits") {
  auto sym3 = group(3, "(1 2),(1 2 3)");
  auto c3 = group(3, "(1 2 3)");
  CHECK(Ball::build(3, 12).vertex_count() == 12286);
  CHECK(code_of([&] { ball_group(sym3, 3, 12); }) == errc::cap_exceeded);
  CHECK(code_of([&] { portrait_count(sym3, 3, 12); }) == errc::overflow);
  // a free local action keeps the count tiny, but the ball itself outgrows
  // the permutation degree
  CHECK(portrait_count(c3, 3, 15) == 3);
  CHECK(code_of([&] { ball_group(c3, 3, 15); }) == errc::size_limit);
  CHECK(code_of([&] { ball_group(group(4, "(1 2)"), 3, 2); }) ==
        errc::invalid_argument);
}

TEST_CASE("full-orbit focused colourings reproduce the legal colouring") {
  auto sym3 = group(3, "(1 2),(1 2 3)");
  Ball b1 = Ball::build(3, 1);
  FocusedColouring fc1 = focused_colouring(b1, sym3);
  CHECK(fc1.colour == std::vector<int>{1, 1, 2, 2, 3, 3});
  CHECK(verify_focused(fc1, sym3));

  Ball b2 = Ball::build(3, 2);
  FocusedColouring fc2 = focused_colouring(b2, sym3);
  CHECK(verify_focused(fc2, sym3));
  for (int e = 0; e < b2.edge_count(); ++e)
    CHECK(fc2.colour[static_cast<std::size_t>(2 * e)] == b2.parent_colour(e + 1));
  for (int v = 0; v < b2.vertex_count(); ++v) {
    REQUIRE(fc2.witness[static_cast<std::size_t>(v)].has_value());
    CHECK(fc2.witness[static_cast<std::size_t>(v)]->is_identity());
  }

  // determinism: both runs give the same arcs and witnesses
  FocusedColouring again = focused_colouring(b2, sym3);
  CHECK(again.colour == fc2.colour);
  for (int v = 0; v < b2.vertex_count(); ++v)
    CHECK(*again.witness[static_cast<std::size_t>(v)] ==
          *fc2.witness[static_cast<std::size_t>(v)]);
}

TEST_CASE("focused colourings hold up to depth four") {
  for (auto [d, gens] : {std::pair<int, const char*>{3, "(1 2),(1 2 3)"},
                         {3, "(1 2 3)"},
                         {4, "(1 2),(1 2 3 4)"},
                         {4, "(1 2 3 4)"}}) {
    auto f = group(d, gens);
    for (int k = 1; k <= 4; ++k) {
      FocusedColouring fc = focused_colouring(Ball::build(d, k), f);
      CHECK(verify_focused(fc, f));
    }
  }
}

TEST_CASE("synthetic orbits exercise the constant branch") {
  auto sym3 = group(3, "(1 2),(1 2 3)");
  Ball b = Ball::build(3, 3);
  std::vector<int> orbit{0};
  for (int v = 0; v < b.vertex_count(); ++v)
    if (b.depth_of(v) >= 2) orbit.push_back(v);
  FocusedColouring fc = focused_colouring(b, sym3, orbit);
  CHECK(verify_focused(fc, sym3));

  // vertices off the orbit carry one constant colour across all their arcs
  for (int v = 1; v <= 3; ++v) {
    CHECK_FALSE(fc.orbit[static_cast<std::size_t>(v)]);
    CHECK_FALSE(fc.witness[static_cast<std::size_t>(v)].has_value());
    auto arcs = b.arcs_at(v);
    for (int a : arcs)
      CHECK(fc.colour[static_cast<std::size_t>(a)] == b.parent_colour(v));
  }
  // vertex 4 hangs off vertex 1 by colour 2 but sees the constant colour 1,
  // so its witness cannot be the identity
  REQUIRE(fc.witness[4].has_value());
  CHECK_FALSE(fc.witness[4]->is_identity());
  CHECK(fc.witness[4]->apply(2) == 1);
  CHECK(fc.colour != focused_colouring(b, sym3).colour);
}

TEST_CASE("focused colouring rejects unusable inputs") {
  Ball b = Ball::build(3, 2);
  CHECK(code_of([&] { focused_colouring(b, group(3, "(1 2)")); }) ==
        errc::invalid_argument);
  CHECK(code_of([&] { focused_colouring(b, group(4, "(1 2 3 4)")); }) ==
        errc::invalid_argument);
  auto sym3 = group(3, "(1 2),(1 2 3)");
  CHECK(code_of([&] { focused_colouring(b, sym3, {1, 2}); }) ==
        errc::invalid_argument);
  CHECK(code_of([&] { focused_colouring(b, sym3, {0, 99}); }) ==
        errc::invalid_argument);
}

TEST_CASE("verification notices each broken property") {
  auto sym3 = group(3, "(1 2),(1 2 3)");
  auto c3 = group(3, "(1 2 3)");
  Ball b = Ball::build(3, 2);

  // central arcs must keep their own colour
  FocusedColouring fc = focused_colouring(b, sym3);
  fc.colour[0] = fc.colour[1] = 2;
  CHECK_FALSE(verify_focused(fc, sym3));

  // the two directions of an edge must agree
  fc = focused_colouring(b, sym3);
  fc.colour[7] = fc.colour[7] % 3 + 1;
  CHECK_FALSE(verify_focused(fc, sym3));

  // a witness that mismatches the arcs at its vertex
  fc = focused_colouring(b, sym3);
  fc.witness[1] = Perm::from_cycles(3, "(1 2 3)");
  CHECK_FALSE(verify_focused(fc, sym3));

  // a witness outside the local action group, even though the colours fit
  fc = focused_colouring(b, c3);
  fc.witness[4] = Perm::from_cycles(3, "(1 3)");
  CHECK_FALSE(verify_focused(fc, c3));

  // constancy off the orbit
  std::vector<int> orbit{0};
  for (int v = 4; v < b.vertex_count(); ++v) orbit.push_back(v);
  fc = focused_colouring(b, sym3, orbit);
  REQUIRE(verify_focused(fc, sym3));
  fc.colour[2 * 3] = fc.colour[2 * 3 + 1] = 3;  // edge from vertex 1 to 4
  CHECK_FALSE(verify_focused(fc, sym3));

  // colours stay in range and the orbit keeps the centre
  fc = focused_colouring(b, sym3);
  fc.colour[4] = fc.colour[5] = 0;
  CHECK_FALSE(verify_focused(fc, sym3));
  fc = focused_colouring(b, sym3);
  fc.orbit[0] = 0;
  CHECK_FALSE(verify_focused(fc, sym3));
}

TEST_CASE("central arc stabilizers generate the vertex stabilizer") {
  auto r32 = g_plus_vertex_check(group(3, "(1 2),(1 2 3)"), 3, 2);
  CHECK(r32.holds);
  CHECK(r32.lhs_order == 48);
  CHECK(r32.rhs_order == 48);

  auto rc3 = g_plus_vertex_check(group(3, "(1 2 3)"), 3, 2);
  CHECK(rc3.holds);
  CHECK(rc3.lhs_order == 1);
  CHECK(rc3.rhs_order == 1);

  auto r42 = g_plus_vertex_check(group(4, "(1 2),(1 2 3 4)"), 4, 2);
  CHECK(r42.holds);
  CHECK(r42.lhs_order == 31104);
  CHECK(r42.rhs_order == 31104);
}

TEST_CASE("generated stabilizer subgroups agree with plain closure") {
  auto sym3 = group(3, "(1 2),(1 2 3)");
  Ball b = Ball::build(3, 2);
  PermGroup g = ball_group(sym3, 3, 2);

  std::vector<Perm> central, all;
  for (int w = 1; w < b.vertex_count(); ++w)
    for (const auto& e : g.elements()) {
      if (!e.fixes(w + 1) || !e.fixes(b.parent_of(w) + 1)) continue;
      all.push_back(e);
      if (b.parent_of(w) == Ball::centre) central.push_back(e);
    }
  auto report = g_plus_vertex_check(sym3, 3, 2);
  CHECK(tdlc_test::oracle_closure(b.vertex_count(), central).size() ==
        report.rhs_order);
  CHECK(tdlc_test::oracle_closure(b.vertex_count(), all).size() ==
        report.lhs_order);
}

TEST_CASE("edge fixators factor over the two halves") {
  CHECK(property_p_edge_check(group(3, "(1 2),(1 2 3)"), 3, 1));
  CHECK(property_p_edge_check(group(3, "(1 2),(1 2 3)"), 3, 2));
  CHECK(property_p_edge_check(group(3, "(1 2 3)"), 3, 2));
  CHECK(property_p_edge_check(group(3, "(1 2)"), 3, 2));
  CHECK(property_p_edge_check(group(4, "(1 2),(1 2 3 4)"), 4, 2));
}

TEST_CASE("transitive nilpotent local actions have intransitive stabilizer subgroups") {
  for (auto [d, gens] : {std::pair<int, const char*>{3, "(1 2 3)"},
                         {4, "(1 2 3 4)"},
                         {4, "(1 2)(3 4),(1 3)(2 4)"},
                         {4, "(1 2 3 4),(1 3)"}}) {
    auto f = group(d, gens);
    REQUIRE(f.is_transitive());
    REQUIRE(f.is_nilpotent());
    CHECK_FALSE(f.stabilizer_generated_subgroup().is_transitive());
    CHECK(ball_group(f, d, 2).order() == portrait_count(f, d, 2));
  }
}

}  // TEST_SUITE
