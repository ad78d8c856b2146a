#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tdlc/errors.hpp"
#include "tdlc/permgrp.hpp"

namespace tdlc {

// Ball of radius `depth` around a centre vertex of the d-regular tree,
// carrying a legal edge colouring: each edge gets a colour in {1..d}, equal
// in both directions, injective at every vertex, bijective at vertices of
// full degree.
//
// Vertices are numbered 0..vertex_count()-1 in breadth-first order from the
// centre (vertex 0), children in ascending colour order; the numbering of a
// shallower ball is a prefix of any deeper one. Edge e (0-based) joins
// vertex e+1 to its parent; arcs 2e and 2e+1 run parent-to-child and
// child-to-parent.
class Ball {
 public:
  static constexpr int max_vertices = 100000;
  static constexpr int centre = 0;

  // degree >= 3, depth >= 1; vertex count capped at max_vertices.
  static Ball build(int degree, int depth);

  int degree() const { return degree_; }
  int depth() const { return depth_; }
  int vertex_count() const { return static_cast<int>(parent_.size()); }
  int edge_count() const { return vertex_count() - 1; }
  int arc_count() const { return 2 * edge_count(); }

  int parent_of(int v) const;     // -1 for the centre
  int depth_of(int v) const;
  bool is_leaf(int v) const { return depth_of(v) == depth_; }

  // Colour of the edge between v and its parent (1..degree).
  int parent_colour(int v) const;

  // Neighbour of v reached along colour c, or -1 when v has no such arc.
  int neighbour(int v, int colour) const;

  // Colour of the edge {u, w}; u and w must be adjacent.
  int edge_colour(int u, int w) const;

  int arc_origin(int a) const;
  int arc_target(int a) const;
  int arc_colour(int a) const;
  int arc_reverse(int a) const;

  // Arcs originating at v, in ascending colour order.
  std::vector<int> arcs_at(int v) const;

 private:
  Ball() = default;
  void check_vertex(int v) const;

  int degree_ = 0;
  int depth_ = 0;
  std::vector<int> parent_;         // -1 for the centre
  std::vector<int> depth_of_;
  std::vector<int> parent_colour_;  // 0 for the centre
  std::vector<int> child_begin_;    // children of v are a contiguous range
  std::vector<int> child_end_;
};

// Order the portrait enumeration of ball_group would produce, computed from
// the closed-form count |F| * prod over interior non-central vertices of
// |{g in F : g fixes the inward edge colour}|, without enumerating.
std::uint64_t portrait_count(const PermGroup& f, int degree, int depth);

// Group of all automorphisms of the ball whose local action, read through
// the legal colouring, lies in F at the centre and at every interior
// vertex. Boundary vertices carry no constraint. Realized by enumerating
// portraits; the portrait count must stay within `cap` and the vertex count
// within Perm::max_degree. All ball automorphisms fix the centre, so the
// result is its own centre stabilizer.
PermGroup ball_group(const PermGroup& f, int degree, int depth,
                     std::size_t cap = PermGroup::default_cap);

// Local action of a ball automorphism g at an interior vertex, as the
// colour permutation c -> edge_colour(g(v), g(neighbour(v, c))). Errors if
// v is not interior or g does not preserve the ball's adjacency.
Perm local_action_of(const Ball& ball, const Perm& g, int v);

// Colouring of all arcs by arcs at the centre (recorded as their colours),
// built sphere by sphere: identity on the central arcs, pulled back through
// a witness colour permutation at vertices in the marked orbit, constant on
// the arcs at vertices outside it.
struct FocusedColouring {
  Ball ball;
  std::vector<char> orbit;                  // per vertex
  std::vector<int> colour;                  // per arc, values 1..degree
  std::vector<std::optional<Perm>> witness; // per orbit vertex
};

// f must act transitively on {1..degree}. The default treats every vertex
// as lying in the orbit of the centre; the second form marks only the
// listed vertices (which must include the centre) and exercises the
// constant-colour branch at the rest.
FocusedColouring focused_colouring(const Ball& ball, const PermGroup& f);
FocusedColouring focused_colouring(const Ball& ball, const PermGroup& f,
                                   const std::vector<int>& orbit_vertices);

// Checks the four defining properties directly: identity on the central
// arcs; reversal-invariance; at every orbit vertex a recorded witness in F
// matching the colouring on the arcs there; constancy elsewhere.
bool verify_focused(const FocusedColouring& fc, const PermGroup& f);

// Within G = ball_group(f, degree, depth): compares the centre stabilizer
// of the subgroup generated by all arc stabilizers (lhs) with the subgroup
// generated by the stabilizers of the central arcs alone (rhs). The two
// agree for the infinite tree; at a finite truncation the report records
// what actually happened at this depth.
struct GPlusReport {
  bool holds = false;
  std::uint64_t lhs_order = 0;
  std::uint64_t rhs_order = 0;
};
GPlusReport g_plus_vertex_check(const PermGroup& f, int degree, int depth,
                                std::size_t cap = PermGroup::default_cap);

// For the central edge {v, w} of the ball: whether the pointwise fixator of
// the edge in ball_group(f, degree, depth) is the direct product of the
// fixators of the two half-balls.
bool property_p_edge_check(const PermGroup& f, int degree, int depth,
                           std::size_t cap = PermGroup::default_cap);

}  // namespace tdlc
