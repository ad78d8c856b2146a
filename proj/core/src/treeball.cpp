#include "tdlc/treeball.hpp"

#include <map>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>

namespace tdlc {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    fail(errc::overflow, "portrait count exceeds the 64-bit range");
  return r;
}

void check_shape(int degree, int depth) {
  if (degree < 3) fail(errc::invalid_argument, "tree degree must be at least 3");
  if (depth < 1) fail(errc::invalid_argument, "ball depth must be at least 1");
}

void check_local_action(const PermGroup& f, int degree) {
  if (f.degree() != degree)
    fail(errc::invalid_argument,
         "local action degree " + std::to_string(f.degree()) +
             " does not match the tree degree " + std::to_string(degree));
}

// Product over the colours of the point stabilizer orders of f: the number
// of portrait choices contributed by one full set of same-depth interior
// vertices with pairwise distinct inward colours.
std::uint64_t stabilizer_product(const PermGroup& f) {
  std::uint64_t prod = 1;
  for (int j = 1; j <= f.degree(); ++j)
    prod = checked_mul(prod, f.point_stabilizer(j).order());
  return prod;
}

// Incrementally generated subgroup with membership lookups. Adding a
// non-member at least doubles the order, so rebuilds stay logarithmic no
// matter how many candidates stream through add().
class GeneratedSubgroup {
 public:
  GeneratedSubgroup(int degree, std::size_t cap) : degree_(degree), cap_(cap) {
    elems_.push_back(Perm::identity(degree));
    keys_.insert(elems_.front().key());
  }

  bool contains(const Perm& p) const { return keys_.count(p.key()) > 0; }

  void add(const Perm& p) {
    if (contains(p)) return;
    gens_.push_back(p);
    elems_ = PermGroup(degree_, gens_, cap_).elements();
    keys_.clear();
    for (const Perm& e : elems_) keys_.insert(e.key());
  }

  const std::vector<Perm>& elements() const { return elems_; }
  const std::unordered_set<std::string>& keys() const { return keys_; }

 private:
  int degree_;
  std::size_t cap_;
  std::vector<Perm> gens_;
  std::vector<Perm> elems_;
  std::unordered_set<std::string> keys_;
};

}  // namespace

Ball Ball::build(int degree, int depth) {
  check_shape(degree, depth);
  std::uint64_t total = 1;
  std::uint64_t sphere = static_cast<std::uint64_t>(degree);
  for (int t = 1; t <= depth; ++t) {
    total += sphere;
    if (total > static_cast<std::uint64_t>(max_vertices))
      fail(errc::size_limit, "ball of degree " + std::to_string(degree) +
                                 " and depth " + std::to_string(depth) +
                                 " exceeds " + std::to_string(max_vertices) +
                                 " vertices");
    sphere *= static_cast<std::uint64_t>(degree - 1);
  }

  Ball b;
  b.degree_ = degree;
  b.depth_ = depth;
  const int n = static_cast<int>(total);
  b.parent_.assign(static_cast<std::size_t>(n), -1);
  b.depth_of_.assign(static_cast<std::size_t>(n), 0);
  b.parent_colour_.assign(static_cast<std::size_t>(n), 0);
  b.child_begin_.assign(static_cast<std::size_t>(n), 0);
  b.child_end_.assign(static_cast<std::size_t>(n), 0);
  int next = 1;
  for (int v = 0; v < n; ++v) {
    b.child_begin_[static_cast<std::size_t>(v)] = next;
    if (b.depth_of_[static_cast<std::size_t>(v)] < depth) {
      for (int c = 1; c <= degree; ++c) {
        if (v != centre && c == b.parent_colour_[static_cast<std::size_t>(v)])
          continue;
        b.parent_[static_cast<std::size_t>(next)] = v;
        b.depth_of_[static_cast<std::size_t>(next)] =
            b.depth_of_[static_cast<std::size_t>(v)] + 1;
        b.parent_colour_[static_cast<std::size_t>(next)] = c;
        ++next;
      }
    }
    b.child_end_[static_cast<std::size_t>(v)] = next;
  }
  return b;
}

void Ball::check_vertex(int v) const {
  if (v < 0 || v >= vertex_count())
    fail(errc::invalid_argument,
         "vertex outside 0.." + std::to_string(vertex_count() - 1));
}

int Ball::parent_of(int v) const {
  check_vertex(v);
  return parent_[static_cast<std::size_t>(v)];
}

int Ball::depth_of(int v) const {
  check_vertex(v);
  return depth_of_[static_cast<std::size_t>(v)];
}

int Ball::parent_colour(int v) const {
  check_vertex(v);
  if (v == centre)
    fail(errc::invalid_argument, "the centre has no parent edge");
  return parent_colour_[static_cast<std::size_t>(v)];
}

int Ball::neighbour(int v, int colour) const {
  check_vertex(v);
  if (colour < 1 || colour > degree_)
    fail(errc::invalid_argument, "colour outside 1.." + std::to_string(degree_));
  if (v != centre && parent_colour_[static_cast<std::size_t>(v)] == colour)
    return parent_[static_cast<std::size_t>(v)];
  if (child_begin_[static_cast<std::size_t>(v)] ==
      child_end_[static_cast<std::size_t>(v)])
    return -1;
  // children sit in one contiguous range, colours ascending with the inward
  // colour skipped
  int offset = colour - 1;
  if (v != centre && parent_colour_[static_cast<std::size_t>(v)] < colour)
    --offset;
  return child_begin_[static_cast<std::size_t>(v)] + offset;
}

int Ball::edge_colour(int u, int w) const {
  check_vertex(u);
  check_vertex(w);
  if (parent_[static_cast<std::size_t>(w)] == u)
    return parent_colour_[static_cast<std::size_t>(w)];
  if (parent_[static_cast<std::size_t>(u)] == w)
    return parent_colour_[static_cast<std::size_t>(u)];
  fail(errc::invalid_argument, "vertices " + std::to_string(u) + " and " +
                                   std::to_string(w) + " are not adjacent");
}

int Ball::arc_origin(int a) const {
  if (a < 0 || a >= arc_count())
    fail(errc::invalid_argument,
         "arc outside 0.." + std::to_string(arc_count() - 1));
  int child = a / 2 + 1;
  return a % 2 == 0 ? parent_[static_cast<std::size_t>(child)] : child;
}

int Ball::arc_target(int a) const {
  if (a < 0 || a >= arc_count())
    fail(errc::invalid_argument,
         "arc outside 0.." + std::to_string(arc_count() - 1));
  int child = a / 2 + 1;
  return a % 2 == 0 ? child : parent_[static_cast<std::size_t>(child)];
}

int Ball::arc_colour(int a) const {
  if (a < 0 || a >= arc_count())
    fail(errc::invalid_argument,
         "arc outside 0.." + std::to_string(arc_count() - 1));
  return parent_colour_[static_cast<std::size_t>(a / 2 + 1)];
}

int Ball::arc_reverse(int a) const {
  if (a < 0 || a >= arc_count())
    fail(errc::invalid_argument,
         "arc outside 0.." + std::to_string(arc_count() - 1));
  return a ^ 1;
}

std::vector<int> Ball::arcs_at(int v) const {
  check_vertex(v);
  std::vector<int> out;
  for (int c = 1; c <= degree_; ++c) {
    int u = neighbour(v, c);
    if (u == -1) continue;
    out.push_back(u == parent_[static_cast<std::size_t>(v)] ? 2 * (v - 1) + 1
                                                            : 2 * (u - 1));
  }
  return out;
}

std::uint64_t portrait_count(const PermGroup& f, int degree, int depth) {
  check_shape(degree, depth);
  check_local_action(f, degree);
  std::uint64_t count = f.order();
  std::uint64_t stab_prod = stabilizer_product(f);
  // free local action: the root portrait already determines everything
  if (stab_prod == 1) return count;
  std::uint64_t per_colour = 1;
  for (int t = 1; t < depth; ++t) {
    for (std::uint64_t i = 0; i < per_colour; ++i)
      count = checked_mul(count, stab_prod);
    per_colour = checked_mul(per_colour, static_cast<std::uint64_t>(degree - 1));
  }
  return count;
}

PermGroup ball_group(const PermGroup& f, int degree, int depth,
                     std::size_t cap) {
  check_local_action(f, degree);
  Ball ball = Ball::build(degree, depth);
  const int n = ball.vertex_count();
  if (n > Perm::max_degree)
    fail(errc::size_limit,
         "ball on " + std::to_string(n) +
             " vertices exceeds the permutation degree limit of " +
             std::to_string(Perm::max_degree));

  std::uint64_t count = 0;
  try {
    count = portrait_count(f, degree, depth);
  } catch (const Error& e) {
    if (e.code() != errc::overflow) throw;
    fail(errc::cap_exceeded, "portrait enumeration exceeds the cap of " +
                                 std::to_string(cap));
  }
  if (count > cap)
    fail(errc::cap_exceeded, "portrait enumeration of " +
                                 std::to_string(count) +
                                 " elements exceeds the cap of " +
                                 std::to_string(cap));

  const std::vector<Perm>& fe = f.elements();

  // candidates[j-1][c-1]: elements sending colour j to c. Only needed past
  // depth 1, where the ball cap keeps the degree small.
  std::vector<std::vector<std::vector<int>>> candidates;
  if (depth >= 2) {
    candidates.assign(static_cast<std::size_t>(degree),
                      std::vector<std::vector<int>>(
                          static_cast<std::size_t>(degree)));
    for (std::size_t i = 0; i < fe.size(); ++i)
      for (int j = 1; j <= degree; ++j)
        candidates[static_cast<std::size_t>(j - 1)]
                  [static_cast<std::size_t>(fe[i].apply(j) - 1)]
                      .push_back(static_cast<int>(i));
  }

  std::vector<int> interior;
  for (int v = 0; v < n; ++v)
    if (!ball.is_leaf(v)) interior.push_back(v);

  std::vector<Perm> elems;
  elems.reserve(static_cast<std::size_t>(count));
  std::vector<std::uint16_t> image(static_cast<std::size_t>(n));
  image[0] = 0;

  // Children of v follow its image's children: the child reached along
  // colour c goes to the one reached along sigma(c).
  auto place_children = [&](int v, const Perm& sigma) {
    int gv = image[static_cast<std::size_t>(v)];
    for (int c = 1; c <= degree; ++c) {
      int x = ball.neighbour(v, c);
      if (x == -1 || x == ball.parent_of(v)) continue;
      int gx = ball.neighbour(gv, sigma.apply(c));
      image[static_cast<std::size_t>(x)] = static_cast<std::uint16_t>(gx);
    }
  };

  std::vector<int> root_candidates(fe.size());
  std::iota(root_candidates.begin(), root_candidates.end(), 0);

  // the inward edge of an interior vertex is already mapped once its parent
  // chose, pinning the candidate list for its own choice
  auto list_for = [&](std::size_t idx) -> const std::vector<int>* {
    int v = interior[idx];
    if (v == Ball::centre) return &root_candidates;
    int j = ball.parent_colour(v);
    int target = ball.parent_colour(image[static_cast<std::size_t>(v)]);
    return &candidates[static_cast<std::size_t>(j - 1)]
                      [static_cast<std::size_t>(target - 1)];
  };

  // explicit backtracking; interior counts can reach the tens of thousands
  std::vector<const std::vector<int>*> lists(interior.size());
  std::vector<std::size_t> pos(interior.size(), 0);
  std::size_t idx = 0;
  lists[0] = list_for(0);
  while (true) {
    if (pos[idx] == lists[idx]->size()) {
      if (idx == 0) break;
      pos[idx] = 0;
      --idx;
      ++pos[idx];
      continue;
    }
    const Perm& sigma = fe[static_cast<std::size_t>((*lists[idx])[pos[idx]])];
    place_children(interior[idx], sigma);
    if (idx + 1 == interior.size()) {
      elems.push_back(Perm::from_images(image));
      ++pos[idx];
    } else {
      ++idx;
      lists[idx] = list_for(idx);
      pos[idx] = 0;
    }
  }

  // portraits compose pointwise inside f at every interior vertex, so the
  // list is closed under product and contains the identity
  return PermGroup::from_elements(n, std::move(elems));
}

Perm local_action_of(const Ball& ball, const Perm& g, int v) {
  if (g.degree() != ball.vertex_count())
    fail(errc::invalid_argument,
         "permutation degree does not match the ball");
  if (ball.is_leaf(v))
    fail(errc::invalid_argument,
         "local action is only defined at interior vertices");
  int gv = g.apply(v + 1) - 1;
  std::vector<std::uint16_t> img(static_cast<std::size_t>(ball.degree()));
  for (int c = 1; c <= ball.degree(); ++c) {
    int u = ball.neighbour(v, c);
    int gu = g.apply(u + 1) - 1;
    img[static_cast<std::size_t>(c - 1)] =
        static_cast<std::uint16_t>(ball.edge_colour(gv, gu) - 1);
  }
  return Perm::from_images(std::move(img));
}

FocusedColouring focused_colouring(const Ball& ball, const PermGroup& f) {
  std::vector<int> all(static_cast<std::size_t>(ball.vertex_count()));
  std::iota(all.begin(), all.end(), 0);
  return focused_colouring(ball, f, all);
}

FocusedColouring focused_colouring(const Ball& ball, const PermGroup& f,
                                   const std::vector<int>& orbit_vertices) {
  check_local_action(f, ball.degree());
  if (!f.is_transitive())
    fail(errc::invalid_argument,
         "focused colourings need a transitive local action");

  FocusedColouring fc{ball, {}, {}, {}};
  const int n = ball.vertex_count();
  fc.orbit.assign(static_cast<std::size_t>(n), 0);
  for (int v : orbit_vertices) {
    if (v < 0 || v >= n)
      fail(errc::invalid_argument, "orbit vertex outside the ball");
    fc.orbit[static_cast<std::size_t>(v)] = 1;
  }
  if (!fc.orbit[Ball::centre])
    fail(errc::invalid_argument, "the orbit must contain the centre");
  fc.colour.assign(static_cast<std::size_t>(ball.arc_count()), 0);
  fc.witness.assign(static_cast<std::size_t>(n), std::nullopt);
  fc.witness[Ball::centre] = Perm::identity(ball.degree());

  const std::vector<Perm>& fe = f.elements();
  std::map<std::pair<int, int>, Perm> memo;
  // first element of f sending colour j to c; transitivity guarantees one
  auto witness_for = [&](int j, int c) -> const Perm& {
    auto it = memo.find({j, c});
    if (it != memo.end()) return it->second;
    for (const Perm& t : fe)
      if (t.apply(j) == c) return memo.emplace(std::pair{j, c}, t).first->second;
    fail(errc::invalid_argument, "local action is not transitive");
  };

  auto set_edge = [&fc](int child, int value) {
    fc.colour[static_cast<std::size_t>(2 * (child - 1))] = value;
    fc.colour[static_cast<std::size_t>(2 * (child - 1) + 1)] = value;
  };
  auto colour_children = [&](int v, auto&& value_of) {
    for (int c = 1; c <= ball.degree(); ++c) {
      int x = ball.neighbour(v, c);
      if (x != -1 && x != ball.parent_of(v)) set_edge(x, value_of(c));
    }
  };

  for (int v = 0; v < n; ++v) {
    if (v == Ball::centre) {
      colour_children(v, [](int c) { return c; });
      continue;
    }
    int c_in = fc.colour[static_cast<std::size_t>(2 * (v - 1))];
    if (fc.orbit[static_cast<std::size_t>(v)]) {
      const Perm& t = witness_for(ball.parent_colour(v), c_in);
      fc.witness[static_cast<std::size_t>(v)] = t;
      if (!ball.is_leaf(v))
        colour_children(v, [&t](int c) { return t.apply(c); });
    } else if (!ball.is_leaf(v)) {
      colour_children(v, [c_in](int) { return c_in; });
    }
  }
  return fc;
}

bool verify_focused(const FocusedColouring& fc, const PermGroup& f) {
  const Ball& b = fc.ball;
  const int n = b.vertex_count();
  if (n == 0 || f.degree() != b.degree()) return false;
  if (fc.orbit.size() != static_cast<std::size_t>(n)) return false;
  if (fc.colour.size() != static_cast<std::size_t>(b.arc_count())) return false;
  if (fc.witness.size() != static_cast<std::size_t>(n)) return false;
  for (int value : fc.colour)
    if (value < 1 || value > b.degree()) return false;
  if (!fc.orbit[Ball::centre]) return false;

  // the two arcs of an edge carry the same value
  for (int e = 0; e < b.edge_count(); ++e)
    if (fc.colour[static_cast<std::size_t>(2 * e)] !=
        fc.colour[static_cast<std::size_t>(2 * e + 1)])
      return false;

  // identity on the arcs at the centre
  for (int a : b.arcs_at(Ball::centre))
    if (fc.colour[static_cast<std::size_t>(a)] != b.arc_colour(a)) return false;

  auto in_f = [&f](const Perm& t) {
    for (const Perm& e : f.elements())
      if (e == t) return true;
    return false;
  };

  for (int v = 0; v < n; ++v) {
    if (fc.orbit[static_cast<std::size_t>(v)]) {
      // a recorded witness in f matches the colouring on the arcs at v
      const auto& t = fc.witness[static_cast<std::size_t>(v)];
      if (!t || t->degree() != b.degree() || !in_f(*t)) return false;
      for (int a : b.arcs_at(v))
        if (fc.colour[static_cast<std::size_t>(a)] != t->apply(b.arc_colour(a)))
          return false;
    } else {
      // constant on the arcs at v
      std::vector<int> arcs = b.arcs_at(v);
      for (int a : arcs)
        if (fc.colour[static_cast<std::size_t>(a)] !=
            fc.colour[static_cast<std::size_t>(arcs.front())])
          return false;
    }
  }
  return true;
}

GPlusReport g_plus_vertex_check(const PermGroup& f, int degree, int depth,
                                std::size_t cap) {
  Ball ball = Ball::build(degree, depth);
  PermGroup g = ball_group(f, degree, depth, cap);
  const int n = ball.vertex_count();

  GeneratedSubgroup all_arcs(n, cap);
  GeneratedSubgroup central_arcs(n, cap);
  for (int w = 1; w < n; ++w) {
    int p = ball.parent_of(w);
    for (const Perm& e : g.elements()) {
      if (!e.fixes(w + 1) || !e.fixes(p + 1)) continue;
      all_arcs.add(e);
      if (p == Ball::centre) central_arcs.add(e);
    }
  }

  GPlusReport report;
  // every portrait fixes the centre, so the intersection is a plain filter
  std::unordered_set<std::string> lhs;
  for (const Perm& e : all_arcs.elements())
    if (e.fixes(Ball::centre + 1)) lhs.insert(e.key());
  report.lhs_order = lhs.size();
  report.rhs_order = central_arcs.elements().size();
  report.holds = lhs == central_arcs.keys();
  return report;
}

bool property_p_edge_check(const PermGroup& f, int degree, int depth,
                           std::size_t cap) {
  Ball ball = Ball::build(degree, depth);
  PermGroup g = ball_group(f, degree, depth, cap);
  const int n = ball.vertex_count();

  // the half containing vertex 1, the far end of the central edge
  std::vector<char> far_side(static_cast<std::size_t>(n), 0);
  far_side[1] = 1;
  for (int x = 2; x < n; ++x)
    far_side[static_cast<std::size_t>(x)] =
        far_side[static_cast<std::size_t>(ball.parent_of(x))];

  std::vector<Perm> edge_fix, fixes_far, fixes_near;
  for (const Perm& e : g.elements()) {
    if (!e.fixes(Ball::centre + 1) || !e.fixes(2)) continue;
    edge_fix.push_back(e);
    bool far_trivial = true, near_trivial = true;
    for (int x = 0; x < n; ++x) {
      if (e.fixes(x + 1)) continue;
      if (far_side[static_cast<std::size_t>(x)]) far_trivial = false;
      else near_trivial = false;
    }
    if (far_trivial) fixes_far.push_back(e);
    if (near_trivial) fixes_near.push_back(e);
  }

  // disjoint supports make the products pairwise distinct, so comparing the
  // product set against the full fixator settles the factorization
  if (static_cast<std::uint64_t>(fixes_far.size()) * fixes_near.size() !=
      edge_fix.size())
    return false;
  std::unordered_set<std::string> whole, products;
  for (const Perm& e : edge_fix) whole.insert(e.key());
  for (const Perm& a : fixes_far)
    for (const Perm& b : fixes_near) products.insert((a * b).key());
  return products == whole;
}

}  // namespace tdlc
