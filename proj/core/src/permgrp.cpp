#include "tdlc/permgrp.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <unordered_set>
#include <utility>

namespace tdlc {

namespace {

void check_degree(int degree) {
  if (degree < 1 || degree > Perm::max_degree)
    fail(errc::invalid_argument,
         "degree must lie in 1.." + std::to_string(Perm::max_degree));
}

std::vector<Perm> bfs_closure(int degree, const std::vector<Perm>& gens,
                              std::size_t cap) {
  std::vector<Perm> elems;
  std::unordered_set<std::string> seen;
  elems.push_back(Perm::identity(degree));
  seen.insert(elems.front().key());
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (const Perm& g : gens) {
      Perm next = elems[head] * g;
      if (seen.insert(next.key()).second) {
        if (elems.size() >= cap)
          fail(errc::cap_exceeded,
               "group enumeration exceeds the cap of " + std::to_string(cap));
        elems.push_back(std::move(next));
      }
    }
  }
  return elems;
}

struct ClosureResult {
  std::vector<Perm> elements;
  std::vector<Perm> gens;
};

// <gens> closed under conjugation by the elements of `conj` and the words
// over them. One escaping conjugate is adopted per round; each adoption at
// least doubles the subgroup, so both the number of closure rebuilds and the
// final generator count stay logarithmic in the cap.
ClosureResult normal_closure(int degree, std::vector<Perm> gens,
                             const std::vector<Perm>& conj, std::size_t cap) {
  std::vector<Perm> conj_inv;
  conj_inv.reserve(conj.size());
  for (const Perm& c : conj) conj_inv.push_back(c.inverse());
  for (;;) {
    std::vector<Perm> elems = bfs_closure(degree, gens, cap);
    std::unordered_set<std::string> have;
    for (const Perm& e : elems) have.insert(e.key());
    bool grew = false;
    for (std::size_t at = 0; at < elems.size() && !grew; ++at) {
      for (std::size_t i = 0; i < conj.size() && !grew; ++i) {
        Perm t = (conj_inv[i] * elems[at]) * conj[i];
        if (have.count(t.key()) == 0) {
          gens.push_back(std::move(t));
          grew = true;
        }
      }
    }
    if (!grew) return {std::move(elems), std::move(gens)};
  }
}

}  // namespace

Perm Perm::identity(int degree) {
  check_degree(degree);
  std::vector<std::uint16_t> img(static_cast<std::size_t>(degree));
  std::iota(img.begin(), img.end(), 0);
  return Perm(std::move(img));
}

Perm Perm::from_images(std::vector<std::uint16_t> images) {
  const std::size_t n = images.size();
  if (n < 1 || n > static_cast<std::size_t>(max_degree))
    fail(errc::invalid_argument,
         "degree must lie in 1.." + std::to_string(max_degree));
  std::vector<bool> hit(n, false);
  for (std::uint16_t v : images) {
    if (v >= n || hit[v])
      fail(errc::invalid_argument, "images do not form a bijection");
    hit[v] = true;
  }
  return Perm(std::move(images));
}

Perm Perm::from_cycles(int degree, std::string_view text) {
  Perm p = identity(degree);
  std::vector<bool> used(static_cast<std::size_t>(degree), false);
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  skip_ws();
  if (i == text.size()) fail(errc::parse_error, "empty permutation text");
  while (true) {
    skip_ws();
    if (i == text.size()) break;
    if (text[i] != '(')
      fail(errc::parse_error, "expected '(' at position " + std::to_string(i));
    ++i;
    std::vector<std::size_t> cycle;
    while (true) {
      skip_ws();
      if (i == text.size()) fail(errc::parse_error, "unterminated cycle");
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        fail(errc::parse_error,
             "expected a point or ')' at position " + std::to_string(i));
      long point = 0;
      while (i < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i]))) {
        point = point * 10 + (text[i] - '0');
        if (point > max_degree) fail(errc::parse_error, "point out of range");
        ++i;
      }
      if (point < 1 || point > degree)
        fail(errc::parse_error, "point " + std::to_string(point) +
                                    " outside 1.." + std::to_string(degree));
      if (used[static_cast<std::size_t>(point - 1)])
        fail(errc::parse_error, "point " + std::to_string(point) +
                                    " repeated; cycles must be disjoint");
      used[static_cast<std::size_t>(point - 1)] = true;
      cycle.push_back(static_cast<std::size_t>(point - 1));
    }
    if (cycle.size() > 1)
      for (std::size_t j = 0; j < cycle.size(); ++j)
        p.img_[cycle[j]] =
            static_cast<std::uint16_t>(cycle[(j + 1) % cycle.size()]);
  }
  return p;
}

int Perm::apply(int point) const {
  if (point < 1 || point > degree())
    fail(errc::invalid_argument, "point outside 1..degree");
  return img_[static_cast<std::size_t>(point - 1)] + 1;
}

bool Perm::is_identity() const {
  for (std::size_t i = 0; i < img_.size(); ++i)
    if (img_[i] != i) return false;
  return true;
}

bool Perm::fixes(int point) const { return apply(point) == point; }

Perm Perm::inverse() const {
  std::vector<std::uint16_t> inv(img_.size());
  for (std::size_t i = 0; i < img_.size(); ++i)
    inv[img_[i]] = static_cast<std::uint16_t>(i);
  return Perm(std::move(inv));
}

Perm operator*(const Perm& a, const Perm& b) {
  if (a.degree() != b.degree())
    fail(errc::invalid_argument, "degree mismatch in permutation product");
  std::vector<std::uint16_t> img(a.img_.size());
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = a.img_[b.img_[i]];
  return Perm(std::move(img));
}

std::string Perm::format() const {
  std::string out;
  std::vector<bool> done(img_.size(), false);
  for (std::size_t start = 0; start < img_.size(); ++start) {
    if (done[start] || img_[start] == start) {
      done[start] = true;
      continue;
    }
    out += '(';
    std::size_t p = start;
    bool first = true;
    do {
      if (!first) out += ' ';
      out += std::to_string(p + 1);
      done[p] = true;
      p = img_[p];
      first = false;
    } while (p != start);
    out += ')';
  }
  if (out.empty()) out = "()";
  return out;
}

std::string Perm::key() const {
  return std::string(reinterpret_cast<const char*>(img_.data()),
                     img_.size() * sizeof(std::uint16_t));
}

std::vector<Perm> parse_generators(int degree, std::string_view text) {
  std::vector<Perm> out;
  auto blank = [](std::string_view s) {
    for (char c : s)
      if (!std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
  };
  if (text.find(',') == std::string_view::npos && blank(text)) return out;
  std::size_t begin = 0;
  while (true) {
    std::size_t comma = text.find(',', begin);
    std::string_view piece =
        text.substr(begin, comma == std::string_view::npos ? std::string_view::npos
                                                           : comma - begin);
    out.push_back(Perm::from_cycles(degree, piece));
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  return out;
}

PermGroup::PermGroup(int degree, std::vector<Perm> generators, std::size_t cap)
    : degree_(degree),
      generators_(std::move(generators)),
      cap_(cap),
      cache_(std::make_shared<Cache>()) {
  check_degree(degree);
  if (cap_ < 1) fail(errc::invalid_argument, "cap must be positive");
  for (const Perm& g : generators_)
    if (g.degree() != degree_)
      fail(errc::invalid_argument,
           "generator degree does not match the group degree");
}

PermGroup PermGroup::from_elements(int degree, std::vector<Perm> elements,
                                   std::vector<Perm> generators) {
  if (elements.empty())
    fail(errc::invalid_argument, "element list must contain the identity");
  for (const Perm& e : elements)
    if (e.degree() != degree)
      fail(errc::invalid_argument,
           "element degree does not match the group degree");
  PermGroup g(degree, generators.empty() ? elements : std::move(generators));
  g.cache_->elements = std::move(elements);
  std::call_once(g.cache_->flag, [] {});
  return g;
}

void PermGroup::populate() const {
  std::call_once(cache_->flag, [this] {
    cache_->elements = bfs_closure(degree_, generators_, cap_);
  });
}

std::size_t PermGroup::order() const {
  populate();
  return cache_->elements.size();
}

const std::vector<Perm>& PermGroup::elements() const {
  populate();
  return cache_->elements;
}

std::vector<std::vector<int>> PermGroup::orbits() const {
  std::vector<int> comp(static_cast<std::size_t>(degree_), -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < degree_; ++s) {
    if (comp[static_cast<std::size_t>(s)] != -1) continue;
    std::vector<int> orbit{s};
    comp[static_cast<std::size_t>(s)] = static_cast<int>(out.size());
    for (std::size_t head = 0; head < orbit.size(); ++head) {
      for (const Perm& g : generators_) {
        int to = g.images()[static_cast<std::size_t>(orbit[head])];
        if (comp[static_cast<std::size_t>(to)] == -1) {
          comp[static_cast<std::size_t>(to)] = comp[static_cast<std::size_t>(s)];
          orbit.push_back(to);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    for (int& x : orbit) ++x;
    out.push_back(std::move(orbit));
  }
  return out;
}

bool PermGroup::is_transitive() const { return orbits().size() == 1; }

bool PermGroup::is_regular() const {
  return is_transitive() && order() == static_cast<std::size_t>(degree_);
}

bool PermGroup::is_free() const {
  populate();
  for (const Perm& e : cache_->elements) {
    if (e.is_identity()) continue;
    for (std::size_t i = 0; i < e.images().size(); ++i)
      if (e.images()[i] == i) return false;
  }
  return true;
}

PrimitivityReport PermGroup::primitivity() const {
  PrimitivityReport r;
  if (!is_transitive()) {
    r.intransitive_input = true;
    return r;
  }
  if (degree_ <= 2) {
    r.primitive = true;
    return r;
  }
  std::vector<int> parent(static_cast<std::size_t>(degree_));
  auto find = [&parent](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (int beta = 1; beta < degree_; ++beta) {
    std::iota(parent.begin(), parent.end(), 0);
    // Refine {1, beta} into the minimal congruence: whenever two points are
    // merged, their images under every generator must merge as well.
    std::vector<std::pair<int, int>> queue{{0, beta}};
    parent[static_cast<std::size_t>(beta)] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      auto [a, b] = queue[head];
      for (const Perm& g : generators_) {
        int x = g.images()[static_cast<std::size_t>(a)];
        int y = g.images()[static_cast<std::size_t>(b)];
        int rx = find(x), ry = find(y);
        if (rx != ry) {
          parent[static_cast<std::size_t>(ry)] = rx;
          queue.push_back({x, y});
        }
      }
    }
    int block = 0, root = find(0);
    for (int v = 0; v < degree_; ++v)
      if (find(v) == root) ++block;
    if (block < degree_) return r;  // proper block containing 1 and beta
  }
  r.primitive = true;
  return r;
}

bool PermGroup::is_nilpotent() const {
  std::size_t gamma_size = order();
  if (gamma_size == 1) return true;
  // gamma_{k+1} = [gamma_k, G] is the normal closure of the commutators of
  // the two generating sets; gamma_k is normal in G throughout, so the
  // series descends inside gamma_k and a stall means it never reaches the
  // trivial group.
  std::vector<Perm> ggens = generators_;
  while (true) {
    std::vector<Perm> comms;
    std::unordered_set<std::string> seen;
    for (const Perm& x : ggens) {
      Perm xi = x.inverse();
      for (const Perm& y : generators_) {
        Perm c = (xi * y.inverse()) * (x * y);
        if (!c.is_identity() && seen.insert(c.key()).second)
          comms.push_back(std::move(c));
      }
    }
    if (comms.empty()) return true;
    ClosureResult next = normal_closure(degree_, std::move(comms), generators_, cap_);
    if (next.elements.size() >= gamma_size) return false;
    gamma_size = next.elements.size();
    ggens = std::move(next.gens);
  }
}

PermGroup PermGroup::point_stabilizer(int point) const {
  if (point < 1 || point > degree_)
    fail(errc::invalid_argument, "point outside 1..degree");
  populate();
  std::vector<Perm> fixed;
  for (const Perm& e : cache_->elements)
    if (e.images()[static_cast<std::size_t>(point - 1)] ==
        static_cast<std::size_t>(point - 1))
      fixed.push_back(e);
  PermGroup s = from_elements(degree_, std::move(fixed));
  s.cap_ = cap_;
  return s;
}

PermGroup PermGroup::stabilizer_generated_subgroup() const {
  populate();
  std::vector<Perm> gens;
  for (const Perm& e : cache_->elements) {
    if (e.is_identity()) continue;
    for (std::size_t i = 0; i < e.images().size(); ++i)
      if (e.images()[i] == i) {
        gens.push_back(e);
        break;
      }
  }
  return PermGroup(degree_, std::move(gens), cap_);
}

}  // namespace tdlc
