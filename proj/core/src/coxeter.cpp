#include "tdlc/coxeter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"

namespace tdlc {

CoxeterSystem::CoxeterSystem(std::vector<std::vector<std::uint32_t>> m)
    : m_(std::move(m)) {
  const std::size_t n = m_.size();
  if (n > static_cast<std::size_t>(max_size))
    fail(errc::size_limit,
         "system has more than " + std::to_string(max_size) + " generators");
  for (std::size_t s = 0; s < n; ++s) {
    if (m_[s].size() != n)
      fail(errc::invalid_argument, "matrix is not square");
    if (m_[s][s] != 1)
      fail(errc::invalid_argument, "diagonal entries must be 1");
    for (std::size_t t = 0; t < n; ++t) {
      if (m_[s][t] != m_[t][s])
        fail(errc::invalid_argument, "matrix is not symmetric");
      if (s != t && m_[s][t] == 1)
        fail(errc::invalid_argument, "off-diagonal entries must be >= 2 or 0");
    }
  }
}

CoxeterSystem CoxeterSystem::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("size") ||
      !j.contains("m") || !j["size"].is_number_unsigned() ||
      !j["m"].is_array())
    fail(errc::parse_error,
         "expected an object {\"size\": n, \"m\": [[...]]}");
  std::size_t size = j["size"].get<std::size_t>();
  if (j["m"].size() != size)
    fail(errc::parse_error, "matrix row count does not match size");
  std::vector<std::vector<std::uint32_t>> m(size);
  for (std::size_t s = 0; s < size; ++s) {
    const auto& row = j["m"][s];
    if (!row.is_array() || row.size() != size)
      fail(errc::parse_error, "matrix is not size x size");
    for (const auto& cell : row) {
      if (!cell.is_number_unsigned())
        fail(errc::parse_error, "matrix entries must be naturals (0 = infinity)");
      m[s].push_back(cell.get<std::uint32_t>());
    }
  }
  return CoxeterSystem(std::move(m));
}

std::string CoxeterSystem::to_json() const {
  nlohmann::ordered_json j;
  j["size"] = m_.size();
  j["m"] = m_;
  return j.dump(2);
}

std::uint32_t CoxeterSystem::m(int s, int t) const {
  if (s < 0 || t < 0 || s >= size() || t >= size())
    fail(errc::invalid_argument, "generator index out of range");
  return m_[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
}

std::uint32_t CoxeterSystem::full_set() const {
  return size() == 0 ? 0u : (size() == 31 ? 0x7fffffffu : (1u << size()) - 1u);
}

void CoxeterSystem::check_subset(std::uint32_t subset) const {
  if ((subset & ~full_set()) != 0)
    fail(errc::invalid_argument, "subset mentions generators outside the system");
}

std::vector<std::uint32_t> CoxeterSystem::components(std::uint32_t subset) const {
  check_subset(subset);
  std::vector<std::uint32_t> out;
  std::uint32_t left = subset;
  while (left) {
    int seed = __builtin_ctz(left);
    std::uint32_t comp = 1u << seed;
    std::vector<int> stack{seed};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < size(); ++w) {
        if (!((subset >> w) & 1u) || ((comp >> w) & 1u)) continue;
        std::uint32_t bond = m_[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)];
        if (bond == 0 || bond >= 3) {
          comp |= 1u << w;
          stack.push_back(w);
        }
      }
    }
    out.push_back(comp);
    left &= ~comp;
  }
  return out;
}

bool CoxeterSystem::component_is_finite(std::uint32_t comp) const {
  std::vector<int> verts;
  for (int v = 0; v < size(); ++v)
    if ((comp >> v) & 1u) verts.push_back(v);
  const int k = static_cast<int>(verts.size());
  if (k <= 1) return true;

  // collect bonds of the induced diagram
  struct Edge { int a, b; std::uint32_t label; };
  std::vector<Edge> edges;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      std::uint32_t bond =
          m_[static_cast<std::size_t>(verts[i])][static_cast<std::size_t>(verts[j])];
      if (bond == 0) return false;  // infinite dihedral inside
      if (bond >= 3) edges.push_back({i, j, bond});
    }
  if (k == 2) return true;  // I_2(m), finite for every finite m

  // rank >= 3: the diagram must be a tree with labels in {3,4,5}
  if (static_cast<int>(edges.size()) != k - 1) return false;
  for (const Edge& e : edges)
    if (e.label > 5) return false;

  std::vector<int> deg(static_cast<std::size_t>(k), 0);
  for (const Edge& e : edges) {
    ++deg[static_cast<std::size_t>(e.a)];
    ++deg[static_cast<std::size_t>(e.b)];
  }
  int branches = 0, branch = -1;
  for (int v = 0; v < k; ++v)
    if (deg[static_cast<std::size_t>(v)] >= 3) {
      ++branches;
      branch = v;
    }

  auto label_of = [&](int a, int b) {
    for (const Edge& e : edges)
      if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e.label;
    return 0u;
  };
  auto neighbours = [&](int v) {
    std::vector<int> out;
    for (const Edge& e : edges) {
      if (e.a == v) out.push_back(e.b);
      if (e.b == v) out.push_back(e.a);
    }
    return out;
  };

  if (branches == 0) {
    // path: walk from one endpoint, read the label sequence
    int start = 0;
    while (deg[static_cast<std::size_t>(start)] != 1) ++start;
    std::vector<std::uint32_t> labels;
    int prev = -1, cur = start;
    while (static_cast<int>(labels.size()) < k - 1) {
      for (int w : neighbours(cur))
        if (w != prev) {
          labels.push_back(label_of(cur, w));
          prev = cur;
          cur = w;
          break;
        }
    }
    int special = -1, count = 0;
    for (int i = 0; i < k - 1; ++i)
      if (labels[static_cast<std::size_t>(i)] > 3) {
        special = i;
        ++count;
      }
    if (count == 0) return true;  // A_k
    if (count > 1) return false;
    bool at_end = special == 0 || special == k - 2;
    if (labels[static_cast<std::size_t>(special)] == 4)
      return at_end || (k == 4 && special == 1);  // B_k, F_4
    return at_end && (k == 3 || k == 4);          // H_3, H_4
  }

  if (branches != 1 || deg[static_cast<std::size_t>(branch)] != 3) return false;
  for (const Edge& e : edges)
    if (e.label != 3) return false;
  // arm lengths from the unique branch vertex, sorted: D_k is (1,1,*),
  // E_6/E_7/E_8 are (1,2,2..4)
  std::vector<int> arms;
  for (int w0 : neighbours(branch)) {
    int len = 1, prev = branch, cur = w0;
    while (deg[static_cast<std::size_t>(cur)] == 2) {
      for (int w : neighbours(cur))
        if (w != prev) {
          prev = cur;
          cur = w;
          ++len;
          break;
        }
    }
    arms.push_back(len);
  }
  std::sort(arms.begin(), arms.end());
  if (arms[0] != 1) return false;
  if (arms[1] == 1) return true;              // D_k
  return arms[1] == 2 && arms[2] <= 4;        // E_6, E_7, E_8
}

bool CoxeterSystem::is_spherical(std::uint32_t subset) const {
  for (std::uint32_t comp : components(subset))
    if (!component_is_finite(comp)) return false;
  return true;
}

std::uint32_t CoxeterSystem::essential_part(std::uint32_t subset) const {
  std::uint32_t out = 0;
  for (std::uint32_t comp : components(subset))
    if (!component_is_finite(comp)) out |= comp;
  return out;
}

bool CoxeterSystem::is_essential(std::uint32_t subset) const {
  return essential_part(subset) == subset;
}

FinitePoset CoxeterSystem::lambda_f() const {
  if (size() > max_rank_size)
    fail(errc::size_limit, "subset enumeration is limited to " +
                               std::to_string(max_rank_size) + " generators");
  std::vector<std::uint32_t> essential;
  const std::uint32_t full = full_set();
  for (std::uint32_t s = 0;; ++s) {
    if (is_essential(s)) {
      if (essential.size() >= materialize_cap)
        fail(errc::size_limit, "more than " + std::to_string(materialize_cap) +
                                   " essential subsets; the poset is too "
                                   "large to materialize");
      essential.push_back(s);
    }
    if (s == full) break;
  }
  std::vector<std::string> labels;
  labels.reserve(essential.size());
  for (std::uint32_t s : essential) labels.push_back(subset_label(s));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < essential.size(); ++i)
    for (std::size_t j = 0; j < essential.size(); ++j)
      if (i != j && (essential[i] & essential[j]) == essential[i])
        pairs.emplace_back(i, j);
  return FinitePoset(std::move(labels), std::move(pairs));
}

Ordinal CoxeterSystem::lambda_f_rank() const {
  if (size() > max_rank_size)
    fail(errc::size_limit, "subset enumeration is limited to " +
                               std::to_string(max_rank_size) + " generators");
  const std::uint32_t full = full_set();
  // chain[s] = longest chain of essential subsets contained in s; any chain
  // strictly below s fits inside s minus one generator.
  std::vector<std::uint8_t> chain(static_cast<std::size_t>(full) + 1, 0);
  for (std::uint32_t s = 0;; ++s) {
    std::uint8_t best = 0;
    for (std::uint32_t rest = s; rest;) {
      std::uint32_t bit = rest & (0u - rest);
      rest ^= bit;
      best = std::max(best, chain[s ^ bit]);
    }
    chain[s] = static_cast<std::uint8_t>(best + (is_essential(s) ? 1 : 0));
    if (s == full) break;
  }
  return Ordinal::nat(chain[full]);
}

ParabolicOrder CoxeterSystem::parabolic_compare(std::uint32_t j,
                                                std::uint32_t j2) const {
  std::uint32_t a = essential_part(j), b = essential_part(j2);
  if (a == b) return ParabolicOrder::equal;
  if ((a & b) == a) return ParabolicOrder::strictly_below;
  if ((a & b) == b) return ParabolicOrder::strictly_above;
  return ParabolicOrder::incomparable;
}

bool CoxeterSystem::gram_is_positive_definite(std::uint32_t subset) const {
  check_subset(subset);
  std::vector<int> verts;
  for (int v = 0; v < size(); ++v)
    if ((subset >> v) & 1u) verts.push_back(v);
  const std::size_t k = verts.size();
  std::vector<std::vector<double>> b(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      std::uint32_t bond =
          m_[static_cast<std::size_t>(verts[i])][static_cast<std::size_t>(verts[j])];
      b[i][j] = bond == 0 ? -1.0 : -std::cos(std::numbers::pi / bond);
    }
  // leading principal minors via elimination: all pivots must stay positive
  constexpr double tol = 1e-9;
  for (std::size_t p = 0; p < k; ++p) {
    if (b[p][p] <= tol) return false;
    for (std::size_t i = p + 1; i < k; ++i) {
      double f = b[i][p] / b[p][p];
      for (std::size_t j = p; j < k; ++j) b[i][j] -= f * b[p][j];
    }
  }
  return true;
}

std::string CoxeterSystem::subset_label(std::uint32_t subset) {
  std::string out = "{";
  bool first = true;
  for (int v = 0; v < 32; ++v)
    if ((subset >> v) & 1u) {
      if (!first) out += ' ';
      out += std::to_string(v + 1);
      first = false;
    }
  out += '}';
  return out;
}

}  // namespace tdlc
