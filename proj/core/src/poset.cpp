#include "tdlc/poset.hpp"

#include <algorithm>
#include <queue>

#include "json.hpp"

namespace tdlc {

FinitePoset::FinitePoset(std::vector<std::string> elements,
                         const std::vector<std::pair<std::string, std::string>>& covers)
    : labels_(std::move(elements)) {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (!index_.emplace(labels_[i], i).second)
      fail(errc::invalid_argument, "duplicate poset element '" + labels_[i] + "'");
  covers_.reserve(covers.size());
  for (const auto& [lo, hi] : covers) covers_.emplace_back(index_of(lo), index_of(hi));
  build();
}

FinitePoset::FinitePoset(std::vector<std::string> elements,
                         std::vector<std::pair<std::size_t, std::size_t>> covers)
    : labels_(std::move(elements)), covers_(std::move(covers)) {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (!index_.emplace(labels_[i], i).second)
      fail(errc::invalid_argument, "duplicate poset element '" + labels_[i] + "'");
  for (const auto& [lo, hi] : covers_)
    if (lo >= size() || hi >= size())
      fail(errc::invalid_argument, "cover pair references an element out of range");
  build();
}

void FinitePoset::build() {
  const std::size_t n = size();
  for (const auto& [lo, hi] : covers_)
    if (lo == hi)
      fail(errc::invalid_argument,
           "cover pair (" + labels_[lo] + ", " + labels_[hi] + ") is reflexive");

  std::vector<std::vector<std::size_t>> succ(n), pred(n);
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& [lo, hi] : covers_) {
    succ[lo].push_back(hi);
    pred[hi].push_back(lo);
    ++indegree[hi];
  }

  // Kahn topological order; failure to exhaust the vertices means a cycle.
  std::vector<std::size_t> order;
  order.reserve(n);
  std::queue<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(v);
  while (!ready.empty()) {
    std::size_t v = ready.front();
    ready.pop();
    order.push_back(v);
    for (std::size_t w : succ[v])
      if (--indegree[w] == 0) ready.push(w);
  }
  if (order.size() != n)
    fail(errc::invalid_argument, "cover pairs contain a cycle; not a strict order");

  words_ = (n + 63) / 64;
  closure_.assign(n * words_, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::size_t v = *it;
    for (std::size_t w : succ[v]) {
      closure_[v * words_ + w / 64] |= std::uint64_t{1} << (w % 64);
      for (std::size_t k = 0; k < words_; ++k)
        closure_[v * words_ + k] |= closure_[w * words_ + k];
    }
  }

  ranks_.assign(n, 0);
  for (std::size_t v : order) {
    std::size_t r = 0;
    for (std::size_t u : pred[v]) r = std::max(r, ranks_[u] + 1);
    ranks_[v] = r;
  }
}

std::size_t FinitePoset::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end())
    fail(errc::invalid_argument, "unknown poset element '" + label + "'");
  return it->second;
}

bool FinitePoset::less(std::size_t a, std::size_t b) const {
  if (a >= size() || b >= size())
    fail(errc::invalid_argument, "poset index out of range");
  return closure_bit(a, b);
}

bool FinitePoset::less(const std::string& a, const std::string& b) const {
  return closure_bit(index_of(a), index_of(b));
}

std::map<std::string, Ordinal> FinitePoset::rank_function() const {
  std::map<std::string, Ordinal> out;
  for (std::size_t i = 0; i < size(); ++i) out[labels_[i]] = Ordinal::nat(ranks_[i]);
  return out;
}

Ordinal FinitePoset::poset_rank() const {
  std::size_t top = 0;
  for (std::size_t r : ranks_) top = std::max(top, r + 1);
  return Ordinal::nat(size() == 0 ? 1 : top);
}

bool FinitePoset::check_rank_axioms(const FinitePoset& poset,
                                    const std::map<std::string, Ordinal>& candidate) {
  std::vector<const Ordinal*> value(poset.size());
  for (std::size_t i = 0; i < poset.size(); ++i) {
    auto it = candidate.find(poset.labels_[i]);
    if (it == candidate.end())
      fail(errc::invalid_argument,
           "candidate rank function misses element '" + poset.labels_[i] + "'");
    value[i] = &it->second;
  }
  for (std::size_t p = 0; p < poset.size(); ++p) {
    bool minimal = true;
    Ordinal sup_below;
    for (std::size_t q = 0; q < poset.size(); ++q) {
      if (!poset.closure_bit(q, p)) continue;
      minimal = false;
      if (*value[q] > sup_below) sup_below = *value[q];
    }
    // least ordinal strictly above the smaller-element values: 0 when
    // minimal, attained-sup + 1 otherwise.
    Ordinal expect = minimal ? Ordinal() : sup_below + Ordinal::nat(1);
    if (!(*value[p] == expect)) return false;
  }
  return true;
}

std::string FinitePoset::to_json() const {
  nlohmann::ordered_json j;
  j["elements"] = labels_;
  auto& covers = j["covers"] = nlohmann::ordered_json::array();
  for (const auto& [lo, hi] : covers_)
    covers.push_back(nlohmann::ordered_json::array({labels_[lo], labels_[hi]}));
  return j.dump(2);
}

FinitePoset FinitePoset::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("elements") ||
      !j.contains("covers") || !j["elements"].is_array() || !j["covers"].is_array())
    fail(errc::parse_error, "poset JSON must be {\"elements\":[...],\"covers\":[[a,b],...]}");
  std::vector<std::string> elements;
  for (const auto& e : j["elements"]) {
    if (!e.is_string()) fail(errc::parse_error, "poset element labels must be strings");
    elements.push_back(e.get<std::string>());
  }
  std::vector<std::pair<std::string, std::string>> covers;
  for (const auto& c : j["covers"]) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_string() || !c[1].is_string())
      fail(errc::parse_error, "poset covers must be [lower, upper] label pairs");
    covers.emplace_back(c[0].get<std::string>(), c[1].get<std::string>());
  }
  return FinitePoset(std::move(elements), covers);
}

}  // namespace tdlc
