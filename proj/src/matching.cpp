#include "coarse/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace coarse {

namespace {
constexpr Index kInf = std::numeric_limits<Index>::max();
}

BipartiteMatcher::BipartiteMatcher(Index num_left, Index num_right)
    : num_left_(num_left),
      num_right_(num_right),
      adj_(num_left),
      match_left_(num_left, -1),
      match_right_(num_right, -1) {
  if (num_left < 0 || num_right < 0)
    throw std::invalid_argument("BipartiteMatcher: negative vertex count");
}

void BipartiteMatcher::add_edge(Index left, Index right) {
  if (left < 0 || left >= num_left_ || right < 0 || right >= num_right_)
    throw std::out_of_range("BipartiteMatcher::add_edge: vertex out of range");
  adj_[left].push_back(right);
  solved_ = false;
}

bool BipartiteMatcher::bfs() {
  std::queue<Index> q;
  dist_.assign(num_left_, kInf);
  for (Index u = 0; u < num_left_; ++u)
    if (match_left_[u] < 0) {
      dist_[u] = 0;
      q.push(u);
    }
  bool found_free = false;
  while (!q.empty()) {
    const Index u = q.front();
    q.pop();
    for (Index v : adj_[u]) {
      const Index w = match_right_[v];
      if (w < 0) {
        found_free = true;
      } else if (dist_[w] == kInf) {
        dist_[w] = dist_[u] + 1;
        q.push(w);
      }
    }
  }
  return found_free;
}

bool BipartiteMatcher::dfs(Index u) {
  for (Index v : adj_[u]) {
    const Index w = match_right_[v];
    if (w < 0 || (dist_[w] == dist_[u] + 1 && dfs(w))) {
      match_left_[u] = v;
      match_right_[v] = u;
      return true;
    }
  }
  dist_[u] = kInf;
  return false;
}

Index BipartiteMatcher::solve() {
  if (!solved_) {
    std::fill(match_left_.begin(), match_left_.end(), -1);
    std::fill(match_right_.begin(), match_right_.end(), -1);
    while (bfs())
      for (Index u = 0; u < num_left_; ++u)
        if (match_left_[u] < 0) dfs(u);
    solved_ = true;
  }
  Index size = 0;
  for (Index u = 0; u < num_left_; ++u)
    if (match_left_[u] >= 0) ++size;
  return size;
}

std::vector<Index> BipartiteMatcher::alternating_reachable_left() const {
  // Unmatched edges left -> right, matched edges right -> left.
  std::vector<char> seen_left(num_left_, 0), seen_right(num_right_, 0);
  std::queue<Index> q;
  for (Index u = 0; u < num_left_; ++u)
    if (match_left_[u] < 0) {
      seen_left[u] = 1;
      q.push(u);
    }
  while (!q.empty()) {
    const Index u = q.front();
    q.pop();
    for (Index v : adj_[u]) {
      if (v == match_left_[u] || seen_right[v]) continue;
      seen_right[v] = 1;
      const Index w = match_right_[v];
      if (w >= 0 && !seen_left[w]) {
        seen_left[w] = 1;
        q.push(w);
      }
    }
  }
  std::vector<Index> out;
  for (Index u = 0; u < num_left_; ++u)
    if (seen_left[u]) out.push_back(u);
  return out;
}

SelectorResult hall_selector(const std::vector<std::vector<Index>>& family) {
  Index universe = 0;
  for (const auto& set : family)
    for (Index e : set) {
      if (e < 0) throw std::out_of_range("hall_selector: negative element");
      universe = std::max(universe, e + 1);
    }
  BipartiteMatcher matcher(static_cast<Index>(family.size()), universe);
  for (std::size_t i = 0; i < family.size(); ++i)
    for (Index e : family[i]) matcher.add_edge(static_cast<Index>(i), e);
  const Index matched = matcher.solve();

  SelectorResult result;
  if (matched == static_cast<Index>(family.size())) {
    result.selector = matcher.left_match();
  } else {
    result.deficiency_witness = matcher.alternating_reachable_left();
  }
  return result;
}

}  // namespace coarse
