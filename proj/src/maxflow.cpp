#include "g2lab/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace g2lab {

FlowNetwork::FlowNetwork(std::size_t nodes) : adjacency_(nodes), level_(nodes), cursor_(nodes) {}

void FlowNetwork::add_edge(std::size_t from, std::size_t to, Capacity capacity, Capacity reverse_capacity) {
  adjacency_[from].push_back(arcs_.size());
  arcs_.push_back({to, capacity});
  adjacency_[to].push_back(arcs_.size());
  arcs_.push_back({from, reverse_capacity});
}

bool FlowNetwork::build_levels(std::size_t source, std::size_t sink) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<std::size_t> frontier;
  level_[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const std::size_t node = frontier.front();
    frontier.pop();
    for (std::size_t id : adjacency_[node]) {
      const Arc& arc = arcs_[id];
      if (arc.residual > 0 && level_[arc.to] < 0) {
        level_[arc.to] = level_[node] + 1;
        frontier.push(arc.to);
      }
    }
  }
  return level_[sink] >= 0;
}

FlowNetwork::Capacity FlowNetwork::push(std::size_t node, std::size_t sink, Capacity limit) {
  if (node == sink) return limit;
  for (std::size_t& i = cursor_[node]; i < adjacency_[node].size(); ++i) {
    const std::size_t id = adjacency_[node][i];
    Arc& arc = arcs_[id];
    if (arc.residual <= 0 || level_[arc.to] != level_[node] + 1) continue;
    const Capacity pushed = push(arc.to, sink, std::min(limit, arc.residual));
    if (pushed > 0) {
      arc.residual -= pushed;
      arcs_[id ^ 1U].residual += pushed;
      return pushed;
    }
  }
  return 0;
}

FlowNetwork::Capacity FlowNetwork::max_flow(std::size_t source, std::size_t sink) {
  Capacity total = 0;
  while (build_levels(source, sink)) {
    std::fill(cursor_.begin(), cursor_.end(), 0);
    while (const Capacity pushed = push(source, sink, std::numeric_limits<Capacity>::max())) {
      total += pushed;
    }
  }
  return total;
}

std::vector<bool> FlowNetwork::source_side(std::size_t source) const {
  std::vector<bool> seen(adjacency_.size(), false);
  std::vector<std::size_t> stack{source};
  seen[source] = true;
  while (!stack.empty()) {
    const std::size_t node = stack.back();
    stack.pop_back();
    for (std::size_t id : adjacency_[node]) {
      const Arc& arc = arcs_[id];
      if (arc.residual > 0 && !seen[arc.to]) {
        seen[arc.to] = true;
        stack.push_back(arc.to);
      }
    }
  }
  return seen;
}

}  // namespace g2lab
