#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace g2lab {

/// Dinic's algorithm on integer capacities.
class FlowNetwork {
 public:
  using Capacity = std::int64_t;

  explicit FlowNetwork(std::size_t nodes);

  void add_edge(std::size_t from, std::size_t to, Capacity capacity, Capacity reverse_capacity = 0);
  Capacity max_flow(std::size_t source, std::size_t sink);
  /// Nodes reachable from the source in the final residual graph.
  std::vector<bool> source_side(std::size_t source) const;

 private:
  struct Arc {
    std::size_t to;
    Capacity residual;
  };

  bool build_levels(std::size_t source, std::size_t sink);
  Capacity push(std::size_t node, std::size_t sink, Capacity limit);

  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
};

}  // namespace g2lab
