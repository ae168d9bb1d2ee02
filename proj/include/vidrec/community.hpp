#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vidrec/graph.hpp"

namespace vidrec {

struct Clustering {
  std::vector<std::size_t> assignment;  // per graph node, dense ids from 0
  double modularity = 0.0;

  std::size_t cluster_count() const;
  bool operator==(const Clustering&) const = default;
};

/// Weighted Newman modularity Q = sum_r (e_rr - a_r^2). 0 for edgeless
/// graphs. Throws Domain if the assignment does not cover every node.
double modularity_score(const FilmGraph& g, std::span<const std::size_t> assignment);

struct LouvainMove {
  std::size_t level = 0;
  std::size_t node = 0;  // node index at `level`
  std::size_t from = 0;
  std::size_t to = 0;
  double gain = 0.0;                      // predicted change in Q
  std::vector<std::size_t> before;        // original-node assignment before the move
  std::vector<std::size_t> after;
};

/// Optional instrumentation. Populating a callback makes louvain record the
/// flattened assignments it passes in, which costs O(n) per move.
struct LouvainObserver {
  std::function<void(const LouvainMove&)> on_move;
  /// Called after each aggregation with the flattened assignment.
  std::function<void(std::size_t level, const std::vector<std::size_t>&)> on_level;
};

struct LouvainOptions {
  bool randomize_order = false;
  std::uint64_t seed = 0;
  const LouvainObserver* observer = nullptr;
};

/// Two-phase local-move / aggregate modularity maximisation. Nodes are swept
/// in ascending index order; a node moves only for a strictly larger gain,
/// gain ties between candidate clusters go to the lowest cluster id. Final
/// cluster ids are ordered by each cluster's smallest member.
Clustering louvain(const FilmGraph& g, const LouvainOptions& options = {});

}  // namespace vidrec
