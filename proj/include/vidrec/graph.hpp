#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "vidrec/ids.hpp"
#include "vidrec/similarity.hpp"

namespace vidrec {

struct Edge {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  double weight = 0.0;

  bool operator==(const Edge&) const = default;
};

struct Neighbor {
  std::size_t node = 0;
  double weight = 0.0;
};

/// Undirected weighted film graph. Node i is films()[i]; adjacency lists are
/// sorted by neighbour index.
class FilmGraph {
 public:
  FilmGraph() = default;
  /// Throws Data on self-loops, duplicates, out-of-range endpoints or
  /// weights outside (0,1].
  FilmGraph(std::vector<FilmId> films, std::vector<Edge> edges);

  const std::vector<FilmId>& films() const noexcept { return films_; }
  std::size_t node_count() const noexcept { return films_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const Neighbor> neighbors(std::size_t node) const { return adjacency_[node]; }

  /// Throws Lookup for an unknown film.
  std::size_t index_of(std::string_view film) const;
  bool contains(std::string_view film) const;

  bool operator==(const FilmGraph& o) const { return films_ == o.films_ && edges_ == o.edges_; }

 private:
  std::vector<FilmId> films_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

/// Edge (i, j) with weight AS[i][j] iff i != j, AS > 0 and AS >= threshold.
FilmGraph build_graph(const SimilarityMatrix& sim, double edge_threshold = 0.0);

/// Hop distances from `source`; -1 marks unreachable nodes.
std::vector<int> hop_distances(const FilmGraph& g, std::size_t source);

/// Incident edge weight sum / (n - 1).
double degree_centrality(const FilmGraph& g, std::size_t node);
/// Hop-count closeness with reachable-set scaling for disconnected graphs.
double closeness_centrality(const FilmGraph& g, std::size_t node);
/// Shortest-path betweenness over ordered pairs, scaled by 1/n^2.
std::vector<double> betweenness_centrality(const FilmGraph& g);

/// Mean of the three centralities. Throws Domain if any is outside [0,1].
double average_centrality(double degree, double closeness, double betweenness);

struct CentralityRow {
  double degree = 0.0;
  double closeness = 0.0;
  double betweenness = 0.0;
  double average = 0.0;

  bool operator==(const CentralityRow&) const = default;
};

class CentralityTable {
 public:
  CentralityTable() = default;
  CentralityTable(std::vector<FilmId> films, std::vector<CentralityRow> rows);

  const std::vector<FilmId>& films() const noexcept { return films_; }
  const std::vector<CentralityRow>& rows() const noexcept { return rows_; }
  const CentralityRow& operator[](std::size_t i) const { return rows_[i]; }
  std::size_t size() const noexcept { return rows_.size(); }

  bool operator==(const CentralityTable&) const = default;

 private:
  std::vector<FilmId> films_;
  std::vector<CentralityRow> rows_;
};

CentralityTable compute_centralities(const FilmGraph& g);

}  // namespace vidrec
