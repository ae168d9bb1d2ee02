#include "vidrec/graph.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "vidrec/error.hpp"

namespace vidrec {

FilmGraph::FilmGraph(std::vector<FilmId> films, std::vector<Edge> edges)
    : films_(std::move(films)), edges_(std::move(edges)), adjacency_(films_.size()) {
  for (auto& e : edges_) {
    if (e.a > e.b) std::swap(e.a, e.b);
    if (e.b >= films_.size()) throw Error(ErrorKind::Data, "edge endpoint out of range");
    if (e.a == e.b) throw Error(ErrorKind::Data, "self-loop on film " + films_[e.a]);
    if (!(e.weight > 0.0 && e.weight <= 1.0)) {
      throw Error(ErrorKind::Data, "edge weight outside (0,1]");
    }
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].a == edges_[k - 1].a && edges_[k].b == edges_[k - 1].b) {
      throw Error(ErrorKind::Data, "duplicate edge " + films_[edges_[k].a] + "-" +
                                       films_[edges_[k].b]);
    }
  }
  for (const auto& e : edges_) {
    adjacency_[e.a].push_back({e.b, e.weight});
    adjacency_[e.b].push_back({e.a, e.weight});
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
  }
}

std::size_t FilmGraph::index_of(std::string_view film) const {
  const auto it = std::lower_bound(films_.begin(), films_.end(), film, IdLess{});
  if (it == films_.end() || *it != film) {
    throw Error(ErrorKind::Lookup, "unknown film '" + std::string(film) + "'");
  }
  return static_cast<std::size_t>(it - films_.begin());
}

bool FilmGraph::contains(std::string_view film) const {
  return std::binary_search(films_.begin(), films_.end(), film, IdLess{});
}

FilmGraph build_graph(const SimilarityMatrix& sim, double edge_threshold) {
  if (!(edge_threshold >= 0.0 && edge_threshold <= 1.0)) {
    throw Error(ErrorKind::Domain, "edge threshold outside [0,1]");
  }
  std::vector<Edge> edges;
  const auto n = sim.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = sim.at(i, j);
      if (w > 0.0 && w >= edge_threshold) edges.push_back({i, j, w});
    }
  }
  return FilmGraph(sim.films(), std::move(edges));
}

std::vector<int> hop_distances(const FilmGraph& g, std::size_t source) {
  std::vector<int> dist(g.node_count(), -1);
  std::queue<std::size_t> frontier;
  dist.at(source) = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const auto v = frontier.front();
    frontier.pop();
    for (const auto& nb : g.neighbors(v)) {
      if (dist[nb.node] < 0) {
        dist[nb.node] = dist[v] + 1;
        frontier.push(nb.node);
      }
    }
  }
  return dist;
}

namespace {

void check_node(const FilmGraph& g, std::size_t node) {
  if (node >= g.node_count()) throw Error(ErrorKind::Lookup, "node index out of range");
}

}  // namespace

double degree_centrality(const FilmGraph& g, std::size_t node) {
  check_node(g, node);
  const auto n = g.node_count();
  if (n <= 1) return 0.0;
  double strength = 0.0;
  for (const auto& nb : g.neighbors(node)) strength += nb.weight;
  return strength / static_cast<double>(n - 1);
}

double closeness_centrality(const FilmGraph& g, std::size_t node) {
  check_node(g, node);
  const auto n = g.node_count();
  const auto dist = hop_distances(g, node);
  std::size_t reachable = 0;
  double total = 0.0;
  for (const int d : dist) {
    if (d >= 0) {
      ++reachable;
      total += d;
    }
  }
  if (reachable <= 1) return 0.0;
  const double r1 = static_cast<double>(reachable - 1);
  return (r1 / total) * (r1 / static_cast<double>(n - 1));
}

std::vector<double> betweenness_centrality(const FilmGraph& g) {
  const auto n = g.node_count();
  std::vector<double> score(n, 0.0);
  if (n == 0) return score;

  std::vector<std::size_t> order;
  std::vector<double> sigma(n);
  std::vector<double> delta(n);
  std::vector<int> dist(n);
  std::queue<std::size_t> frontier;
  for (std::size_t s = 0; s < n; ++s) {
    order.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    sigma[s] = 1.0;
    dist[s] = 0;
    frontier.push(s);
    while (!frontier.empty()) {
      const auto v = frontier.front();
      frontier.pop();
      order.push_back(v);
      for (const auto& nb : g.neighbors(v)) {
        const auto w = nb.node;
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          frontier.push(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    // Dependencies in order of non-increasing distance from s.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto w = *it;
      for (const auto& nb : g.neighbors(w)) {
        const auto v = nb.node;
        if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) score[w] += delta[w];
    }
  }
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  for (auto& v : score) v *= scale;
  return score;
}

double average_centrality(double degree, double closeness, double betweenness) {
  for (const double v : {degree, closeness, betweenness}) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::Domain, "centrality outside [0,1]");
  }
  return (degree + closeness + betweenness) / 3.0;
}

CentralityTable::CentralityTable(std::vector<FilmId> films, std::vector<CentralityRow> rows)
    : films_(std::move(films)), rows_(std::move(rows)) {
  if (films_.size() != rows_.size()) throw Error(ErrorKind::Data, "centrality table size mismatch");
}

CentralityTable compute_centralities(const FilmGraph& g) {
  const auto betweenness = betweenness_centrality(g);
  std::vector<CentralityRow> rows(g.node_count());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& r = rows[i];
    // Floating-point sums of weights <= 1 can overshoot by an ulp.
    r.degree = std::min(1.0, degree_centrality(g, i));
    r.closeness = closeness_centrality(g, i);
    r.betweenness = betweenness[i];
    r.average = average_centrality(r.degree, r.closeness, r.betweenness);
  }
  return CentralityTable(g.films(), std::move(rows));
}

}  // namespace vidrec
