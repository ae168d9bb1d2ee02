#include "vidrec/community.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "vidrec/error.hpp"

namespace vidrec {

std::size_t Clustering::cluster_count() const {
  if (assignment.empty()) return 0;
  return *std::max_element(assignment.begin(), assignment.end()) + 1;
}

double modularity_score(const FilmGraph& g, std::span<const std::size_t> assignment) {
  const auto n = g.node_count();
  if (assignment.size() != n) {
    throw Error(ErrorKind::Domain, "assignment covers " + std::to_string(assignment.size()) +
                                       " of " + std::to_string(n) + " nodes");
  }
  double total = 0.0;
  for (const auto& e : g.edges()) total += e.weight;
  if (total == 0.0) return 0.0;

  const std::size_t clusters =
      n == 0 ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  std::vector<double> intra(clusters, 0.0);
  std::vector<double> degree(clusters, 0.0);
  for (const auto& e : g.edges()) {
    const auto ca = assignment[e.a];
    const auto cb = assignment[e.b];
    if (ca == cb) intra[ca] += e.weight;
    degree[ca] += e.weight;
    degree[cb] += e.weight;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < clusters; ++c) {
    const double a = degree[c] / (2.0 * total);
    q += intra[c] / total - a * a;
  }
  return q;
}

namespace {

constexpr double kMinGain = 1e-14;
constexpr std::size_t kMaxSweeps = 10000;

// Graph at one aggregation level. Self-loops are kept apart from adjacency.
struct LevelGraph {
  std::vector<std::vector<Neighbor>> adjacency;
  std::vector<double> self_loop;
  std::vector<double> degree;  // 2 * self_loop + incident weights

  std::size_t size() const { return adjacency.size(); }
};

LevelGraph from_film_graph(const FilmGraph& g) {
  LevelGraph level;
  const auto n = g.node_count();
  level.adjacency.resize(n);
  level.self_loop.assign(n, 0.0);
  level.degree.assign(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& nb : g.neighbors(v)) {
      level.adjacency[v].push_back(nb);
      level.degree[v] += nb.weight;
    }
  }
  return level;
}

// Relabels `community` densely in order of each community's first node.
std::size_t renumber(std::vector<std::size_t>& community) {
  std::vector<std::size_t> label(community.size(), SIZE_MAX);
  std::size_t next = 0;
  for (auto& c : community) {
    if (label[c] == SIZE_MAX) label[c] = next++;
    c = label[c];
  }
  return next;
}

LevelGraph aggregate(const LevelGraph& level, const std::vector<std::size_t>& community,
                     std::size_t clusters) {
  LevelGraph out;
  out.self_loop.assign(clusters, 0.0);
  out.degree.assign(clusters, 0.0);
  std::vector<std::vector<double>> weight(clusters);
  std::vector<std::vector<std::size_t>> touched(clusters);
  for (std::size_t v = 0; v < level.size(); ++v) {
    const auto cv = community[v];
    out.self_loop[cv] += level.self_loop[v];
    out.degree[cv] += level.degree[v];
    for (const auto& nb : level.adjacency[v]) {
      if (nb.node < v) continue;
      const auto cu = community[nb.node];
      if (cu == cv) {
        out.self_loop[cv] += nb.weight;
        continue;
      }
      const auto lo = std::min(cu, cv);
      const auto hi = std::max(cu, cv);
      if (weight[lo].empty()) weight[lo].assign(clusters, 0.0);
      if (weight[lo][hi] == 0.0) touched[lo].push_back(hi);
      weight[lo][hi] += nb.weight;
    }
  }
  out.adjacency.resize(clusters);
  for (std::size_t lo = 0; lo < clusters; ++lo) {
    std::sort(touched[lo].begin(), touched[lo].end());
    for (const auto hi : touched[lo]) {
      out.adjacency[lo].push_back({hi, weight[lo][hi]});
      out.adjacency[hi].push_back({lo, weight[lo][hi]});
    }
  }
  for (auto& list : out.adjacency) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
  return out;
}

std::vector<std::size_t> flatten(const std::vector<std::size_t>& level_of_original,
                                 const std::vector<std::size_t>& community) {
  std::vector<std::size_t> out(level_of_original.size());
  for (std::size_t o = 0; o < out.size(); ++o) out[o] = community[level_of_original[o]];
  return out;
}

}  // namespace

Clustering louvain(const FilmGraph& g, const LouvainOptions& options) {
  const auto n = g.node_count();
  if (n == 0) throw Error(ErrorKind::Domain, "louvain on an empty graph");

  double total = 0.0;
  for (const auto& e : g.edges()) total += e.weight;

  std::vector<std::size_t> level_of_original(n);
  std::iota(level_of_original.begin(), level_of_original.end(), 0);

  if (total > 0.0) {
    const LouvainObserver* obs = options.observer;
    const bool trace_moves = obs && obs->on_move;
    std::mt19937_64 rng(options.seed);
    LevelGraph level = from_film_graph(g);
    const double m = total;

    for (std::size_t depth = 0;; ++depth) {
      const auto size = level.size();
      std::vector<std::size_t> community(size);
      std::iota(community.begin(), community.end(), 0);
      std::vector<double> tot = level.degree;

      std::vector<std::size_t> order(size);
      std::iota(order.begin(), order.end(), 0);
      std::vector<double> link(size, 0.0);
      std::vector<std::size_t> neighbours;

      bool any_move = false;
      for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (options.randomize_order) std::shuffle(order.begin(), order.end(), rng);
        bool moved = false;
        for (const auto v : order) {
          const auto own = community[v];
          const double k = level.degree[v];

          neighbours.clear();
          for (const auto& nb : level.adjacency[v]) {
            const auto c = community[nb.node];
            if (link[c] == 0.0) neighbours.push_back(c);
            link[c] += nb.weight;
          }
          std::sort(neighbours.begin(), neighbours.end());

          tot[own] -= k;
          auto gain = [&](std::size_t c) { return link[c] / m - tot[c] * k / (2.0 * m * m); };
          const double stay = gain(own);
          std::size_t best = own;
          double best_gain = stay;
          for (const auto c : neighbours) {
            if (c == own) continue;
            const double gc = gain(c);
            if (gc > best_gain + kMinGain) {
              best = c;
              best_gain = gc;
            }
          }
          tot[best] += k;
          for (const auto c : neighbours) link[c] = 0.0;

          if (best != own) {
            std::vector<std::size_t> before;
            if (trace_moves) before = flatten(level_of_original, community);
            community[v] = best;
            moved = true;
            if (trace_moves) {
              obs->on_move(LouvainMove{depth, v, own, best, best_gain - stay, std::move(before),
                                       flatten(level_of_original, community)});
            }
          }
        }
        if (!moved) break;
        any_move = true;
      }
      if (!any_move) break;

      const auto clusters = renumber(community);
      for (auto& l : level_of_original) l = community[l];
      level = aggregate(level, community, clusters);
      if (obs && obs->on_level) obs->on_level(depth, level_of_original);
      if (clusters == 1) break;
    }
  }

  Clustering result;
  result.assignment = level_of_original;
  renumber(result.assignment);
  result.modularity = modularity_score(g, result.assignment);
  return result;
}

}  // namespace vidrec
