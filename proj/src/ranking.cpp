#include "vidrec/ranking.hpp"

#include <algorithm>
#include <set>

#include "vidrec/error.hpp"

namespace vidrec {

double ego_value(double average_centrality, int hops) noexcept {
  if (hops < 0) return 0.0;
  return average_centrality / static_cast<double>(std::max(hops, 1));
}

EgoScore ego_centrality(const FilmGraph& g, const CentralityTable& ac, std::string_view candidate,
                        std::string_view ego) {
  const auto c = g.index_of(candidate);
  const auto e = g.index_of(ego);
  const int hops = hop_distances(g, e)[c];
  EgoScore out{std::string(candidate), std::string(ego), std::nullopt, 0.0};
  if (hops >= 0) out.distance = std::max(hops, 1);
  out.value = ego_value(ac[c].average, hops);
  return out;
}

double recommendation_score(std::span<const double> preferred,
                            std::span<const double> non_preferred) noexcept {
  double plus = 0.0;
  for (const double v : preferred) plus += v;
  double minus = 0.0;
  for (const double v : non_preferred) minus += v;
  return plus - minus;
}

std::optional<std::vector<std::size_t>> candidate_set(const FilmGraph& g,
                                                      const Clustering& clustering,
                                                      const PreferenceProfile& profile,
                                                      const RankingOptions& options) {
  std::set<std::size_t> clusters;
  std::set<std::size_t> excluded;
  for (const auto& film : profile.preferred) {
    if (!g.contains(film)) continue;
    const auto node = g.index_of(film);
    clusters.insert(clustering.assignment.at(node));
    excluded.insert(node);
  }
  if (clusters.empty()) return std::nullopt;
  if (options.exclude_non_preferred) {
    for (const auto& film : profile.non_preferred) {
      if (g.contains(film)) excluded.insert(g.index_of(film));
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    if (clusters.count(clustering.assignment[v]) && !excluded.count(v)) out.push_back(v);
  }
  return out;
}

EgoScorer::EgoScorer(const FilmGraph& g, const CentralityTable& ac, const PreferenceProfile& profile)
    : graph_(g), ac_(ac) {
  for (const auto& film : profile.preferred) {
    if (g.contains(film)) preferred_hops_.push_back(hop_distances(g, g.index_of(film)));
  }
  for (const auto& film : profile.non_preferred) {
    if (g.contains(film)) non_preferred_hops_.push_back(hop_distances(g, g.index_of(film)));
  }
}

double EgoScorer::score(std::size_t node) const {
  const double ac = ac_[node].average;
  std::vector<double> plus;
  std::vector<double> minus;
  for (const auto& hops : preferred_hops_) plus.push_back(ego_value(ac, hops[node]));
  for (const auto& hops : non_preferred_hops_) minus.push_back(ego_value(ac, hops[node]));
  return recommendation_score(plus, minus);
}

double EgoScorer::score(std::string_view film) const {
  if (!graph_.contains(film)) return 0.0;
  return score(graph_.index_of(film));
}

void sort_recommendations(std::vector<Recommendation>& entries) {
  std::sort(entries.begin(), entries.end(), [](const Recommendation& a, const Recommendation& b) {
    if (a.score != b.score) return a.score > b.score;
    return id_less(a.film, b.film);
  });
}

std::optional<RecommendationList> rank_for_user(const FilmGraph& g, const CentralityTable& ac,
                                                const Clustering& clustering,
                                                const PreferenceProfile& profile,
                                                const RankingOptions& options) {
  const auto candidates = candidate_set(g, clustering, profile, options);
  if (!candidates) return std::nullopt;
  const EgoScorer scorer(g, ac, profile);
  RecommendationList list;
  list.user_id = profile.user_id;
  for (const auto v : *candidates) list.entries.push_back({g.films()[v], scorer.score(v)});
  sort_recommendations(list.entries);
  return list;
}

RecommendationList rank_cold_start(const CentralityTable& ac, std::size_t k) {
  if (k < 1) throw Error(ErrorKind::Domain, "k must be at least 1");
  RecommendationList list;
  list.cold_start = true;
  for (std::size_t i = 0; i < ac.size(); ++i) list.entries.push_back({ac.films()[i], ac[i].average});
  sort_recommendations(list.entries);
  if (list.entries.size() > k) list.entries.resize(k);
  return list;
}

}  // namespace vidrec
