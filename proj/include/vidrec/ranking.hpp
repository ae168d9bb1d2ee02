#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "vidrec/community.hpp"
#include "vidrec/graph.hpp"
#include "vidrec/profile.hpp"

namespace vidrec {

struct EgoScore {
  FilmId candidate;
  FilmId ego;
  std::optional<int> distance;  // hops; nullopt when unreachable
  double value = 0.0;
};

/// AC(candidate) / hops(candidate, ego), with a film at distance 1 from
/// itself and 0 for unreachable pairs. Throws Lookup for unknown films.
EgoScore ego_centrality(const FilmGraph& g, const CentralityTable& ac,
                        std::string_view candidate, std::string_view ego);

/// Same rule for a precomputed hop distance (-1 = unreachable, 0 = self).
double ego_value(double average_centrality, int hops) noexcept;

/// Sum of preference scores minus sum of non-preference scores.
double recommendation_score(std::span<const double> preferred,
                            std::span<const double> non_preferred) noexcept;

struct Recommendation {
  FilmId film;
  double score = 0.0;

  bool operator==(const Recommendation&) const = default;
};

struct RecommendationList {
  UserId user_id;
  bool cold_start = false;
  std::vector<Recommendation> entries;  // score descending, then film id

  bool operator==(const RecommendationList&) const = default;
};

struct RankingOptions {
  bool exclude_non_preferred = false;
};

/// Members of every cluster holding a preferred film, minus the preferred
/// films themselves, as ascending node indices. nullopt signals cold start
/// (no preferred film known to the graph).
std::optional<std::vector<std::size_t>> candidate_set(const FilmGraph& g,
                                                      const Clustering& clustering,
                                                      const PreferenceProfile& profile,
                                                      const RankingOptions& options = {});

/// Scores arbitrary films against a profile's ego lists. Egos absent from the
/// graph contribute nothing; so does a film absent from the graph.
class EgoScorer {
 public:
  EgoScorer(const FilmGraph& g, const CentralityTable& ac, const PreferenceProfile& profile);

  double score(std::size_t node) const;
  double score(std::string_view film) const;

 private:
  const FilmGraph& graph_;
  const CentralityTable& ac_;
  std::vector<std::vector<int>> preferred_hops_;
  std::vector<std::vector<int>> non_preferred_hops_;
};

/// Candidates ranked by RS. nullopt signals cold start.
std::optional<RecommendationList> rank_for_user(const FilmGraph& g, const CentralityTable& ac,
                                                const Clustering& clustering,
                                                const PreferenceProfile& profile,
                                                const RankingOptions& options = {});

/// Top-k films by average centrality. Throws Domain when k < 1.
RecommendationList rank_cold_start(const CentralityTable& ac, std::size_t k);

/// Sorts by score descending, ties by ascending film id.
void sort_recommendations(std::vector<Recommendation>& entries);

}  // namespace vidrec
