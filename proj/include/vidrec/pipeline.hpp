#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "vidrec/community.hpp"
#include "vidrec/config.hpp"
#include "vidrec/graph.hpp"
#include "vidrec/ingest.hpp"
#include "vidrec/profile.hpp"
#include "vidrec/ranking.hpp"
#include "vidrec/similarity.hpp"

namespace vidrec {

inline constexpr int kArtifactFormatVersion = 1;

/// Everything the serving side needs, produced by one pipeline run.
struct PipelineArtifact {
  int format_version = kArtifactFormatVersion;
  PipelineConfig config;
  SimilarityMatrix similarity;
  FilmGraph graph;
  CentralityTable centralities;
  Clustering clustering;
  std::vector<PreferenceProfile> profiles;  // user order
  std::string built_at;                     // UTC ISO-8601

  const PreferenceProfile* find_profile(std::string_view user) const;

  bool operator==(const PipelineArtifact&) const = default;
};

/// Reads events, reporting bad rows as a Data error unless the config allows
/// skipping them.
ViewMatrix load_view_matrix(std::istream& events, const PipelineConfig& config);
ViewMatrix load_view_matrix(const std::filesystem::path& events, const PipelineConfig& config);

PipelineArtifact run_pipeline(const ViewMatrix& view, const PipelineConfig& config);
PipelineArtifact run_pipeline(const std::filesystem::path& events, const PipelineConfig& config);

/// Known user with preferred films: ranked candidates truncated to k.
/// Otherwise the top-k cold-start list. Throws Domain when k < 1.
RecommendationList recommend(const PipelineArtifact& artifact, std::string_view user,
                             std::size_t k);

/// Other films ranked by AS descending (ties by film id), AS > 0 only.
/// Throws Lookup for an unknown film.
std::vector<Recommendation> similar_films(const PipelineArtifact& artifact,
                                          std::string_view film, std::size_t k);

// Persistence. The text is JSON with sorted keys; doubles round-trip exactly.
std::string artifact_to_json(const PipelineArtifact& artifact, bool include_timestamp = true);
/// Throws Format on malformed input, Version for a newer format and Data
/// when the stored graph or AC column is inconsistent with the rest.
PipelineArtifact artifact_from_json(std::string_view text);
void save_artifact(const PipelineArtifact& artifact, const std::filesystem::path& path);
PipelineArtifact load_artifact(const std::filesystem::path& path);

// CSV dumps of each stage.
void write_view_csv(std::ostream& out, const ViewMatrix& view);
void write_similarity_csv(std::ostream& out, const SimilarityMatrix& sim);
void write_edges_csv(std::ostream& out, const FilmGraph& g);
void write_centrality_csv(std::ostream& out, const CentralityTable& table);
void write_clusters_csv(std::ostream& out, const FilmGraph& g, const Clustering& clustering);
void write_profiles_csv(std::ostream& out, const std::vector<PreferenceProfile>& profiles);
void write_recommendations_csv(std::ostream& out, const std::vector<RecommendationList>& lists,
                               bool header = true);

/// Stage names accepted by `write_stage`: ingest, similarity,
/// similarity-tensor, graph, centrality, cluster, profiles.
const std::vector<std::string>& stage_names();
/// Runs the pipeline up to `stage` and writes that stage's CSV.
void write_stage(std::ostream& out, std::string_view stage, const ViewMatrix& view,
                 const PipelineConfig& config);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace vidrec
