#include "vidrec/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vidrec/error.hpp"

namespace vidrec {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

const PreferenceProfile* PipelineArtifact::find_profile(std::string_view user) const {
  const auto it = std::lower_bound(
      profiles.begin(), profiles.end(), user,
      [](const PreferenceProfile& p, std::string_view u) { return id_less(p.user_id, u); });
  if (it == profiles.end() || it->user_id != user) return nullptr;
  return &*it;
}

ViewMatrix load_view_matrix(std::istream& events, const PipelineConfig& config) {
  return with_stage("ingest", [&] {
    auto parsed = parse_events(events);
    if (!parsed.errors.empty() && !config.skip_bad_rows) {
      std::string msg = std::to_string(parsed.errors.size()) + " malformed row(s)";
      const auto shown = std::min<std::size_t>(parsed.errors.size(), 5);
      for (std::size_t i = 0; i < shown; ++i) {
        msg += "; line " + std::to_string(parsed.errors[i].line) + ": " + parsed.errors[i].message;
      }
      throw Error(ErrorKind::Data, msg);
    }
    return build_view_matrix(parsed.events, config.clamp);
  });
}

ViewMatrix load_view_matrix(const std::filesystem::path& events, const PipelineConfig& config) {
  std::ifstream in(events);
  if (!in) throw Error(ErrorKind::Io, "ingest: cannot open '" + events.string() + "'");
  return load_view_matrix(in, config);
}

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

PipelineArtifact run_pipeline(const ViewMatrix& view, const PipelineConfig& config) {
  PipelineArtifact a;
  a.config = config;
  a.similarity = with_stage("similarity", [&] {
    return average_similarity(view, config.averaging, config.threads);
  });
  a.graph = with_stage("graph", [&] { return build_graph(a.similarity, config.edge_threshold); });
  a.centralities = with_stage("centrality", [&] { return compute_centralities(a.graph); });
  a.clustering = with_stage("cluster", [&] {
    return louvain(a.graph, {config.randomize_order, config.seed, nullptr});
  });
  a.profiles = with_stage("profiles", [&] {
    return build_profiles(view, config.preference_threshold);
  });
  a.built_at = utc_now();
  return a;
}

PipelineArtifact run_pipeline(const std::filesystem::path& events, const PipelineConfig& config) {
  return run_pipeline(load_view_matrix(events, config), config);
}

RecommendationList recommend(const PipelineArtifact& artifact, std::string_view user, std::size_t k) {
  if (k < 1) throw Error(ErrorKind::Domain, "k must be at least 1");
  if (const auto* profile = artifact.find_profile(user)) {
    const RankingOptions options{artifact.config.exclude_non_preferred};
    if (auto list = rank_for_user(artifact.graph, artifact.centralities, artifact.clustering,
                                  *profile, options)) {
      if (list->entries.size() > k) list->entries.resize(k);
      return *list;
    }
  }
  auto list = rank_cold_start(artifact.centralities, k);
  list.user_id = std::string(user);
  return list;
}

std::vector<Recommendation> similar_films(const PipelineArtifact& artifact, std::string_view film,
                                          std::size_t k) {
  if (k < 1) throw Error(ErrorKind::Domain, "k must be at least 1");
  const auto i = artifact.graph.index_of(film);
  const auto& sim = artifact.similarity;
  std::vector<Recommendation> out;
  for (std::size_t j = 0; j < sim.size(); ++j) {
    if (j != i && sim.at(i, j) > 0.0) out.push_back({sim.films()[j], sim.at(i, j)});
  }
  sort_recommendations(out);
  if (out.size() > k) out.resize(k);
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

std::string artifact_to_json(const PipelineArtifact& a, bool include_timestamp) {
  json j;
  j["format_version"] = a.format_version;
  if (include_timestamp) j["built_at"] = a.built_at;
  j["config"] = a.config.snapshot();
  j["films"] = a.similarity.films();

  const auto n = a.similarity.size();
  auto& rows = j["similarity"] = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const auto begin = a.similarity.values().begin() + static_cast<std::ptrdiff_t>(i * n);
    rows.push_back(std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(n)));
  }

  auto& edges = j["edges"] = json::array();
  for (const auto& e : a.graph.edges()) {
    edges.push_back(json::array({a.graph.films()[e.a], a.graph.films()[e.b], e.weight}));
  }

  auto& centrality = j["centrality"] = json::array();
  for (const auto& r : a.centralities.rows()) {
    centrality.push_back({r.degree, r.closeness, r.betweenness, r.average});
  }

  j["clustering"] = {{"assignment", a.clustering.assignment},
                     {"modularity", a.clustering.modularity}};

  auto& profiles = j["profiles"] = json::array();
  for (const auto& p : a.profiles) {
    profiles.push_back(
        {{"user_id", p.user_id}, {"preferred", p.preferred}, {"non_preferred", p.non_preferred}});
  }
  return j.dump(1);
}

PipelineArtifact artifact_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Format, std::string("artifact is not valid JSON: ") + e.what());
  }

  PipelineArtifact a;
  try {
    a.format_version = j.at("format_version").get<int>();
    if (a.format_version > kArtifactFormatVersion) {
      throw Error(ErrorKind::Version, "artifact format_version " + std::to_string(a.format_version) +
                                          " is newer than supported version " +
                                          std::to_string(kArtifactFormatVersion));
    }
    if (a.format_version < 1) throw Error(ErrorKind::Format, "invalid format_version");
    if (j.contains("built_at")) a.built_at = j.at("built_at").get<std::string>();

    for (const auto& [key, value] : j.at("config").items()) a.config.set(key, value.get<std::string>());

    auto films = j.at("films").get<std::vector<FilmId>>();
    if (!std::is_sorted(films.begin(), films.end(), IdLess{})) {
      throw Error(ErrorKind::Data, "artifact films are not in id order");
    }
    const auto n = films.size();
    std::vector<double> values;
    values.reserve(n * n);
    const auto& rows = j.at("similarity");
    if (rows.size() != n) throw Error(ErrorKind::Data, "similarity row count mismatch");
    for (const auto& row : rows) {
      auto r = row.get<std::vector<double>>();
      if (r.size() != n) throw Error(ErrorKind::Data, "similarity column count mismatch");
      values.insert(values.end(), r.begin(), r.end());
    }
    a.similarity = SimilarityMatrix(films, std::move(values));

    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      const auto fa = e.at(0).get<std::string>();
      const auto fb = e.at(1).get<std::string>();
      const auto ia = std::lower_bound(films.begin(), films.end(), fa, IdLess{}) - films.begin();
      const auto ib = std::lower_bound(films.begin(), films.end(), fb, IdLess{}) - films.begin();
      if (static_cast<std::size_t>(ia) >= n || films[ia] != fa ||
          static_cast<std::size_t>(ib) >= n || films[ib] != fb) {
        throw Error(ErrorKind::Data, "edge references unknown film");
      }
      edges.push_back({static_cast<std::size_t>(ia), static_cast<std::size_t>(ib), e.at(2).get<double>()});
    }
    a.graph = FilmGraph(films, std::move(edges));
    if (!(a.graph == build_graph(a.similarity, a.config.edge_threshold))) {
      throw Error(ErrorKind::Data, "stored graph does not match similarity matrix and threshold");
    }

    std::vector<CentralityRow> crow;
    for (const auto& r : j.at("centrality")) {
      CentralityRow c{r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>(),
                      r.at(3).get<double>()};
      if (average_centrality(c.degree, c.closeness, c.betweenness) != c.average) {
        throw Error(ErrorKind::Data, "stored average centrality is inconsistent");
      }
      crow.push_back(c);
    }
    a.centralities = CentralityTable(films, std::move(crow));

    a.clustering.assignment = j.at("clustering").at("assignment").get<std::vector<std::size_t>>();
    a.clustering.modularity = j.at("clustering").at("modularity").get<double>();
    if (modularity_score(a.graph, a.clustering.assignment) != a.clustering.modularity) {
      throw Error(ErrorKind::Data, "stored modularity is inconsistent with the assignment");
    }

    for (const auto& p : j.at("profiles")) {
      a.profiles.push_back({p.at("user_id").get<std::string>(),
                            p.at("preferred").get<std::vector<FilmId>>(),
                            p.at("non_preferred").get<std::vector<FilmId>>()});
    }
    if (!std::is_sorted(a.profiles.begin(), a.profiles.end(),
                        [](const auto& x, const auto& y) { return id_less(x.user_id, y.user_id); })) {
      throw Error(ErrorKind::Data, "artifact profiles are not in user order");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Format, std::string("malformed artifact: ") + e.what());
  }
  return a;
}

void save_artifact(const PipelineArtifact& artifact, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << artifact_to_json(artifact) << '\n';
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

PipelineArtifact load_artifact(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return artifact_from_json(buf.str());
}

// ---------------------------------------------------------------------------
// CSV

void write_view_csv(std::ostream& out, const ViewMatrix& view) {
  out << "film_id,user_id,pct\n";
  for (std::size_t f = 0; f < view.film_count(); ++f) {
    for (const auto& e : view.film_row(f)) {
      out << view.films()[f] << ',' << view.users()[e.index] << ',' << format_double(e.pct) << '\n';
    }
  }
}

void write_similarity_csv(std::ostream& out, const SimilarityMatrix& sim) {
  out << "film";
  for (const auto& f : sim.films()) out << ',' << f;
  out << '\n';
  for (std::size_t i = 0; i < sim.size(); ++i) {
    out << sim.films()[i];
    for (std::size_t j = 0; j < sim.size(); ++j) out << ',' << format_double(sim.at(i, j));
    out << '\n';
  }
}

void write_edges_csv(std::ostream& out, const FilmGraph& g) {
  out << "film_i,film_j,weight\n";
  for (const auto& e : g.edges()) {
    out << g.films()[e.a] << ',' << g.films()[e.b] << ',' << format_double(e.weight) << '\n';
  }
}

void write_centrality_csv(std::ostream& out, const CentralityTable& table) {
  out << "film_id,degree,closeness,betweenness,average\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& r = table[i];
    out << table.films()[i] << ',' << format_double(r.degree) << ',' << format_double(r.closeness)
        << ',' << format_double(r.betweenness) << ',' << format_double(r.average) << '\n';
  }
}

void write_clusters_csv(std::ostream& out, const FilmGraph& g, const Clustering& clustering) {
  out << "film_id,cluster_id\n";
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    out << g.films()[i] << ',' << clustering.assignment.at(i) << '\n';
  }
}

void write_profiles_csv(std::ostream& out, const std::vector<PreferenceProfile>& profiles) {
  out << "user_id,film_id,label\n";
  for (const auto& p : profiles) {
    for (const auto& f : p.preferred) out << p.user_id << ',' << f << ",preferred\n";
    for (const auto& f : p.non_preferred) out << p.user_id << ',' << f << ",non_preferred\n";
  }
}

void write_recommendations_csv(std::ostream& out, const std::vector<RecommendationList>& lists,
                               bool header) {
  if (header) out << "user_id,rank,film_id,rs_ef\n";
  for (const auto& list : lists) {
    for (std::size_t r = 0; r < list.entries.size(); ++r) {
      out << list.user_id << ',' << r + 1 << ',' << list.entries[r].film << ','
          << format_double(list.entries[r].score) << '\n';
    }
  }
}

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = {"ingest", "similarity", "similarity-tensor",
                                                 "graph", "centrality", "cluster", "profiles"};
  return names;
}

void write_stage(std::ostream& out, std::string_view stage, const ViewMatrix& view,
                 const PipelineConfig& config) {
  const auto& names = stage_names();
  if (std::find(names.begin(), names.end(), stage) == names.end()) {
    throw Error(ErrorKind::Domain, "unknown stage '" + std::string(stage) + "'");
  }
  if (stage == "ingest") return write_view_csv(out, view);
  if (stage == "similarity-tensor") return write_similarity_tensor(out, view);
  if (stage == "profiles") {
    return write_profiles_csv(out, with_stage("profiles", [&] {
                                return build_profiles(view, config.preference_threshold);
                              }));
  }
  const auto sim = with_stage("similarity", [&] {
    return average_similarity(view, config.averaging, config.threads);
  });
  if (stage == "similarity") return write_similarity_csv(out, sim);
  const auto g = with_stage("graph", [&] { return build_graph(sim, config.edge_threshold); });
  if (stage == "graph") return write_edges_csv(out, g);
  if (stage == "centrality") {
    return write_centrality_csv(out, with_stage("centrality", [&] { return compute_centralities(g); }));
  }
  if (stage == "cluster") {
    const auto c = with_stage("cluster", [&] {
      return louvain(g, {config.randomize_order, config.seed, nullptr});
    });
    return write_clusters_csv(out, g, c);
  }
}

}  // namespace vidrec
