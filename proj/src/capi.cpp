#include "vidrec/vidrec.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "vidrec/error.hpp"
#include "vidrec/eval.hpp"
#include "vidrec/pipeline.hpp"
#include "vidrec/server.hpp"

struct vidrec_config {
  vidrec::PipelineConfig config;
};

struct vidrec_artifact {
  std::shared_ptr<const vidrec::PipelineArtifact> artifact;
};

struct vidrec_reclist {
  vidrec::RecommendationList list;
};

struct vidrec_report {
  vidrec::EvalReport report;
};

struct vidrec_server {
  std::unique_ptr<vidrec::RecommendationServer> server;
};

namespace {

thread_local std::string g_last_error;

vidrec_status status_of(vidrec::ErrorKind kind) {
  switch (kind) {
    case vidrec::ErrorKind::Format: return VIDREC_ERR_FORMAT;
    case vidrec::ErrorKind::Data: return VIDREC_ERR_DATA;
    case vidrec::ErrorKind::Domain: return VIDREC_ERR_USAGE;
    case vidrec::ErrorKind::Lookup: return VIDREC_ERR_NOT_FOUND;
    case vidrec::ErrorKind::Version: return VIDREC_ERR_VERSION;
    case vidrec::ErrorKind::Io: return VIDREC_ERR_IO;
  }
  return VIDREC_ERR_INTERNAL;
}

template <typename Fn>
vidrec_status guarded(Fn&& fn) noexcept {
  try {
    g_last_error.clear();
    fn();
    return VIDREC_OK;
  } catch (const vidrec::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return VIDREC_ERR_INTERNAL;
}

void require(const void* p, const char* what) {
  if (!p) throw vidrec::Error(vidrec::ErrorKind::Domain, std::string(what) + " is null");
}

char* duplicate(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::ofstream open_output(const char* path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw vidrec::Error(vidrec::ErrorKind::Io, std::string("cannot write '") + path + "'");
  return out;
}

}  // namespace

extern "C" {

const char* vidrec_version(void) { return "1.0.0"; }

const char* vidrec_last_error(void) { return g_last_error.c_str(); }

const char* vidrec_status_name(vidrec_status status) {
  switch (status) {
    case VIDREC_OK: return "ok";
    case VIDREC_ERR_USAGE: return "usage error";
    case VIDREC_ERR_DATA: return "data error";
    case VIDREC_ERR_FORMAT: return "format error";
    case VIDREC_ERR_NOT_FOUND: return "not found";
    case VIDREC_ERR_VERSION: return "unsupported version";
    case VIDREC_ERR_IO: return "io error";
    case VIDREC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void vidrec_string_free(char* s) { std::free(s); }

vidrec_status vidrec_config_new(vidrec_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new vidrec_config();
  });
}

void vidrec_config_free(vidrec_config* config) { delete config; }

vidrec_status vidrec_config_set(vidrec_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    config->config.set(key, value);
  });
}

vidrec_status vidrec_config_get(const vidrec_config* config, const char* key, char** out) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(out, "out");
    *out = duplicate(config->config.get(key));
  });
}

vidrec_status vidrec_config_load_file(vidrec_config* config, const char* path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    std::ifstream in(path);
    if (!in) throw vidrec::Error(vidrec::ErrorKind::Io, std::string("cannot open '") + path + "'");
    config->config.load(in);
  });
}

vidrec_status vidrec_config_dump(const vidrec_config* config, char** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    std::string text;
    for (const auto& [k, v] : config->config.snapshot()) text += k + " = " + v + "\n";
    *out = duplicate(text);
  });
}

vidrec_status vidrec_run_stage(const vidrec_config* config, const char* events_path,
                               const char* stage, const char* out_path) {
  return guarded([&] {
    require(config, "config");
    require(events_path, "events_path");
    require(stage, "stage");
    require(out_path, "out_path");
    const auto view = vidrec::load_view_matrix(std::filesystem::path(events_path), config->config);
    std::ostringstream buf;
    vidrec::write_stage(buf, stage, view, config->config);
    auto out = open_output(out_path);
    out << buf.str();
  });
}

vidrec_status vidrec_synth(const vidrec_config* config, const char* out_path) {
  return guarded([&] {
    require(config, "config");
    require(out_path, "out_path");
    const auto events =
        vidrec::generate_synthetic_events(vidrec::SyntheticSpec::from_config(config->config));
    auto out = open_output(out_path);
    out << "film_id,user_id,watch_seconds,total_seconds\n";
    for (const auto& e : events) {
      out << e.film_id << ',' << e.user_id << ',' << vidrec::format_double(e.watch_seconds) << ','
          << vidrec::format_double(e.total_seconds) << '\n';
    }
  });
}

vidrec_status vidrec_pipeline_run(const vidrec_config* config, const char* events_path,
                                  vidrec_artifact** out) {
  return guarded([&] {
    require(config, "config");
    require(events_path, "events_path");
    require(out, "out");
    auto artifact = std::make_shared<const vidrec::PipelineArtifact>(
        vidrec::run_pipeline(std::filesystem::path(events_path), config->config));
    *out = new vidrec_artifact{std::move(artifact)};
  });
}

vidrec_status vidrec_artifact_load(const char* path, vidrec_artifact** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto artifact =
        std::make_shared<const vidrec::PipelineArtifact>(vidrec::load_artifact(path));
    *out = new vidrec_artifact{std::move(artifact)};
  });
}

vidrec_status vidrec_artifact_save(const vidrec_artifact* artifact, const char* path) {
  return guarded([&] {
    require(artifact, "artifact");
    require(path, "path");
    vidrec::save_artifact(*artifact->artifact, path);
  });
}

void vidrec_artifact_free(vidrec_artifact* artifact) { delete artifact; }

size_t vidrec_artifact_film_count(const vidrec_artifact* artifact) {
  return artifact ? artifact->artifact->graph.node_count() : 0;
}

size_t vidrec_artifact_user_count(const vidrec_artifact* artifact) {
  return artifact ? artifact->artifact->profiles.size() : 0;
}

size_t vidrec_artifact_cluster_count(const vidrec_artifact* artifact) {
  return artifact ? artifact->artifact->clustering.cluster_count() : 0;
}

double vidrec_artifact_modularity(const vidrec_artifact* artifact) {
  return artifact ? artifact->artifact->clustering.modularity : 0.0;
}

vidrec_status vidrec_artifact_export_recommendations(const vidrec_artifact* artifact, size_t k,
                                                     const char* out_path) {
  return guarded([&] {
    require(artifact, "artifact");
    require(out_path, "out_path");
    std::vector<vidrec::RecommendationList> lists;
    for (const auto& p : artifact->artifact->profiles) {
      lists.push_back(vidrec::recommend(*artifact->artifact, p.user_id, k));
    }
    auto out = open_output(out_path);
    vidrec::write_recommendations_csv(out, lists);
  });
}

vidrec_status vidrec_recommend(const vidrec_artifact* artifact, const char* user_id, size_t k,
                               vidrec_reclist** out) {
  return guarded([&] {
    require(artifact, "artifact");
    require(user_id, "user_id");
    require(out, "out");
    *out = new vidrec_reclist{vidrec::recommend(*artifact->artifact, user_id, k)};
  });
}

void vidrec_reclist_free(vidrec_reclist* list) { delete list; }

size_t vidrec_reclist_size(const vidrec_reclist* list) { return list ? list->list.entries.size() : 0; }

int vidrec_reclist_cold_start(const vidrec_reclist* list) {
  return list && list->list.cold_start ? 1 : 0;
}

const char* vidrec_reclist_film(const vidrec_reclist* list, size_t i) {
  if (!list || i >= list->list.entries.size()) return nullptr;
  return list->list.entries[i].film.c_str();
}

double vidrec_reclist_score(const vidrec_reclist* list, size_t i) {
  if (!list || i >= list->list.entries.size()) return 0.0;
  return list->list.entries[i].score;
}

vidrec_status vidrec_recommend_json(const vidrec_artifact* artifact, const char* user_id, size_t k,
                                    char** out) {
  return guarded([&] {
    require(artifact, "artifact");
    require(user_id, "user_id");
    require(out, "out");
    if (k < 1) throw vidrec::Error(vidrec::ErrorKind::Domain, "k must be at least 1");
    const auto reply = vidrec::handle_request(
        *artifact->artifact, std::string("/v1/users/") + user_id + "/recommendations",
        std::to_string(k));
    if (reply.status != 200) throw vidrec::Error(vidrec::ErrorKind::Domain, reply.body);
    *out = duplicate(reply.body);
  });
}

vidrec_status vidrec_similar_json(const vidrec_artifact* artifact, const char* film_id, size_t k,
                                  char** out) {
  return guarded([&] {
    require(artifact, "artifact");
    require(film_id, "film_id");
    require(out, "out");
    if (k < 1) throw vidrec::Error(vidrec::ErrorKind::Domain, "k must be at least 1");
    const auto reply = vidrec::handle_request(
        *artifact->artifact, std::string("/v1/films/") + film_id + "/similar", std::to_string(k));
    if (reply.status == 404) throw vidrec::Error(vidrec::ErrorKind::Lookup, reply.body);
    if (reply.status != 200) throw vidrec::Error(vidrec::ErrorKind::Domain, reply.body);
    *out = duplicate(reply.body);
  });
}

vidrec_status vidrec_evaluate(const vidrec_config* config, const char* events_path,
                              const char* method, vidrec_report** out) {
  return guarded([&] {
    require(config, "config");
    require(events_path, "events_path");
    require(method, "method");
    require(out, "out");
    const auto view = vidrec::load_view_matrix(std::filesystem::path(events_path), config->config);
    *out = new vidrec_report{vidrec::run_evaluation(view, method, config->config)};
  });
}

void vidrec_report_free(vidrec_report* report) { delete report; }

double vidrec_report_accuracy(const vidrec_report* report) {
  return report ? report->report.accuracy : 0.0;
}

void vidrec_report_counts(const vidrec_report* report, size_t* plus, size_t* zero, size_t* minus) {
  if (!report) return;
  if (plus) *plus = report->report.plus;
  if (zero) *zero = report->report.zero;
  if (minus) *minus = report->report.minus;
}

vidrec_status vidrec_report_json(const vidrec_report* report, char** out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    *out = duplicate(vidrec::report_to_json(report->report));
  });
}

vidrec_status vidrec_report_summary(const vidrec_report* report, int header, char** out) {
  return guarded([&] {
    require(out, "out");
    if (header) {
      *out = duplicate(vidrec::report_summary_header());
      return;
    }
    require(report, "report");
    *out = duplicate(vidrec::report_summary_row(report->report));
  });
}

vidrec_status vidrec_server_start(const vidrec_artifact* artifact, const char* host, int port,
                                  vidrec_server** out) {
  return guarded([&] {
    require(artifact, "artifact");
    require(host, "host");
    require(out, "out");
    if (port < 0 || port > 65535) throw vidrec::Error(vidrec::ErrorKind::Domain, "port out of range");
    auto server = std::make_unique<vidrec::RecommendationServer>(artifact->artifact);
    server->start(host, port);
    *out = new vidrec_server{std::move(server)};
  });
}

int vidrec_server_port(const vidrec_server* server) { return server ? server->server->port() : 0; }

void vidrec_server_wait(vidrec_server* server) {
  if (server) server->server->wait();
}

void vidrec_server_stop(vidrec_server* server) {
  if (server) server->server->stop();
}

void vidrec_server_free(vidrec_server* server) { delete server; }

}  // extern "C"
