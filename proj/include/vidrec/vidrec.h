/*
 * vidrec C API.
 *
 * Every function returns a vidrec_status; on failure the thread-local
 * vidrec_last_error() holds a message. Handles are opaque and owned by the
 * caller, who releases them with the matching *_free function. Strings
 * returned through char** out-parameters are released with
 * vidrec_string_free.
 */
#ifndef VIDREC_VIDREC_H
#define VIDREC_VIDREC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VIDREC_API __declspec(dllexport)
#else
#define VIDREC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vidrec_status {
  VIDREC_OK = 0,
  VIDREC_ERR_USAGE = 1,     /* bad argument, unknown key, value out of range */
  VIDREC_ERR_DATA = 2,      /* invalid input data */
  VIDREC_ERR_FORMAT = 3,    /* structurally malformed input */
  VIDREC_ERR_NOT_FOUND = 4, /* unknown film or user */
  VIDREC_ERR_VERSION = 5,   /* artifact from a newer format */
  VIDREC_ERR_IO = 6,
  VIDREC_ERR_INTERNAL = 7
} vidrec_status;

typedef struct vidrec_config vidrec_config;
typedef struct vidrec_artifact vidrec_artifact;
typedef struct vidrec_reclist vidrec_reclist;
typedef struct vidrec_report vidrec_report;
typedef struct vidrec_server vidrec_server;

VIDREC_API const char* vidrec_version(void);
VIDREC_API const char* vidrec_last_error(void);
VIDREC_API const char* vidrec_status_name(vidrec_status status);
VIDREC_API void vidrec_string_free(char* s);

/* Configuration: key/value pairs, see `vidrec_config_dump` for all keys. */
VIDREC_API vidrec_status vidrec_config_new(vidrec_config** out);
VIDREC_API void vidrec_config_free(vidrec_config* config);
VIDREC_API vidrec_status vidrec_config_set(vidrec_config* config, const char* key,
                                           const char* value);
VIDREC_API vidrec_status vidrec_config_get(const vidrec_config* config, const char* key,
                                           char** out);
VIDREC_API vidrec_status vidrec_config_load_file(vidrec_config* config, const char* path);
VIDREC_API vidrec_status vidrec_config_dump(const vidrec_config* config, char** out);

/* Runs the pipeline on an events CSV up to `stage` and writes that stage's
 * CSV to out_path. Stages: ingest, similarity, similarity-tensor, graph,
 * centrality, cluster, profiles. */
VIDREC_API vidrec_status vidrec_run_stage(const vidrec_config* config, const char* events_path,
                                          const char* stage, const char* out_path);

/* Writes a synthetic events CSV per the config's synth.* keys. */
VIDREC_API vidrec_status vidrec_synth(const vidrec_config* config, const char* out_path);

/* Artifacts */
VIDREC_API vidrec_status vidrec_pipeline_run(const vidrec_config* config,
                                             const char* events_path, vidrec_artifact** out);
VIDREC_API vidrec_status vidrec_artifact_load(const char* path, vidrec_artifact** out);
VIDREC_API vidrec_status vidrec_artifact_save(const vidrec_artifact* artifact, const char* path);
VIDREC_API void vidrec_artifact_free(vidrec_artifact* artifact);
VIDREC_API size_t vidrec_artifact_film_count(const vidrec_artifact* artifact);
VIDREC_API size_t vidrec_artifact_user_count(const vidrec_artifact* artifact);
VIDREC_API size_t vidrec_artifact_cluster_count(const vidrec_artifact* artifact);
VIDREC_API double vidrec_artifact_modularity(const vidrec_artifact* artifact);
/* Writes every profiled user's recommendations (top k) as CSV
 * user_id,rank,film_id,rs_ef. */
VIDREC_API vidrec_status vidrec_artifact_export_recommendations(const vidrec_artifact* artifact,
                                                                size_t k, const char* out_path);

/* Recommendations */
VIDREC_API vidrec_status vidrec_recommend(const vidrec_artifact* artifact, const char* user_id,
                                          size_t k, vidrec_reclist** out);
VIDREC_API void vidrec_reclist_free(vidrec_reclist* list);
VIDREC_API size_t vidrec_reclist_size(const vidrec_reclist* list);
VIDREC_API int vidrec_reclist_cold_start(const vidrec_reclist* list);
/* Returned pointers stay valid until the list is freed; NULL out of range. */
VIDREC_API const char* vidrec_reclist_film(const vidrec_reclist* list, size_t i);
VIDREC_API double vidrec_reclist_score(const vidrec_reclist* list, size_t i);
/* JSON payloads identical to the HTTP endpoints. */
VIDREC_API vidrec_status vidrec_recommend_json(const vidrec_artifact* artifact,
                                               const char* user_id, size_t k, char** out);
VIDREC_API vidrec_status vidrec_similar_json(const vidrec_artifact* artifact,
                                             const char* film_id, size_t k, char** out);

/* Offline evaluation. method: proposed, random, oracle, inverted_oracle,
 * knn, naive_bayes. */
VIDREC_API vidrec_status vidrec_evaluate(const vidrec_config* config, const char* events_path,
                                         const char* method, vidrec_report** out);
VIDREC_API void vidrec_report_free(vidrec_report* report);
VIDREC_API double vidrec_report_accuracy(const vidrec_report* report);
VIDREC_API void vidrec_report_counts(const vidrec_report* report, size_t* plus, size_t* zero,
                                     size_t* minus);
VIDREC_API vidrec_status vidrec_report_json(const vidrec_report* report, char** out);
/* Summary CSV line for the report; header=1 returns the header line. */
VIDREC_API vidrec_status vidrec_report_summary(const vidrec_report* report, int header,
                                               char** out);

/* Read-only HTTP service. port 0 picks a free port. */
VIDREC_API vidrec_status vidrec_server_start(const vidrec_artifact* artifact, const char* host,
                                             int port, vidrec_server** out);
VIDREC_API int vidrec_server_port(const vidrec_server* server);
VIDREC_API void vidrec_server_wait(vidrec_server* server);
VIDREC_API void vidrec_server_stop(vidrec_server* server);
VIDREC_API void vidrec_server_free(vidrec_server* server);

#ifdef __cplusplus
}
#endif

#endif /* VIDREC_VIDREC_H */
