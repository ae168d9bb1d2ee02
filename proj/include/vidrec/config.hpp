#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <string_view>

#include "vidrec/similarity.hpp"

namespace vidrec {

/// Every tunable of the pipeline, evaluation and synthetic generator. The
/// text form is one `key = value` per line with `#` comments; keys are the
/// dotted names returned by `snapshot()`.
struct PipelineConfig {
  // ingest
  bool clamp = true;
  bool skip_bad_rows = false;
  // similarity
  AveragingPolicy averaging = AveragingPolicy::ComparableCount;
  unsigned threads = 1;
  // graph
  double edge_threshold = 0.0;
  // community
  bool randomize_order = false;
  std::uint64_t seed = 0;
  // profile
  double preference_threshold = 0.5;
  // ranking
  bool exclude_non_preferred = false;
  // eval
  std::size_t eval_sample_size = 200;
  double eval_train_fraction = 0.7;
  std::uint64_t eval_seed = 1;
  bool eval_self_evidence = false;
  std::size_t knn_k = 10;
  // synth
  std::size_t synth_films = 80;
  std::size_t synth_users = 328;
  std::size_t synth_clusters = 4;
  double synth_in_min = 0.7;
  double synth_in_max = 1.0;
  double synth_out_min = 0.0;
  double synth_out_max = 0.3;
  double synth_watch_probability = 0.5;
  std::uint64_t synth_seed = 7;
  // serve
  std::string serve_host = "127.0.0.1";
  int serve_port = 8080;

  /// Throws Domain for unknown keys or unparsable values.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  /// All keys with their current values, sorted by key.
  std::map<std::string, std::string> snapshot() const;

  /// Reads `key = value` lines. Throws Format on malformed lines.
  void load(std::istream& in);

  bool operator==(const PipelineConfig&) const = default;
};

}  // namespace vidrec
