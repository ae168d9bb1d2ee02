#include "vidrec/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "vidrec/error.hpp"
#include "vidrec/pipeline.hpp"

namespace vidrec {

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorKind::Domain,
              "invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v);
}

double parse_real(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) bad_value(key, v);
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
  Int out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

struct Field {
  const char* key;
  std::function<void(PipelineConfig&, std::string_view)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

std::string bool_text(bool b) { return b ? "true" : "false"; }

#define VIDREC_BOOL(name, member)                                                             \
  Field {                                                                                     \
    name, [](PipelineConfig& c, std::string_view v) { c.member = parse_bool(name, v); },      \
        [](const PipelineConfig& c) { return bool_text(c.member); }                           \
  }
#define VIDREC_REAL(name, member)                                                             \
  Field {                                                                                     \
    name, [](PipelineConfig& c, std::string_view v) { c.member = parse_real(name, v); },      \
        [](const PipelineConfig& c) { return format_double(c.member); }                       \
  }
#define VIDREC_INT(name, member)                                                              \
  Field {                                                                                     \
    name,                                                                                     \
        [](PipelineConfig& c, std::string_view v) {                                           \
          c.member = parse_int<decltype(c.member)>(name, v);                                  \
        },                                                                                    \
        [](const PipelineConfig& c) { return std::to_string(c.member); }                      \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      VIDREC_BOOL("ingest.clamp", clamp),
      VIDREC_BOOL("ingest.skip_bad_rows", skip_bad_rows),
      Field{"similarity.policy",
            [](PipelineConfig& c, std::string_view v) { c.averaging = parse_averaging_policy(v); },
            [](const PipelineConfig& c) { return std::string(to_string(c.averaging)); }},
      VIDREC_INT("similarity.threads", threads),
      VIDREC_REAL("graph.edge_threshold", edge_threshold),
      VIDREC_BOOL("community.randomize_order", randomize_order),
      VIDREC_INT("community.seed", seed),
      VIDREC_REAL("profile.threshold", preference_threshold),
      VIDREC_BOOL("ranking.exclude_non_preferred", exclude_non_preferred),
      VIDREC_INT("eval.sample_size", eval_sample_size),
      VIDREC_REAL("eval.train_fraction", eval_train_fraction),
      VIDREC_INT("eval.seed", eval_seed),
      VIDREC_BOOL("eval.self_evidence", eval_self_evidence),
      VIDREC_INT("eval.knn_k", knn_k),
      VIDREC_INT("synth.films", synth_films),
      VIDREC_INT("synth.users", synth_users),
      VIDREC_INT("synth.clusters", synth_clusters),
      VIDREC_REAL("synth.in_min", synth_in_min),
      VIDREC_REAL("synth.in_max", synth_in_max),
      VIDREC_REAL("synth.out_min", synth_out_min),
      VIDREC_REAL("synth.out_max", synth_out_max),
      VIDREC_REAL("synth.watch_probability", synth_watch_probability),
      VIDREC_INT("synth.seed", synth_seed),
      Field{"serve.host", [](PipelineConfig& c, std::string_view v) { c.serve_host = v; },
            [](const PipelineConfig& c) { return c.serve_host; }},
      VIDREC_INT("serve.port", serve_port),
  };
  return table;
}

#undef VIDREC_BOOL
#undef VIDREC_REAL
#undef VIDREC_INT

const Field& find(std::string_view key) {
  for (const auto& f : fields()) {
    if (key == f.key) return f;
  }
  throw Error(ErrorKind::Domain, "unknown config key '" + std::string(key) + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view value) {
  find(key).set(*this, trim(value));
}

std::string PipelineConfig::get(std::string_view key) const { return find(key).get(*this); }

std::map<std::string, std::string> PipelineConfig::snapshot() const {
  std::map<std::string, std::string> out;
  for (const auto& f : fields()) out.emplace(f.key, f.get(*this));
  return out;
}

void PipelineConfig::load(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::Format, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set(trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(e.kind(), "config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace vidrec
