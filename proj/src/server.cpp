#include "vidrec/server.hpp"

#include <charconv>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "vidrec/error.hpp"

namespace vidrec {

using nlohmann::json;

namespace {

constexpr std::size_t kDefaultK = 10;
constexpr std::size_t kMaxK = 1000;

HttpResponse error_response(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump()};
}

// Splits "/a/b/c" into {"a", "b", "c"}; empty segments are kept so that
// "/v1/users//recommendations" does not match a route.
std::vector<std::string> segments(const std::string& path) {
  std::vector<std::string> out;
  if (path.empty() || path[0] != '/') return out;
  std::size_t start = 1;
  while (true) {
    const auto slash = path.find('/', start);
    out.push_back(path.substr(start, slash == std::string::npos ? std::string::npos : slash - start));
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  return out;
}

std::optional<std::size_t> parse_k(const std::string& raw) {
  if (raw.empty()) return kDefaultK;
  std::size_t k = 0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), k);
  if (ec != std::errc() || ptr != raw.data() + raw.size() || k < 1 || k > kMaxK) return std::nullopt;
  return k;
}

json items_json(const std::vector<Recommendation>& items) {
  json out = json::array();
  for (const auto& r : items) out.push_back({{"film_id", r.film}, {"score", r.score}});
  return out;
}

}  // namespace

HttpResponse handle_request(const PipelineArtifact& artifact, const std::string& path,
                            const std::string& query_k) {
  const auto parts = segments(path);
  if (parts.size() == 2 && parts[0] == "v1" && parts[1] == "health") {
    return {200, json{{"status", "ok"},
                      {"films", artifact.graph.node_count()},
                      {"users", artifact.profiles.size()},
                      {"format_version", artifact.format_version}}
                     .dump()};
  }
  const bool recs = parts.size() == 4 && parts[0] == "v1" && parts[1] == "users" &&
                    parts[3] == "recommendations";
  const bool similar = parts.size() == 4 && parts[0] == "v1" && parts[1] == "films" &&
                       parts[3] == "similar";
  if (!recs && !similar) return error_response(404, "no such endpoint: " + path);
  if (parts[2].empty()) return error_response(400, "empty identifier");
  const auto k = parse_k(query_k);
  if (!k) return error_response(400, "k must be an integer in [1, " + std::to_string(kMaxK) + "]");

  try {
    if (recs) {
      const auto list = recommend(artifact, parts[2], *k);
      return {200, json{{"user_id", parts[2]},
                        {"cold_start", list.cold_start},
                        {"items", items_json(list.entries)}}
                       .dump()};
    }
    return {200, items_json(similar_films(artifact, parts[2], *k)).dump()};
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Lookup) return error_response(404, e.what());
    return error_response(400, e.what());
  }
}

RecommendationServer::RecommendationServer(std::shared_ptr<const PipelineArtifact> artifact)
    : artifact_(std::move(artifact)), server_(std::make_unique<httplib::Server>()) {
  server_->Get(".*", [snapshot = artifact_](const httplib::Request& req, httplib::Response& res) {
    std::string k;
    if (req.has_param("k")) {
      k = req.get_param_value("k");
      if (k.empty()) k = "0";  // present but empty is malformed
    }
    const auto reply = handle_request(*snapshot, req.path, k);
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  });
}

RecommendationServer::~RecommendationServer() { stop(); }

void RecommendationServer::start(const std::string& host, int port) {
  if (thread_.joinable()) throw Error(ErrorKind::Io, "server already running");
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
    if (port_ <= 0) throw Error(ErrorKind::Io, "cannot bind " + host);
  } else {
    if (!server_->bind_to_port(host, port)) {
      throw Error(ErrorKind::Io, "cannot bind " + host + ":" + std::to_string(port));
    }
    port_ = port;
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  // stop() is a no-op until the listener is running
  server_->wait_until_ready();
}

void RecommendationServer::wait() {
  if (thread_.joinable()) thread_.join();
}

void RecommendationServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace vidrec
