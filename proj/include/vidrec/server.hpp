#pragma once

#include <memory>
#include <string>
#include <thread>

#include "vidrec/pipeline.hpp"

namespace httplib {
class Server;
}

namespace vidrec {

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON
};

/// Routes one GET request against an immutable artifact. Exposed separately
/// from the socket layer so the endpoint logic is testable without I/O.
/// `query_k` is the raw `k` parameter, empty when absent.
HttpResponse handle_request(const PipelineArtifact& artifact, const std::string& path,
                            const std::string& query_k);

/// Read-only HTTP service over one artifact snapshot.
class RecommendationServer {
 public:
  explicit RecommendationServer(std::shared_ptr<const PipelineArtifact> artifact);
  ~RecommendationServer();

  RecommendationServer(const RecommendationServer&) = delete;
  RecommendationServer& operator=(const RecommendationServer&) = delete;

  /// Binds and starts serving on a background thread. Port 0 picks a free
  /// port. Throws Io when binding fails.
  void start(const std::string& host, int port);
  int port() const noexcept { return port_; }
  /// Blocks until stop() is called from elsewhere.
  void wait();
  void stop();

 private:
  std::shared_ptr<const PipelineArtifact> artifact_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace vidrec
