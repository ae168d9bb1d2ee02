#include <doctest.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "vidrec/eval.hpp"
#include "vidrec/server.hpp"

using namespace vidrec;
using nlohmann::json;

namespace {

std::shared_ptr<const PipelineArtifact> small_artifact() {
  SyntheticSpec spec;
  spec.film_count = 20;
  spec.user_count = 40;
  static const auto a = std::make_shared<const PipelineArtifact>(
      run_pipeline(generate_synthetic(spec), PipelineConfig{}));
  return a;
}

}  // namespace

TEST_CASE("health endpoint") {
  const auto a = small_artifact();
  const auto r = handle_request(*a, "/v1/health", "");
  CHECK(r.status == 200);
  const auto j = json::parse(r.body);
  CHECK(j["status"] == "ok");
  CHECK(j["films"] == 20);
  CHECK(j["users"] == 40);
}

TEST_CASE("recommendation endpoint") {
  const auto a = small_artifact();
  const auto user = a->profiles.front().user_id;
  const auto r = handle_request(*a, "/v1/users/" + user + "/recommendations", "3");
  REQUIRE(r.status == 200);
  const auto j = json::parse(r.body);
  CHECK(j["user_id"] == user);
  CHECK(j["cold_start"] == false);
  CHECK(j["items"].size() <= 3);
  const auto expected = recommend(*a, user, 3);
  for (std::size_t i = 0; i < expected.entries.size(); ++i) {
    CHECK(j["items"][i]["film_id"] == expected.entries[i].film);
    CHECK(j["items"][i]["score"].get<double>() == expected.entries[i].score);
  }

  const auto cold = json::parse(handle_request(*a, "/v1/users/stranger/recommendations", "").body);
  CHECK(cold["cold_start"] == true);
  CHECK(cold["items"].size() == 10);
}

TEST_CASE("similar endpoint") {
  const auto a = small_artifact();
  const auto r = handle_request(*a, "/v1/films/1/similar", "4");
  REQUIRE(r.status == 200);
  const auto j = json::parse(r.body);
  CHECK(j.is_array());
  CHECK(j.size() <= 4);
  CHECK(handle_request(*a, "/v1/films/zzz/similar", "").status == 404);
}

TEST_CASE("malformed requests") {
  const auto a = small_artifact();
  CHECK(handle_request(*a, "/v1/users/x/recommendations", "0").status == 400);
  CHECK(handle_request(*a, "/v1/users/x/recommendations", "1001").status == 400);
  CHECK(handle_request(*a, "/v1/users/x/recommendations", "ten").status == 400);
  CHECK(handle_request(*a, "/v1/users//recommendations", "").status == 400);
  CHECK(handle_request(*a, "/v2/health", "").status == 404);
  CHECK(handle_request(*a, "/", "").status == 404);
  const auto err = json::parse(handle_request(*a, "/v1/users/x/recommendations", "-1").body);
  CHECK(err.contains("error"));
}

TEST_CASE("identical requests give identical responses") {
  const auto a = small_artifact();
  const auto first = handle_request(*a, "/v1/films/3/similar", "5");
  for (int i = 0; i < 5; ++i) CHECK(handle_request(*a, "/v1/films/3/similar", "5").body == first.body);
}

TEST_CASE("live server answers over HTTP") {
  RecommendationServer server(small_artifact());
  server.start("127.0.0.1", 0);
  REQUIRE(server.port() > 0);
  httplib::Client client("127.0.0.1", server.port());
  auto health = client.Get("/v1/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  auto bad = client.Get("/v1/users/x/recommendations?k=");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  auto sim = client.Get("/v1/films/2/similar?k=2");
  REQUIRE(sim);
  CHECK(sim->status == 200);
  CHECK(json::parse(sim->body).size() <= 2);
  auto missing = client.Get("/v1/films/nope/similar");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  server.stop();
}
