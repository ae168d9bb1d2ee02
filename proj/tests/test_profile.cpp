#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "vidrec/error.hpp"
#include "vidrec/profile.hpp"

using namespace vidrec;

TEST_CASE("profiles split watched films at the threshold") {
  const std::vector<ViewingEvent> events{{"1401", "59635", 2400, 2458},
                                         {"6352", "44530", 540, 2469},
                                         {"7", "44530", 50, 100},
                                         {"8", "44530", 0, 100}};
  const auto profiles = build_profiles(build_view_matrix(events));
  REQUIRE(profiles.size() == 2);
  CHECK(profiles[0].user_id == "44530");
  CHECK(profiles[0].preferred.empty());
  CHECK(profiles[0].non_preferred == std::vector<FilmId>{"8", "6352", "7"});
  CHECK(profiles[1].preferred == std::vector<FilmId>{"1401"});
}

TEST_CASE("profile ordering breaks ties by film id") {
  const std::vector<ViewMatrix::Triplet> t{
      {"9", "u", 0.9}, {"3", "u", 0.9}, {"5", "u", 0.95}, {"4", "u", 0.1}, {"2", "u", 0.1}};
  const auto p = build_profile(ViewMatrix::from_triplets(t), 0);
  CHECK(p.preferred == std::vector<FilmId>{"5", "3", "9"});
  CHECK(p.non_preferred == std::vector<FilmId>{"2", "4"});
}

TEST_CASE("threshold must lie strictly inside the unit interval") {
  const std::vector<ViewMatrix::Triplet> t{{"a", "u", 0.5}};
  const auto view = ViewMatrix::from_triplets(t);
  CHECK_THROWS_AS(build_profiles(view, 0.0), Error);
  CHECK_THROWS_AS(build_profiles(view, 1.0), Error);
}

TEST_CASE("profiles partition the watched set and shrink with the threshold") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 40; ++round) {
    const auto view = oracle::random_view(rng, 10, 10);
    const auto low = build_profiles(view, 0.3);
    const auto high = build_profiles(view, 0.7);
    for (std::size_t u = 0; u < view.user_count(); ++u) {
      std::vector<FilmId> all = low[u].preferred;
      all.insert(all.end(), low[u].non_preferred.begin(), low[u].non_preferred.end());
      std::sort(all.begin(), all.end());
      CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
      CHECK(all.size() == view.user_row(u).size());
      CHECK(high[u].preferred.size() <= low[u].preferred.size());
      for (const auto& f : high[u].preferred) {
        CHECK(std::find(low[u].preferred.begin(), low[u].preferred.end(), f) != low[u].preferred.end());
      }
    }
  }
}
