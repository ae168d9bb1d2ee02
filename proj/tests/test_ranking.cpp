#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "worked_example.hpp"
#include "vidrec/error.hpp"
#include "vidrec/ranking.hpp"

using namespace vidrec;

TEST_CASE("ego value divides by the hop count") {
  CHECK(ego_value(0.739, 1) == doctest::Approx(0.739).epsilon(1e-3));
  CHECK(ego_value(0.889, 2) == doctest::Approx(0.445).epsilon(1e-3));
  CHECK(ego_value(0.865, 3) == doctest::Approx(0.288).epsilon(1e-3));
  CHECK(ego_value(0.524, 3) == doctest::Approx(0.175).epsilon(1e-3));
  CHECK(ego_value(0.216, 1) == doctest::Approx(0.216).epsilon(1e-3));
  CHECK(ego_value(0.4796, 1) == 0.4796);
  CHECK(ego_value(0.2675, 2) == doctest::Approx(0.1337).epsilon(1e-3));
  CHECK(ego_value(0.5, 0) == 0.5);
  CHECK(ego_value(0.5, -1) == 0.0);
}

TEST_CASE("ego centrality looks up hop distances") {
  const auto ex = example::user_5383();
  const auto s = ego_centrality(ex.graph, ex.ac, "53", "590");
  CHECK(s.distance == 2);
  CHECK(s.value == doctest::Approx(0.13375));
  const auto self = ego_centrality(ex.graph, ex.ac, "51", "51");
  CHECK(self.distance == 1);
  CHECK(self.value == 0.4796);
  CHECK_THROWS_AS(ego_centrality(ex.graph, ex.ac, "51", "nope"), Error);

  const auto split = oracle::make_graph(3, {{0, 1}});
  const auto ac = oracle::table_of(split.films(), {0.3, 0.3, 0.3});
  const auto far = ego_centrality(split, ac, "1", "3");
  CHECK_FALSE(far.distance.has_value());
  CHECK(far.value == 0.0);
}

TEST_CASE("recommendation score sums evidence") {
  const std::vector<double> p1{0.3081, 0.3081}, n1{0.1541, 0.3081};
  CHECK(recommendation_score(p1, n1) == doctest::Approx(0.1540).epsilon(1e-3));
  const std::vector<double> p2{0.4796, 0.4796}, n2{0.4796, 0.4796};
  CHECK(recommendation_score(p2, n2) == 0.0);
  const std::vector<double> none, n3{0.5};
  CHECK(recommendation_score(none, n3) == -0.5);
  CHECK(recommendation_score(none, none) == 0.0);
}

TEST_CASE("worked ranking example orders 53 above 51 above 6673") {
  const auto ex = example::user_5383();
  RankingOptions options;
  options.exclude_non_preferred = true;
  const auto list = rank_for_user(ex.graph, ex.ac, ex.clustering, ex.profile, options);
  REQUIRE(list.has_value());
  REQUIRE(list->entries.size() == 4);
  CHECK(list->entries[0].film == "53");
  CHECK(list->entries[0].score == doctest::Approx(0.1337).epsilon(1e-3));
  CHECK(list->entries[1] == Recommendation{"51", 0.0});
  CHECK(list->entries[2] == Recommendation{"6709", 0.0});
  CHECK(list->entries[3].film == "6673");
  CHECK(list->entries[3].score == doctest::Approx(-0.1442).epsilon(1e-3));

  const auto with_non = rank_for_user(ex.graph, ex.ac, ex.clustering, ex.profile);
  REQUIRE(with_non.has_value());
  CHECK(with_non->entries.size() == 6);
  for (const auto& r : with_non->entries) {
    CHECK(r.film != "1377");
    CHECK(r.film != "590");
  }
}

TEST_CASE("candidate set is the union of preferred co-clusters") {
  const FilmGraph g({"F1", "F2", "F3", "F7", "F9"}, {});
  const Clustering c{{0, 0, 1, 0, 2}, 0.0};
  auto set = candidate_set(g, c, PreferenceProfile{"u", {"F1"}, {}});
  REQUIRE(set.has_value());
  CHECK(*set == std::vector<std::size_t>{1, 3});

  set = candidate_set(g, c, PreferenceProfile{"u", {"F1", "F3"}, {"F2"}});
  REQUIRE(set.has_value());
  CHECK(*set == std::vector<std::size_t>{1, 3});
  RankingOptions options;
  options.exclude_non_preferred = true;
  set = candidate_set(g, c, PreferenceProfile{"u", {"F1", "F3"}, {"F2"}}, options);
  CHECK(*set == std::vector<std::size_t>{3});

  set = candidate_set(g, c, PreferenceProfile{"u", {"F9"}, {}});
  REQUIRE(set.has_value());
  CHECK(set->empty());

  CHECK_FALSE(candidate_set(g, c, PreferenceProfile{"u", {}, {"F1"}}).has_value());
  CHECK_FALSE(candidate_set(g, c, PreferenceProfile{"u", {"unknown"}, {}}).has_value());
}

TEST_CASE("single candidate and tied candidates") {
  const auto g = oracle::make_graph(3, {{0, 1}, {0, 2}});
  const auto ac = oracle::table_of(g.films(), {0.5, 0.4, 0.4});
  const Clustering all{{0, 0, 0}, 0.0};
  const auto tied = rank_for_user(g, ac, all, PreferenceProfile{"u", {"1"}, {}});
  REQUIRE(tied.has_value());
  CHECK(tied->entries == std::vector<Recommendation>{{"2", 0.4}, {"3", 0.4}});

  const Clustering pair{{0, 0, 1}, 0.0};
  const auto single = rank_for_user(g, ac, pair, PreferenceProfile{"u", {"1"}, {}});
  REQUIRE(single.has_value());
  CHECK(single->entries.size() == 1);
}

TEST_CASE("cold start ranks by average centrality") {
  const auto ac = oracle::table_of({"51", "53", "56"}, {0.4796, 0.2675, 0.4733});
  const auto top = rank_cold_start(ac, 2);
  CHECK(top.cold_start);
  CHECK(top.entries == std::vector<Recommendation>{{"51", 0.4796}, {"56", 0.4733}});
  CHECK(rank_cold_start(ac, 10).entries.size() == 3);
  CHECK(rank_cold_start(oracle::table_of({"x"}, {0.0}), 1).entries.front().film == "x");
  CHECK(rank_cold_start(oracle::table_of({"9", "10", "2"}, {0.1, 0.1, 0.1}), 3).entries ==
        std::vector<Recommendation>{{"2", 0.1}, {"9", 0.1}, {"10", 0.1}});
  CHECK_THROWS_AS(rank_cold_start(ac, 0), Error);
}

TEST_CASE("ego score never exceeds the candidate's centrality") {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 100; ++round) {
    const auto inst = oracle::random_ranking_instance(rng);
    const auto n = inst.graph.node_count();
    for (std::size_t c = 0; c < n; ++c) {
      const auto dist = hop_distances(inst.graph, c);
      for (std::size_t e = 0; e < n; ++e) {
        const auto s = ego_centrality(inst.graph, inst.ac, inst.graph.films()[c], inst.graph.films()[e]);
        const double ac = inst.ac[c].average;
        CHECK(s.value <= ac);
        if (dist[e] <= 1 && dist[e] >= 0) CHECK(s.value == ac);
        if (dist[e] > 1) CHECK(ego_value(ac, dist[e]) <= ego_value(ac, dist[e] - 1));
      }
    }
  }
}

TEST_CASE("swapping the ego lists negates every score") {
  std::mt19937_64 rng(43);
  for (int round = 0; round < 100; ++round) {
    const auto inst = oracle::random_ranking_instance(rng);
    PreferenceProfile swapped{"u", inst.profile.non_preferred, inst.profile.preferred};
    const EgoScorer a(inst.graph, inst.ac, inst.profile);
    const EgoScorer b(inst.graph, inst.ac, swapped);
    for (std::size_t v = 0; v < inst.graph.node_count(); ++v) CHECK(b.score(v) == -a.score(v));
  }
}
