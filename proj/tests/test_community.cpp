#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "vidrec/community.hpp"
#include "vidrec/error.hpp"

using namespace vidrec;
using oracle::make_graph;

namespace {

FilmGraph two_triangles() {
  return make_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
}

FilmGraph complete(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) edges.emplace_back(a, b);
  }
  return make_graph(n, edges);
}

}  // namespace

TEST_CASE("modularity of fixed partitions") {
  const auto g = two_triangles();
  const std::vector<std::size_t> one(6, 0);
  CHECK(modularity_score(g, one) == doctest::Approx(0.0));
  const std::vector<std::size_t> split{0, 0, 0, 1, 1, 1};
  CHECK(modularity_score(g, split) == doctest::Approx(0.5));
  CHECK(oracle::max_modularity(g) == doctest::Approx(0.5));

  const auto edge = make_graph(2, {{0, 1}});
  const std::vector<std::size_t> apart{0, 1};
  CHECK(modularity_score(edge, apart) == doctest::Approx(-0.5));

  const std::vector<std::size_t> singles{0, 1, 2};
  CHECK(modularity_score(make_graph(3, {}), singles) == 0.0);
  const std::vector<std::size_t> short_assignment{0};
  CHECK_THROWS_AS(modularity_score(g, short_assignment), Error);
}

TEST_CASE("modularity agrees with the pairwise definition") {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 50; ++round) {
    const auto g = oracle::random_graph(rng, 7, true);
    std::uniform_int_distribution<std::size_t> pick(0, g.node_count() - 1);
    std::vector<std::size_t> c(g.node_count());
    for (auto& v : c) v = pick(rng);
    CHECK(modularity_score(g, c) == doctest::Approx(oracle::modularity(g, c)).epsilon(1e-12));
  }
}

TEST_CASE("louvain finds the two triangles") {
  const auto c = louvain(two_triangles());
  CHECK(c.assignment == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
  CHECK(c.modularity == doctest::Approx(0.5));
  CHECK(c.cluster_count() == 2);
}

TEST_CASE("louvain on a complete graph reaches the exhaustive maximum") {
  const auto g = complete(4);
  const auto c = louvain(g);
  CHECK(c.modularity >= 0.0);
  CHECK(c.modularity == doctest::Approx(oracle::max_modularity(g)).epsilon(1e-12));
}

TEST_CASE("louvain leaves an edgeless graph as singletons") {
  const auto c = louvain(make_graph(5, {}));
  CHECK(c.assignment == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(c.modularity == 0.0);
}

TEST_CASE("louvain cluster ids follow the smallest member") {
  // Nodes 0 and 3 together, 1 and 2 together.
  const auto g = make_graph(4, {{0, 3}, {1, 2}});
  const auto c = louvain(g);
  CHECK(c.assignment == std::vector<std::size_t>{0, 1, 1, 0});
}

TEST_CASE("louvain moves are predicted exactly and never lower Q") {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 60; ++round) {
    const auto g = oracle::random_graph(rng, 8, round % 2 == 0);
    double last_q = -1.0;
    bool ok = true;
    LouvainObserver observer;
    observer.on_move = [&](const LouvainMove& m) {
      const double before = modularity_score(g, m.before);
      const double after = modularity_score(g, m.after);
      if (std::abs((after - before) - m.gain) > 1e-12) ok = false;
      if (after < before - 1e-15) ok = false;
      if (last_q > after + 1e-15) ok = false;
      last_q = after;
    };
    observer.on_level = [&](std::size_t, const std::vector<std::size_t>& a) {
      const double q = modularity_score(g, a);
      if (last_q > q + 1e-15) ok = false;
      last_q = q;
    };
    LouvainOptions options;
    options.observer = &observer;
    const auto c = louvain(g, options);
    CHECK(ok);
    CHECK(c.modularity == modularity_score(g, c.assignment));
    CHECK(c.modularity <= oracle::max_modularity(g) + 1e-12);
    CHECK(c == louvain(g));  // instrumentation does not change the result
  }
}

TEST_CASE("louvain is deterministic, including the shuffled sweep") {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 20; ++round) {
    const auto g = oracle::random_graph(rng, 8, true);
    CHECK(louvain(g) == louvain(g));
    LouvainOptions options;
    options.randomize_order = true;
    options.seed = 99;
    CHECK(louvain(g, options) == louvain(g, options));
  }
}
