// Graph, centralities and ego lists shaped after a worked ranking example.
#pragma once

#include <algorithm>
#include <string_view>
#include <vector>

#include "oracles.hpp"
#include "vidrec/ranking.hpp"

namespace example {

using namespace vidrec;

// Egos 1377 and 590 are liked, 6552 and 6538 disliked. Hop counts from the
// candidates to the egos follow the worked example for user 5383.
struct Example {
  FilmGraph graph;
  CentralityTable ac;
  Clustering clustering;
  PreferenceProfile profile;
};

inline Example user_5383() {
  const std::vector<FilmId> films{"51", "53", "590", "1377", "6538", "6552", "6673", "6709"};
  auto at = [&](std::string_view f) {
    return static_cast<std::size_t>(std::find(films.begin(), films.end(), f) - films.begin());
  };
  std::vector<Edge> edges;
  auto link = [&](std::string_view a, std::string_view b) {
    edges.push_back({std::min(at(a), at(b)), std::max(at(a), at(b)), 1.0});
  };
  for (auto ego : {"1377", "590", "6552", "6538"}) {
    link("51", ego);
    link("6709", ego);
  }
  link("53", "1377");
  link("6673", "1377");
  link("6673", "6552");
  link("6673", "6538");
  link("1377", "590");
  link("1377", "6552");
  link("1377", "6538");

  Example ex{FilmGraph(films, edges),
             oracle::table_of(films, {0.4796, 0.2675, 0.5, 0.5, 0.5, 0.5, 0.2885, 0.2743}),
             Clustering{std::vector<std::size_t>(films.size(), 0), 0.0},
             PreferenceProfile{"5383", {"1377", "590"}, {"6552", "6538"}}};
  return ex;
}

}  // namespace example
