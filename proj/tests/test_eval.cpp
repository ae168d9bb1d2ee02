#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "vidrec/error.hpp"
#include "vidrec/eval.hpp"

using namespace vidrec;

namespace {

ViewMatrix matrix(const std::vector<ViewMatrix::Triplet>& t) { return ViewMatrix::from_triplets(t); }

}  // namespace

TEST_CASE("judge compares signs") {
  CHECK(judge(0.1541, Label::Preferred) == 1);
  CHECK(judge(0.1008, Label::NonPreferred) == -1);
  CHECK(judge(0.0, Label::Preferred) == 0);
  CHECK(judge(0.0, Label::NonPreferred) == 0);
  CHECK(judge(-0.2, Label::NonPreferred) == 1);
  CHECK(judge(-0.2, Label::Preferred) == -1);
  for (double rs : {-1.0, -0.3, 0.0, 1e-9, 2.5}) {
    CHECK(judge(rs, Label::Preferred) == -judge(-rs, Label::Preferred));
    CHECK(judge(rs, Label::Preferred) == judge(-rs, Label::NonPreferred));
  }
}

TEST_CASE("user splits follow the sample size and fraction") {
  const auto view = generate_synthetic(SyntheticSpec{});
  REQUIRE(view.user_count() == 328);
  const auto s50 = split_users(view, 50, 0.7, 1);
  CHECK(s50.train.user_count() == 35);
  CHECK(s50.test.user_count() == 15);
  const auto s100 = split_users(view, 100, 0.7, 1);
  CHECK(s100.train.user_count() == 70);
  CHECK(s100.test.user_count() == 30);
  const auto s200 = split_users(view, 200, 0.7, 1);
  CHECK(s200.train.user_count() == 140);
  CHECK(s200.test.user_count() == 60);

  const auto again = split_users(view, 50, 0.7, 1);
  CHECK(again.train == s50.train);
  CHECK(again.test == s50.test);
  CHECK(s50.train.films() == view.films());

  std::set<UserId> seen(s50.train.users().begin(), s50.train.users().end());
  for (const auto& u : s50.test.users()) CHECK(seen.insert(u).second);

  CHECK_THROWS_AS(split_users(view, 329, 0.7, 1), Error);
  CHECK_THROWS_AS(split_users(view, 50, 1.0, 1), Error);
}

TEST_CASE("eval case holds out the extremes") {
  const auto view = matrix({{"a", "u", 0.9}, {"b", "u", 0.95}, {"c", "u", 0.6}, {"d", "u", 0.4},
                            {"e", "u", 0.1}, {"f", "u", 0.05}, {"g", "u", 0.3}});
  const auto c = make_eval_case(view, 0);
  REQUIRE(c.has_value());
  CHECK(c->held_preferred == std::array<FilmId, 2>{"b", "a"});
  CHECK(c->held_non_preferred == std::array<FilmId, 2>{"f", "e"});

  const auto t = make_test_user(view, 0, {});
  REQUIRE(t.has_value());
  CHECK(t->egos.preferred == std::vector<FilmId>{"c"});
  CHECK(t->egos.non_preferred == std::vector<FilmId>{"g", "d"});
  CHECK(t->history.size() == 3);

  EvalOptions self;
  self.self_evidence = true;
  const auto s = make_test_user(view, 0, self);
  CHECK(s->egos.preferred == std::vector<FilmId>{"c", "b", "a"});
  CHECK(s->egos.non_preferred == std::vector<FilmId>{"g", "d", "f", "e"});

  const auto small = matrix({{"a", "u", 0.9}, {"b", "u", 0.2}, {"c", "u", 0.5}});
  CHECK_FALSE(make_eval_case(small, 0).has_value());
}

TEST_CASE("oracle policies score one and zero") {
  const auto view = generate_synthetic(SyntheticSpec{});
  const auto split = split_users(view, 50, 0.7, 3);
  OraclePolicy oracle;
  const auto good = evaluate_method(oracle, split.train, split.test);
  CHECK(good.accuracy == 1.0);
  CHECK(good.judgments.size() == 4 * (split.test.user_count() - good.skipped_users.size()));
  OraclePolicy inverted(true);
  CHECK(evaluate_method(inverted, split.train, split.test).accuracy == 0.0);
}

TEST_CASE("short histories are skipped and counted") {
  const auto train = matrix({{"a", "t", 0.9}});
  const auto test = matrix({{"a", "x", 0.9}, {"b", "x", 0.1}, {"a", "y", 0.8}, {"b", "y", 0.7},
                            {"c", "y", 0.2}, {"d", "y", 0.1}});
  OraclePolicy oracle;
  const auto r = evaluate_method(oracle, train, test);
  CHECK(r.skipped_users == std::vector<UserId>{"x"});
  CHECK(r.judgments.size() == 4);
  CHECK(r.plus + r.zero + r.minus == r.judgments.size());
}

TEST_CASE("random policy is order independent and near one third") {
  const auto view = generate_synthetic(SyntheticSpec{});
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto split = split_users(view, 200, 0.7, seed);
    RandomPolicy policy(seed);
    const auto r = evaluate_method(policy, split.train, split.test);
    total += r.accuracy;
    RandomPolicy again(seed);
    CHECK(evaluate_method(again, split.train, split.test) == r);
  }
  CHECK(total / 20.0 == doctest::Approx(1.0 / 3.0).epsilon(0.05));
}

TEST_CASE("knn baseline on a three-user instance") {
  // Cosines to the test user (a 0.85, b 0.75): u1 0.9703, u3 0.4357, u2 0.1627.
  // Weighted means for film c: k=1 0.3, k=2 0.4549, k=3 0.5011.
  const auto train = matrix({{"a", "u1", 0.9}, {"b", "u1", 0.8}, {"c", "u1", 0.3},
                             {"a", "u2", 0.2}, {"c", "u2", 0.9},
                             {"b", "u3", 0.7}, {"c", "u3", 0.8}});
  const WatchHistory history{{"a", 0.85}, {"b", 0.75}};
  const std::vector<FilmId> films{"c", "missing"};
  CHECK(knn_baseline(train, history, films, 1) == std::vector<bool>{false, false});
  CHECK(knn_baseline(train, history, films, 2) == std::vector<bool>{false, false});
  CHECK(knn_baseline(train, history, films, 3) == std::vector<bool>{true, false});
  CHECK_THROWS_AS(knn_baseline(train, history, films, 0), Error);
}

TEST_CASE("knn follows an identical training user") {
  const auto train = matrix({{"a", "twin", 0.9}, {"b", "twin", 0.2}, {"c", "twin", 0.8},
                             {"a", "other", 0.1}, {"b", "other", 0.9}, {"c", "other", 0.1}});
  const WatchHistory history{{"a", 0.9}, {"b", 0.2}};
  const std::vector<FilmId> films{"c"};
  CHECK(knn_baseline(train, history, films, 1) == std::vector<bool>{true});

  const auto uniform = matrix({{"a", "p", 0.9}, {"b", "p", 0.9}, {"a", "q", 0.9}, {"b", "q", 0.9}});
  const std::vector<FilmId> both{"a", "b"};
  CHECK(knn_baseline(uniform, WatchHistory{{"z", 0.4}}, both, 2) == std::vector<bool>{true, true});
}

TEST_CASE("naive bayes on a four-film instance") {
  // Log posteriors for film w with features x 0.3, y 0.9, z 0.7:
  // non-preferred -4.3944, preferred -2.3434. With x 0.9, y 0.1, z 0.7:
  // non-preferred -3.0082, preferred -3.1543.
  const auto train = matrix({{"w", "t1", 0.9}, {"x", "t1", 0.8}, {"y", "t1", 0.2},
                             {"w", "t2", 0.8}, {"x", "t2", 0.3}, {"y", "t2", 0.9}, {"z", "t2", 0.6},
                             {"w", "t3", 0.1}, {"x", "t3", 0.9}, {"z", "t3", 0.2},
                             {"w", "t4", 0.7}, {"y", "t4", 0.6}});
  const std::vector<FilmId> w{"w"};
  CHECK(naive_bayes_baseline(train, {{"x", 0.3}, {"y", 0.9}, {"z", 0.7}}, w) == std::vector<bool>{true});
  CHECK(naive_bayes_baseline(train, {{"x", 0.9}, {"y", 0.1}, {"z", 0.7}}, w) == std::vector<bool>{false});
}

TEST_CASE("naive bayes priors and smoothing") {
  const std::vector<FilmId> films{"a"};
  CHECK(naive_bayes_baseline(ViewMatrix{}, {}, films) == std::vector<bool>{false});
  CHECK(naive_bayes_baseline(ViewMatrix{}, {{"b", 0.9}}, films) == std::vector<bool>{false});
  const auto liked = matrix({{"a", "p", 0.9}, {"a", "q", 0.8}, {"b", "p", 0.9}, {"b", "q", 0.7}});
  CHECK(naive_bayes_baseline(liked, {}, films) == std::vector<bool>{true});
  CHECK(naive_bayes_baseline(liked, {{"b", 0.95}}, films) == std::vector<bool>{true});
}

TEST_CASE("policies are built by name") {
  PipelineConfig config;
  for (auto name : {"proposed", "random", "oracle", "inverted_oracle", "knn", "naive_bayes"}) {
    CHECK(make_policy(name, config)->name() == name);
  }
  CHECK_THROWS_AS(make_policy("svm", config), Error);
}

TEST_CASE("synthetic generator is seeded") {
  SyntheticSpec spec;
  CHECK(generate_synthetic(spec) == generate_synthetic(spec));
  auto other = spec;
  other.seed = 8;
  CHECK_FALSE(generate_synthetic(other) == generate_synthetic(spec));
  CHECK(generate_synthetic(spec).film_count() == 80);
  CHECK(planted_cluster(spec, 0) == 0);
  CHECK(planted_cluster(spec, 79) == 3);
  CHECK(planted_cluster(spec, 20) == 1);
}

TEST_CASE("degenerate ranges give a block-constant matrix") {
  SyntheticSpec spec;
  spec.film_count = 12;
  spec.user_count = 9;
  spec.planted_cluster_count = 3;
  spec.in_min = spec.in_max = 1.0;
  spec.out_min = spec.out_max = 0.0;
  spec.watch_probability = 1.0;
  const auto view = generate_synthetic(spec);
  REQUIRE(view.entry_count() == 12 * 9);
  for (std::size_t u = 0; u < view.user_count(); ++u) {
    std::set<std::size_t> home;
    for (const auto& e : view.user_row(u)) {
      const double pct = e.pct;
      CHECK((pct == 0.0 || pct == 1.0));
      if (pct == 1.0) home.insert(planted_cluster(spec, std::stoul(view.films()[e.index]) - 1));
    }
    CHECK(home.size() == 1);
  }
}

TEST_CASE("synthetic spec validation") {
  SyntheticSpec spec;
  spec.in_min = 0.9;
  spec.in_max = 0.8;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = SyntheticSpec{};
  spec.film_count = 0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = SyntheticSpec{};
  spec.watch_probability = 1.5;
  CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("co-membership F1") {
  const std::vector<std::size_t> truth{0, 0, 1, 1};
  CHECK(co_membership_f1(truth, truth) == 1.0);
  const std::vector<std::size_t> relabelled{5, 5, 2, 2};
  CHECK(co_membership_f1(truth, relabelled) == 1.0);
  const std::vector<std::size_t> singles{0, 1, 2, 3};
  CHECK(co_membership_f1(truth, singles) == 0.0);
  // One cluster: 2 true pairs out of 6 found, recall 1.
  const std::vector<std::size_t> lumped{0, 0, 0, 0};
  CHECK(co_membership_f1(truth, lumped) == doctest::Approx(2.0 * (1.0 / 3.0) / (1.0 / 3.0 + 1.0)));
}

TEST_CASE("report serialisation") {
  EvalReport r;
  r.method = "oracle";
  r.split = {50, 0.7, 1, 35, 15};
  r.judgments = {{"u", "f", Label::Preferred, 1.0, 1}};
  r.plus = 1;
  r.accuracy = 1.0;
  const auto json = report_to_json(r);
  CHECK(json.find("\"method\": \"oracle\"") != std::string::npos);
  CHECK(json.find("\"accuracy\": 1.0") != std::string::npos);
  CHECK(report_summary_header() == "method,sample_size,train_users,test_users,judgments,plus,zero,minus,accuracy");
  CHECK(report_summary_row(r) == "oracle,50,35,15,1,1,0,0,1");
}
