#include "vidrec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vidrec/error.hpp"
#include "vidrec/pipeline.hpp"

namespace vidrec {

const char* to_string(Label label) noexcept {
  return label == Label::Preferred ? "preferred" : "non_preferred";
}

int judge(double rs, Label label) noexcept {
  const int sign = rs > 0.0 ? 1 : (rs < 0.0 ? -1 : 0);
  return label == Label::Preferred ? sign : -sign;
}

TrainTestSplit split_users(const ViewMatrix& view, std::size_t sample_size, double train_fraction,
                           std::uint64_t seed) {
  if (sample_size > view.user_count()) {
    throw Error(ErrorKind::Domain, "sample of " + std::to_string(sample_size) + " users exceeds " +
                                       std::to_string(view.user_count()) + " available");
  }
  if (sample_size < 2) throw Error(ErrorKind::Domain, "sample needs at least two users");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorKind::Domain, "train fraction must lie in (0,1)");
  }
  std::vector<std::size_t> users(view.user_count());
  std::iota(users.begin(), users.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(users.begin(), users.end(), rng);
  users.resize(sample_size);

  auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(sample_size) * train_fraction));
  n_train = std::clamp<std::size_t>(n_train, 1, sample_size - 1);

  std::vector<std::size_t> train(users.begin(), users.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(users.begin() + static_cast<std::ptrdiff_t>(n_train), users.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {view.select_users(train), view.select_users(test)};
}

namespace {

// Watched films, pct descending with ties by ascending film id.
std::vector<ViewEntry> by_pct_descending(const ViewMatrix& view, std::size_t user) {
  const auto row = view.user_row(user);
  std::vector<ViewEntry> out(row.begin(), row.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const ViewEntry& a, const ViewEntry& b) { return a.pct > b.pct; });
  return out;
}

}  // namespace

std::optional<EvalCase> make_eval_case(const ViewMatrix& view, std::size_t user) {
  const auto sorted = by_pct_descending(view, user);
  const auto n = sorted.size();
  if (n < 4) return std::nullopt;
  const auto& films = view.films();
  EvalCase c;
  c.user_id = view.users()[user];
  c.held_preferred = {films[sorted[0].index], films[sorted[1].index]};
  c.held_non_preferred = {films[sorted[n - 1].index], films[sorted[n - 2].index]};
  return c;
}

std::optional<TestUser> make_test_user(const ViewMatrix& test, std::size_t user,
                                       const EvalOptions& options) {
  auto eval_case = make_eval_case(test, user);
  if (!eval_case) return std::nullopt;
  const auto sorted = by_pct_descending(test, user);
  TestUser t;
  t.eval_case = *eval_case;
  t.egos.user_id = eval_case->user_id;
  const auto& films = test.films();
  // Middle of the descending order: everything except the held-out four.
  std::vector<ViewEntry> non_preferred;
  for (std::size_t i = 2; i + 2 < sorted.size(); ++i) {
    const auto& e = sorted[i];
    t.history.emplace_back(films[e.index], e.pct);
    if (e.pct > options.preference_threshold) {
      t.egos.preferred.push_back(films[e.index]);
    } else {
      non_preferred.push_back(e);
    }
  }
  // Ascending pct; the stable sort keeps film-id order inside ties.
  std::stable_sort(non_preferred.begin(), non_preferred.end(),
                   [](const ViewEntry& a, const ViewEntry& b) { return a.pct < b.pct; });
  for (const auto& e : non_preferred) t.egos.non_preferred.push_back(films[e.index]);
  std::sort(t.history.begin(), t.history.end(),
            [](const auto& a, const auto& b) { return id_less(a.first, b.first); });
  if (options.self_evidence) {
    for (const auto& f : eval_case->held_preferred) t.egos.preferred.push_back(f);
    for (const auto& f : eval_case->held_non_preferred) t.egos.non_preferred.push_back(f);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Policies

void ProposedPolicy::fit(const ViewMatrix& train) {
  scorer_.reset();
  scorer_user_.clear();
  similarity_ = average_similarity(train, config_.averaging, config_.threads);
  graph_ = build_graph(similarity_, config_.edge_threshold);
  centralities_ = compute_centralities(graph_);
  clustering_ = louvain(graph_, {config_.randomize_order, config_.seed, nullptr});
}

double ProposedPolicy::score(const TestUser& user, const FilmId& film) {
  if (!scorer_ || scorer_user_ != user.eval_case.user_id) {
    scorer_ = std::make_unique<EgoScorer>(graph_, centralities_, user.egos);
    scorer_user_ = user.eval_case.user_id;
  }
  return scorer_->score(film);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

double RandomPolicy::score(const TestUser& user, const FilmId& film) {
  const auto h = splitmix64(splitmix64(seed_ ^ fnv1a(user.eval_case.user_id)) ^ fnv1a(film));
  return static_cast<double>(static_cast<int>(h % 3) - 1);
}

double OraclePolicy::score(const TestUser& user, const FilmId& film) {
  const auto& held = user.eval_case.held_preferred;
  const bool preferred = std::find(held.begin(), held.end(), film) != held.end();
  return (preferred != inverted_) ? 1.0 : -1.0;
}

std::vector<bool> knn_baseline(const ViewMatrix& train, const WatchHistory& test_user,
                               std::span<const FilmId> films, std::size_t k) {
  if (k < 1) throw Error(ErrorKind::Domain, "k must be at least 1");
  std::vector<double> test_pct(train.film_count(), 0.0);
  double test_norm = 0.0;
  for (const auto& [film, pct] : test_user) {
    if (const auto f = train.film_index(film)) {
      test_pct[*f] = pct;
      test_norm += pct * pct;
    }
  }
  test_norm = std::sqrt(test_norm);

  std::vector<double> cosine(train.user_count(), 0.0);
  for (std::size_t u = 0; u < train.user_count(); ++u) {
    double dot = 0.0;
    double norm = 0.0;
    for (const auto& e : train.user_row(u)) {
      dot += e.pct * test_pct[e.index];
      norm += e.pct * e.pct;
    }
    if (norm > 0.0 && test_norm > 0.0) cosine[u] = dot / (std::sqrt(norm) * test_norm);
  }

  std::vector<bool> out;
  out.reserve(films.size());
  for (const auto& film : films) {
    const auto f = train.film_index(film);
    if (!f) {
      out.push_back(false);
      continue;
    }
    const auto row = train.film_row(*f);
    std::vector<ViewEntry> watchers(row.begin(), row.end());
    std::stable_sort(watchers.begin(), watchers.end(), [&](const ViewEntry& a, const ViewEntry& b) {
      return cosine[a.index] > cosine[b.index];
    });
    if (watchers.size() > k) watchers.resize(k);
    if (watchers.empty()) {
      out.push_back(false);
      continue;
    }
    double weighted = 0.0;
    double weights = 0.0;
    double plain = 0.0;
    for (const auto& w : watchers) {
      weighted += cosine[w.index] * w.pct;
      weights += cosine[w.index];
      plain += w.pct;
    }
    const double mean = weights > 0.0 ? weighted / weights : plain / static_cast<double>(watchers.size());
    out.push_back(mean > 0.5);
  }
  return out;
}

std::vector<bool> naive_bayes_baseline(const ViewMatrix& train, const WatchHistory& test_user,
                                       std::span<const FilmId> films) {
  // liked[u] holds the film indices user u watched above 50%.
  std::vector<std::vector<bool>> liked(train.user_count(),
                                       std::vector<bool>(train.film_count(), false));
  for (std::size_t u = 0; u < train.user_count(); ++u) {
    for (const auto& e : train.user_row(u)) liked[u][e.index] = e.pct > 0.5;
  }

  std::vector<bool> out;
  out.reserve(films.size());
  for (const auto& film : films) {
    const auto f = train.film_index(film);
    std::vector<std::size_t> members[2];
    if (f) {
      for (const auto& e : train.film_row(*f)) members[e.pct > 0.5 ? 1 : 0].push_back(e.index);
    }
    const double n = static_cast<double>(members[0].size() + members[1].size());
    double log_post[2];
    for (int y = 0; y < 2; ++y) {
      const double ny = static_cast<double>(members[y].size());
      log_post[y] = std::log((ny + 1.0) / (n + 2.0));
      for (const auto& [other, pct] : test_user) {
        if (other == film) continue;
        const bool x = pct > 0.5;
        double ones = 0.0;
        if (const auto g = train.film_index(other)) {
          for (const auto u : members[y]) ones += liked[u][*g] ? 1.0 : 0.0;
        }
        const double p1 = (ones + 1.0) / (ny + 2.0);
        log_post[y] += std::log(x ? p1 : 1.0 - p1);
      }
    }
    out.push_back(log_post[1] > log_post[0]);
  }
  return out;
}

double KnnPolicy::score(const TestUser& user, const FilmId& film) {
  const FilmId films[] = {film};
  return knn_baseline(train_, user.history, films, k_)[0] ? 1.0 : -1.0;
}

double NaiveBayesPolicy::score(const TestUser& user, const FilmId& film) {
  const FilmId films[] = {film};
  return naive_bayes_baseline(train_, user.history, films)[0] ? 1.0 : -1.0;
}

std::unique_ptr<RankingPolicy> make_policy(std::string_view name, const PipelineConfig& config) {
  if (name == "proposed") return std::make_unique<ProposedPolicy>(config);
  if (name == "random") return std::make_unique<RandomPolicy>(config.eval_seed);
  if (name == "oracle") return std::make_unique<OraclePolicy>(false);
  if (name == "inverted_oracle") return std::make_unique<OraclePolicy>(true);
  if (name == "knn") return std::make_unique<KnnPolicy>(config.knn_k);
  if (name == "naive_bayes") return std::make_unique<NaiveBayesPolicy>();
  throw Error(ErrorKind::Domain, "unknown evaluation method '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Reports

EvalReport evaluate_method(RankingPolicy& policy, const ViewMatrix& train, const ViewMatrix& test,
                           const EvalOptions& options, SplitSpec split) {
  policy.fit(train);
  EvalReport report;
  report.method = policy.name();
  report.split = split;
  for (std::size_t u = 0; u < test.user_count(); ++u) {
    const auto user = make_test_user(test, u, options);
    if (!user) {
      report.skipped_users.push_back(test.users()[u]);
      continue;
    }
    auto add = [&](const FilmId& film, Label label) {
      const double rs = policy.score(*user, film);
      const int s = judge(rs, label);
      report.judgments.push_back({user->eval_case.user_id, film, label, rs, s});
      (s > 0 ? report.plus : (s < 0 ? report.minus : report.zero)) += 1;
    };
    for (const auto& f : user->eval_case.held_preferred) add(f, Label::Preferred);
    for (const auto& f : user->eval_case.held_non_preferred) add(f, Label::NonPreferred);
  }
  if (!report.judgments.empty()) {
    report.accuracy = static_cast<double>(report.plus) / static_cast<double>(report.judgments.size());
  }
  return report;
}

EvalReport run_evaluation(const ViewMatrix& view, std::string_view method,
                          const PipelineConfig& config) {
  const auto split = split_users(view, config.eval_sample_size, config.eval_train_fraction,
                                 config.eval_seed);
  auto policy = make_policy(method, config);
  const SplitSpec spec{config.eval_sample_size, config.eval_train_fraction, config.eval_seed,
                       split.train.user_count(), split.test.user_count()};
  return evaluate_method(*policy, split.train, split.test,
                         {config.preference_threshold, config.eval_self_evidence}, spec);
}

std::string report_to_json(const EvalReport& r) {
  nlohmann::json j;
  j["method"] = r.method;
  j["split"] = {{"sample_size", r.split.sample_size},
                {"train_fraction", r.split.train_fraction},
                {"seed", r.split.seed},
                {"train_users", r.split.train_users},
                {"test_users", r.split.test_users}};
  auto& judgments = j["judgments"] = nlohmann::json::array();
  for (const auto& x : r.judgments) {
    judgments.push_back({{"user_id", x.user_id},
                         {"film_id", x.film},
                         {"label", to_string(x.label)},
                         {"rs", x.rs},
                         {"score", x.score}});
  }
  j["skipped_users"] = r.skipped_users;
  j["counts"] = {{"plus", r.plus}, {"zero", r.zero}, {"minus", r.minus}};
  j["accuracy"] = r.accuracy;
  return j.dump(2);
}

std::string report_summary_header() {
  return "method,sample_size,train_users,test_users,judgments,plus,zero,minus,accuracy";
}

std::string report_summary_row(const EvalReport& r) {
  std::ostringstream out;
  out << r.method << ',' << r.split.sample_size << ',' << r.split.train_users << ','
      << r.split.test_users << ',' << r.judgments.size() << ',' << r.plus << ',' << r.zero << ','
      << r.minus << ',' << format_double(r.accuracy);
  return out.str();
}

// ---------------------------------------------------------------------------
// Synthetic data

SyntheticSpec SyntheticSpec::from_config(const PipelineConfig& c) {
  SyntheticSpec s;
  s.film_count = c.synth_films;
  s.user_count = c.synth_users;
  s.planted_cluster_count = c.synth_clusters;
  s.in_min = c.synth_in_min;
  s.in_max = c.synth_in_max;
  s.out_min = c.synth_out_min;
  s.out_max = c.synth_out_max;
  s.watch_probability = c.synth_watch_probability;
  s.seed = c.synth_seed;
  return s;
}

void SyntheticSpec::validate() const {
  if (film_count == 0 || user_count == 0 || planted_cluster_count == 0) {
    throw Error(ErrorKind::Domain, "synthetic counts must be positive");
  }
  if (planted_cluster_count > film_count) {
    throw Error(ErrorKind::Domain, "more planted clusters than films");
  }
  auto unit = [](double lo, double hi, const char* what) {
    if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) {
      throw Error(ErrorKind::Domain, std::string(what) + " range must satisfy 0 <= min <= max <= 1");
    }
  };
  unit(in_min, in_max, "in-cluster");
  unit(out_min, out_max, "out-of-cluster");
  unit(watch_probability, watch_probability, "watch probability");
}

std::size_t planted_cluster(const SyntheticSpec& spec, std::size_t film_index) {
  return film_index * spec.planted_cluster_count / spec.film_count;
}

std::vector<ViewingEvent> generate_synthetic_events(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  // Portable draws: the distributions in <random> are implementation-defined.
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(); };

  std::vector<ViewingEvent> events;
  for (std::size_t u = 0; u < spec.user_count; ++u) {
    const auto home = std::min(spec.planted_cluster_count - 1,
                               static_cast<std::size_t>(unit() * static_cast<double>(spec.planted_cluster_count)));
    for (std::size_t f = 0; f < spec.film_count; ++f) {
      if (!(unit() < spec.watch_probability)) continue;
      const bool in = planted_cluster(spec, f) == home;
      const double pct = in ? between(spec.in_min, spec.in_max) : between(spec.out_min, spec.out_max);
      const double total = 2400.0 + std::floor(unit() * 200.0);
      events.push_back({std::to_string(f + 1), std::to_string(u + 1), std::min(total, pct * total), total});
    }
  }
  return events;
}

ViewMatrix generate_synthetic(const SyntheticSpec& spec) {
  const auto events = generate_synthetic_events(spec);
  return build_view_matrix(events, true);
}

double co_membership_f1(std::span<const std::size_t> truth, std::span<const std::size_t> found) {
  if (truth.size() != found.size()) throw Error(ErrorKind::Domain, "partition sizes differ");
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (std::size_t j = i + 1; j < truth.size(); ++j) {
      const bool t = truth[i] == truth[j];
      const bool f = found[i] == found[j];
      if (t && f) tp += 1.0;
      else if (f) fp += 1.0;
      else if (t) fn += 1.0;
    }
  }
  const double denom = 2.0 * tp + fp + fn;
  return denom == 0.0 ? 1.0 : 2.0 * tp / denom;
}

}  // namespace vidrec
