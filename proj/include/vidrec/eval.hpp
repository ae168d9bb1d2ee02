#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vidrec/community.hpp"
#include "vidrec/config.hpp"
#include "vidrec/graph.hpp"
#include "vidrec/ingest.hpp"
#include "vidrec/profile.hpp"
#include "vidrec/ranking.hpp"
#include "vidrec/similarity.hpp"

namespace vidrec {

enum class Label { Preferred, NonPreferred };

const char* to_string(Label label) noexcept;

/// +1 when the sign of `rs` agrees with the label, -1 when it disagrees and
/// 0 when rs is exactly zero.
int judge(double rs, Label label) noexcept;

// ---------------------------------------------------------------------------
// Splits

struct TrainTestSplit {
  ViewMatrix train;
  ViewMatrix test;
};

/// Samples `sample_size` users without replacement and partitions them by
/// user; both halves keep the full film list. The train share is
/// round(sample_size * train_fraction), kept within [1, sample_size - 1].
TrainTestSplit split_users(const ViewMatrix& view, std::size_t sample_size,
                           double train_fraction, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Cases and policies

struct EvalCase {
  UserId user_id;
  std::array<FilmId, 2> held_preferred;      // two highest pct
  std::array<FilmId, 2> held_non_preferred;  // two lowest pct
};

/// nullopt when the user watched fewer than four films.
std::optional<EvalCase> make_eval_case(const ViewMatrix& view, std::size_t user);

using WatchHistory = std::vector<std::pair<FilmId, double>>;

/// What a policy sees about one test user.
struct TestUser {
  EvalCase eval_case;
  WatchHistory history;      // watched films minus the four held-out ones
  PreferenceProfile egos;    // ego lists used for RS
};

class RankingPolicy {
 public:
  virtual ~RankingPolicy() = default;
  virtual std::string name() const = 0;
  virtual void fit(const ViewMatrix& train) = 0;
  /// Signed score for one held-out film; only the sign is judged.
  virtual double score(const TestUser& user, const FilmId& film) = 0;
};

/// The graph pipeline: similarity, graph, centrality and clustering fitted on
/// the training users, RS over the test user's ego lists.
class ProposedPolicy final : public RankingPolicy {
 public:
  explicit ProposedPolicy(PipelineConfig config) : config_(std::move(config)) {}
  std::string name() const override { return "proposed"; }
  void fit(const ViewMatrix& train) override;
  double score(const TestUser& user, const FilmId& film) override;

  const SimilarityMatrix& similarity() const noexcept { return similarity_; }
  const FilmGraph& graph() const noexcept { return graph_; }
  const CentralityTable& centralities() const noexcept { return centralities_; }
  const Clustering& clustering() const noexcept { return clustering_; }

 private:
  PipelineConfig config_;
  SimilarityMatrix similarity_;
  FilmGraph graph_;
  CentralityTable centralities_;
  Clustering clustering_;
  std::unique_ptr<EgoScorer> scorer_;
  UserId scorer_user_;
};

/// Draws RS uniformly from {-1, 0, +1}, keyed on (seed, user, film) so the
/// draw does not depend on evaluation order.
class RandomPolicy final : public RankingPolicy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : seed_(seed) {}
  std::string name() const override { return "random"; }
  void fit(const ViewMatrix&) override {}
  double score(const TestUser& user, const FilmId& film) override;

 private:
  std::uint64_t seed_;
};

/// Scores +1 for held-out preferred films, -1 otherwise (or the reverse).
class OraclePolicy final : public RankingPolicy {
 public:
  explicit OraclePolicy(bool inverted = false) : inverted_(inverted) {}
  std::string name() const override { return inverted_ ? "inverted_oracle" : "oracle"; }
  void fit(const ViewMatrix&) override {}
  double score(const TestUser& user, const FilmId& film) override;

 private:
  bool inverted_;
};

/// User-user cosine kNN over viewing percentages (absent = 0). A film is
/// predicted preferred iff the similarity-weighted mean pct of the k most
/// similar training users who watched it exceeds 0.5.
std::vector<bool> knn_baseline(const ViewMatrix& train, const WatchHistory& test_user,
                               std::span<const FilmId> films, std::size_t k);

/// Bernoulli naive Bayes per film over binarised labels (pct > 0.5) with
/// add-one smoothing. Features are the test user's labels on their other
/// watched films; a training user who did not watch a feature film counts
/// as label 0. Ties predict non-preferred.
std::vector<bool> naive_bayes_baseline(const ViewMatrix& train, const WatchHistory& test_user,
                                       std::span<const FilmId> films);

class KnnPolicy final : public RankingPolicy {
 public:
  explicit KnnPolicy(std::size_t k) : k_(k) {}
  std::string name() const override { return "knn"; }
  void fit(const ViewMatrix& train) override { train_ = train; }
  double score(const TestUser& user, const FilmId& film) override;

 private:
  std::size_t k_;
  ViewMatrix train_;
};

class NaiveBayesPolicy final : public RankingPolicy {
 public:
  std::string name() const override { return "naive_bayes"; }
  void fit(const ViewMatrix& train) override { train_ = train; }
  double score(const TestUser& user, const FilmId& film) override;

 private:
  ViewMatrix train_;
};

/// Builds a policy by name: proposed, random, oracle, inverted_oracle, knn,
/// naive_bayes. Throws Domain for unknown names.
std::unique_ptr<RankingPolicy> make_policy(std::string_view name, const PipelineConfig& config);

// ---------------------------------------------------------------------------
// Reports

struct Judgment {
  UserId user_id;
  FilmId film;
  Label label = Label::Preferred;
  double rs = 0.0;
  int score = 0;

  bool operator==(const Judgment&) const = default;
};

struct SplitSpec {
  std::size_t sample_size = 0;
  double train_fraction = 0.0;
  std::uint64_t seed = 0;
  std::size_t train_users = 0;
  std::size_t test_users = 0;

  bool operator==(const SplitSpec&) const = default;
};

struct EvalReport {
  std::string method;
  SplitSpec split;
  std::vector<Judgment> judgments;
  std::vector<UserId> skipped_users;  // fewer than four watched films
  std::size_t plus = 0;
  std::size_t zero = 0;
  std::size_t minus = 0;
  double accuracy = 0.0;  // plus / judgments

  bool operator==(const EvalReport&) const = default;
};

struct EvalOptions {
  double preference_threshold = 0.5;
  /// Adds the held-out films, with their held-out labels, to the ego lists.
  bool self_evidence = false;
};

/// Builds the per-user inputs a policy sees. nullopt if < 4 watched films.
std::optional<TestUser> make_test_user(const ViewMatrix& test, std::size_t user,
                                       const EvalOptions& options);

/// Fits on `train` and judges the four held-out films of every test user in
/// ascending user order.
EvalReport evaluate_method(RankingPolicy& policy, const ViewMatrix& train,
                           const ViewMatrix& test, const EvalOptions& options = {},
                           SplitSpec split = {});

/// Splits `view` per the config's eval.* keys and evaluates `method`.
EvalReport run_evaluation(const ViewMatrix& view, std::string_view method,
                          const PipelineConfig& config);

std::string report_to_json(const EvalReport& report);
/// Header line of the summary CSV.
std::string report_summary_header();
/// One summary CSV row: method,sample_size,train_users,test_users,...
std::string report_summary_row(const EvalReport& report);

// ---------------------------------------------------------------------------
// Synthetic data

struct SyntheticSpec {
  std::size_t film_count = 80;
  std::size_t user_count = 328;
  std::size_t planted_cluster_count = 4;
  double in_min = 0.7;
  double in_max = 1.0;
  double out_min = 0.0;
  double out_max = 0.3;
  double watch_probability = 0.5;
  std::uint64_t seed = 7;

  static SyntheticSpec from_config(const PipelineConfig& config);
  /// Throws Domain on empty counts or ranges outside [0,1].
  void validate() const;
};

/// Film ids are "1".."film_count"; film i (0-based) belongs to planted
/// cluster i * clusters / films.
std::size_t planted_cluster(const SyntheticSpec& spec, std::size_t film_index);

std::vector<ViewingEvent> generate_synthetic_events(const SyntheticSpec& spec);
ViewMatrix generate_synthetic(const SyntheticSpec& spec);

/// Pairwise co-membership F1 of `found` against `truth` (both per node).
double co_membership_f1(std::span<const std::size_t> truth, std::span<const std::size_t> found);

}  // namespace vidrec
