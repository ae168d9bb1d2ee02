#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "vidrec/ids.hpp"
#include "vidrec/ingest.hpp"

namespace vidrec {

/// Per-user similarity of two films, or "not comparable" when the user gives
/// no evidence either way (watched neither, or watched both at 0%).
class DualSimilarity {
 public:
  static DualSimilarity not_comparable() noexcept { return DualSimilarity(); }
  static DualSimilarity of(double v) noexcept { return DualSimilarity(v); }

  bool comparable() const noexcept { return comparable_; }
  double value() const noexcept { return value_; }
  /// Value with -1 standing in for "not comparable".
  double sentinel_value() const noexcept { return comparable_ ? value_ : -1.0; }

  bool operator==(const DualSimilarity&) const = default;

 private:
  DualSimilarity() = default;
  explicit DualSimilarity(double v) : comparable_(true), value_(v) {}

  bool comparable_ = false;
  double value_ = 0.0;
};

/// DS = 2 min(a, b) / (a + b); an absent side counts as 0. Throws Domain on
/// arguments outside [0,1].
DualSimilarity dual_similarity(std::optional<double> a, std::optional<double> b);

enum class AveragingPolicy {
  ComparableCount,  // divide by the number of users with a comparable DS
  AllUsers,         // divide by the total user count
};

const char* to_string(AveragingPolicy p) noexcept;
AveragingPolicy parse_averaging_policy(std::string_view s);

class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(std::vector<FilmId> films, std::vector<double> values);

  const std::vector<FilmId>& films() const noexcept { return films_; }
  std::size_t size() const noexcept { return films_.size(); }
  double at(std::size_t i, std::size_t j) const { return values_[i * films_.size() + j]; }
  const std::vector<double>& values() const noexcept { return values_; }

  bool operator==(const SimilarityMatrix&) const = default;

 private:
  friend SimilarityMatrix average_similarity(const ViewMatrix&, AveragingPolicy, unsigned);
  std::vector<FilmId> films_;
  std::vector<double> values_;  // row-major, symmetric
};

/// Averages DS over users for every film pair. Summation runs in ascending
/// user order per pair, so the result is bit-identical for any `threads`.
SimilarityMatrix average_similarity(const ViewMatrix& view,
                                    AveragingPolicy policy = AveragingPolicy::ComparableCount,
                                    unsigned threads = 1);

/// Writes every (film_i <= film_j, user) DS value as CSV with -1 for
/// "not comparable".
void write_similarity_tensor(std::ostream& out, const ViewMatrix& view);

}  // namespace vidrec
