#include "vidrec/similarity.hpp"

#include <algorithm>
#include <string>
#include <thread>

#include "vidrec/error.hpp"
#include "vidrec/pipeline.hpp"

namespace vidrec {

namespace {

void check_fraction(std::optional<double> v) {
  if (v && !(*v >= 0.0 && *v <= 1.0)) {
    throw Error(ErrorKind::Domain, "viewing percentage outside [0,1]");
  }
}

// Sum and count of comparable DS values for one film pair, users ascending.
struct PairSum {
  double sum = 0.0;
  std::size_t comparable = 0;
};

PairSum pair_sum(std::span<const ViewEntry> a, std::span<const ViewEntry> b) {
  PairSum acc;
  auto add = [&acc](std::optional<double> x, std::optional<double> y) {
    const auto ds = dual_similarity(x, y);
    if (ds.comparable()) {
      acc.sum += ds.value();
      ++acc.comparable;
    }
  };
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
      add(a[i++].pct, std::nullopt);
    } else if (i == a.size() || b[j].index < a[i].index) {
      add(std::nullopt, b[j++].pct);
    } else {
      add(a[i++].pct, b[j++].pct);
    }
  }
  return acc;
}

}  // namespace

DualSimilarity dual_similarity(std::optional<double> a, std::optional<double> b) {
  check_fraction(a);
  check_fraction(b);
  if (!a && !b) return DualSimilarity::not_comparable();
  if (!a || !b) return DualSimilarity::of(0.0);
  const double sum = *a + *b;
  if (sum == 0.0) return DualSimilarity::not_comparable();
  return DualSimilarity::of(2.0 * std::min(*a, *b) / sum);
}

const char* to_string(AveragingPolicy p) noexcept {
  return p == AveragingPolicy::AllUsers ? "all_users" : "comparable_count";
}

AveragingPolicy parse_averaging_policy(std::string_view s) {
  if (s == "comparable_count") return AveragingPolicy::ComparableCount;
  if (s == "all_users") return AveragingPolicy::AllUsers;
  throw Error(ErrorKind::Domain, "unknown averaging policy '" + std::string(s) + "'");
}

SimilarityMatrix::SimilarityMatrix(std::vector<FilmId> films, std::vector<double> values)
    : films_(std::move(films)), values_(std::move(values)) {
  const auto n = films_.size();
  if (values_.size() != n * n) throw Error(ErrorKind::Data, "similarity matrix is not square");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = values_[i * n + j];
      if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::Data, "similarity outside [0,1]");
      if (v != values_[j * n + i]) throw Error(ErrorKind::Data, "similarity matrix not symmetric");
    }
  }
}

SimilarityMatrix average_similarity(const ViewMatrix& view, AveragingPolicy policy,
                                    unsigned threads) {
  const std::size_t n = view.film_count();
  if (n == 0 || view.user_count() == 0) throw Error(ErrorKind::Data, "empty view matrix");

  SimilarityMatrix out;
  out.films_ = view.films();
  out.values_.assign(n * n, 0.0);
  const double all_users = static_cast<double>(view.user_count());

  auto fill_row = [&](std::size_t i) {
    out.values_[i * n + i] = view.film_row(i).empty() ? 0.0 : 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto acc = pair_sum(view.film_row(i), view.film_row(j));
      double as = 0.0;
      if (acc.comparable > 0) {
        as = acc.sum / (policy == AveragingPolicy::AllUsers ? all_users
                                                            : static_cast<double>(acc.comparable));
      }
      out.values_[i * n + j] = as;
      out.values_[j * n + i] = as;
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fill_row(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) fill_row(i);
      });
    }
  }
  return out;
}

void write_similarity_tensor(std::ostream& out, const ViewMatrix& view) {
  out << "film_i,film_j,user,ds\n";
  const auto& films = view.films();
  const auto& users = view.users();
  for (std::size_t i = 0; i < films.size(); ++i) {
    for (std::size_t j = i; j < films.size(); ++j) {
      for (std::size_t u = 0; u < users.size(); ++u) {
        const auto ds = dual_similarity(view.pct(i, u), view.pct(j, u));
        out << films[i] << ',' << films[j] << ',' << users[u] << ','
            << format_double(ds.sentinel_value()) << '\n';
      }
    }
  }
}

}  // namespace vidrec
