#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vidrec/ids.hpp"

namespace vidrec {

struct ViewingEvent {
  FilmId film_id;
  UserId user_id;
  double watch_seconds = 0.0;
  double total_seconds = 0.0;

  bool operator==(const ViewingEvent&) const = default;
};

struct RowError {
  std::size_t line = 0;  // 1-based, header is line 1
  std::string message;
};

struct ParseResult {
  std::vector<ViewingEvent> events;
  std::vector<RowError> errors;
};

/// Reads a CSV stream whose header names the columns film_id, user_id,
/// watch_seconds and total_seconds (any order, extra columns ignored).
/// A missing column throws ErrorKind::Format; bad rows are collected in
/// ParseResult::errors and skipped.
ParseResult parse_events(std::istream& in);

/// One stored (film, user) viewing percentage.
struct ViewEntry {
  std::size_t index = 0;  // user index in a film row, film index in a user row
  double pct = 0.0;
};

/// Sparse film x user matrix of viewing percentages in [0,1]. Films and users
/// are sorted by id_less; an absent entry means "never watched", which is
/// distinct from a stored 0.
class ViewMatrix {
 public:
  ViewMatrix() = default;

  struct Triplet {
    FilmId film;
    UserId user;
    double pct;
  };
  /// Builds from (film, user, pct) triplets; duplicate keys keep the max.
  /// The extra ids join the film/user lists even without entries. Throws
  /// Domain if any pct is outside [0,1].
  static ViewMatrix from_triplets(std::span<const Triplet> triplets,
                                  std::vector<FilmId> extra_films = {},
                                  std::vector<UserId> extra_users = {});

  const std::vector<FilmId>& films() const noexcept { return films_; }
  const std::vector<UserId>& users() const noexcept { return users_; }
  std::size_t film_count() const noexcept { return films_.size(); }
  std::size_t user_count() const noexcept { return users_.size(); }
  std::size_t entry_count() const noexcept { return entries_; }

  /// Watchers of a film, ascending user index.
  std::span<const ViewEntry> film_row(std::size_t film) const { return by_film_[film]; }
  /// Films watched by a user, ascending film index.
  std::span<const ViewEntry> user_row(std::size_t user) const { return by_user_[user]; }

  std::optional<double> pct(std::size_t film, std::size_t user) const;

  std::optional<std::size_t> film_index(std::string_view id) const;
  std::optional<std::size_t> user_index(std::string_view id) const;

  /// Keeps only the listed users (by index); the film list is kept whole.
  ViewMatrix select_users(std::span<const std::size_t> users) const;

  bool operator==(const ViewMatrix&) const;

 private:
  std::vector<FilmId> films_;
  std::vector<UserId> users_;
  std::vector<std::vector<ViewEntry>> by_film_;
  std::vector<std::vector<ViewEntry>> by_user_;
  std::size_t entries_ = 0;
};

/// pct = watch/total per event, max over duplicate (film, user) keys. Ratios
/// above 1 are clamped when `clamp` is set and rejected (Data) otherwise.
ViewMatrix build_view_matrix(std::span<const ViewingEvent> events, bool clamp = true);

}  // namespace vidrec
