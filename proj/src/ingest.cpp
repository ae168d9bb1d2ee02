#include "vidrec/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "vidrec/error.hpp"

namespace vidrec {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_number(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

constexpr std::array<const char*, 4> kColumns = {"film_id", "user_id", "watch_seconds",
                                                 "total_seconds"};

template <typename Ids>
std::vector<std::string> sorted_unique(Ids ids) {
  std::sort(ids.begin(), ids.end(), IdLess{});
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::size_t position(const std::vector<std::string>& sorted, std::string_view id) {
  return static_cast<std::size_t>(
      std::lower_bound(sorted.begin(), sorted.end(), id, IdLess{}) - sorted.begin());
}

}  // namespace

ParseResult parse_events(std::istream& in) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;

  std::array<std::size_t, kColumns.size()> column{};
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto header = split_csv(line);
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      const auto it = std::find(header.begin(), header.end(), kColumns[c]);
      if (it == header.end()) {
        throw Error(ErrorKind::Format,
                    "line " + std::to_string(line_no) + ": missing column '" + kColumns[c] + "'");
      }
      column[c] = static_cast<std::size_t>(it - header.begin());
    }
    have_header = true;
  }
  if (!have_header) throw Error(ErrorKind::Format, "empty input: no header row");

  const std::size_t needed = *std::max_element(column.begin(), column.end()) + 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    auto fail = [&](std::string msg) { result.errors.push_back({line_no, std::move(msg)}); };
    if (fields.size() < needed) {
      fail("expected at least " + std::to_string(needed) + " fields, got " +
           std::to_string(fields.size()));
      continue;
    }
    const auto film = fields[column[0]];
    const auto user = fields[column[1]];
    const auto watch = parse_number(fields[column[2]]);
    const auto total = parse_number(fields[column[3]]);
    if (film.empty() || user.empty()) {
      fail("empty identifier");
    } else if (!watch || !total) {
      fail("non-numeric duration");
    } else if (*total <= 0.0) {
      fail("total_seconds must be positive");
    } else if (*watch < 0.0) {
      fail("watch_seconds must be non-negative");
    } else {
      result.events.push_back({std::string(film), std::string(user), *watch, *total});
    }
  }
  return result;
}

ViewMatrix ViewMatrix::from_triplets(std::span<const Triplet> triplets,
                                     std::vector<FilmId> extra_films,
                                     std::vector<UserId> extra_users) {
  ViewMatrix m;
  std::vector<std::string> films = std::move(extra_films);
  std::vector<std::string> users = std::move(extra_users);
  films.reserve(films.size() + triplets.size());
  users.reserve(triplets.size());
  for (const auto& t : triplets) {
    if (!(t.pct >= 0.0 && t.pct <= 1.0)) {
      throw Error(ErrorKind::Domain, "viewing percentage outside [0,1] for film " + t.film +
                                         ", user " + t.user);
    }
    films.push_back(t.film);
    users.push_back(t.user);
  }
  m.films_ = sorted_unique(std::move(films));
  m.users_ = sorted_unique(std::move(users));

  std::map<std::pair<std::size_t, std::size_t>, double> cells;
  for (const auto& t : triplets) {
    const auto key = std::make_pair(position(m.films_, t.film), position(m.users_, t.user));
    auto [it, inserted] = cells.emplace(key, t.pct);
    if (!inserted) it->second = std::max(it->second, t.pct);
  }

  m.by_film_.resize(m.films_.size());
  m.by_user_.resize(m.users_.size());
  for (const auto& [key, pct] : cells) {
    m.by_film_[key.first].push_back({key.second, pct});
    m.by_user_[key.second].push_back({key.first, pct});
  }
  m.entries_ = cells.size();
  return m;
}

std::optional<double> ViewMatrix::pct(std::size_t film, std::size_t user) const {
  const auto& row = by_film_.at(film);
  const auto it = std::lower_bound(row.begin(), row.end(), user,
                                   [](const ViewEntry& e, std::size_t u) { return e.index < u; });
  if (it == row.end() || it->index != user) return std::nullopt;
  return it->pct;
}

std::optional<std::size_t> ViewMatrix::film_index(std::string_view id) const {
  const auto i = position(films_, id);
  if (i < films_.size() && films_[i] == id) return i;
  return std::nullopt;
}

std::optional<std::size_t> ViewMatrix::user_index(std::string_view id) const {
  const auto i = position(users_, id);
  if (i < users_.size() && users_[i] == id) return i;
  return std::nullopt;
}

ViewMatrix ViewMatrix::select_users(std::span<const std::size_t> users) const {
  std::vector<Triplet> triplets;
  std::vector<UserId> ids;
  for (const auto u : users) {
    ids.push_back(users_.at(u));
    for (const auto& e : by_user_[u]) triplets.push_back({films_[e.index], users_[u], e.pct});
  }
  return from_triplets(triplets, films_, std::move(ids));
}

bool ViewMatrix::operator==(const ViewMatrix& o) const {
  if (films_ != o.films_ || users_ != o.users_ || entries_ != o.entries_) return false;
  for (std::size_t f = 0; f < by_film_.size(); ++f) {
    const auto& a = by_film_[f];
    const auto& b = o.by_film_[f];
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].index != b[i].index || a[i].pct != b[i].pct) return false;
    }
  }
  return true;
}

ViewMatrix build_view_matrix(std::span<const ViewingEvent> events, bool clamp) {
  if (events.empty()) throw Error(ErrorKind::Data, "no viewing events");
  std::vector<ViewMatrix::Triplet> triplets;
  triplets.reserve(events.size());
  for (const auto& e : events) {
    if (!(e.total_seconds > 0.0)) {
      throw Error(ErrorKind::Data, "total_seconds must be positive (film " + e.film_id +
                                       ", user " + e.user_id + ")");
    }
    if (!(e.watch_seconds >= 0.0)) {
      throw Error(ErrorKind::Data, "watch_seconds must be non-negative (film " + e.film_id +
                                       ", user " + e.user_id + ")");
    }
    double pct = e.watch_seconds / e.total_seconds;
    if (pct > 1.0) {
      if (!clamp) {
        throw Error(ErrorKind::Data, "watched longer than total duration (film " + e.film_id +
                                         ", user " + e.user_id + ")");
      }
      pct = 1.0;
    }
    triplets.push_back({e.film_id, e.user_id, pct});
  }
  return ViewMatrix::from_triplets(triplets);
}

}  // namespace vidrec
