#pragma once

#include <vector>

#include "vidrec/ids.hpp"
#include "vidrec/ingest.hpp"

namespace vidrec {

struct PreferenceProfile {
  UserId user_id;
  std::vector<FilmId> preferred;      // pct descending, then film id
  std::vector<FilmId> non_preferred;  // pct ascending, then film id

  bool operator==(const PreferenceProfile&) const = default;
};

inline constexpr double kDefaultPreferenceThreshold = 0.5;

/// A watched film is preferred when pct > threshold (strict). Profiles are
/// returned in user order. Throws Domain unless 0 < threshold < 1.
std::vector<PreferenceProfile> build_profiles(const ViewMatrix& view,
                                              double threshold = kDefaultPreferenceThreshold);

PreferenceProfile build_profile(const ViewMatrix& view, std::size_t user,
                                double threshold = kDefaultPreferenceThreshold);

}  // namespace vidrec
