#include "vidrec/profile.hpp"

#include <algorithm>

#include "vidrec/error.hpp"

namespace vidrec {

PreferenceProfile build_profile(const ViewMatrix& view, std::size_t user, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorKind::Domain, "preference threshold must lie in (0,1)");
  }
  std::vector<ViewEntry> liked;
  std::vector<ViewEntry> rest;
  for (const auto& e : view.user_row(user)) (e.pct > threshold ? liked : rest).push_back(e);

  // Entries arrive in ascending film index, so stable sorts keep id order on ties.
  std::stable_sort(liked.begin(), liked.end(),
                   [](const ViewEntry& a, const ViewEntry& b) { return a.pct > b.pct; });
  std::stable_sort(rest.begin(), rest.end(),
                   [](const ViewEntry& a, const ViewEntry& b) { return a.pct < b.pct; });

  PreferenceProfile p;
  p.user_id = view.users()[user];
  for (const auto& e : liked) p.preferred.push_back(view.films()[e.index]);
  for (const auto& e : rest) p.non_preferred.push_back(view.films()[e.index]);
  return p;
}

std::vector<PreferenceProfile> build_profiles(const ViewMatrix& view, double threshold) {
  std::vector<PreferenceProfile> out;
  out.reserve(view.user_count());
  for (std::size_t u = 0; u < view.user_count(); ++u) out.push_back(build_profile(view, u, threshold));
  return out;
}

}  // namespace vidrec
