#pragma once

#include <string>
#include <string_view>

namespace vidrec {

using FilmId = std::string;
using UserId = std::string;

// Identifier ordering: two all-digit ids compare by numeric value, any
// all-digit id sorts before a non-numeric one, and everything else compares
// lexicographically. Numeric ties ("007" vs "7") fall back to lexicographic.
bool id_less(std::string_view a, std::string_view b) noexcept;

struct IdLess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const noexcept {
    return id_less(a, b);
  }
};

}  // namespace vidrec
