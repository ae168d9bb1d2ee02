#include "vidrec/ids.hpp"

#include <algorithm>

#include "vidrec/error.hpp"

namespace vidrec {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Format: return "format error";
    case ErrorKind::Data: return "data error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Lookup: return "lookup error";
    case ErrorKind::Version: return "version error";
    case ErrorKind::Io: return "io error";
  }
  return "error";
}

namespace {

bool all_digits(std::string_view s) noexcept {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string_view strip_zeros(std::string_view s) noexcept {
  const auto first = s.find_first_not_of('0');
  return first == std::string_view::npos ? std::string_view("0") : s.substr(first);
}

}  // namespace

bool id_less(std::string_view a, std::string_view b) noexcept {
  const bool na = all_digits(a);
  const bool nb = all_digits(b);
  if (na && nb) {
    const auto sa = strip_zeros(a);
    const auto sb = strip_zeros(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
    return a < b;
  }
  if (na != nb) return na;
  return a < b;
}

}  // namespace vidrec
