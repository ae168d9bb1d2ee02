#pragma once

#include <stdexcept>
#include <string>

namespace vidrec {

enum class ErrorKind {
  Format,   // structurally malformed input (missing CSV column, bad JSON)
  Data,     // well-formed input carrying invalid values
  Domain,   // argument outside its documented range
  Lookup,   // unknown film or user
  Version,  // artifact written by a newer format
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Runs `fn` and re-throws any vidrec::Error with `stage: ` prepended.
template <typename Fn>
decltype(auto) with_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(stage) + ": " + e.what());
  }
}

}  // namespace vidrec
