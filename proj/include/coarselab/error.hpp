#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "json.hpp"

namespace coarselab {

using PointId = std::uint32_t;
using PieceId = std::uint32_t;
using Json = nlohmann::ordered_json;

enum class ErrorKind {
  Index,
  EmptySpace,
  Size,
  Precondition,
  Data,
  Domain,
  Window,
  Numeric,
  Assignment,
  Arity,
  Truncation,
  Schema,
  Invariant,
  Io,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; `kind` selects the CLI exit code and
// `witness` carries whatever object demonstrates the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, Json witness = {})
      : std::runtime_error(message), kind_(kind), witness_(std::move(witness)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const Json& witness() const noexcept { return witness_; }

 private:
  ErrorKind kind_;
  Json witness_;
};

}  // namespace coarselab
