#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ptcache {

enum class ErrorKind {
  ComponentTooLarge,
  OutOfSupport,
  UnsupportedGrouping,
  InvalidParams,
  EmptySelection,
  IncompatibleLocals,
  LengthMismatch,
  DegenerateSystem,
  InvalidRatio,
  PresetConstraintViolated,
  MemoryMismatch,
  DemandOutOfRange,
  UndecodableMessage,
  MissingPacket,
  DuplicateDelivery,
  EmptyRange,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for every contract violation in the library; callers
// dispatch on kind() when they need to distinguish failures.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ptcache
