#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace grw {

// Raised when a state violates the space-like graph condition
// |grad u|^2 < f(u)^2 (up to the configured guard margin).
struct NotSpacelikeError : std::runtime_error {
  explicit NotSpacelikeError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite state detected during time stepping.
struct BlowupError : std::runtime_error {
  explicit BlowupError(const std::string& what) : std::runtime_error(what) {}
};

// A configured pre-flight assumption check failed (upper barrier,
// timelike convergence).
struct AssumptionError : std::runtime_error {
  explicit AssumptionError(const std::string& what) : std::runtime_error(what) {}
};

// Operation applied to a mesh topology that does not support it.
struct WrongTopologyError : std::runtime_error {
  explicit WrongTopologyError(const std::string& what) : std::runtime_error(what) {}
};

// Checkpoint file failed magic/version/checksum validation.
struct CorruptCheckpointError : std::runtime_error {
  explicit CorruptCheckpointError(const std::string& what) : std::runtime_error(what) {}
};

// Configuration problems; carries every message found in one pass.
struct ConfigError : std::runtime_error {
  std::vector<std::string> messages;
  explicit ConfigError(std::vector<std::string> msgs)
      : std::runtime_error(msgs.empty() ? "configuration error" : msgs.front()),
        messages(std::move(msgs)) {}
  explicit ConfigError(const std::string& msg)
      : std::runtime_error(msg), messages{msg} {}
};

}  // namespace grw
