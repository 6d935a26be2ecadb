#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace acnet {

enum class ErrorKind {
  // validation (exit code 1)
  Config,
  Parse,
  UnassignableDate,
  UndefinedSimilarity,
  Domain,
  UndefinedModularity,
  Lookup,
  InsufficientSample,
  UndefinedCorrelation,
  InsufficientData,
  NoRetainedComponents,
  MissingPrerequisite,
  // I/O (exit code 2)
  Io,
  // internal invariant breach (exit code 3)
  Invariant,
};

std::string_view to_string(ErrorKind kind);

/// Process exit code for an error category: 1 validation, 2 I/O, 3 invariant.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Accumulates non-fatal diagnostics; the run manifest echoes them.
struct Warnings {
  std::vector<std::string> items;

  void add(std::string message) { items.push_back(std::move(message)); }
  bool empty() const { return items.empty(); }
};

}  // namespace acnet
