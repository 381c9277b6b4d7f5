#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace permmap {

/// Precondition violated by a caller-supplied value.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Run configuration or column mapping is unusable.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A node has no incident weight, so no walk can leave it.
class IsolatedNodeError : public ArgumentError {
 public:
  IsolatedNodeError(std::string layer, std::size_t node);

  const std::string& layer() const noexcept { return layer_; }
  std::size_t node() const noexcept { return node_; }

 private:
  std::string layer_;
  std::size_t node_;
};

/// The graph splits into more than one connected component.
class DisconnectedGraphError : public std::runtime_error {
 public:
  explicit DisconnectedGraphError(std::vector<std::size_t> component_sizes);
  DisconnectedGraphError(std::string what, std::vector<std::size_t> component_sizes);

  const std::vector<std::size_t>& component_sizes() const noexcept { return sizes_; }

 private:
  std::vector<std::size_t> sizes_;
};

/// Iterative eigensolver gave up before reaching the residual tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::size_t iterations);

  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

/// Internal structures disagree with each other (e.g. a missing layer copy).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace permmap
