#include "permmap/errors.hpp"

#include <sstream>

namespace permmap {

namespace {

std::string describe_components(const std::string& prefix, const std::vector<std::size_t>& sizes) {
  std::ostringstream os;
  os << prefix << " (" << sizes.size() << " components, sizes";
  for (std::size_t i = 0; i < sizes.size(); ++i) os << (i == 0 ? " " : ", ") << sizes[i];
  os << ")";
  return os.str();
}

}  // namespace

IsolatedNodeError::IsolatedNodeError(std::string layer, std::size_t node)
    : ArgumentError("isolated node " + std::to_string(node) +
                    (layer.empty() ? std::string() : " in layer " + layer) +
                    ": row has no positive weight"),
      layer_(std::move(layer)),
      node_(node) {}

DisconnectedGraphError::DisconnectedGraphError(std::vector<std::size_t> component_sizes)
    : DisconnectedGraphError("graph is disconnected", std::move(component_sizes)) {}

DisconnectedGraphError::DisconnectedGraphError(std::string what,
                                               std::vector<std::size_t> component_sizes)
    : std::runtime_error(describe_components(what, component_sizes)),
      sizes_(std::move(component_sizes)) {}

SolverError::SolverError(const std::string& what, std::size_t iterations)
    : std::runtime_error(what + " after " + std::to_string(iterations) + " iterations"),
      iterations_(iterations) {}

}  // namespace permmap
