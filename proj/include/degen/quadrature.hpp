#pragma once

#include <vector>

namespace degen {

/// Nodes and weights of a one-dimensional quadrature rule.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

/// Gauss–Legendre rule with `order` nodes on (-1, 1), nodes ascending.
QuadratureRule gauss_legendre(int order);

}  // namespace degen
