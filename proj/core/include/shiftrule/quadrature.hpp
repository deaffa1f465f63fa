// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#pragma once

#include <cstddef>
#include <vector>

namespace shiftrule {

/// Gauss-Legendre nodes and weights mapped to [0, 1].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [0, 1] (n >= 1).  Nodes are computed by
/// Newton iteration on the Legendre polynomial and are accurate to machine
/// precision.
Quadrature gauss_legendre_01(std::size_t n);

}  // namespace shiftrule
