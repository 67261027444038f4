#pragma once

#include "gffm/network.hpp"

namespace gffm {

/// Unit-conductance rows x cols grid approximating the rectangle
/// [0,1] x [0,R]: the two short sides (first and last column) are the
/// boundary blocks. `periodic_rows` glues the long sides into an annulus.
std::pair<Network, BoundarySpec> rectangle_grid(int rows, int cols, double boundary_value = 0.0,
                                                bool periodic_rows = false);

}  // namespace gffm
