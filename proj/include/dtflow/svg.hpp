#pragma once

#include "dtflow/dt.hpp"

#include <string>
#include <vector>

namespace dtflow {

// Deterministic SVG rendering of attractor flow trees: positions projected
// to the first two coordinates and affine-scaled exactly; rounding happens
// only when pixel coordinates are serialized (presentation-only).
std::string render_svg(const std::vector<TreeF>& trees, const std::vector<DimVec>& parts,
                       const RatVec& theta, const SkewForm& omega);

}  // namespace dtflow
