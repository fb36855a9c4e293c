#pragma once

#include "dtflow/exactlin.hpp"
#include "dtflow/numeric.hpp"

namespace dtflow {

// Dimension vectors live in N = Z^d, stability parameters and contractions
// in the dual lattice M (rational points of M for stability).
using DimVec = IntVec;
using Covector = RatVec;

struct Quiver {
    size_t vertex_count = 0;
    IntMatrix arrow_counts;  // a(i,j) = number of arrows i -> j, entries >= 0
};

// Antisymmetrized arrow-count pairing on N.
struct SkewForm {
    IntMatrix m;  // d x d, m(i,j) = a(i,j) - a(j,i)

    size_t dim() const { return m.rows; }

    // omega(gamma, gamma')
    Int eval(const DimVec& a, const DimVec& b) const;
};

SkewForm skew_form_from_quiver(const Quiver& q);

// Validates antisymmetry of a directly supplied form.
SkewForm skew_form_from_matrix(const IntMatrix& m);

// The contraction iota_gamma omega = omega(gamma, -), an integral covector.
// For the total class this is the attractor point.
IntVec contract(const SkewForm& omega, const DimVec& gamma);

// Standard duality pairing <theta, gamma>.
Rat pair(const Covector& theta, const DimVec& gamma);
Rat pair(const RatVec& theta, const RatVec& gamma);
Int pair(const IntVec& theta, const IntVec& gamma);

}  // namespace dtflow
