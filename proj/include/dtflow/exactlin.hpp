#pragma once

#include "dtflow/numeric.hpp"

#include <optional>
#include <vector>

namespace dtflow {

// Dense integer matrix, row-major. A map Z^cols -> Z^rows whose columns are
// the images of the standard basis vectors.
struct IntMatrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<Int> entries;  // rows * cols

    IntMatrix() = default;
    IntMatrix(size_t r, size_t c) : rows(r), cols(c), entries(r * c) {}

    Int& at(size_t i, size_t j) { return entries[i * cols + j]; }
    const Int& at(size_t i, size_t j) const { return entries[i * cols + j]; }

    static IntMatrix identity(size_t n);
    static IntMatrix from_columns(size_t ambient, const std::vector<IntVec>& columns);
    static IntMatrix from_rows(const std::vector<IntVec>& rows_in);

    IntVec column(size_t j) const;
    IntVec apply(const IntVec& x) const;  // matrix * vector
    bool operator==(const IntMatrix& other) const = default;
};

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);

// Order of a (possibly infinite) abelian group.
struct Order {
    bool finite = true;
    Int value = 1;  // meaningful only when finite

    static Order infinite() { return Order{false, 0}; }
    bool operator==(const Order& other) const {
        if (finite != other.finite) return false;
        return !finite || value == other.value;
    }
};

// Sublattice of Z^ambient_rank given by a (not necessarily independent)
// generating set.
struct Sublattice {
    size_t ambient_rank = 0;
    std::vector<IntVec> generators;

    static Sublattice zero(size_t ambient) { return Sublattice{ambient, {}}; }
};

// U * m * V = diag(diagonal), U and V unimodular, d_i | d_{i+1}, d_i >= 0.
struct SmithForm {
    IntMatrix left;       // U, rows x rows
    IntMatrix left_inv;   // U^{-1}
    IntMatrix right;      // V, cols x cols
    std::vector<Int> diagonal;  // length min(rows, cols)
    size_t rank = 0;      // number of nonzero diagonal entries
};

SmithForm smith_normal_form(const IntMatrix& m);

// |Z^rows / im(m)|; infinite when rank(m) < rows.
Order cokernel_order(const IntMatrix& m);

// Basis of the saturated integer kernel {x in Z^cols : m x = 0}.
Sublattice kernel_basis(const IntMatrix& m);

// L^sat = (L tensor Q) intersect Z^n, returned as a basis.
Sublattice saturate(const Sublattice& s);

// |L^sat / L|; throws ZeroLatticeError on the zero lattice.
Int index_in_saturation(const Sublattice& s);

// |Z^n / (A + B)|; infinite when A + B has rank < n.
Order lattice_sum_index(const Sublattice& a, const Sublattice& b);

Sublattice lattice_sum(const Sublattice& a, const Sublattice& b);
Sublattice lattice_intersection(const Sublattice& a, const Sublattice& b);

// gcd of entries; throws ZeroVectorError on the zero vector.
Int divisibility(const IntVec& v);

// |Z^rows / (im(map) + span(relations))|. Handles torsion quotients like
// M / Z u with u imprimitive by augmenting the matrix with the relations.
Order quotient_cokernel_order(const IntMatrix& map, const std::vector<IntVec>& relations);

size_t lattice_rank(const Sublattice& s);

// Canonical (column-style Hermite) basis; sublattice equality is equality
// of these bases.
std::vector<IntVec> hermite_basis(const Sublattice& s);
bool lattice_equal(const Sublattice& a, const Sublattice& b);

bool in_rational_span(const Sublattice& s, const IntVec& v);

// Exact Gaussian elimination over Q; empty when the system is inconsistent.
std::optional<RatVec> solve_rational(const IntMatrix& a, const RatVec& b);

}  // namespace dtflow
