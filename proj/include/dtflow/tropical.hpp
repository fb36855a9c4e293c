#pragma once

#include "dtflow/exactlin.hpp"
#include "dtflow/flowtree.hpp"
#include "dtflow/quiver.hpp"

#include <string>
#include <vector>

namespace dtflow {

// Combinatorial type of a tropical face: rooted tree with vertices, legs
// carrying the constrained classes gamma_i, and the outgoing leg L_out above
// vertex 0. Every non-root vertex v determines the internal edge between v
// and its parent; edge data is indexed by the child vertex.
struct FaceType {
    struct Vertex {
        std::vector<int> child_vertices;
        std::vector<int> legs;  // 1-based part indices
    };
    std::vector<Vertex> vertices;  // vertex 0 adjacent to L_out
    std::vector<DimVec> parts;
    SkewForm omega;
    bool trivalent = true;

    // derived, filled by the constructors below
    std::vector<DimVec> edge_class;  // class of the edge above each vertex (L_out for 0)
    std::vector<IntVec> u;           // u_E = -iota_{gamma_E} omega for that edge

    size_t dim() const { return omega.dim(); }
};

FaceType face_from_flat_tree(const FlatTree& tree, const std::vector<DimVec>& parts,
                             const SkewForm& omega);
FaceType face_from_attractor_tree(const AttractorTree& tree,
                                  const std::vector<DimVec>& parts,
                                  const SkewForm& omega);
// Recompute edge classes and directions from the combinatorial data.
void refresh_face(FaceType& face);

// Structural validity for the lattice pipeline: nonzero classes, nonzero
// edge directions, nonvanishing omega on each pair of children classes,
// finite gluing cokernel, tangent rank d-2, u_{L_out} outside the projected
// tangent span. Returns false instead of throwing.
bool face_is_valid(const FaceType& face);

struct GluingResult {
    Int n_trop;          // |coker gl_sigma|
    Sublattice tangent;  // T_sigma inside prod_v M = Z^{|V| d}
};

// The integer matrix of gl_sigma together with the torsion relations u_E,
// exposed so independent oracles can recount the cokernel.
struct GluingSystem {
    IntMatrix map;
    std::vector<IntVec> relations;
};
GluingSystem gluing_system(const FaceType& face);

// Kernel of the gluing map regardless of cokernel finiteness.
Sublattice gluing_kernel(const FaceType& face);

// Tropical multiplicity and tangent space; throws InfiniteCokernelError when
// the face is not (d-2)-dimensional for a general constraint.
GluingResult gluing_cokernel(const FaceType& face);

// k_sigma = |L^sat / L| for L = p(T_sigma) + Z u_{L_out}, p the projection to
// the vertex adjacent to L_out. Throws RankViolationError when u_{L_out}
// lies in the rational span of p(T_sigma).
Int k_coefficient(const FaceType& face, const Sublattice& tangent);

// (|gamma| / prod |gamma_i|) * prod_v |omega(gamma_{E1,v}, gamma_{E2,v})|,
// equal to k_sigma * N_sigma^trop for valid trivalent faces.
Rat product_formula(const FaceType& face);

// The recursive child lattice of the edge above `vertex`:
// L = (L_1 cap L_2) + Z u_E, with leg lattices gamma_i^perp at the base.
Sublattice recursive_edge_lattice(const FaceType& face, int vertex);

// N_sigma^trop as the per-vertex product prod_v |M / (L_{1,v} + L_{2,v})|.
Order n_trop_product(const FaceType& face);

// |coker Psi_sigma| from the matrix of Psi in kernel bases of the tangent
// lattices Lambda_{j_v} and Lambda_{d_E}.
Order psi_cokernel(const FaceType& face);

// The per-vertex product prod_v |(L_1^sat + L_2^sat) / (L_1 + L_2)|.
Order psi_product(const FaceType& face);

struct LogGW {
    Rat n_toric;
    Int k_rho;
};

// k_rho from the contracted type and N_toric = (sum_sigma k_sigma N_sigma) / k_rho.
LogGW log_gw(const AttractorTree& h, const std::vector<FaceType>& fibers,
             const std::vector<DimVec>& parts, const SkewForm& omega);

}  // namespace dtflow
