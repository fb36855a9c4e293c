#pragma once

#include "dtflow/numeric.hpp"
#include "dtflow/quiver.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dtflow {

// Leaf-labeled rooted tree below the univalent root. Leaves carry 1-based
// part indices; internal nodes of binary topologies have exactly two
// children.
struct TreeNode {
    int leaf = 0;  // 0 for internal nodes
    std::vector<TreeNode> children;

    bool is_leaf() const { return children.empty(); }
};

// Canonical recursive encoding; equality of encodings is labeled isomorphism.
std::string tree_encoding(const TreeNode& node);

// All leaf-labeled rooted binary trees with r leaves, (2r-3)!! of them.
std::vector<TreeNode> enumerate_binary_trees(size_t r);

// Tree flattened for flow runs: node 0 is the top vertex (the child of the
// root edge), every node caches the class gamma_E of the edge above it.
struct FlatTree {
    struct Node {
        int parent = -1;
        std::vector<int> children;
        int leaf = 0;  // 1-based part index, 0 for internal
        DimVec cls;
    };
    std::vector<Node> nodes;
    size_t leaf_count = 0;

    DimVec total_class() const { return nodes[0].cls; }
};

FlatTree flatten(const TreeNode& top, const std::vector<DimVec>& parts);

// Affine hyperplane constraints <x, gamma_i> = eps_i.
struct GammaConstraint {
    std::vector<Rat> eps;
    std::vector<DimVec> parts;
};

struct PerturbationSpec {
    uint64_t seed = 1;
    Rat scale = Rat(Int(1), Int(1) << 40);
    unsigned max_retries = 64;
};

enum class FlowMode { Perturbed, Limit };

enum class FlowStatus {
    Valid,
    Degenerate,          // omega vanishes at a vertex; contributes 0
    Invalid,             // negative flow parameter
    GenericityFailure,   // zero flow parameter in perturbed mode
};

struct FlowEmbedding {
    FlowStatus status = FlowStatus::Invalid;
    FlatTree tree;
    std::vector<RatVec> pos;  // per node, internal nodes only are meaningful
    std::vector<Rat> t;       // per node, parameter of the edge above it
    Int weight = 0;           // prod over vertices |omega(gamma_E1, gamma_E2)|
};

// Deterministic perturbation: eps_i = scale * eta_i with eta_i distinct odd
// integers from a splitmix64 stream, theta jittered tangentially at order
// scale^2 and corrected along a dual basis direction so that
// <theta_tilde, gamma> = sum eps_i exactly.
struct Perturbation {
    RatVec theta_tilde;
    GammaConstraint constraint;
};

Perturbation perturb(const SkewForm& omega, const RatVec& theta,
                     const std::vector<DimVec>& parts, const PerturbationSpec& spec);

// A-posteriori genericity check: parallel parts must get distinct affine
// hyperplanes.
bool constraint_is_generic(const GammaConstraint& c);

std::string flat_encoding(const FlatTree& tree);

// One discrete attractor flow run: walks from the root and solves each
// vertex position as the intersection of the flow half-line with the child
// constraint plane.
FlowEmbedding run_flow(const FlatTree& tree, const SkewForm& omega,
                       const RatVec& theta_tilde, const GammaConstraint& constraint,
                       FlowMode mode);

// Limit flow tree with zero-length edges contracted; vertices may have
// valence > 3.
struct AttractorTree {
    struct Node {
        std::vector<int> child_vertices;
        std::vector<int> legs;  // 1-based part indices
        RatVec pos;
        DimVec cls;  // class of the edge above this vertex
    };
    std::vector<Node> nodes;  // node 0 adjacent to the root
    RatVec root;
    std::string encoding;
};

struct NotSmallEnough {};  // limit flow had a negative parameter

// Contracts the epsilon = 0 flow of a topology that admitted a valid
// perturbed flow. Returns nothing when the perturbation was not small enough.
std::optional<AttractorTree> limit_tree(const FlatTree& tree, const SkewForm& omega,
                                        const RatVec& theta,
                                        const std::vector<DimVec>& parts);

struct AttractorTreeFiber {
    AttractorTree tree;
    std::vector<FlatTree> topologies;  // valid binary topologies in the fiber
    std::vector<Int> weights;
    Int total_weight = 0;
};

struct FlowScan {
    std::vector<AttractorTreeFiber> fibers;  // sorted by tree encoding
    uint64_t seed_used = 0;
    Rat scale_used;
};

// Full pipeline: perturb, filter binary topologies by valid perturbed flow,
// group by the limit tree. Retries with advanced seed (genericity failures)
// or halved scale (limits not small enough), and certifies the scale by
// requiring identical output under one further halving.
FlowScan enumerate_attractor_trees(const SkewForm& omega, const RatVec& theta,
                                   const std::vector<DimVec>& parts,
                                   const PerturbationSpec& spec);

}  // namespace dtflow
