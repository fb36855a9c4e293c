#pragma once

#include "dtflow/flowtree.hpp"
#include "dtflow/quiver.hpp"

#include <map>
#include <vector>

namespace dtflow {

// Attractor DT invariants Omega*_gamma; implicit 0 outside the support.
struct AttractorData {
    std::map<DimVec, Int> invariants;
};

// Omega-bar_gamma = sum_{gamma = k gamma'} ((-1)^{k-1} / k^2) Omega_{gamma'}.
Rat rational_from_integer(const std::map<DimVec, Int>& omega, const DimVec& gamma);

// Inversion of the formula above; needs Omega-bar on every divisor gamma/k.
// Throws NonIntegerResultError on an inconsistent family.
Int integer_from_rational(const std::map<DimVec, Rat>& omega_bar, const DimVec& gamma);

// F_r^theta(gamma_1, ..., gamma_r): 1 for r = 1, otherwise the sum of flow
// weights over valid perturbed binary topologies.
Int f_total(const SkewForm& omega, const std::vector<DimVec>& parts,
            const RatVec& theta, const PerturbationSpec& spec);

// F_{r,h}^theta grouped by attractor flow tree; values sum to f_total.
struct TreeF {
    AttractorTree tree;
    Int f = 0;
    std::vector<FlatTree> topologies;
};
std::vector<TreeF> f_per_tree(const SkewForm& omega, const std::vector<DimVec>& parts,
                              const RatVec& theta, const PerturbationSpec& spec);

struct Decomposition {
    std::vector<DimVec> parts;  // lexicographically sorted multiset representative
    Int f_value;
    Int aut;                 // |Aut| = prod of multiplicities factorial
    Rat attractor_product;   // prod Omega-bar*_{gamma_i}
    Rat contribution;        // f_value * attractor_product / aut
};

struct DTResult {
    DimVec gamma;
    RatVec theta;
    Rat omega_bar;
    Int omega;
    std::vector<Decomposition> breakdown;
};

// Reconstructs Omega-bar_gamma^theta from the attractor invariants and
// inverts to the integer DT invariant.
DTResult reconstruct_dt(const SkewForm& omega, const DimVec& gamma, const RatVec& theta,
                        const AttractorData& att, const PerturbationSpec& spec);

}  // namespace dtflow
