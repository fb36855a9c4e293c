#pragma once

#include "dtflow/exactlin.hpp"
#include "dtflow/rng.hpp"
#include "dtflow/tropical.hpp"

#include <vector>

namespace dtflow {

// Independent cokernel oracle: naive Euclidean column echelonization of the
// generators followed by a BFS count of residue classes. Shares no code with
// the Smith normal form path. Throws BruteForceOverflowError beyond 10^4
// classes.
Int brute_cokernel(const IntMatrix& map, const std::vector<IntVec>& relations);

// Classically known DT invariant of the m-Kronecker quiver at dimension
// (1, k) in the nonempty chamber: the binomial coefficient C(m, k).
Int kronecker_known(unsigned m, unsigned k);

// Random valid trivalent face for property tests: 2 <= d <= max_d ambient
// dimension, 2 <= r <= max_r legs, part entries in [-2, 2], skew form
// entries in [-3, 3]. Resamples until face_is_valid accepts.
FaceType random_face(SplitMix64& rng, size_t max_d, size_t max_r);

}  // namespace dtflow
