#include "dtflow/oracle.hpp"
#include "dtflow/errors.hpp"

#include <deque>
#include <map>
#include <set>

namespace dtflow {

namespace {

constexpr size_t kBruteLimit = 10000;

// Column echelonization by plain repeated Euclidean subtraction. Kept
// deliberately separate from the Smith normal form implementation.
std::vector<IntVec> echelon_generators(std::vector<IntVec> gens, size_t rows) {
    std::vector<IntVec> pivots(rows);
    std::vector<bool> has_pivot(rows, false);
    for (size_t i = 0; i < rows; ++i) {
        for (;;) {
            size_t best = gens.size();
            for (size_t j = 0; j < gens.size(); ++j) {
                if (gens[j][i] == 0) continue;
                if (best == gens.size() ||
                    abs_int(gens[j][i]) < abs_int(gens[best][i]))
                    best = j;
            }
            if (best == gens.size()) break;
            bool reduced_any = false;
            for (size_t j = 0; j < gens.size(); ++j) {
                if (j == best || gens[j][i] == 0) continue;
                Int q = gens[j][i] / gens[best][i];  // truncated is fine here
                if (q != 0)
                    for (size_t k = 0; k < rows; ++k) gens[j][k] -= q * gens[best][k];
                if (gens[j][i] != 0) reduced_any = true;
            }
            if (!reduced_any) {
                pivots[i] = gens[best];
                has_pivot[i] = true;
                if (pivots[i][i] < 0)
                    for (auto& x : pivots[i]) x = -x;
                gens.erase(gens.begin() + static_cast<long>(best));
                break;
            }
        }
    }
    std::vector<IntVec> out;
    for (size_t i = 0; i < rows; ++i)
        if (has_pivot[i]) out.push_back(pivots[i]);
    return out;
}

IntVec canonical_residue(IntVec x, const std::vector<IntVec>& pivots, size_t rows) {
    for (const auto& p : pivots) {
        size_t i = 0;
        while (p[i] == 0) ++i;
        Int q = x[i] / p[i];
        if (x[i] < 0 && x[i] % p[i] != 0) q -= 1;  // floor division
        if (q != 0)
            for (size_t k = i; k < rows; ++k) x[k] -= q * p[k];
    }
    return x;
}

}  // namespace

Int brute_cokernel(const IntMatrix& map, const std::vector<IntVec>& relations) {
    size_t rows = map.rows;
    std::vector<IntVec> gens;
    for (size_t j = 0; j < map.cols; ++j) gens.push_back(map.column(j));
    for (const auto& r : relations) {
        if (r.size() != rows) throw InputError("relation dimension mismatch");
        gens.push_back(r);
    }
    std::vector<IntVec> pivots = echelon_generators(std::move(gens), rows);

    std::set<IntVec> seen;
    std::deque<IntVec> queue;
    IntVec zero(rows, Int(0));
    seen.insert(zero);
    queue.push_back(zero);
    while (!queue.empty()) {
        IntVec cur = queue.front();
        queue.pop_front();
        for (size_t j = 0; j < rows; ++j) {
            for (int sign : {1, -1}) {
                IntVec next = cur;
                next[j] += sign;
                next = canonical_residue(std::move(next), pivots, rows);
                if (seen.insert(next).second) {
                    if (seen.size() > kBruteLimit)
                        throw BruteForceOverflowError(
                            "residue class count exceeds the brute-force bound");
                    queue.push_back(std::move(next));
                }
            }
        }
    }
    return Int(seen.size());
}

Int kronecker_known(unsigned m, unsigned k) {
    if (k > m || m > 6) throw InputError("kronecker_known requires 0 <= k <= m <= 6");
    Int num = 1, den = 1;
    for (unsigned i = 1; i <= k; ++i) {
        num *= Int(m - i + 1);
        den *= Int(i);
    }
    return num / den;
}

FaceType random_face(SplitMix64& rng, size_t max_d, size_t max_r) {
    for (;;) {
        size_t d = 2 + rng.next() % (max_d - 1);
        size_t r = 2 + rng.next() % (max_r - 1);

        std::vector<DimVec> parts;
        for (size_t i = 0; i < r; ++i) {
            DimVec p(d);
            do {
                for (size_t k = 0; k < d; ++k)
                    p[k] = Int(static_cast<long>(rng.next() % 5)) - 2;
            } while (is_zero(p));
            parts.push_back(std::move(p));
        }

        IntMatrix w(d, d);
        for (size_t i = 0; i < d; ++i)
            for (size_t j = i + 1; j < d; ++j) {
                Int e = Int(static_cast<long>(rng.next() % 7)) - 3;
                w.at(i, j) = e;
                w.at(j, i) = -e;
            }
        SkewForm omega{std::move(w)};

        // random binary topology: repeatedly join two random subtrees
        std::vector<TreeNode> pool;
        for (size_t i = 0; i < r; ++i)
            pool.push_back(TreeNode{static_cast<int>(i + 1), {}});
        while (pool.size() > 1) {
            size_t a = rng.next() % pool.size();
            std::swap(pool[a], pool.back());
            TreeNode left = std::move(pool.back());
            pool.pop_back();
            size_t b = rng.next() % pool.size();
            TreeNode joined;
            joined.children.push_back(std::move(left));
            joined.children.push_back(std::move(pool[b]));
            pool[b] = std::move(joined);
        }

        FaceType face = face_from_flat_tree(flatten(pool[0], parts), parts, omega);
        if (face_is_valid(face)) return face;
    }
}

}  // namespace dtflow
