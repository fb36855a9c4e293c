#include "dtflow/dt.hpp"
#include "dtflow/errors.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace dtflow {

namespace {

Int factorial(size_t n) {
    Int out = 1;
    for (size_t k = 2; k <= n; ++k) out *= Int(k);
    return out;
}

DimVec scale_vec(const DimVec& v, const Int& k) {
    DimVec out = v;
    for (auto& x : out) x *= k;
    return out;
}

DimVec divide_vec(const DimVec& v, const Int& k) {
    DimVec out = v;
    for (auto& x : out) x /= k;
    return out;
}

}  // namespace

Rat rational_from_integer(const std::map<DimVec, Int>& omega, const DimVec& gamma) {
    if (is_zero(gamma)) throw InputError("gamma must be nonzero");
    Int c = divisibility(gamma);
    Rat out = 0;
    for (Int k = 1; k <= c; ++k) {
        if (c % k != 0) continue;
        auto it = omega.find(divide_vec(gamma, k));
        if (it == omega.end() || it->second == 0) continue;
        Rat term(it->second, k * k);
        out += (k % 2 == 1) ? term : -term;
    }
    return out;
}

Int integer_from_rational(const std::map<DimVec, Rat>& omega_bar, const DimVec& gamma) {
    if (is_zero(gamma)) throw InputError("gamma must be nonzero");
    std::function<Rat(const DimVec&)> rec = [&](const DimVec& g) -> Rat {
        auto it = omega_bar.find(g);
        if (it == omega_bar.end())
            throw InputError("omega_bar family missing a divisor of gamma");
        Rat out = it->second;
        Int c = divisibility(g);
        for (Int k = 2; k <= c; ++k) {
            if (c % k != 0) continue;
            Rat term = rec(divide_vec(g, k)) / Rat(k * k);
            out -= (k % 2 == 1) ? term : -term;
        }
        return out;
    };
    Rat result = rec(gamma);
    if (denominator(result) != 1)
        throw NonIntegerResultError("inversion of the rational DT family is not integral");
    return numerator(result);
}

Int f_total(const SkewForm& omega, const std::vector<DimVec>& parts,
            const RatVec& theta, const PerturbationSpec& spec) {
    if (parts.empty()) throw InputError("need at least one part");
    if (parts.size() == 1) return 1;
    FlowScan scan = enumerate_attractor_trees(omega, theta, parts, spec);
    Int out = 0;
    for (const auto& fiber : scan.fibers) out += fiber.total_weight;
    return out;
}

std::vector<TreeF> f_per_tree(const SkewForm& omega, const std::vector<DimVec>& parts,
                              const RatVec& theta, const PerturbationSpec& spec) {
    FlowScan scan = enumerate_attractor_trees(omega, theta, parts, spec);
    std::vector<TreeF> out;
    for (auto& fiber : scan.fibers)
        out.push_back(TreeF{std::move(fiber.tree), fiber.total_weight,
                            std::move(fiber.topologies)});
    return out;
}

namespace {

struct Reconstructor {
    const SkewForm& omega;
    const RatVec& theta;
    const AttractorData& att;
    const PerturbationSpec& spec;
    std::map<DimVec, Rat> memo;

    Rat omega_bar_star(const DimVec& g) { return rational_from_integer(att.invariants, g); }

    // candidates v <= bound with nonzero rational attractor invariant
    std::vector<std::pair<DimVec, Rat>> candidates(const DimVec& bound) {
        std::set<DimVec> seen;
        for (const auto& [s, val] : att.invariants) {
            if (val == 0) continue;
            for (Int k = 1;; ++k) {
                DimVec v = scale_vec(s, k);
                bool inside = true;
                for (size_t i = 0; i < v.size(); ++i)
                    if (v[i] > bound[i]) { inside = false; break; }
                if (!inside) break;
                seen.insert(std::move(v));
            }
        }
        std::vector<std::pair<DimVec, Rat>> out;
        for (const auto& v : seen) {
            Rat val = omega_bar_star(v);
            if (val != 0) out.emplace_back(v, val);
        }
        return out;  // std::set iteration is already lexicographic
    }

    Rat omega_bar_theta(const DimVec& g, std::vector<Decomposition>* ledger) {
        if (!ledger) {
            auto it = memo.find(g);
            if (it != memo.end()) return it->second;
        }
        if (is_zero(contract(omega, g))) {
            Rat val = omega_bar_star(g);
            if (ledger)
                ledger->push_back(Decomposition{{g}, 1, 1, val, val});
            memo[g] = val;
            return val;
        }
        auto cands = candidates(g);
        Rat total = 0;
        std::vector<size_t> counts(cands.size(), 0);
        std::function<void(size_t, DimVec)> dfs = [&](size_t i, DimVec remaining) {
            if (is_zero(remaining)) {
                std::vector<DimVec> parts;
                Int aut = 1;
                Rat product = 1;
                for (size_t j = 0; j < cands.size(); ++j) {
                    aut *= factorial(counts[j]);
                    for (size_t c = 0; c < counts[j]; ++c) {
                        parts.push_back(cands[j].first);
                        product *= cands[j].second;
                    }
                }
                if (parts.empty()) return;
                Int f;
                if (parts.size() == 1) {
                    f = 1;
                } else {
                    bool zero_contraction = false;
                    for (const auto& p : parts)
                        if (is_zero(contract(omega, p))) { zero_contraction = true; break; }
                    f = zero_contraction ? Int(0) : f_total(omega, parts, theta, spec);
                }
                Rat contribution = Rat(f) * product / Rat(aut);
                total += contribution;
                if (ledger)
                    ledger->push_back(
                        Decomposition{std::move(parts), f, aut, product, contribution});
                return;
            }
            if (i == cands.size()) return;
            DimVec rest = remaining;
            for (size_t mult = 0;; ++mult) {
                counts[i] = mult;
                dfs(i + 1, rest);
                bool fits = true;
                for (size_t k = 0; k < rest.size(); ++k) {
                    rest[k] -= cands[i].first[k];
                    if (rest[k] < 0) fits = false;
                }
                if (!fits) break;
            }
            counts[i] = 0;
        };
        dfs(0, g);
        memo[g] = total;
        return total;
    }
};

}  // namespace

DTResult reconstruct_dt(const SkewForm& omega, const DimVec& gamma, const RatVec& theta,
                        const AttractorData& att, const PerturbationSpec& spec) {
    if (is_zero(gamma)) throw InputError("gamma must be nonzero");
    if (gamma.size() != omega.dim() || theta.size() != omega.dim())
        throw InputError("dimension mismatch");
    if (pair(theta, gamma) != 0)
        throw InputError("stability parameter must pair to zero with gamma");
    for (const auto& [s, val] : att.invariants) {
        if (is_zero(s)) throw InputError("attractor support contains the zero vector");
        for (size_t i = 0; i < s.size(); ++i)
            if (s[i] < 0 || (val != 0 && s[i] > gamma[i]))
                throw InputError("attractor support outside the box [0, gamma]");
    }

    Reconstructor rec{omega, theta, att, spec, {}};
    DTResult out;
    out.gamma = gamma;
    out.theta = theta;
    out.omega_bar = rec.omega_bar_theta(gamma, &out.breakdown);

    std::map<DimVec, Rat> family;
    Int c = divisibility(gamma);
    for (Int k = 1; k <= c; ++k) {
        if (c % k != 0) continue;
        DimVec g = divide_vec(gamma, k);
        family[g] = (k == 1) ? out.omega_bar : rec.omega_bar_theta(g, nullptr);
    }
    out.omega = integer_from_rational(family, gamma);
    return out;
}

}  // namespace dtflow
