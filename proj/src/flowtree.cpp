#include "dtflow/flowtree.hpp"
#include "dtflow/errors.hpp"
#include "dtflow/rng.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <optional>

namespace dtflow {

std::string tree_encoding(const TreeNode& node) {
    if (node.is_leaf()) return "L" + std::to_string(node.leaf);
    std::vector<std::string> parts;
    parts.reserve(node.children.size());
    for (const auto& c : node.children) parts.push_back(tree_encoding(c));
    std::sort(parts.begin(), parts.end());
    std::string out = "(";
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ",";
        out += parts[i];
    }
    return out + ")";
}

namespace {

// insert leaf `label` at every edge position (every node, including the top)
void insert_everywhere(const TreeNode& tree, int label, std::vector<TreeNode>& out) {
    std::function<void(const TreeNode&, const std::function<TreeNode(TreeNode)>&)> walk =
        [&](const TreeNode& node, const std::function<TreeNode(TreeNode)>& rebuild) {
            TreeNode joined;
            joined.children.push_back(node);
            joined.children.push_back(TreeNode{label, {}});
            out.push_back(rebuild(std::move(joined)));
            for (size_t i = 0; i < node.children.size(); ++i) {
                auto rebuild_child = [&, i](TreeNode replaced) {
                    TreeNode copy = node;
                    copy.children[i] = std::move(replaced);
                    return rebuild(std::move(copy));
                };
                walk(node.children[i], rebuild_child);
            }
        };
    walk(tree, [](TreeNode t) { return t; });
}

}  // namespace

std::vector<TreeNode> enumerate_binary_trees(size_t r) {
    if (r == 0) throw InputError("need at least one leaf");
    std::vector<TreeNode> trees{TreeNode{1, {}}};
    for (size_t k = 2; k <= r; ++k) {
        std::vector<TreeNode> next;
        for (const auto& t : trees) insert_everywhere(t, static_cast<int>(k), next);
        trees = std::move(next);
    }
    return trees;
}

FlatTree flatten(const TreeNode& top, const std::vector<DimVec>& parts) {
    FlatTree out;
    out.leaf_count = parts.size();
    std::function<int(const TreeNode&, int)> build = [&](const TreeNode& node, int parent) {
        int idx = static_cast<int>(out.nodes.size());
        out.nodes.push_back(FlatTree::Node{parent, {}, node.leaf, {}});
        for (const auto& c : node.children) {
            int ci = build(c, idx);
            out.nodes[idx].children.push_back(ci);
        }
        return idx;
    };
    build(top, -1);
    // classes bottom-up
    for (size_t i = out.nodes.size(); i-- > 0;) {
        auto& n = out.nodes[i];
        if (n.leaf > 0) {
            n.cls = parts.at(static_cast<size_t>(n.leaf - 1));
        } else {
            n.cls = IntVec(parts[0].size(), Int(0));
            for (int c : n.children) n.cls = add(n.cls, out.nodes[c].cls);
        }
    }
    return out;
}

std::string flat_encoding(const FlatTree& tree) {
    std::function<std::string(int)> enc = [&](int v) -> std::string {
        const auto& n = tree.nodes[v];
        if (n.leaf > 0) return "L" + std::to_string(n.leaf);
        std::vector<std::string> parts;
        for (int c : n.children) parts.push_back(enc(c));
        std::sort(parts.begin(), parts.end());
        std::string out = "(";
        for (size_t i = 0; i < parts.size(); ++i) {
            if (i) out += ",";
            out += parts[i];
        }
        return out + ")";
    };
    return enc(0);
}

Perturbation perturb(const SkewForm& omega, const RatVec& theta,
                     const std::vector<DimVec>& parts, const PerturbationSpec& spec) {
    if (parts.empty()) throw InputError("need at least one part");
    size_t d = theta.size();
    DimVec gamma(d, Int(0));
    for (const auto& p : parts) {
        if (p.size() != d) throw InputError("part dimension mismatch");
        gamma = add(gamma, p);
        if (is_zero(contract(omega, p)))
            throw ZeroContractionError("part has zero contraction with the skew form");
    }
    if (is_zero(contract(omega, gamma)))
        throw ZeroContractionError("total class has zero contraction with the skew form");
    if (pair(theta, gamma) != 0)
        throw InputError("stability parameter must pair to zero with the total class");

    SplitMix64 rng(spec.seed);
    GammaConstraint constraint;
    constraint.parts = parts;
    Rat eps_sum = 0;
    for (size_t i = 0; i < parts.size(); ++i) {
        uint64_t eta = 2 * (rng.next() % (uint64_t(1) << 30)) + 1;  // odd, in [1, 2^31)
        Rat eps = spec.scale * Rat(Int(eta));
        constraint.eps.push_back(eps);
        eps_sum += eps;
    }

    // second-order tangential jitter in gamma^perp
    RatVec jitter(d);
    for (size_t k = 0; k < d; ++k) {
        int64_t raw = static_cast<int64_t>(rng.next() % (uint64_t(1) << 32)) -
                      (int64_t(1) << 31);
        jitter[k] = Rat(Int(raw));
    }
    Rat jg = 0, gg = 0;
    for (size_t k = 0; k < d; ++k) {
        jg += jitter[k] * Rat(gamma[k]);
        gg += Rat(gamma[k]) * Rat(gamma[k]);
    }
    RatVec theta_j = theta;
    Rat scale2 = spec.scale * spec.scale;
    for (size_t k = 0; k < d; ++k)
        theta_j[k] += scale2 * (jitter[k] - jg / gg * Rat(gamma[k]));

    // affine correction along the first dual basis direction hitting gamma
    size_t k0 = 0;
    while (gamma[k0] == 0) ++k0;
    RatVec theta_tilde = theta_j;
    theta_tilde[k0] += (eps_sum - pair(theta_j, gamma)) / Rat(gamma[k0]);

    return Perturbation{std::move(theta_tilde), std::move(constraint)};
}

bool constraint_is_generic(const GammaConstraint& c) {
    size_t r = c.parts.size();
    for (size_t i = 0; i < r; ++i) {
        for (size_t j = i + 1; j < r; ++j) {
            const DimVec& a = c.parts[i];
            const DimVec& b = c.parts[j];
            // parallel iff all 2x2 minors vanish
            bool parallel = true;
            for (size_t p = 0; p < a.size() && parallel; ++p)
                for (size_t q = p + 1; q < a.size(); ++q)
                    if (a[p] * b[q] - a[q] * b[p] != 0) { parallel = false; break; }
            if (!parallel) continue;
            size_t k = 0;
            while (a[k] == 0) ++k;
            Rat factor = Rat(b[k]) / Rat(a[k]);  // b = factor * a
            if (factor * c.eps[i] == c.eps[j]) return false;  // A_i == A_j
        }
    }
    return true;
}

FlowEmbedding run_flow(const FlatTree& tree, const SkewForm& omega,
                       const RatVec& theta_tilde, const GammaConstraint& constraint,
                       FlowMode mode) {
    size_t n = tree.nodes.size();
    FlowEmbedding out;
    out.tree = tree;
    out.pos.assign(n, {});
    out.t.assign(n, Rat(0));
    out.weight = 1;

    // constraint constant of the edge above each node
    std::vector<Rat> c(n, Rat(0));
    for (size_t i = n; i-- > 0;) {
        const auto& node = tree.nodes[i];
        if (node.leaf > 0) {
            c[i] = constraint.eps.at(static_cast<size_t>(node.leaf - 1));
        } else {
            c[i] = 0;
            for (int ch : node.children) c[i] += c[ch];
        }
    }

    std::function<FlowStatus(int, const RatVec&)> descend =
        [&](int v, const RatVec& parent_pos) -> FlowStatus {
        const auto& node = tree.nodes[v];
        if (node.leaf > 0) {
            // the parent vertex already sits on A_i
            assert(pair(parent_pos, node.cls) == c[v]);
            return FlowStatus::Valid;
        }
        assert(node.children.size() == 2);
        const DimVec& g1 = tree.nodes[node.children[0]].cls;
        const DimVec& g2 = tree.nodes[node.children[1]].cls;
        Int w = omega.eval(g1, g2);
        if (w == 0) return FlowStatus::Degenerate;
        // t solves <x + t iota_{gamma_E} omega, gamma_E1> = c_E1
        Int denom = omega.eval(node.cls, g1);  // = -omega(g1, g2)
        Rat tval = (c[node.children[0]] - pair(parent_pos, g1)) / Rat(denom);
        if (tval < 0) return FlowStatus::Invalid;
        if (tval == 0 && mode == FlowMode::Perturbed) return FlowStatus::GenericityFailure;
        IntVec iota = contract(omega, node.cls);
        RatVec x = parent_pos;
        for (size_t k = 0; k < x.size(); ++k) x[k] += tval * Rat(iota[k]);
        // both child constraints must hold exactly, and <x, gamma_E> is
        // constant along the edge
        assert(pair(x, g1) == c[node.children[0]]);
        assert(pair(x, g2) == c[node.children[1]]);
        assert(pair(x, node.cls) == pair(parent_pos, node.cls));
        out.t[v] = tval;
        out.pos[v] = x;
        out.weight *= abs_int(w);
        for (int ch : node.children) {
            FlowStatus s = descend(ch, x);
            if (s != FlowStatus::Valid) return s;
        }
        return FlowStatus::Valid;
    };

    if (tree.nodes[0].leaf > 0) {
        // single-leaf tree: nothing to solve
        out.status = pair(theta_tilde, tree.nodes[0].cls) == c[0] ? FlowStatus::Valid
                                                                  : FlowStatus::Invalid;
        return out;
    }
    out.status = descend(0, theta_tilde);
    if (out.status != FlowStatus::Valid) out.weight = 0;
    return out;
}

namespace {

std::string ratvec_to_string(const RatVec& v) {
    std::string out = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += rat_to_string(v[i]);
    }
    return out + ")";
}

std::string attractor_encoding(const AttractorTree& t, int v) {
    const auto& node = t.nodes[v];
    std::vector<std::string> tokens;
    for (int leg : node.legs) tokens.push_back("L" + std::to_string(leg));
    for (int c : node.child_vertices) tokens.push_back(attractor_encoding(t, c));
    std::sort(tokens.begin(), tokens.end());
    std::string out = "V" + ratvec_to_string(node.pos) + "[";
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ",";
        out += tokens[i];
    }
    return out + "]";
}

}  // namespace

std::optional<AttractorTree> limit_tree(const FlatTree& tree, const SkewForm& omega,
                                        const RatVec& theta,
                                        const std::vector<DimVec>& parts) {
    GammaConstraint zero_constraint{std::vector<Rat>(parts.size(), Rat(0)), parts};
    FlowEmbedding flow = run_flow(tree, omega, theta, zero_constraint, FlowMode::Limit);
    assert(flow.status != FlowStatus::Degenerate);  // filtered upstream
    if (flow.status != FlowStatus::Valid) return std::nullopt;

    size_t n = tree.nodes.size();
    // blob representative: walk up through zero-length internal edges
    std::vector<int> rep(n);
    for (size_t v = 0; v < n; ++v) {
        int r = static_cast<int>(v);
        if (tree.nodes[v].leaf == 0) {
            while (r != 0 && flow.t[r] == 0) r = tree.nodes[r].parent;
            // merging only happens into internal parents
            assert(tree.nodes[r].leaf == 0);
        }
        rep[v] = r;
    }
    // resolve chains
    for (size_t v = 0; v < n; ++v) {
        int r = rep[v];
        while (rep[r] != r) r = rep[r];
        rep[v] = r;
    }

    AttractorTree out;
    out.root = theta;
    std::map<int, int> vertex_id;
    for (size_t v = 0; v < n; ++v) {
        if (tree.nodes[v].leaf == 0 && rep[v] == static_cast<int>(v)) {
            vertex_id[static_cast<int>(v)] = static_cast<int>(out.nodes.size());
            out.nodes.push_back(AttractorTree::Node{{}, {}, flow.pos[v], tree.nodes[v].cls});
        }
    }
    for (size_t v = 0; v < n; ++v) {
        const auto& node = tree.nodes[v];
        if (node.leaf > 0) {
            out.nodes[vertex_id.at(rep[node.parent])].legs.push_back(node.leaf);
        } else if (v != 0 && rep[v] == static_cast<int>(v)) {
            int p = rep[node.parent];
            out.nodes[vertex_id.at(p)].child_vertices.push_back(vertex_id.at(static_cast<int>(v)));
            assert(flow.pos[v] != flow.pos[p] || flow.t[v] == 0);
        }
    }

    // merged positions must agree
    for (size_t v = 0; v < n; ++v)
        if (tree.nodes[v].leaf == 0 && rep[v] != static_cast<int>(v))
            assert(flow.pos[v] == flow.pos[rep[v]]);

    // every vertex needs an adjacent pair with nonvanishing omega
    for (size_t i = 0; i < out.nodes.size(); ++i) {
        const auto& node = out.nodes[i];
        std::vector<const DimVec*> adjacent;
        adjacent.push_back(&node.cls);  // parent edge (or the root edge for node 0)
        for (int leg : node.legs) adjacent.push_back(&parts[static_cast<size_t>(leg - 1)]);
        for (int c : node.child_vertices) adjacent.push_back(&out.nodes[c].cls);
        bool ok = false;
        for (size_t a = 0; a < adjacent.size() && !ok; ++a)
            for (size_t b = a + 1; b < adjacent.size(); ++b)
                if (omega.eval(*adjacent[a], *adjacent[b]) != 0) { ok = true; break; }
        if (!ok) return std::nullopt;
    }

    out.encoding = attractor_encoding(out, 0);
    return out;
}

namespace {

enum class ScanStatus { Ok, GenericityFailure, NotSmallEnough };

struct ScanResult {
    ScanStatus status = ScanStatus::Ok;
    std::vector<AttractorTreeFiber> fibers;
    std::vector<std::vector<size_t>> fiber_topology_indices;
};

ScanResult scan_once(const SkewForm& omega, const RatVec& theta,
                     const std::vector<DimVec>& parts,
                     const std::vector<FlatTree>& topologies, uint64_t seed,
                     const Rat& scale, unsigned max_retries) {
    ScanResult result;
    Perturbation p = perturb(omega, theta, parts, PerturbationSpec{seed, scale, max_retries});
    if (!constraint_is_generic(p.constraint)) {
        result.status = ScanStatus::GenericityFailure;
        return result;
    }
    std::map<std::string, size_t> by_encoding;
    for (size_t ti = 0; ti < topologies.size(); ++ti) {
        FlowEmbedding flow =
            run_flow(topologies[ti], omega, p.theta_tilde, p.constraint, FlowMode::Perturbed);
        if (flow.status == FlowStatus::GenericityFailure) {
            result.status = ScanStatus::GenericityFailure;
            return result;
        }
        if (flow.status != FlowStatus::Valid) continue;
        auto limit = limit_tree(topologies[ti], omega, theta, parts);
        if (!limit) {
            result.status = ScanStatus::NotSmallEnough;
            return result;
        }
        auto [it, inserted] = by_encoding.try_emplace(limit->encoding, result.fibers.size());
        if (inserted) {
            result.fibers.push_back(AttractorTreeFiber{*limit, {}, {}, 0});
            result.fiber_topology_indices.emplace_back();
        }
        auto& fiber = result.fibers[it->second];
        fiber.topologies.push_back(topologies[ti]);
        fiber.weights.push_back(flow.weight);
        fiber.total_weight += flow.weight;
        result.fiber_topology_indices[it->second].push_back(ti);
    }
    // canonical order: sort fibers by encoding
    std::vector<size_t> order(result.fibers.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return result.fibers[a].tree.encoding < result.fibers[b].tree.encoding;
    });
    ScanResult sorted;
    sorted.status = ScanStatus::Ok;
    for (size_t i : order) {
        sorted.fibers.push_back(std::move(result.fibers[i]));
        sorted.fiber_topology_indices.push_back(std::move(result.fiber_topology_indices[i]));
    }
    return sorted;
}

bool scans_equal(const ScanResult& a, const ScanResult& b) {
    if (a.fibers.size() != b.fibers.size()) return false;
    for (size_t i = 0; i < a.fibers.size(); ++i) {
        if (a.fibers[i].tree.encoding != b.fibers[i].tree.encoding) return false;
        if (a.fiber_topology_indices[i] != b.fiber_topology_indices[i]) return false;
        if (a.fibers[i].weights != b.fibers[i].weights) return false;
    }
    return true;
}

}  // namespace

FlowScan enumerate_attractor_trees(const SkewForm& omega, const RatVec& theta,
                                   const std::vector<DimVec>& parts,
                                   const PerturbationSpec& spec) {
    if (parts.size() < 2) throw InputError("need at least two parts");
    std::vector<TreeNode> raw = enumerate_binary_trees(parts.size());
    std::vector<FlatTree> topologies;
    topologies.reserve(raw.size());
    for (const auto& t : raw) topologies.push_back(flatten(t, parts));

    uint64_t seed = spec.seed;
    Rat scale = spec.scale;
    for (unsigned attempt = 0; attempt <= spec.max_retries; ++attempt) {
        ScanResult first =
            scan_once(omega, theta, parts, topologies, seed, scale, spec.max_retries);
        if (first.status == ScanStatus::GenericityFailure) {
            ++seed;
            continue;
        }
        if (first.status == ScanStatus::NotSmallEnough) {
            scale /= 2;
            continue;
        }
        // certificate: the output must be stable under one further halving
        ScanResult half =
            scan_once(omega, theta, parts, topologies, seed, scale / 2, spec.max_retries);
        if (half.status == ScanStatus::Ok && scans_equal(first, half)) {
            FlowScan out;
            out.fibers = std::move(first.fibers);
            out.seed_used = seed;
            out.scale_used = scale;
            return out;
        }
        if (half.status == ScanStatus::GenericityFailure) {
            ++seed;
        } else {
            scale /= 2;
        }
    }
    throw RetriesExhaustedError("no stable generic perturbation found within retry budget");
}

}  // namespace dtflow
