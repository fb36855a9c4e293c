#include "dtflow/tropical.hpp"
#include "dtflow/errors.hpp"

#include <cassert>

namespace dtflow {

namespace {

// classes of the two children edges/legs of a trivalent vertex
std::vector<const DimVec*> children_classes(const FaceType& face, int v) {
    std::vector<const DimVec*> out;
    for (int leg : face.vertices[v].legs)
        out.push_back(&face.parts[static_cast<size_t>(leg - 1)]);
    for (int c : face.vertices[v].child_vertices) out.push_back(&face.edge_class[c]);
    return out;
}

std::vector<int> parent_map(const FaceType& face) {
    std::vector<int> parent(face.vertices.size(), -1);
    for (size_t v = 0; v < face.vertices.size(); ++v)
        for (int c : face.vertices[v].child_vertices) parent[c] = static_cast<int>(v);
    return parent;
}

// Rows: d per internal edge (difference of endpoint blocks), then one per
// leg i given by x -> <x, gamma_i> / |gamma_i|. Relations: u_E in each edge
// block, making the edge rows land in M / Z u_E.
GluingSystem build_gluing_system(const FaceType& face) {
    size_t d = face.dim();
    size_t nv = face.vertices.size();
    size_t edges = nv - 1;
    size_t r = face.parts.size();
    std::vector<int> parent = parent_map(face);

    IntMatrix m(edges * d + r, nv * d);
    std::vector<IntVec> relations;
    for (size_t w = 1; w < nv; ++w) {
        size_t block = (w - 1) * d;
        for (size_t k = 0; k < d; ++k) {
            m.at(block + k, static_cast<size_t>(parent[w]) * d + k) = 1;
            m.at(block + k, w * d + k) -= 1;
        }
        if (!is_zero(face.u[w])) {
            IntVec rel(m.rows, Int(0));
            for (size_t k = 0; k < d; ++k) rel[block + k] = face.u[w][k];
            relations.push_back(std::move(rel));
        }
    }
    for (size_t v = 0; v < nv; ++v) {
        for (int leg : face.vertices[v].legs) {
            const DimVec& g = face.parts[static_cast<size_t>(leg - 1)];
            Int div = divisibility(g);
            size_t row = edges * d + static_cast<size_t>(leg - 1);
            for (size_t k = 0; k < d; ++k) m.at(row, v * d + k) = g[k] / div;
        }
    }
    return GluingSystem{std::move(m), std::move(relations)};
}

Sublattice projected_tangent(const FaceType& face, const Sublattice& tangent) {
    size_t d = face.dim();
    Sublattice p = Sublattice::zero(d);
    for (const auto& g : tangent.generators)
        p.generators.emplace_back(g.begin(), g.begin() + d);
    return p;
}

Int k_from_tangent(const FaceType& face, const Sublattice& tangent) {
    Sublattice p = projected_tangent(face, tangent);
    if (!p.generators.empty() && in_rational_span(p, face.u[0]))
        throw RankViolationError("u_{L_out} lies in the projected tangent space");
    p.generators.push_back(face.u[0]);
    return index_in_saturation(p);
}

std::pair<Sublattice, Sublattice> child_lattices(const FaceType& face, int v) {
    auto leg_lattice = [&](int leg) {
        return kernel_basis(
            IntMatrix::from_rows({face.parts[static_cast<size_t>(leg - 1)]}));
    };
    std::vector<Sublattice> ls;
    for (int leg : face.vertices[v].legs) ls.push_back(leg_lattice(leg));
    for (int c : face.vertices[v].child_vertices)
        ls.push_back(recursive_edge_lattice(face, c));
    if (ls.size() != 2) throw InputError("product formulas need a trivalent face");
    return {std::move(ls[0]), std::move(ls[1])};
}

}  // namespace

GluingSystem gluing_system(const FaceType& face) { return build_gluing_system(face); }

void refresh_face(FaceType& face) {
    size_t nv = face.vertices.size();
    size_t d = face.dim();
    face.edge_class.assign(nv, DimVec(d, Int(0)));
    face.u.assign(nv, IntVec());
    for (size_t v = nv; v-- > 0;) {
        DimVec cls(d, Int(0));
        for (int leg : face.vertices[v].legs)
            cls = add(cls, face.parts[static_cast<size_t>(leg - 1)]);
        for (int c : face.vertices[v].child_vertices) cls = add(cls, face.edge_class[c]);
        face.edge_class[v] = cls;
        face.u[v] = neg(contract(face.omega, cls));
    }
}

FaceType face_from_flat_tree(const FlatTree& tree, const std::vector<DimVec>& parts,
                             const SkewForm& omega) {
    FaceType face;
    face.parts = parts;
    face.omega = omega;
    face.trivalent = true;
    std::vector<int> vertex_id(tree.nodes.size(), -1);
    for (size_t i = 0; i < tree.nodes.size(); ++i) {
        if (tree.nodes[i].leaf > 0) continue;
        vertex_id[i] = static_cast<int>(face.vertices.size());
        face.vertices.emplace_back();
    }
    for (size_t i = 0; i < tree.nodes.size(); ++i) {
        const auto& n = tree.nodes[i];
        if (n.leaf > 0) continue;
        for (int c : n.children) {
            if (tree.nodes[c].leaf > 0)
                face.vertices[vertex_id[i]].legs.push_back(tree.nodes[c].leaf);
            else
                face.vertices[vertex_id[i]].child_vertices.push_back(vertex_id[c]);
        }
    }
    refresh_face(face);
    return face;
}

FaceType face_from_attractor_tree(const AttractorTree& tree,
                                  const std::vector<DimVec>& parts,
                                  const SkewForm& omega) {
    FaceType face;
    face.parts = parts;
    face.omega = omega;
    face.trivalent = true;
    for (const auto& n : tree.nodes) {
        face.vertices.push_back(FaceType::Vertex{n.child_vertices, n.legs});
        if (n.child_vertices.size() + n.legs.size() != 2) face.trivalent = false;
    }
    refresh_face(face);
    return face;
}

Sublattice gluing_kernel(const FaceType& face) {
    size_t d = face.dim();
    size_t domain = face.vertices.size() * d;
    GluingSystem gm = gluing_system(face);
    IntMatrix aug(gm.map.rows, gm.map.cols + gm.relations.size());
    for (size_t i = 0; i < gm.map.rows; ++i)
        for (size_t j = 0; j < gm.map.cols; ++j) aug.at(i, j) = gm.map.at(i, j);
    for (size_t j = 0; j < gm.relations.size(); ++j)
        for (size_t i = 0; i < gm.map.rows; ++i)
            aug.at(i, gm.map.cols + j) = gm.relations[j][i];
    Sublattice aug_kernel = kernel_basis(aug);
    // the relation columns have disjoint nonzero supports, so projecting the
    // kernel onto the domain block is injective and hits exactly T_sigma
    Sublattice tangent = Sublattice::zero(domain);
    for (const auto& g : aug_kernel.generators)
        tangent.generators.emplace_back(g.begin(), g.begin() + domain);
    return tangent;
}

GluingResult gluing_cokernel(const FaceType& face) {
    GluingSystem gm = gluing_system(face);
    Order n = quotient_cokernel_order(gm.map, gm.relations);
    if (!n.finite)
        throw InfiniteCokernelError("gluing map has infinite cokernel");
    return GluingResult{n.value, gluing_kernel(face)};
}

Int k_coefficient(const FaceType& face, const Sublattice& tangent) {
    return k_from_tangent(face, tangent);
}

Rat product_formula(const FaceType& face) {
    Rat out(divisibility(face.edge_class[0]));
    for (const auto& g : face.parts) out /= Rat(divisibility(g));
    for (size_t v = 0; v < face.vertices.size(); ++v) {
        auto ch = children_classes(face, static_cast<int>(v));
        if (ch.size() != 2) throw InputError("product formula needs a trivalent face");
        out *= Rat(abs_int(face.omega.eval(*ch[0], *ch[1])));
    }
    return out;
}

Sublattice recursive_edge_lattice(const FaceType& face, int vertex) {
    auto [l1, l2] = child_lattices(face, vertex);
    Sublattice out = lattice_intersection(l1, l2);
    out.generators.push_back(face.u[vertex]);
    return out;
}

Order n_trop_product(const FaceType& face) {
    Order out{true, 1};
    for (size_t v = 0; v < face.vertices.size(); ++v) {
        auto [l1, l2] = child_lattices(face, static_cast<int>(v));
        Order factor = lattice_sum_index(l1, l2);
        if (!factor.finite) return Order::infinite();
        out.value *= factor.value;
    }
    return out;
}

Order psi_product(const FaceType& face) {
    Order out{true, 1};
    for (size_t v = 0; v < face.vertices.size(); ++v) {
        auto [l1, l2] = child_lattices(face, static_cast<int>(v));
        Int coarse = index_in_saturation(lattice_sum(l1, l2));
        Int fine = index_in_saturation(lattice_sum(saturate(l1), saturate(l2)));
        assert(coarse % fine == 0);
        out.value *= coarse / fine;
    }
    return out;
}

Order psi_cokernel(const FaceType& face) {
    size_t d = face.dim();
    size_t nv = face.vertices.size();
    if (nv == 1) return Order{true, 1};  // empty codomain
    std::vector<int> parent = parent_map(face);

    // Lambda_{j_v} = intersection of the children orthogonals
    std::vector<Sublattice> jv(nv);
    for (size_t v = 0; v < nv; ++v) {
        std::vector<IntVec> rows;
        for (const DimVec* g : children_classes(face, static_cast<int>(v)))
            rows.push_back(*g);
        jv[v] = kernel_basis(IntMatrix::from_rows(rows));
    }
    // Lambda_{d_E} = gamma_E^perp for each internal edge (child vertex w)
    std::vector<IntMatrix> edge_basis(nv);
    std::vector<size_t> edge_row_offset(nv, 0);
    size_t total_rows = 0;
    for (size_t w = 1; w < nv; ++w) {
        Sublattice b = kernel_basis(IntMatrix::from_rows({face.edge_class[w]}));
        edge_basis[w] = IntMatrix::from_columns(d, b.generators);
        edge_row_offset[w] = total_rows;
        total_rows += b.generators.size();
    }

    size_t total_cols = nv - 1;  // one ell_E column per edge
    for (const auto& b : jv) total_cols += b.generators.size();

    IntMatrix m(total_rows, total_cols);
    // a vector of gamma_E^perp has integer coordinates in the saturated basis
    auto emit = [&](size_t w, const IntVec& vec, size_t col, Int sign) {
        RatVec rhs(d);
        for (size_t k = 0; k < d; ++k) rhs[k] = Rat(vec[k]);
        auto coords = solve_rational(edge_basis[w], rhs);
        assert(coords.has_value());
        for (size_t k = 0; k < coords->size(); ++k) {
            assert(denominator((*coords)[k]) == 1);
            m.at(edge_row_offset[w] + k, col) += sign * numerator((*coords)[k]);
        }
    };

    size_t col = 0;
    for (size_t v = 0; v < nv; ++v) {
        for (const auto& g : jv[v].generators) {
            for (size_t w = 1; w < nv; ++w) {
                if (static_cast<size_t>(parent[w]) == v) emit(w, g, col, 1);
                if (w == v) emit(w, g, col, -1);
            }
            ++col;
        }
    }
    for (size_t w = 1; w < nv; ++w) {
        emit(w, face.u[w], col, 1);
        ++col;
    }
    return cokernel_order(m);
}

bool face_is_valid(const FaceType& face) {
    size_t d = face.dim();
    if (d < 2 || face.vertices.empty() || face.parts.empty()) return false;
    try {
        for (const auto& g : face.parts) {
            if (is_zero(g)) return false;
            if (is_zero(contract(face.omega, g))) return false;
        }
        for (size_t v = 0; v < face.vertices.size(); ++v) {
            if (is_zero(face.edge_class[v]) || is_zero(face.u[v])) return false;
            auto ch = children_classes(face, static_cast<int>(v));
            if (face.trivalent && ch.size() != 2) return false;
            if (ch.size() < 2) return false;
            bool nonzero_pair = false;
            for (size_t a = 0; a < ch.size() && !nonzero_pair; ++a)
                for (size_t b = a + 1; b < ch.size(); ++b)
                    if (face.omega.eval(*ch[a], *ch[b]) != 0) { nonzero_pair = true; break; }
            if (!nonzero_pair) return false;
            if (face.trivalent && face.omega.eval(*ch[0], *ch[1]) == 0) return false;
        }
        GluingResult gr = gluing_cokernel(face);
        if (lattice_rank(gr.tangent) != d - 2) return false;
        Sublattice p = projected_tangent(face, gr.tangent);
        if (!p.generators.empty() && in_rational_span(p, face.u[0])) return false;
    } catch (const std::runtime_error&) {
        return false;
    }
    return true;
}

LogGW log_gw(const AttractorTree& h, const std::vector<FaceType>& fibers,
             const std::vector<DimVec>& parts, const SkewForm& omega) {
    FaceType rho = face_from_attractor_tree(h, parts, omega);
    Sublattice t_rho = gluing_kernel(rho);
    if (lattice_rank(t_rho) != rho.dim() - 2)
        throw RankViolationError("contracted type has tangent rank != d-2");
    Int k_rho = k_from_tangent(rho, t_rho);
    Rat total = 0;
    for (const auto& sigma : fibers) {
        GluingResult gr = gluing_cokernel(sigma);
        total += Rat(k_coefficient(sigma, gr.tangent) * gr.n_trop);
    }
    return LogGW{total / Rat(k_rho), k_rho};
}

}  // namespace dtflow
