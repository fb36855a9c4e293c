#include "dtflow/svg.hpp"
#include "dtflow/quiver.hpp"

#include <sstream>

namespace dtflow {

namespace {

struct Pt {
    Rat x, y;
};

// round to nearest integer, exactly
long round_rat(const Rat& v) {
    Int num = 2 * numerator(v) + denominator(v);
    Int den = 2 * denominator(v);
    Int q = num / den;
    if (num < 0 && num % den != 0) q -= 1;  // floor
    return static_cast<long>(q);
}

Pt project(const RatVec& pos) {
    return Pt{pos[0], pos.size() > 1 ? pos[1] : Rat(0)};
}

// unit-ish direction for a leg: entries divided by the largest magnitude
Pt leg_direction(const IntVec& u) {
    Int m = 0;
    Int ux = u[0];
    Int uy = u.size() > 1 ? u[1] : Int(0);
    m = abs_int(ux) > abs_int(uy) ? abs_int(ux) : abs_int(uy);
    if (m == 0) return Pt{Rat(1), Rat(1)};
    return Pt{Rat(ux, m), Rat(uy, m)};
}

}  // namespace

std::string render_svg(const std::vector<TreeF>& trees, const std::vector<DimVec>& parts,
                       const RatVec& theta, const SkewForm& omega) {
    const long panel = 400;
    const long margin = 30;
    std::ostringstream out;
    size_t n = trees.empty() ? 1 : trees.size();
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << panel * n
        << "\" height=\"" << panel << "\">\n";

    for (size_t t = 0; t < trees.size(); ++t) {
        const AttractorTree& h = trees[t].tree;

        std::vector<Pt> pts;
        pts.push_back(project(theta));
        for (const auto& node : h.nodes) pts.push_back(project(node.pos));
        std::vector<std::pair<size_t, Pt>> leg_ends;  // node index, endpoint
        for (size_t v = 0; v < h.nodes.size(); ++v) {
            for (int leg : h.nodes[v].legs) {
                IntVec u = contract(omega, parts[static_cast<size_t>(leg - 1)]);
                Pt dir = leg_direction(u);
                Pt base = project(h.nodes[v].pos);
                leg_ends.emplace_back(v, Pt{base.x + dir.x, base.y + dir.y});
            }
        }
        for (const auto& [v, p] : leg_ends) pts.push_back(p);

        Rat minx = pts[0].x, maxx = pts[0].x, miny = pts[0].y, maxy = pts[0].y;
        for (const auto& p : pts) {
            if (p.x < minx) minx = p.x;
            if (p.x > maxx) maxx = p.x;
            if (p.y < miny) miny = p.y;
            if (p.y > maxy) maxy = p.y;
        }
        Rat w = maxx - minx;
        Rat hgt = maxy - miny;
        if (w == 0) w = 1;
        if (hgt == 0) hgt = 1;
        Rat span = w > hgt ? w : hgt;
        Rat scale = Rat(panel - 2 * margin) / span;
        Rat offx = Rat(static_cast<long>(t) * panel + margin);

        auto px = [&](const Pt& p) {
            return round_rat(offx + (p.x - minx) * scale);
        };
        auto py = [&](const Pt& p) {
            return round_rat(Rat(panel - margin) - (p.y - miny) * scale);
        };

        out << "<g id=\"tree" << t << "\">\n";
        Pt root = project(theta);
        out << "<circle cx=\"" << px(root) << "\" cy=\"" << py(root)
            << "\" r=\"4\" fill=\"black\"/>\n";
        // root edge
        Pt top = project(h.nodes[0].pos);
        out << "<line x1=\"" << px(root) << "\" y1=\"" << py(root) << "\" x2=\""
            << px(top) << "\" y2=\"" << py(top) << "\" stroke=\"black\"/>\n";
        for (size_t v = 0; v < h.nodes.size(); ++v) {
            Pt a = project(h.nodes[v].pos);
            out << "<circle cx=\"" << px(a) << "\" cy=\"" << py(a)
                << "\" r=\"3\" fill=\"blue\"/>\n";
            for (int c : h.nodes[v].child_vertices) {
                Pt b = project(h.nodes[c].pos);
                out << "<line x1=\"" << px(a) << "\" y1=\"" << py(a) << "\" x2=\""
                    << px(b) << "\" y2=\"" << py(b) << "\" stroke=\"blue\"/>\n";
            }
        }
        size_t li = 0;
        for (size_t v = 0; v < h.nodes.size(); ++v) {
            for (int leg : h.nodes[v].legs) {
                Pt a = project(h.nodes[v].pos);
                Pt b = leg_ends[li++].second;
                out << "<line x1=\"" << px(a) << "\" y1=\"" << py(a) << "\" x2=\""
                    << px(b) << "\" y2=\"" << py(b)
                    << "\" stroke=\"red\" marker-end=\"url(#arrow)\"/>\n";
                out << "<text x=\"" << px(b) << "\" y=\"" << py(b)
                    << "\" font-size=\"12\">g" << leg << "</text>\n";
            }
        }
        out << "</g>\n";
    }
    out << "<defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" "
           "refY=\"3\" orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"red\"/>"
           "</marker></defs>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace dtflow
