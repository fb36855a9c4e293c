#include "dtflow/json_io.hpp"
#include "dtflow/errors.hpp"

#include <fstream>
#include <functional>
#include <sstream>

namespace dtflow {

namespace {

const Int kJsonIntLimit = Int(1) << 53;

Int json_to_int(const Json& j) {
    if (j.is_number_integer()) return Int(j.get<int64_t>());
    if (j.is_string()) return Int(j.get<std::string>());
    throw InputError("expected an integer or integer string");
}

IntMatrix parse_matrix(const Json& j) {
    if (!j.is_array() || j.empty()) throw InputError("expected a nonempty matrix");
    size_t rows = j.size();
    size_t cols = j[0].size();
    IntMatrix m(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw InputError("ragged matrix rows");
        for (size_t k = 0; k < cols; ++k) m.at(i, k) = json_to_int(j[i][k]);
    }
    return m;
}

}  // namespace

Json int_to_json(const Int& x) {
    if (abs_int(x) < kJsonIntLimit) return Json(static_cast<int64_t>(x));
    return Json(x.str());
}

Json rat_to_json(const Rat& x) { return Json(rat_to_string(x)); }

Json int_vec_to_json(const IntVec& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(int_to_json(x));
    return out;
}

Json rat_vec_to_json(const RatVec& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(rat_to_json(x));
    return out;
}

SkewForm parse_quiver(const Json& j) {
    bool has_arrows = j.contains("arrows");
    bool has_form = j.contains("skew_form");
    if (has_arrows == has_form)
        throw InputError("quiver JSON needs exactly one of \"arrows\" or \"skew_form\"");
    if (has_form) return skew_form_from_matrix(parse_matrix(j["skew_form"]));
    IntMatrix a = parse_matrix(j["arrows"]);
    size_t d = a.rows;
    if (j.contains("vertices") && j["vertices"].size() != d)
        throw InputError("vertex label count does not match the arrow matrix");
    return skew_form_from_quiver(Quiver{d, std::move(a)});
}

AttractorData parse_attractor(const Json& j) {
    if (!j.contains("invariants") || !j["invariants"].is_array())
        throw InputError("attractor JSON needs an \"invariants\" array");
    AttractorData out;
    for (const auto& entry : j["invariants"]) {
        if (!entry.contains("gamma") || !entry.contains("omega_star"))
            throw InputError("attractor entry needs \"gamma\" and \"omega_star\"");
        DimVec g;
        for (const auto& x : entry["gamma"]) g.push_back(json_to_int(x));
        out.invariants[std::move(g)] = json_to_int(entry["omega_star"]);
    }
    return out;
}

FaceType parse_face(const Json& j) {
    if (!j.contains("tree") || !j.contains("parts") || !j.contains("skew_form"))
        throw InputError("face JSON needs \"tree\", \"parts\" and \"skew_form\"");
    std::vector<DimVec> parts;
    for (const auto& p : j["parts"]) {
        DimVec v;
        for (const auto& x : p) v.push_back(json_to_int(x));
        parts.push_back(std::move(v));
    }
    SkewForm omega = skew_form_from_matrix(parse_matrix(j["skew_form"]));

    std::function<TreeNode(const Json&)> build = [&](const Json& node) -> TreeNode {
        if (node.is_number_integer()) {
            int leaf = node.get<int>();
            if (leaf < 1 || static_cast<size_t>(leaf) > parts.size())
                throw InputError("leaf index out of range in face tree");
            return TreeNode{leaf, {}};
        }
        if (!node.is_array() || node.size() < 2)
            throw InputError("face tree nodes must be leaf indices or arrays of >= 2 children");
        TreeNode out;
        for (const auto& c : node) out.children.push_back(build(c));
        return out;
    };
    TreeNode top = build(j["tree"]);
    return face_from_flat_tree(flatten(top, parts), parts, omega);
}

IntVec parse_int_vec(const std::string& s) {
    IntVec out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(Int(tok));
        } catch (const std::exception&) {
            throw InputError("malformed integer vector: " + s);
        }
    }
    if (out.empty()) throw InputError("empty integer vector");
    return out;
}

RatVec parse_rat_vec(const std::string& s) {
    RatVec out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(rat_from_string(tok));
        } catch (const std::exception&) {
            throw InputError("malformed rational vector: " + s);
        }
    }
    if (out.empty()) throw InputError("empty rational vector");
    return out;
}

std::vector<DimVec> parse_parts(const std::string& s) {
    std::vector<DimVec> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ';')) out.push_back(parse_int_vec(tok));
    if (out.empty()) throw InputError("empty parts list");
    return out;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return j;
}

}  // namespace dtflow
