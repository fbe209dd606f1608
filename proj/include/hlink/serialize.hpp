#pragma once

// JSON wire formats and DOT export.  Exports are deterministic: arcs go out
// in lexicographic order, keys in fixed insertion order, so a byte-level
// diff of two runs is meaningful.
//
//   digraph      {"n": 5, "arcs": [[0,1],[2,4]]}          0-based, loop-free
//   instance     {"digraph": ..., "pattern": {"verts": 2, "arcs": [[0,1]]},
//                 "f": [3,0], "lengths": [4], "alpha": 0.3, "beta": 0.25}
//   subdivision  {"routes": [[3,1,2,4,0]], "cycles": [false]}

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "hlink/digraph.hpp"
#include "hlink/linkage.hpp"

namespace hlink {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
inline const Json& need(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw ParseError(std::string("missing key \"") + key + "\"");
    return j.at(key);
}

inline int need_int(const Json& j, const char* what) {
    if (!j.is_number_integer())
        throw ParseError(std::string(what) + " must be an integer");
    return j.get<int>();
}

inline std::vector<Arc> need_arc_list(const Json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
    std::vector<Arc> arcs;
    arcs.reserve(j.size());
    for (const auto& a : j) {
        if (!a.is_array() || a.size() != 2)
            throw ParseError(std::string(what) + " entries must be [tail, head] pairs");
        arcs.emplace_back(need_int(a[0], what), need_int(a[1], what));
    }
    return arcs;
}
}  // namespace detail

inline Json digraph_to_json(const Digraph& d) {
    Json j;
    j["n"] = d.order();
    Json arcs = Json::array();
    for (auto [u, v] : d.arcs()) arcs.push_back(Json::array({u, v}));
    j["arcs"] = arcs;
    return j;
}

inline Digraph digraph_from_json(const Json& j) {
    int n = detail::need_int(detail::need(j, "n"), "n");
    auto arcs = detail::need_arc_list(detail::need(j, "arcs"), "arcs");
    try {
        return Digraph(n, arcs);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

inline Json instance_to_json(const Instance& inst) {
    Json j;
    j["digraph"] = digraph_to_json(inst.d);
    Json pat;
    pat["verts"] = inst.h.verts;
    Json parcs = Json::array();
    for (auto [t, h] : inst.h.arcs) parcs.push_back(Json::array({t, h}));
    pat["arcs"] = parcs;
    j["pattern"] = pat;
    j["f"] = inst.f;
    j["lengths"] = inst.lengths;
    j["alpha"] = inst.alpha;
    j["beta"] = inst.beta;
    return j;
}

inline Instance instance_from_json(const Json& j) {
    Instance inst;
    inst.d = digraph_from_json(detail::need(j, "digraph"));
    const Json& pat = detail::need(j, "pattern");
    inst.h.verts = detail::need_int(detail::need(pat, "verts"), "pattern.verts");
    inst.h.arcs = detail::need_arc_list(detail::need(pat, "arcs"), "pattern.arcs");
    const Json& f = detail::need(j, "f");
    if (!f.is_array()) throw ParseError("f must be an array");
    for (const auto& v : f) inst.f.push_back(detail::need_int(v, "f"));
    const Json& lens = detail::need(j, "lengths");
    if (!lens.is_array()) throw ParseError("lengths must be an array");
    for (const auto& v : lens) inst.lengths.push_back(detail::need_int(v, "lengths"));
    if (j.contains("alpha")) {
        if (!j.at("alpha").is_number()) throw ParseError("alpha must be a number");
        inst.alpha = j.at("alpha").get<double>();
    }
    if (j.contains("beta")) {
        if (!j.at("beta").is_number()) throw ParseError("beta must be a number");
        inst.beta = j.at("beta").get<double>();
    }
    return inst;
}

inline Json subdivision_to_json(const Subdivision& sub) {
    Json j;
    Json routes = Json::array();
    Json cycles = Json::array();
    for (const auto& p : sub.routes) {
        routes.push_back(p.verts);
        cycles.push_back(p.is_cycle);
    }
    j["routes"] = routes;
    j["cycles"] = cycles;
    return j;
}

inline Subdivision subdivision_from_json(const Json& j) {
    Subdivision sub;
    const Json& routes = detail::need(j, "routes");
    if (!routes.is_array()) throw ParseError("routes must be an array");
    for (const auto& r : routes) {
        if (!r.is_array()) throw ParseError("each route must be an array");
        Path p;
        for (const auto& v : r) p.verts.push_back(detail::need_int(v, "route vertex"));
        sub.routes.push_back(std::move(p));
    }
    if (j.contains("cycles")) {
        const Json& cyc = j.at("cycles");
        if (!cyc.is_array() || cyc.size() != sub.routes.size())
            throw ParseError("cycles must be an array matching routes");
        for (std::size_t i = 0; i < sub.routes.size(); ++i) {
            if (!cyc[i].is_boolean()) throw ParseError("cycles entries must be booleans");
            sub.routes[i].is_cycle = cyc[i].get<bool>();
        }
    }
    return sub;
}

inline std::string digraph_to_dot(const Digraph& d, const std::string& name = "D") {
    std::ostringstream out;
    out << "digraph " << name << " {\n";
    for (int v = 0; v < d.order(); ++v) out << "  " << v << ";\n";
    for (auto [u, v] : d.arcs()) out << "  " << u << " -> " << v << ";\n";
    out << "}\n";
    return out.str();
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

inline void save_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

inline void save_json_file(const std::string& path, const Json& j) {
    save_text_file(path, j.dump(2) + "\n");
}

}  // namespace hlink
