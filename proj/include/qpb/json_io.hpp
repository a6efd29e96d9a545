#pragma once

// JSON formats shared by the CLI and the file interfaces. Coefficients are
// exact fraction strings ("3/4"); words are arrays of generator names with an
// optional "^-1" suffix; the empty path at idempotent s is the singleton
// ["e<label>"].

#include "qpb/catalog.hpp"
#include "qpb/rep.hpp"

#include <json.hpp>

namespace qpb {

using json = nlohmann::json;

// --- words and elements -------------------------------------------------------

inline json word_to_json(const AlgebraSpec& A, const Word& w) {
    json arr = json::array();
    if (w.is_unit()) {
        arr.push_back("e" + A.base.idempotents[static_cast<std::size_t>(w.unit)]);
        return arr;
    }
    for (const auto& a : w.atoms)
        arr.push_back(A.generators[a.gen].name + (a.inv ? "^-1" : ""));
    return arr;
}

inline Word word_from_json(const AlgebraSpec& A, const json& arr) {
    if (!arr.is_array() || arr.empty())
        throw StructuralError("a word must be a nonempty array of symbol names");
    auto token = [&](const std::string& t) -> Atom {
        std::string name = t;
        bool inv = false;
        if (name.size() > 3 && name.substr(name.size() - 3) == "^-1") {
            inv = true;
            name = name.substr(0, name.size() - 3);
        }
        if (auto g = A.find_gen(name)) return Atom{*g, inv};
        throw StructuralError("unknown symbol in word: " + t);
    };
    if (arr.size() == 1) {
        std::string t = arr[0].get<std::string>();
        if (!A.find_gen(t) && t.size() > 1 && t[0] == 'e') {
            if (auto s = A.find_idem(t.substr(1))) return Word::idem(*s);
        }
    }
    Word w;
    for (const auto& item : arr) w.atoms.push_back(token(item.get<std::string>()));
    return w;
}

inline json poly_to_json(const AlgebraSpec& A, const NCPoly& p) {
    json arr = json::array();
    for (const auto& [w, c] : p.terms)
        arr.push_back(json{{"coeff", rat_str(c)}, {"word", word_to_json(A, w)}});
    return arr;
}

inline NCPoly poly_from_json(const AlgebraSpec& A, const json& arr) {
    NCPoly p;
    for (const auto& item : arr) {
        Rat c = parse_rat(item.at("coeff").get<std::string>());
        p += nc_scale(c, normalize(word_from_json(A, item.at("word")), A));
    }
    return p;
}

inline json tensor_to_json(const AlgebraSpec& A, const Tensor2& t) {
    json arr = json::array();
    for (const auto& [k, c] : t.terms)
        arr.push_back(json{{"coeff", rat_str(c)},
                           {"w1", word_to_json(A, k.first)},
                           {"w2", word_to_json(A, k.second)}});
    return arr;
}

inline Tensor2 tensor_from_json(const AlgebraSpec& A, const json& arr) {
    Tensor2 t;
    for (const auto& item : arr) {
        Rat c = parse_rat(item.at("coeff").get<std::string>());
        t += t2_of(normalize(word_from_json(A, item.at("w1")), A),
                   normalize(word_from_json(A, item.at("w2")), A), c);
    }
    return t;
}

inline json tensor3_to_json(const AlgebraSpec& A, const Tensor3& t) {
    json arr = json::array();
    for (const auto& [k, c] : t.terms)
        arr.push_back(json{{"coeff", rat_str(c)},
                           {"w1", word_to_json(A, k[0])},
                           {"w2", word_to_json(A, k[1])},
                           {"w3", word_to_json(A, k[2])}});
    return arr;
}

// --- algebras -------------------------------------------------------------------

inline json algebra_to_json(const AlgebraSpec& A) {
    json gens = json::array();
    for (const auto& d : A.generators) {
        json g{{"name", d.name},
               {"tail", A.base.idempotents[d.tail]},
               {"head", A.base.idempotents[d.head]}};
        switch (d.kind) {
        case GenKind::Plain: g["kind"] = "plain"; break;
        case GenKind::Nilpotent: g["kind"] = json{{"nilpotent", d.order}}; break;
        case GenKind::Invertible:
            g["kind"] = d.order == 0 ? json("invertible") : json{{"invertible", d.order}};
            break;
        case GenKind::FormalInverse:
            g["kind"] = json{{"formal_inverse", poly_to_json(A, d.defining)}};
            break;
        }
        gens.push_back(g);
    }
    return json{{"idempotents", A.base.idempotents}, {"generators", gens}};
}

inline AlgebraSpec algebra_from_json(const json& j) {
    AlgebraSpec A;
    for (const auto& s : j.at("idempotents")) A.base.idempotents.push_back(s.get<std::string>());
    // first pass declares names and endpoints so defining elements can refer
    // to any generator
    for (const auto& g : j.at("generators")) {
        GeneratorDecl d;
        d.name = g.at("name").get<std::string>();
        d.tail = A.idem_index(g.at("tail").get<std::string>());
        d.head = A.idem_index(g.at("head").get<std::string>());
        const json& kind = g.at("kind");
        if (kind.is_string()) {
            std::string k = kind.get<std::string>();
            if (k == "plain")
                d.kind = GenKind::Plain;
            else if (k == "invertible")
                d.kind = GenKind::Invertible;
            else
                throw StructuralError("unknown generator kind: " + k);
        } else if (kind.contains("nilpotent")) {
            d.kind = GenKind::Nilpotent;
            d.order = kind.at("nilpotent").get<int>();
        } else if (kind.contains("invertible")) {
            d.kind = GenKind::Invertible;
            d.order = kind.at("invertible").get<int>();
        } else if (kind.contains("formal_inverse")) {
            d.kind = GenKind::FormalInverse;
        } else {
            throw StructuralError("unknown generator kind");
        }
        A.generators.push_back(d);
    }
    std::size_t idx = 0;
    for (const auto& g : j.at("generators")) {
        const json& kind = g.at("kind");
        if (kind.is_object() && kind.contains("formal_inverse"))
            A.generators[idx].defining = poly_from_json(A, kind.at("formal_inverse"));
        ++idx;
    }
    validate_algebra(A);
    return A;
}

// --- brackets and moment maps ------------------------------------------------------

inline json bracket_to_json(const DoubleBracketSpec& br) {
    json pairs = json::array();
    for (const auto& [k, v] : br.values)
        pairs.push_back(json{{"left", br.algebra.generators[k.first].name},
                             {"right", br.algebra.generators[k.second].name},
                             {"value", tensor_to_json(br.algebra, v)}});
    return json{{"pairs", pairs}};
}

inline DoubleBracketSpec bracket_from_json(const AlgebraSpec& A, const json& j) {
    DoubleBracketSpec br;
    br.algebra = A;
    for (const auto& p : j.at("pairs")) {
        std::uint32_t g = A.gen_index(p.at("left").get<std::string>());
        std::uint32_t h = A.gen_index(p.at("right").get<std::string>());
        br.values[{g, h}] = tensor_from_json(A, p.at("value"));
    }
    // fill missing orientations by cyclic antisymmetry; stored orientations
    // are kept verbatim so that inconsistent tables reach the checker
    auto stored = br.values;
    for (const auto& [k, v] : stored) {
        auto op = std::make_pair(k.second, k.first);
        if (!br.values.count(op)) br.values[op] = t2_scale(Rat(-1), flip(v));
    }
    validate_bracket_typing(br);
    return br;
}

inline json moment_map_to_json(const AlgebraSpec& A, const MomentMapSpec& mm) {
    json comps = json::object();
    for (const auto& [s, phi] : mm.components)
        comps[A.base.idempotents[s]] = poly_to_json(A, phi);
    return json{{"components", comps}};
}

inline MomentMapSpec moment_map_from_json(const AlgebraSpec& A, const json& j) {
    MomentMapSpec mm;
    for (const auto& [label, val] : j.at("components").items())
        mm.components[A.idem_index(label)] = poly_from_json(A, val);
    validate_moment_map(A, mm);
    return mm;
}

// --- bundles -------------------------------------------------------------------------

inline json bundle_to_json(const CatalogBundle& b) {
    json j{{"algebra", algebra_to_json(b.algebra)}, {"bracket", bracket_to_json(b.bracket)}};
    if (b.moment_map) j["moment_map"] = moment_map_to_json(b.algebra, *b.moment_map);
    return j;
}

inline CatalogBundle bundle_from_json(const json& j) {
    CatalogBundle b;
    b.algebra = algebra_from_json(j.at("algebra"));
    b.bracket = bracket_from_json(b.algebra, j.at("bracket"));
    if (j.contains("moment_map"))
        b.moment_map = moment_map_from_json(b.algebra, j.at("moment_map"));
    return b;
}

// --- parameters and reports -------------------------------------------------------------

inline FamilyParams params_from_json(const json& j) {
    FamilyParams p;
    auto rat = [&](const char* k) -> std::optional<Rat> {
        if (!j.contains(k)) return std::nullopt;
        if (j.at(k).is_number_integer()) return Rat(j.at(k).get<long>());
        return parse_rat(j.at(k).get<std::string>());
    };
    p.lambda = rat("lambda");
    p.mu = rat("mu");
    p.nu = rat("nu");
    p.l = rat("l");
    p.m = rat("m");
    p.n = rat("n");
    p.gamma = rat("gamma");
    p.phi = rat("phi");
    p.alpha = rat("alpha");
    p.alpha2 = rat("alpha2");
    p.gamma0 = rat("gamma0");
    p.gamma1 = rat("gamma1");
    if (j.contains("delta")) p.delta = j.at("delta").get<int>();
    if (j.contains("case")) p.case_tag = j.at("case").get<std::string>();
    if (j.contains("with_moment_map")) p.with_moment_map = j.at("with_moment_map").get<bool>();
    return p;
}

inline json report_to_json(const CheckReport& rep) {
    json ws = json::array();
    for (const auto& w : rep.witnesses)
        ws.push_back(json{{"input", w.input}, {"residual", w.residual}});
    return json{{"passed", rep.passed()}, {"checked", rep.checked}, {"witnesses", ws}};
}

inline DimVector dim_from_string(const AlgebraSpec& A, const std::string& s) {
    DimVector dim;
    dim.alpha.assign(A.num_idem(), 0);
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        std::string part = s.substr(pos, comma - pos);
        std::size_t colon = part.find(':');
        if (colon == std::string::npos)
            throw ParameterError("dimension entries look like label:size");
        std::uint32_t idx = A.idem_index(part.substr(0, colon));
        int val = std::stoi(part.substr(colon + 1));
        if (val < 1) throw ParameterError("dimension entries must be >= 1");
        dim.alpha[idx] = static_cast<std::uint32_t>(val);
        pos = comma + 1;
    }
    for (auto a : dim.alpha)
        if (a == 0) throw ParameterError("dimension vector must assign every idempotent");
    return dim;
}

inline QuiverSpec quiver_from_json(const json& j) {
    QuiverSpec q;
    for (const auto& v : j.at("vertices")) q.vertices.push_back(v.get<std::string>());
    for (const auto& a : j.at("arrows"))
        q.arrows.push_back(QuiverArrow{a.at("name").get<std::string>(),
                                       a.at("tail").get<std::string>(),
                                       a.at("head").get<std::string>()});
    if (j.contains("weights"))
        for (const auto& [name, val] : j.at("weights").items())
            q.weights[name] = val.is_number_integer() ? Rat(val.get<long>())
                                                      : parse_rat(val.get<std::string>());
    if (j.contains("orderings"))
        for (const auto& [vertex, arr] : j.at("orderings").items()) {
            std::vector<std::string> names;
            for (const auto& nm : arr) names.push_back(nm.get<std::string>());
            q.orderings[vertex] = names;
        }
    return q;
}

inline SurfaceSpec surface_from_json(const json& j) {
    SurfaceSpec s;
    s.genus = j.at("genus").get<int>();
    s.boundaries = j.value("boundaries", 0);
    if (j.contains("weights"))
        for (const auto& w : j.at("weights")) s.weights.push_back(w.get<int>());
    return s;
}

} // namespace qpb
