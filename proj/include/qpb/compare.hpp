#pragma once

// Name-based comparison of brackets and moment maps living on algebras that
// were built through different routes (and so may index their generators and
// idempotents differently).

#include "qpb/bracket.hpp"

namespace qpb {

struct NameMap {
    std::vector<std::uint32_t> gen;  // index in A -> index in B
    std::vector<std::uint32_t> idem; // index in A -> index in B
};

inline NameMap name_map(const AlgebraSpec& A, const AlgebraSpec& B) {
    if (A.num_idem() != B.num_idem() || A.num_gen() != B.num_gen())
        throw StructuralError("algebras differ in size");
    NameMap nm;
    for (const auto& lab : A.base.idempotents) nm.idem.push_back(B.idem_index(lab));
    for (const auto& d : A.generators) nm.gen.push_back(B.gen_index(d.name));
    return nm;
}

inline Word map_word(const NameMap& nm, const Word& w) {
    Word out = w;
    if (out.unit >= 0) out.unit = static_cast<std::int32_t>(nm.idem[static_cast<std::size_t>(out.unit)]);
    for (auto& a : out.atoms) a.gen = nm.gen[a.gen];
    return out;
}

inline NCPoly map_poly(const NameMap& nm, const NCPoly& p) {
    NCPoly out;
    for (const auto& [w, c] : p.terms) out.terms.emplace(map_word(nm, w), c);
    return out;
}

inline Tensor2 map_tensor(const NameMap& nm, const Tensor2& t) {
    Tensor2 out;
    for (const auto& [k, c] : t.terms)
        out.terms.emplace(std::make_pair(map_word(nm, k.first), map_word(nm, k.second)), c);
    return out;
}

/// Exact equality of two bracket tables under the generator/idempotent name
/// correspondence. Returns a description of the first mismatch, or empty.
inline std::string bracket_diff_by_name(const DoubleBracketSpec& a, const DoubleBracketSpec& b) {
    NameMap nm = name_map(a.algebra, b.algebra);
    for (auto g : core_generators(a.algebra))
        for (auto h : core_generators(a.algebra)) {
            const Tensor2* va = a.find(g, h);
            const Tensor2* vb = b.find(nm.gen[g], nm.gen[h]);
            Tensor2 za, zb;
            const Tensor2& ta = va ? *va : za;
            const Tensor2& tb = vb ? *vb : zb;
            if (!(map_tensor(nm, ta) == tb))
                return "(" + a.algebra.generators[g].name + "," + a.algebra.generators[h].name +
                       "): " + tensor_str(a.algebra, ta) + "  vs  " + tensor_str(b.algebra, tb);
        }
    return {};
}

inline std::string moment_map_diff_by_name(const AlgebraSpec& A, const MomentMapSpec& ma,
                                           const AlgebraSpec& B, const MomentMapSpec& mb) {
    NameMap nm = name_map(A, B);
    for (std::uint32_t s = 0; s < A.num_idem(); ++s) {
        auto ia = ma.components.find(s);
        auto ib = mb.components.find(nm.idem[s]);
        NCPoly pa = ia == ma.components.end() ? nc_idem(s) : ia->second;
        NCPoly pb = ib == mb.components.end() ? nc_idem(nm.idem[s]) : ib->second;
        if (!(map_poly(nm, pa) == pb))
            return "Phi_" + A.base.idempotents[s] + ": " + poly_str(A, pa) + "  vs  " +
                   poly_str(B, pb);
    }
    return {};
}

} // namespace qpb
