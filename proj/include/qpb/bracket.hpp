#pragma once

// Double brackets on a path algebra: sparse value tables on generator pairs,
// closed under cyclic antisymmetry, extended to arbitrary elements by the
// derivation rules (outer in the second slot, inner in the first) and by the
// localization rule on inverses. On top of that: triple brackets, the
// quasi-Poisson anomaly, gauge elements, differential n-brackets for n = 2, 3,
// idempotent restriction, direct sums and moment-map verification.

#include "qpb/print.hpp"
#include "qpb/random_words.hpp"
#include "qpb/report.hpp"
#include "qpb/tensor.hpp"

#include <optional>

namespace qpb {

inline bool is_core_gen(const GeneratorDecl& d) { return d.kind != GenKind::FormalInverse; }

struct DoubleBracketSpec {
    AlgebraSpec algebra;
    std::map<std::pair<std::uint32_t, std::uint32_t>, Tensor2> values;

    /// Stores <<g,h>> = v and, when absent, <<h,g>> = -flip(v).
    void set_pair(std::uint32_t g, std::uint32_t h, const Tensor2& v) {
        values[{g, h}] = v;
        auto op = std::make_pair(h, g);
        if (!values.count(op)) values[op] = t2_scale(Rat(-1), flip(v));
    }
    const Tensor2* find(std::uint32_t g, std::uint32_t h) const {
        auto it = values.find({g, h});
        return it == values.end() ? nullptr : &it->second;
    }
};

/// Typing compression forced by B-linearity: for the pair (g,h), a value v
/// must satisfy v = e_t(g) * (e_t(h) . v . e_h(h)) * e_h(g).
inline Tensor2 bracket_typing(const AlgebraSpec& A, std::uint32_t g, std::uint32_t h,
                              const Tensor2& v) {
    const auto& dg = A.generators[g];
    const auto& dh = A.generators[h];
    Tensor2 typed = outer_act(A, nc_idem(dh.tail), v, nc_idem(dh.head));
    return inner_act(A, nc_idem(dg.tail), typed, nc_idem(dg.head));
}

/// Structural validation: known generators, no stored formal-inverse pairs,
/// idempotent typing. Violations of cyclic antisymmetry are mathematical
/// failures, reported by check_cyclic_antisymmetry with a witness instead.
inline void validate_bracket_typing(const DoubleBracketSpec& br) {
    validate_algebra(br.algebra);
    for (const auto& [key, v] : br.values) {
        auto [g, h] = key;
        if (g >= br.algebra.num_gen() || h >= br.algebra.num_gen())
            throw StructuralError("bracket value for unknown generator");
        if (!is_core_gen(br.algebra.generators[g]) || !is_core_gen(br.algebra.generators[h]))
            throw StructuralError("bracket values on formal inverses are derived, not stored");
        if (!(bracket_typing(br.algebra, g, h, v) == v))
            throw StructuralError("bracket value for (" + br.algebra.generators[g].name + "," +
                                  br.algebra.generators[h].name + ") violates idempotent typing");
    }
}

inline void validate_bracket(const DoubleBracketSpec& br) {
    validate_bracket_typing(br);
    for (const auto& [key, v] : br.values) {
        auto [g, h] = key;
        auto it = br.values.find({h, g});
        if (it == br.values.end())
            throw StructuralError("missing opposite orientation for (" +
                                  br.algebra.generators[g].name + "," +
                                  br.algebra.generators[h].name + ")");
        if (!(it->second == t2_scale(Rat(-1), flip(v))))
            throw StructuralError("stored pair (" + br.algebra.generators[h].name + "," +
                                  br.algebra.generators[g].name + ") is not -flip of its opposite");
    }
}

// --- evaluation --------------------------------------------------------------

namespace detail {

inline bool atom_is_localized(const AlgebraSpec& A, const Atom& a) {
    return a.inv || A.generators[a.gen].kind == GenKind::FormalInverse;
}

/// Base element whose bracket determines the localized atom: g for g^-1, the
/// defining element for a formal inverse.
inline NCPoly atom_base(const AlgebraSpec& A, const Atom& a) {
    if (a.inv) return nc_gen(a.gen, false);
    return A.generators[a.gen].defining;
}

Tensor2 eval_words(const DoubleBracketSpec& br, const Word& u, const Word& v); // fwd

inline Tensor2 eval_polys(const DoubleBracketSpec& br, const NCPoly& a, const NCPoly& b) {
    Tensor2 r;
    for (const auto& [u, cu] : a.terms)
        for (const auto& [v, cv] : b.terms) r += t2_scale(cu * cv, eval_words(br, u, v));
    return r;
}

inline Tensor2 eval_atoms(const DoubleBracketSpec& br, const Atom& x, const Atom& y) {
    const AlgebraSpec& A = br.algebra;
    if (atom_is_localized(A, y)) {
        // <<a, s^-1>> = - s^-1 <<a, s>> s^-1  (outer action)
        NCPoly s_inv = nc_word(Word::atom(y.gen, y.inv));
        Tensor2 inner = eval_polys(br, nc_word(Word::atom(x.gen, x.inv)), atom_base(A, y));
        return t2_scale(Rat(-1), outer_act(A, s_inv, inner, s_inv));
    }
    if (atom_is_localized(A, x)) {
        // <<s^-1, b>> = - s^-1 * <<s, b>> * s^-1  (inner action)
        NCPoly s_inv = nc_word(Word::atom(x.gen, x.inv));
        Tensor2 inner = eval_polys(br, atom_base(A, x), nc_gen(y.gen, y.inv));
        return t2_scale(Rat(-1), inner_act(A, s_inv, inner, s_inv));
    }
    const Tensor2* v = br.find(x.gen, y.gen);
    if (!v)
        throw SpecIncompleteError("no stored bracket value for (" + A.generators[x.gen].name +
                                  "," + A.generators[y.gen].name + ")");
    return *v;
}

inline Tensor2 eval_words(const DoubleBracketSpec& br, const Word& u, const Word& v) {
    const AlgebraSpec& A = br.algebra;
    if (u.is_unit() || v.is_unit()) return {}; // B-linearity
    if (u.atoms.size() > 1) {
        // left derivation rule: <<h u', v>> = <<h, v>> * u' + h * <<u', v>>
        Word h = Word::atom(u.atoms.front().gen, u.atoms.front().inv);
        Word rest;
        rest.atoms.assign(u.atoms.begin() + 1, u.atoms.end());
        NCPoly one = nc_one(A);
        Tensor2 r = inner_act(A, one, eval_words(br, h, v), nc_word(rest));
        r += inner_act(A, nc_word(h), eval_words(br, rest, v), one);
        return r;
    }
    if (v.atoms.size() > 1) {
        // right derivation rule: <<u, g v'>> = <<u, g>> v' + g <<u, v'>>
        Word g = Word::atom(v.atoms.front().gen, v.atoms.front().inv);
        Word rest;
        rest.atoms.assign(v.atoms.begin() + 1, v.atoms.end());
        NCPoly one = nc_one(A);
        Tensor2 r = outer_act(A, one, eval_words(br, u, g), nc_word(rest));
        r += outer_act(A, nc_word(g), eval_words(br, u, rest), one);
        return r;
    }
    return eval_atoms(br, u.atoms[0], v.atoms[0]);
}

} // namespace detail

/// <<a, b>> for arbitrary elements of the algebra (localized atoms resolved
/// through the derivation and localization rules).
inline Tensor2 eval_double(const DoubleBracketSpec& br, const NCPoly& a, const NCPoly& b) {
    return detail::eval_polys(br, a, b);
}

// --- triple bracket and the quasi-Poisson anomaly -----------------------------

namespace detail {
/// sum <<x, w1>> (x) w2 over the Sweedler terms w1 (x) w2 of <<y, z>>.
inline Tensor3 nested(const DoubleBracketSpec& br, const NCPoly& x, const NCPoly& y,
                      const NCPoly& z) {
    Tensor3 out;
    Tensor2 yz = eval_double(br, y, z);
    for (const auto& [k, c] : yz.terms) {
        Tensor2 first = eval_double(br, x, nc_word(k.first));
        out += t3_scale(c, t3_from_t2_and_poly(first, nc_word(k.second)));
    }
    return out;
}
} // namespace detail

/// <<a, b, c>> = <<a,<<b,c>>'>> (x) <<b,c>>'' + cyclic images.
inline Tensor3 triple_bracket(const DoubleBracketSpec& br, const NCPoly& a, const NCPoly& b,
                              const NCPoly& c) {
    Tensor3 out = detail::nested(br, a, b, c);
    out += tau_power(detail::nested(br, b, c, a), 1);
    out += tau_power(detail::nested(br, c, a, b), 2);
    return out;
}

/// The eight-term idempotent sum that a triple bracket of a quasi-Poisson
/// double bracket must equal, scaled by 1/4.
inline Tensor3 qp_anomaly(const AlgebraSpec& A, const NCPoly& a, const NCPoly& b, const NCPoly& c) {
    Tensor3 out;
    for (std::uint32_t s = 0; s < A.num_idem(); ++s) {
        NCPoly es = nc_idem(s);
        NCPoly ces_a = mul(A, c, es, a);
        NCPoly ces = mul(A, c, es);
        NCPoly es_a = mul(A, es, a);
        NCPoly es_b = mul(A, es, b);
        NCPoly a_es = mul(A, a, es);
        NCPoly b_es = mul(A, b, es);
        NCPoly aes_b = mul(A, a, es, b);
        NCPoly es_c = mul(A, es, c);
        NCPoly bes_c = mul(A, b, es, c);
        out += t3_of(ces_a, es_b, es);
        out += t3_of(ces_a, es, b_es, Rat(-1));
        out += t3_of(ces, aes_b, es, Rat(-1));
        out += t3_of(ces, a_es, b_es);
        out += t3_of(es_a, es_b, es_c, Rat(-1));
        out += t3_of(es_a, es, bes_c);
        out += t3_of(es, aes_b, es_c);
        out += t3_of(es, a_es, bes_c, Rat(-1));
    }
    return t3_scale(Rat(1, 4), out);
}

// --- generator-level checks ----------------------------------------------------

inline std::vector<std::uint32_t> core_generators(const AlgebraSpec& A) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t g = 0; g < A.num_gen(); ++g)
        if (is_core_gen(A.generators[g])) out.push_back(g);
    return out;
}

inline CheckReport check_cyclic_antisymmetry(const DoubleBracketSpec& br,
                                             const SampleOptions& opts = {}) {
    const AlgebraSpec& A = br.algebra;
    CheckReport rep;
    auto gens = core_generators(A);
    for (auto g : gens)
        for (auto h : gens) {
            Tensor2 lhs = eval_double(br, nc_gen(g), nc_gen(h));
            Tensor2 rhs = t2_scale(Rat(-1), flip(eval_double(br, nc_gen(h), nc_gen(g))));
            ++rep.checked;
            if (!(lhs == rhs))
                rep.note("(" + A.generators[g].name + "," + A.generators[h].name + ")",
                         tensor_str(A, lhs - rhs));
        }
    WordSampler sampler(A, opts.seed);
    for (std::size_t i = 0; i < opts.count; ++i) {
        NCPoly a = sampler.word(opts.max_len);
        NCPoly b = sampler.word(opts.max_len);
        Tensor2 lhs = eval_double(br, a, b);
        Tensor2 rhs = t2_scale(Rat(-1), flip(eval_double(br, b, a)));
        ++rep.checked;
        if (!(lhs == rhs))
            rep.note("(" + poly_str(A, a) + ", " + poly_str(A, b) + ")", tensor_str(A, lhs - rhs));
    }
    return rep;
}

/// Asserts <<g,h,k>> equals the quasi-Poisson anomaly on every ordered triple
/// of core generators. Triples whose stored pairwise values and anomaly are
/// all zero are skipped (both sides vanish identically).
inline CheckReport check_quasi_poisson(const DoubleBracketSpec& br) {
    const AlgebraSpec& A = br.algebra;
    CheckReport rep;
    auto gens = core_generators(A);
    auto pair_zero = [&](std::uint32_t g, std::uint32_t h) {
        const Tensor2* v = br.find(g, h);
        return v && v->is_zero();
    };
    for (auto g : gens)
        for (auto h : gens)
            for (auto k : gens) {
                ++rep.checked;
                Tensor3 rhs = qp_anomaly(A, nc_gen(g), nc_gen(h), nc_gen(k));
                if (rhs.is_zero() && pair_zero(g, h) && pair_zero(h, k) && pair_zero(g, k) &&
                    pair_zero(h, g) && pair_zero(k, h) && pair_zero(k, g))
                    continue;
                Tensor3 lhs = triple_bracket(br, nc_gen(g), nc_gen(h), nc_gen(k));
                if (!(lhs == rhs))
                    rep.note("(" + A.generators[g].name + "," + A.generators[h].name + "," +
                                 A.generators[k].name + ")",
                             tensor_str(A, lhs - rhs));
            }
    return rep;
}

// --- double derivations --------------------------------------------------------

/// A B-linear double derivation, tabulated on atoms. Untabulated core atoms
/// act as zero; localized atoms fall back to the localization rule.
struct DoubleDerivation {
    std::map<Atom, Tensor2> values;

    void set(const Atom& a, const Tensor2& v) {
        if (v.is_zero())
            values.erase(a);
        else
            values[a] = v;
    }
};

namespace detail {
inline Tensor2 dd_apply_poly(const AlgebraSpec& A, const DoubleDerivation& dd, const NCPoly& p);

inline Tensor2 dd_apply_atom(const AlgebraSpec& A, const DoubleDerivation& dd, const Atom& a) {
    auto it = dd.values.find(a);
    if (it != dd.values.end()) return it->second;
    if (atom_is_localized(A, a)) {
        NCPoly s_inv = nc_word(Word::atom(a.gen, a.inv));
        Tensor2 base = dd_apply_poly(A, dd, atom_base(A, a));
        return t2_scale(Rat(-1), outer_act(A, s_inv, base, s_inv));
    }
    return {};
}

inline Tensor2 dd_apply_poly(const AlgebraSpec& A, const DoubleDerivation& dd, const NCPoly& p) {
    Tensor2 out;
    for (const auto& [w, c] : p.terms) {
        if (w.is_unit()) continue;
        for (std::size_t i = 0; i < w.atoms.size(); ++i) {
            Word pre, post;
            pre.atoms.assign(w.atoms.begin(), w.atoms.begin() + i);
            post.atoms.assign(w.atoms.begin() + i + 1, w.atoms.end());
            NCPoly lp = pre.atoms.empty() ? nc_one(A) : nc_word(pre);
            NCPoly rp = post.atoms.empty() ? nc_one(A) : nc_word(post);
            out += t2_scale(c, outer_act(A, lp, dd_apply_atom(A, dd, w.atoms[i]), rp));
        }
    }
    return out;
}
} // namespace detail

inline Tensor2 apply(const AlgebraSpec& A, const DoubleDerivation& dd, const NCPoly& p) {
    return detail::dd_apply_poly(A, dd, p);
}

/// Each tabulated value must carry the typing of its atom's bimodule degree:
/// dd(a) = e_tail(a) . dd(a) . e_head(a).
inline void validate_derivation(const AlgebraSpec& A, const DoubleDerivation& dd) {
    for (const auto& [a, v] : dd.values) {
        if (a.gen >= A.num_gen()) throw StructuralError("derivation value for unknown generator");
        NCPoly et = nc_idem(A.atom_tail(a)), eh = nc_idem(A.atom_head(a));
        if (!(outer_act(A, et, v, eh) == v))
            throw StructuralError("derivation value for " + A.generators[a.gen].name +
                                  (a.inv ? "^-1" : "") + " violates idempotent typing");
    }
}

/// The gauge element E_s: a |-> a e_s (x) e_s - e_s (x) e_s a, tabulated on
/// every atom (localized ones included, so no rewriting against defining
/// elements is ever needed).
inline DoubleDerivation gauge_element(const AlgebraSpec& A, std::uint32_t s) {
    DoubleDerivation dd;
    NCPoly es = nc_idem(s);
    auto tabulate = [&](const Atom& at) {
        NCPoly a = nc_word(Word::atom(at.gen, at.inv));
        Tensor2 v = t2_of(mul(A, a, es), es) - t2_of(es, mul(A, es, a));
        dd.set(at, v);
    };
    for (std::uint32_t g = 0; g < A.num_gen(); ++g) {
        tabulate(Atom{g, false});
        if (A.generators[g].kind == GenKind::Invertible) tabulate(Atom{g, true});
    }
    return dd;
}

/// The bimodule action (l . dd . r)(a) = dd(a)' r (x) l dd(a)''. Used to
/// scale bivectors like (1/2) x^2 d_x d_x.
inline DoubleDerivation inner_scale(const AlgebraSpec& A, const NCPoly& l,
                                    const DoubleDerivation& dd, const NCPoly& r) {
    DoubleDerivation out;
    for (const auto& [a, v] : dd.values) out.set(a, inner_act(A, l, v, r));
    return out;
}

namespace detail {
/// dB(y)' dA(x)'' (x) dA(x)' dB(y)''  --  the ladder factor of differential
/// n-brackets.
inline Tensor2 brq_tilde2(const AlgebraSpec& A, const DoubleDerivation& dA,
                          const DoubleDerivation& dB, const NCPoly& x, const NCPoly& y) {
    Tensor2 TA = apply(A, dA, x);
    Tensor2 TB = apply(A, dB, y);
    Tensor2 out;
    for (const auto& [ka, ca] : TA.terms)
        for (const auto& [kb, cb] : TB.terms)
            out += t2_of(mul_words(A, kb.first, ka.second), mul_words(A, ka.first, kb.second),
                         ca * cb);
    return out;
}
} // namespace detail

/// The differential double bracket attached to the bivector d1 d2.
inline DoubleBracketSpec differential_double(const AlgebraSpec& A, const DoubleDerivation& d1,
                                             const DoubleDerivation& d2) {
    DoubleBracketSpec br;
    br.algebra = A;
    auto gens = core_generators(A);
    for (auto g : gens)
        for (auto h : gens) {
            Tensor2 v = detail::brq_tilde2(A, d1, d2, nc_gen(g), nc_gen(h)) -
                        detail::brq_tilde2(A, d2, d1, nc_gen(g), nc_gen(h));
            br.values[{g, h}] = v;
        }
    return br;
}

/// Evaluates the differential double bracket of d1 d2 on arbitrary elements.
inline Tensor2 differential_double_eval(const AlgebraSpec& A, const DoubleDerivation& d1,
                                        const DoubleDerivation& d2, const NCPoly& a,
                                        const NCPoly& b) {
    return detail::brq_tilde2(A, d1, d2, a, b) - detail::brq_tilde2(A, d2, d1, a, b);
}

/// The differential triple bracket of the trivector d1 d2 d3, evaluated on
/// a, b, c: the cyclic symmetrization of the three-slot ladder product.
inline Tensor3 differential_triple(const AlgebraSpec& A, const DoubleDerivation& d1,
                                   const DoubleDerivation& d2, const DoubleDerivation& d3,
                                   const NCPoly& a, const NCPoly& b, const NCPoly& c) {
    auto tilde3 = [&](const NCPoly& x, const NCPoly& y, const NCPoly& z) {
        Tensor2 TX = apply(A, d1, x);
        Tensor2 TY = apply(A, d2, y);
        Tensor2 TZ = apply(A, d3, z);
        Tensor3 out;
        for (const auto& [kx, cx] : TX.terms)
            for (const auto& [ky, cy] : TY.terms)
                for (const auto& [kz, cz] : TZ.terms)
                    out += t3_of(mul_words(A, kz.first, kx.second),
                                 mul_words(A, kx.first, ky.second),
                                 mul_words(A, ky.first, kz.second), cx * cy * cz);
        return out;
    };
    std::array<const NCPoly*, 3> args{&a, &b, &c};
    Tensor3 out;
    for (int i = 0; i < 3; ++i) {
        // arguments get tau^{-i}, the resulting tensor gets tau^{i}
        std::array<const NCPoly*, 3> rot = args;
        for (int k = 0; k < i; ++k) rot = {rot[1], rot[2], rot[0]};
        out += tau_power(tilde3(*rot[0], *rot[1], *rot[2]), i);
    }
    return out;
}

/// Sums (1/12) E_s^3 over all idempotents: the differential triple bracket a
/// quasi-Poisson double bracket must reproduce.
inline Tensor3 gauge_anomaly(const AlgebraSpec& A, const NCPoly& a, const NCPoly& b,
                             const NCPoly& c) {
    Tensor3 out;
    for (std::uint32_t s = 0; s < A.num_idem(); ++s) {
        DoubleDerivation Es = gauge_element(A, s);
        out += differential_triple(A, Es, Es, Es, a, b, c);
    }
    return t3_scale(Rat(1, 12), out);
}

// --- idempotent restriction and direct sums -------------------------------------

/// (e (x) e) T (e (x) e): both slots compressed to the corner.
inline Tensor2 corner_compress(const AlgebraSpec& A, std::uint32_t e, const Tensor2& t) {
    NCPoly pe = nc_idem(e);
    return inner_act(A, pe, outer_act(A, pe, t, pe), pe);
}

/// The induced bracket on e A e. Stored pairs are the loop generators at e;
/// arbitrary corner elements evaluate through corner_eval.
struct CornerRestriction {
    std::uint32_t corner = 0;
    DoubleBracketSpec bracket;
};

inline CornerRestriction restrict_to_corner(const DoubleBracketSpec& br, std::uint32_t e) {
    if (e >= br.algebra.num_idem()) throw StructuralError("corner idempotent out of range");
    CornerRestriction out;
    out.corner = e;
    out.bracket.algebra = br.algebra;
    for (auto g : core_generators(br.algebra)) {
        const auto& dg = br.algebra.generators[g];
        if (dg.tail != e || dg.head != e) continue;
        for (auto h : core_generators(br.algebra)) {
            const auto& dh = br.algebra.generators[h];
            if (dh.tail != e || dh.head != e) continue;
            out.bracket.values[{g, h}] =
                corner_compress(br.algebra, e, eval_double(br, nc_gen(g), nc_gen(h)));
        }
    }
    return out;
}

inline Tensor2 corner_eval(const DoubleBracketSpec& br, std::uint32_t e, const NCPoly& a,
                           const NCPoly& b) {
    NCPoly pe = nc_idem(e);
    const AlgebraSpec& A = br.algebra;
    if (!(mul(A, pe, a, pe) == a) || !(mul(A, pe, b, pe) == b))
        throw StructuralError("corner_eval arguments must lie in eAe");
    return corner_compress(A, e, eval_double(br, a, b));
}

// --- direct sums -----------------------------------------------------------------

namespace detail {
inline Word shift_word(const Word& w, std::uint32_t gen_off, std::uint32_t idem_off) {
    Word out = w;
    if (out.unit >= 0) out.unit += static_cast<std::int32_t>(idem_off);
    for (auto& a : out.atoms) a.gen += gen_off;
    return out;
}
inline NCPoly shift_poly(const NCPoly& p, std::uint32_t gen_off, std::uint32_t idem_off) {
    NCPoly out;
    for (const auto& [w, c] : p.terms) out.terms.emplace(shift_word(w, gen_off, idem_off), c);
    return out;
}
inline Tensor2 shift_tensor(const Tensor2& t, std::uint32_t gen_off, std::uint32_t idem_off) {
    Tensor2 out;
    for (const auto& [k, c] : t.terms)
        out.terms.emplace(std::make_pair(shift_word(k.first, gen_off, idem_off),
                                         shift_word(k.second, gen_off, idem_off)),
                          c);
    return out;
}
} // namespace detail

inline AlgebraSpec direct_sum_algebra(const AlgebraSpec& A1, const AlgebraSpec& A2) {
    AlgebraSpec out = A1;
    std::uint32_t gen_off = static_cast<std::uint32_t>(A1.num_gen());
    std::uint32_t idem_off = static_cast<std::uint32_t>(A1.num_idem());
    for (const auto& lab : A2.base.idempotents) out.base.idempotents.push_back(lab);
    for (const auto& d : A2.generators) {
        GeneratorDecl nd = d;
        nd.tail += idem_off;
        nd.head += idem_off;
        nd.defining = detail::shift_poly(d.defining, gen_off, idem_off);
        out.generators.push_back(nd);
    }
    validate_algebra(out);
    return out;
}

/// Disjoint union of algebras and value tables; mixed pairs carry the zero
/// tensor.
inline DoubleBracketSpec direct_sum(const DoubleBracketSpec& b1, const DoubleBracketSpec& b2) {
    DoubleBracketSpec out;
    out.algebra = direct_sum_algebra(b1.algebra, b2.algebra);
    std::uint32_t gen_off = static_cast<std::uint32_t>(b1.algebra.num_gen());
    std::uint32_t idem_off = static_cast<std::uint32_t>(b1.algebra.num_idem());
    out.values = b1.values;
    for (const auto& [k, v] : b2.values)
        out.values[{k.first + gen_off, k.second + gen_off}] =
            detail::shift_tensor(v, gen_off, idem_off);
    for (auto g : core_generators(b1.algebra))
        for (auto h : core_generators(b2.algebra)) {
            out.values[{g, h + gen_off}] = {};
            out.values[{h + gen_off, g}] = {};
        }
    return out;
}

// --- moment maps -------------------------------------------------------------------

struct MomentMapSpec {
    std::map<std::uint32_t, NCPoly> components; // idempotent index -> Phi_s
};

inline void validate_moment_map(const AlgebraSpec& A, const MomentMapSpec& mm) {
    for (const auto& [s, phi] : mm.components) {
        if (s >= A.num_idem()) throw StructuralError("moment-map component at unknown idempotent");
        NCPoly pe = nc_idem(s);
        if (!(mul(A, pe, phi, pe) == phi))
            throw StructuralError("moment-map component at " + A.base.idempotents[s] +
                                  " is not of the form e_s phi e_s");
    }
}

/// Splits a single element into its corner components e_s phi e_s.
inline MomentMapSpec compress_moment_map(const AlgebraSpec& A, const NCPoly& phi) {
    MomentMapSpec mm;
    for (std::uint32_t s = 0; s < A.num_idem(); ++s) {
        NCPoly pe = nc_idem(s);
        NCPoly comp = mul(A, pe, phi, pe);
        if (!comp.is_zero()) mm.components[s] = comp;
    }
    return mm;
}

inline MomentMapSpec direct_sum(const MomentMapSpec& m1, const MomentMapSpec& m2,
                                const AlgebraSpec& A1) {
    MomentMapSpec out = m1;
    std::uint32_t gen_off = static_cast<std::uint32_t>(A1.num_gen());
    std::uint32_t idem_off = static_cast<std::uint32_t>(A1.num_idem());
    for (const auto& [s, phi] : m2.components)
        out.components[s + idem_off] = detail::shift_poly(phi, gen_off, idem_off);
    return out;
}

/// Right-hand side of the moment-map condition for component s against a:
/// (1/2)(a e_s (x) Phi_s - e_s (x) Phi_s a + a Phi_s (x) e_s - Phi_s (x) e_s a).
inline Tensor2 moment_rhs(const AlgebraSpec& A, std::uint32_t s, const NCPoly& phi,
                          const NCPoly& a) {
    NCPoly es = nc_idem(s);
    Tensor2 out = t2_of(mul(A, a, es), phi);
    out += t2_of(es, mul(A, phi, a), Rat(-1));
    out += t2_of(mul(A, a, phi), es);
    out += t2_of(phi, mul(A, es, a), Rat(-1));
    return t2_scale(Rat(1, 2), out);
}

inline bool moment_component_symbolic(const AlgebraSpec& A, const NCPoly& phi) {
    return !poly_contains_kind(A, phi, GenKind::FormalInverse);
}

/// Symbolic verification of the moment-map condition on every core generator.
/// Components containing opaque formal inverses cannot be decided by word
/// arithmetic; they raise DeferToNumericError (use the representation module).
inline CheckReport check_moment_map(const DoubleBracketSpec& br, const MomentMapSpec& mm) {
    const AlgebraSpec& A = br.algebra;
    validate_moment_map(A, mm);
    std::string opaque;
    for (const auto& [s, phi] : mm.components)
        if (!moment_component_symbolic(A, phi)) opaque += " " + A.base.idempotents[s];
    if (!opaque.empty())
        throw DeferToNumericError("moment-map components with formal inverses:" + opaque);
    CheckReport rep;
    for (const auto& [s, phi] : mm.components) {
        for (auto g : core_generators(A)) {
            Tensor2 lhs = eval_double(br, phi, nc_gen(g));
            Tensor2 rhs = moment_rhs(A, s, phi, nc_gen(g));
            ++rep.checked;
            if (!(lhs == rhs))
                rep.note("(Phi_" + A.base.idempotents[s] + ", " + A.generators[g].name + ")",
                         tensor_str(A, lhs - rhs));
        }
    }
    return rep;
}

} // namespace qpb
