#pragma once

// Fusion of two orthogonal idempotents: the fused algebra with its generator
// classification, the trace images of the two gauge elements, the sixteen
// closed-form correction brackets, the fused double bracket and moment map,
// and the kappa diagnostic (the defect between the fused triple bracket and
// the sum of its induced and correction parts, which must vanish).

#include "qpb/bracket.hpp"

namespace qpb {

enum class FusionType { First, Second, Third, Fourth };

inline const char* fusion_type_name(FusionType t) {
    switch (t) {
    case FusionType::First: return "first";
    case FusionType::Second: return "second";
    case FusionType::Third: return "third";
    case FusionType::Fourth: return "fourth";
    }
    return "?";
}

struct FusionContext {
    AlgebraSpec source;
    std::uint32_t kept_src = 0;
    std::uint32_t absorbed_src = 0;
    AlgebraSpec result;
    std::uint32_t kept_res = 0;
    std::vector<std::int32_t> idem_map; // source idempotent -> result idempotent
    std::vector<FusionType> types;      // per generator (indices shared by source/result)
};

namespace detail {
inline Word rename_word(const FusionContext& ctx, const Word& w) {
    Word out = w;
    if (out.unit >= 0) out.unit = ctx.idem_map[static_cast<std::size_t>(out.unit)];
    return out;
}
inline NCPoly rename_poly_raw(const FusionContext& ctx, const NCPoly& p) {
    NCPoly out;
    for (const auto& [w, c] : p.terms) out.terms.emplace(rename_word(ctx, w), c);
    return out;
}
} // namespace detail

inline NCPoly rename_poly(const FusionContext& ctx, const NCPoly& p) {
    return normalize(detail::rename_poly_raw(ctx, p), ctx.result);
}

inline Tensor2 rename_tensor(const FusionContext& ctx, const Tensor2& t) {
    Tensor2 out;
    for (const auto& [k, c] : t.terms)
        out += t2_of(normalize(detail::rename_word(ctx, k.first), ctx.result),
                     normalize(detail::rename_word(ctx, k.second), ctx.result), c);
    return out;
}

/// Builds the fusion algebra obtained by absorbing one idempotent into
/// another. Generators survive with their kinds; their endpoints at the
/// absorbed idempotent are relabelled, and each generator is classified by
/// which of its endpoints sat at the absorbed idempotent.
inline FusionContext fuse_algebra(const AlgebraSpec& A, const std::string& kept,
                                  const std::string& absorbed) {
    FusionContext ctx;
    ctx.source = A;
    ctx.kept_src = A.idem_index(kept);
    ctx.absorbed_src = A.idem_index(absorbed);
    if (ctx.kept_src == ctx.absorbed_src)
        throw StructuralError("cannot fuse an idempotent onto itself: " + kept);

    ctx.idem_map.assign(A.num_idem(), -1);
    for (std::uint32_t s = 0; s < A.num_idem(); ++s) {
        if (s == ctx.absorbed_src) continue;
        ctx.idem_map[s] = static_cast<std::int32_t>(ctx.result.base.idempotents.size());
        ctx.result.base.idempotents.push_back(A.base.idempotents[s]);
    }
    ctx.idem_map[ctx.absorbed_src] = ctx.idem_map[ctx.kept_src];
    ctx.kept_res = static_cast<std::uint32_t>(ctx.idem_map[ctx.kept_src]);

    for (const auto& d : A.generators) {
        bool tail_abs = d.tail == ctx.absorbed_src;
        bool head_abs = d.head == ctx.absorbed_src;
        FusionType t = tail_abs ? (head_abs ? FusionType::Fourth : FusionType::Second)
                                : (head_abs ? FusionType::Third : FusionType::First);
        ctx.types.push_back(t);
        GeneratorDecl nd = d;
        nd.tail = static_cast<std::uint32_t>(ctx.idem_map[d.tail]);
        nd.head = static_cast<std::uint32_t>(ctx.idem_map[d.head]);
        nd.defining = {}; // filled below once ctx.result holds all generators
        ctx.result.generators.push_back(nd);
    }
    for (std::size_t g = 0; g < A.generators.size(); ++g)
        ctx.result.generators[g].defining = rename_poly(ctx, A.generators[g].defining);
    validate_algebra(ctx.result);
    return ctx;
}

inline FusionType atom_fusion_type(const FusionContext& ctx, const Atom& a) {
    FusionType t = ctx.types[a.gen];
    if (!a.inv) return t;
    if (t == FusionType::Second) return FusionType::Third;
    if (t == FusionType::Third) return FusionType::Second;
    return t;
}

enum class GaugeSide { Kept, Absorbed };

/// Trace image in the fused algebra of the gauge element at the kept or the
/// absorbed idempotent, tabulated per generator type.
inline DoubleDerivation trE(const FusionContext& ctx, GaugeSide side) {
    const AlgebraSpec& R = ctx.result;
    NCPoly e1 = nc_idem(ctx.kept_res);
    DoubleDerivation dd;
    auto tabulate = [&](const Atom& at) {
        NCPoly a = nc_word(Word::atom(at.gen, at.inv));
        FusionType t = atom_fusion_type(ctx, at);
        Tensor2 v;
        if (side == GaugeSide::Kept) {
            switch (t) {
            case FusionType::First:
                v = t2_of(mul(R, a, e1), e1) - t2_of(e1, mul(R, e1, a));
                break;
            case FusionType::Second: v = t2_of(mul(R, a, e1), e1); break;
            case FusionType::Third: v = t2_scale(Rat(-1), t2_of(e1, mul(R, e1, a))); break;
            case FusionType::Fourth: break;
            }
        } else {
            switch (t) {
            case FusionType::First: break;
            case FusionType::Second: v = t2_scale(Rat(-1), t2_of(e1, a)); break;
            case FusionType::Third: v = t2_of(a, e1); break;
            case FusionType::Fourth:
                v = t2_of(mul(R, a, e1), e1) - t2_of(e1, mul(R, e1, a));
                break;
            }
        }
        dd.set(at, v);
    };
    for (std::uint32_t g = 0; g < R.num_gen(); ++g) {
        tabulate(Atom{g, false});
        if (R.generators[g].kind == GenKind::Invertible) tabulate(Atom{g, true});
    }
    return dd;
}

/// The closed-form correction bracket on a pair of fused generators,
/// dispatched on their types. Written in the fused generators themselves;
/// the kept idempotent plays the distinguished role.
inline Tensor2 fusion_bracket_term(const FusionContext& ctx, std::uint32_t a, std::uint32_t b) {
    const AlgebraSpec& R = ctx.result;
    NCPoly e = nc_idem(ctx.kept_res);
    NCPoly P = nc_gen(a);
    NCPoly Q = nc_gen(b);
    using FT = FusionType;
    FT ta = ctx.types[a];
    FT tb = ctx.types[b];
    Tensor2 v;
    auto add = [&](const NCPoly& x, const NCPoly& y, int sign) {
        v += t2_of(x, y, Rat(sign, 2));
    };
    if (ta == FT::First && tb == FT::First) {
        // zero
    } else if (ta == FT::First && tb == FT::Second) {
        add(e, mul(R, P, Q), +1);
        add(mul(R, e, P), Q, -1);
    } else if (ta == FT::First && tb == FT::Third) {
        add(mul(R, Q, P), e, +1);
        add(Q, mul(R, P, e), -1);
    } else if (ta == FT::First && tb == FT::Fourth) {
        add(mul(R, Q, P), e, +1);
        add(e, mul(R, P, Q), +1);
        add(Q, mul(R, P, e), -1);
        add(mul(R, e, P), Q, -1);
    } else if (ta == FT::Second && tb == FT::First) {
        add(P, mul(R, e, Q), +1);
        add(mul(R, Q, P), e, -1);
    } else if (ta == FT::Second && tb == FT::Second) {
        add(e, mul(R, P, Q), +1);
        add(mul(R, Q, P), e, -1);
    } else if (ta == FT::Second && tb == FT::Third) {
        add(P, mul(R, e, Q), +1);
        add(Q, mul(R, P, e), -1);
    } else if (ta == FT::Second && tb == FT::Fourth) {
        add(e, mul(R, P, Q), +1);
        add(Q, mul(R, P, e), -1);
    } else if (ta == FT::Third && tb == FT::First) {
        add(mul(R, Q, e), P, +1);
        add(e, mul(R, P, Q), -1);
    } else if (ta == FT::Third && tb == FT::Second) {
        add(mul(R, Q, e), P, +1);
        add(mul(R, e, P), Q, -1);
    } else if (ta == FT::Third && tb == FT::Third) {
        add(mul(R, Q, P), e, +1);
        add(e, mul(R, P, Q), -1);
    } else if (ta == FT::Third && tb == FT::Fourth) {
        add(mul(R, Q, P), e, +1);
        add(mul(R, e, P), Q, -1);
    } else if (ta == FT::Fourth && tb == FT::First) {
        add(mul(R, Q, e), P, +1);
        add(P, mul(R, e, Q), +1);
        add(mul(R, Q, P), e, -1);
        add(e, mul(R, P, Q), -1);
    } else if (ta == FT::Fourth && tb == FT::Second) {
        add(mul(R, Q, e), P, +1);
        add(mul(R, Q, P), e, -1);
    } else if (ta == FT::Fourth && tb == FT::Third) {
        add(P, mul(R, e, Q), +1);
        add(e, mul(R, P, Q), -1);
    } else {
        // (Fourth, Fourth): zero
    }
    return v;
}

/// The same correction bracket computed from the bivector
/// -(1/2) TrE(kept) TrE(absorbed) through the differential double bracket.
/// Cross-checks the closed-form table.
inline Tensor2 fusion_bracket_term_bivector(const FusionContext& ctx, std::uint32_t a,
                                            std::uint32_t b) {
    DoubleDerivation e1 = trE(ctx, GaugeSide::Kept);
    DoubleDerivation e2 = trE(ctx, GaugeSide::Absorbed);
    return t2_scale(Rat(-1, 2),
                    differential_double_eval(ctx.result, e1, e2, nc_gen(a), nc_gen(b)));
}

/// Only the renamed image of the original bracket (no correction terms).
inline DoubleBracketSpec induced_only_bracket(const FusionContext& ctx,
                                              const DoubleBracketSpec& br) {
    DoubleBracketSpec out;
    out.algebra = ctx.result;
    for (const auto& [k, v] : br.values) out.values[k] = rename_tensor(ctx, v);
    return out;
}

/// Only the correction brackets on all core generator pairs.
inline DoubleBracketSpec fusion_only_bracket(const FusionContext& ctx) {
    DoubleBracketSpec out;
    out.algebra = ctx.result;
    auto gens = core_generators(ctx.result);
    for (auto g : gens)
        for (auto h : gens) out.values[{g, h}] = fusion_bracket_term(ctx, g, h);
    return out;
}

/// Fused double bracket: renamed induced values plus correction terms.
inline DoubleBracketSpec fused_bracket(const FusionContext& ctx, const DoubleBracketSpec& br) {
    DoubleBracketSpec out;
    out.algebra = ctx.result;
    for (const auto& [k, v] : br.values) {
        Tensor2 nv = rename_tensor(ctx, v);
        if (is_core_gen(ctx.result.generators[k.first]) &&
            is_core_gen(ctx.result.generators[k.second]))
            nv += fusion_bracket_term(ctx, k.first, k.second);
        out.values[k] = nv;
    }
    return out;
}

/// Fused moment map: the kept component becomes the ordered product of the
/// kept and absorbed components; every other component is renamed unchanged.
/// Missing components default to the idempotent itself.
inline MomentMapSpec fused_moment_map(const FusionContext& ctx, const MomentMapSpec& mm) {
    auto component = [&](std::uint32_t s) {
        auto it = mm.components.find(s);
        return it == mm.components.end() ? nc_idem(s) : it->second;
    };
    MomentMapSpec out;
    NCPoly fused = mul(ctx.result, rename_poly(ctx, component(ctx.kept_src)),
                       rename_poly(ctx, component(ctx.absorbed_src)));
    out.components[ctx.kept_res] = fused;
    for (const auto& [s, phi] : mm.components) {
        if (s == ctx.kept_src || s == ctx.absorbed_src) continue;
        out.components[static_cast<std::uint32_t>(ctx.idem_map[s])] = rename_poly(ctx, phi);
    }
    return out;
}

struct FusedParts {
    DoubleBracketSpec full;    // induced + correction
    DoubleBracketSpec induced; // renamed original only
    DoubleBracketSpec fus;     // correction only
};

inline FusedParts fused_bracket_parts(const FusionContext& ctx, const DoubleBracketSpec& br) {
    return FusedParts{fused_bracket(ctx, br), induced_only_bracket(ctx, br),
                      fusion_only_bracket(ctx)};
}

/// kappa(a,b,c) = <<a,b,c>>_full - <<a,b,c>>_induced - <<a,b,c>>_correction.
/// Vanishes for every double bracket; exposed as a diagnostic.
inline Tensor3 kappa(const FusedParts& parts, const NCPoly& a, const NCPoly& b, const NCPoly& c) {
    return triple_bracket(parts.full, a, b, c) - triple_bracket(parts.induced, a, b, c) -
           triple_bracket(parts.fus, a, b, c);
}

inline Tensor3 kappa(const FusionContext& ctx, const DoubleBracketSpec& br, const NCPoly& a,
                     const NCPoly& b, const NCPoly& c) {
    return kappa(fused_bracket_parts(ctx, br), a, b, c);
}

} // namespace qpb
