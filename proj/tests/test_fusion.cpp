#include "qpb/catalog.hpp"
#include "qpb/compare.hpp"
#include "qpb/fusion.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace qpb;

namespace {

FamilyParams q1a_params(int delta = 1) {
    FamilyParams p;
    p.delta = delta;
    return p;
}

/// Two loops and the two arrows of the double one-arrow quiver, one bracket
/// per piece, glued by direct sums and two preparatory fusions. Fusing the
/// remaining two vertices produces one generator of each of the four types.
CatalogBundle four_type_bundle() {
    CatalogBundle loops1 = free1(0, Rat(1, 2), 0);
    loops1.algebra.base.idempotents[0] = "3";
    loops1.algebra.generators[0].name = "p";
    loops1.bracket.algebra = loops1.algebra;
    CatalogBundle loops2 = free1(0, Rat(-1, 2), 0);
    loops2.algebra.base.idempotents[0] = "4";
    loops2.algebra.generators[0].name = "w";
    loops2.bracket.algebra = loops2.algebra;
    CatalogBundle arrows = q1(Q1Case::C1a, q1a_params());
    CatalogBundle sum = direct_sum_bundle(direct_sum_bundle(arrows, loops1), loops2);
    sum = fuse_bundle(sum, "1", "3");
    sum = fuse_bundle(sum, "2", "4");
    return sum;
}

} // namespace

TEST_CASE("fusing the one-arrow quiver turns the arrow into a loop of the third type") {
    CatalogBundle q = q1(Q1Case::C1a, q1a_params());
    FusionContext ctx = fuse_algebra(q.algebra, "1", "2");
    REQUIRE(ctx.result.num_idem() == 1);
    REQUIRE(ctx.result.generators[0].tail == ctx.result.generators[0].head);
    REQUIRE(ctx.types[0] == FusionType::Third);  // t: 1 -> 2, head absorbed
    REQUIRE(ctx.types[1] == FusionType::Second); // s: 2 -> 1, tail absorbed
}

TEST_CASE("fusing a direct sum classifies the summands as first and fourth type") {
    CatalogBundle b1 = free1(0, Rat(1, 2), 0);
    CatalogBundle b2 = free1(0, Rat(1, 2), 0);
    b2.algebra.base.idempotents[0] = "2";
    b2.algebra.generators[0].name = "u";
    b2.bracket.algebra = b2.algebra;
    CatalogBundle sum = direct_sum_bundle(b1, b2);
    FusionContext ctx = fuse_algebra(sum.algebra, "1", "2");
    REQUIRE(ctx.types[0] == FusionType::First);
    REQUIRE(ctx.types[1] == FusionType::Fourth);
}

TEST_CASE("fusing an idempotent onto itself is rejected") {
    CatalogBundle b = free1(0, Rat(1, 2), 0);
    REQUIRE_THROWS_AS(fuse_algebra(b.algebra, "1", "1"), StructuralError);
    REQUIRE_THROWS_AS(fuse_algebra(b.algebra, "1", "2"), StructuralError);
}

TEST_CASE("gauge traces per generator type") {
    CatalogBundle q = q1(Q1Case::C1a, q1a_params());
    CatalogBundle loops = free1(0, Rat(1, 2), 0);
    loops.algebra.base.idempotents[0] = "3";
    loops.algebra.generators[0].name = "p";
    loops.bracket.algebra = loops.algebra;
    CatalogBundle sum = direct_sum_bundle(q, loops);
    sum = fuse_bundle(sum, "1", "3"); // p becomes a loop at 1
    FusionContext ctx = fuse_algebra(sum.algebra, "1", "2");
    const AlgebraSpec& R = ctx.result;
    DoubleDerivation tr1 = trE(ctx, GaugeSide::Kept);
    DoubleDerivation tr2 = trE(ctx, GaugeSide::Absorbed);
    validate_derivation(R, tr1);
    validate_derivation(R, tr2);

    std::uint32_t t = 0, s = 1, p = 2;
    REQUIRE(ctx.types[p] == FusionType::First);
    REQUIRE(apply(R, tr2, nc_gen(p)).is_zero());
    // second type: TrE1(u) = u e1 (x) e1, TrE2(u) = -e1 (x) u
    NCPoly e1 = nc_idem(ctx.kept_res);
    REQUIRE(apply(R, tr1, nc_gen(s)) == t2_of(mul(R, nc_gen(s), e1), e1));
    REQUIRE(apply(R, tr2, nc_gen(s)) == t2_scale(Rat(-1), t2_of(e1, nc_gen(s))));
    // third type
    REQUIRE(apply(R, tr1, nc_gen(t)) == t2_scale(Rat(-1), t2_of(e1, mul(R, e1, nc_gen(t)))));
    REQUIRE(apply(R, tr2, nc_gen(t)) == t2_of(nc_gen(t), e1));

    // TrE1 + TrE2 equals the gauge element at the kept idempotent
    DoubleDerivation F1 = gauge_element(R, ctx.kept_res);
    for (auto g : core_generators(R))
        REQUIRE(apply(R, tr1, nc_gen(g)) + apply(R, tr2, nc_gen(g)) == apply(R, F1, nc_gen(g)));
}

TEST_CASE("correction table: closed forms and specific values") {
    CatalogBundle sum = four_type_bundle();
    FusionContext ctx = fuse_algebra(sum.algebra, "1", "2");
    const AlgebraSpec& R = ctx.result;
    std::uint32_t t = 0, s = 1, p = 2, w = 3;
    REQUIRE(ctx.types[t] == FusionType::Third);
    REQUIRE(ctx.types[s] == FusionType::Second);
    REQUIRE(ctx.types[p] == FusionType::First);
    REQUIRE(ctx.types[w] == FusionType::Fourth);

    // (first, first) and (fourth, fourth) vanish
    REQUIRE(fusion_bracket_term(ctx, p, p).is_zero());
    REQUIRE(fusion_bracket_term(ctx, w, w).is_zero());

    // (second, second): 1/2 (e1 (x) u u~ - u~ u (x) e1)
    NCPoly e1 = nc_idem(ctx.kept_res);
    Tensor2 want = t2_of(e1, mul(R, nc_gen(s), nc_gen(s)), Rat(1, 2)) -
                   t2_of(mul(R, nc_gen(s), nc_gen(s)), e1, Rat(1, 2));
    REQUIRE(fusion_bracket_term(ctx, s, s) == want);
}

TEST_CASE("correction table agrees with the gauge-trace bivector on all sixteen type pairs") {
    CatalogBundle sum = four_type_bundle();
    FusionContext ctx = fuse_algebra(sum.algebra, "1", "2");
    std::set<std::pair<FusionType, FusionType>> seen;
    for (auto g : core_generators(ctx.result))
        for (auto h : core_generators(ctx.result)) {
            REQUIRE(fusion_bracket_term(ctx, g, h) == fusion_bracket_term_bivector(ctx, g, h));
            seen.insert({ctx.types[g], ctx.types[h]});
        }
    REQUIRE(seen.size() == 16);
}

TEST_CASE("correction table is cyclically antisymmetric") {
    CatalogBundle sum = four_type_bundle();
    FusionContext ctx = fuse_algebra(sum.algebra, "1", "2");
    for (auto g : core_generators(ctx.result))
        for (auto h : core_generators(ctx.result))
            REQUIRE(fusion_bracket_term(ctx, h, g) ==
                    t2_scale(Rat(-1), flip(fusion_bracket_term(ctx, g, h))));
}

TEST_CASE("fused cross bracket of two truncated polynomial algebras") {
    CatalogBundle b1 = nilpotent_free1(3, Rat(1, 2));
    CatalogBundle b2 = nilpotent_free1(3, Rat(1, 2));
    b1.algebra.generators[0].name = "x1";
    b1.bracket.algebra = b1.algebra;
    b2.algebra.base.idempotents[0] = "2";
    b2.algebra.generators[0].name = "x2";
    b2.bracket.algebra = b2.algebra;
    CatalogBundle fused = fuse_bundle(direct_sum_bundle(b1, b2), "1", "2");
    const AlgebraSpec& R = fused.algebra;
    NCPoly x1 = nc_gen(0), x2 = nc_gen(1), one = nc_one(R);
    Tensor2 want = t2_of(mul(R, x2, x1), one, Rat(1, 2)) + t2_of(one, mul(R, x1, x2), Rat(1, 2));
    want += t2_of(x2, x1, Rat(-1, 2)) + t2_of(x1, x2, Rat(-1, 2));
    REQUIRE(*fused.bracket.find(0, 1) == want);
    REQUIRE(check_quasi_poisson(fused.bracket).passed());
}

TEST_CASE("gluing two one-arrow quivers reproduces the sign family") {
    auto build = [](bool keep1, bool keep2) {
        CatalogBundle qa, qb;
        qa.algebra.base.idempotents = {"1", "2"};
        qa.algebra.generators.push_back(GeneratorDecl{"t", 0, 1, GenKind::Plain, 0, {}});
        qa.bracket.algebra = qa.algebra;
        qa.bracket.set_pair(0, 0, Tensor2{});
        qb.algebra.base.idempotents = {"3", "4"};
        qb.algebra.generators.push_back(GeneratorDecl{"s", 1, 0, GenKind::Plain, 0, {}});
        qb.bracket.algebra = qb.algebra;
        qb.bracket.set_pair(0, 0, Tensor2{});
        CatalogBundle sum = direct_sum_bundle(qa, qb);
        sum = keep1 ? fuse_bundle(sum, "1", "3") : fuse_bundle(sum, "3", "1");
        sum = keep2 ? fuse_bundle(sum, "2", "4") : fuse_bundle(sum, "4", "2");
        return sum;
    };
    for (bool keep1 : {true, false})
        for (bool keep2 : {true, false}) {
            CatalogBundle out = build(keep1, keep2);
            const AlgebraSpec& R = out.algebra;
            int delta = keep1 ? 1 : -1, deltap = keep2 ? 1 : -1;
            std::uint32_t e1 = R.idem_index(keep1 ? "1" : "3");
            std::uint32_t e2 = R.idem_index(keep2 ? "2" : "4");
            NCPoly t = nc_gen(0), s = nc_gen(1);
            Tensor2 want = t2_of(mul(R, s, t), nc_idem(e1), Rat(delta, 2)) +
                           t2_of(nc_idem(e2), mul(R, t, s), Rat(deltap, 2));
            REQUIRE(*out.bracket.find(0, 1) == want);
            REQUIRE(check_quasi_poisson(out.bracket).passed());
        }
}

TEST_CASE("fused moment map with a unit absorbed component keeps the kept component") {
    CatalogBundle b1 = free1(0, Rat(1, 2), 0);
    CatalogBundle b2 = free1(0, Rat(1, 2), 0);
    b2.algebra.base.idempotents[0] = "2";
    b2.algebra.generators[0].name = "u";
    b2.bracket.algebra = b2.algebra;
    CatalogBundle sum = direct_sum_bundle(b1, b2);
    FusionContext ctx = fuse_algebra(sum.algebra, "1", "2");
    MomentMapSpec mm;
    mm.components[0] = nc_idem(0) + nc_gen(0); // 1 + t at the kept unit
    mm.components[1] = nc_idem(1);             // the absorbed unit itself
    MomentMapSpec fused = fused_moment_map(ctx, mm);
    REQUIRE(fused.components.size() == 1);
    REQUIRE(fused.components.at(ctx.kept_res) == nc_idem(ctx.kept_res) + nc_gen(0));
}

TEST_CASE("kappa vanishes on every generator triple") {
    SECTION("quasi-Poisson input with all four generator types") {
        CatalogBundle sum = four_type_bundle();
        REQUIRE(check_quasi_poisson(sum.bracket).passed());
        FusionContext ctx = fuse_algebra(sum.algebra, "1", "2");
        FusedParts parts = fused_bracket_parts(ctx, sum.bracket);
        for (auto g : core_generators(ctx.result))
            for (auto h : core_generators(ctx.result))
                for (auto k : core_generators(ctx.result))
                    REQUIRE(kappa(parts, nc_gen(g), nc_gen(h), nc_gen(k)).is_zero());
        // and the fused bracket is again quasi-Poisson
        REQUIRE(check_quasi_poisson(parts.full).passed());
    }
    SECTION("arbitrary non-quasi-Poisson input") {
        // kappa vanishes for any double bracket, not only quasi-Poisson ones
        CatalogBundle b = q1_raw(Rat(2), Rat(3), Rat(5, 7), Rat(-1, 3), Rat(1), Rat(2));
        FusionContext ctx = fuse_algebra(b.algebra, "1", "2");
        FusedParts parts = fused_bracket_parts(ctx, b.bracket);
        for (auto g : core_generators(ctx.result))
            for (auto h : core_generators(ctx.result))
                for (auto k : core_generators(ctx.result))
                    REQUIRE(kappa(parts, nc_gen(g), nc_gen(h), nc_gen(k)).is_zero());
    }
    SECTION("all-first-type triples vanish summand by summand") {
        CatalogBundle q = q1(Q1Case::C1a, q1a_params());
        CatalogBundle loops = free1(0, Rat(1, 2), 0);
        loops.algebra.base.idempotents[0] = "3";
        loops.algebra.generators[0].name = "p";
        loops.bracket.algebra = loops.algebra;
        CatalogBundle sum = direct_sum_bundle(q, loops);
        sum = fuse_bundle(sum, "1", "3");
        FusionContext ctx = fuse_algebra(sum.algebra, "1", "2");
        FusedParts parts = fused_bracket_parts(ctx, sum.bracket);
        std::uint32_t p = 2;
        REQUIRE(ctx.types[p] == FusionType::First);
        REQUIRE(triple_bracket(parts.fus, nc_gen(p), nc_gen(p), nc_gen(p)).is_zero());
        REQUIRE(kappa(parts, nc_gen(p), nc_gen(p), nc_gen(p)).is_zero());
    }
    SECTION("zero input bracket leaves only the vanishing cross terms") {
        CatalogBundle z = q1_raw(0, 0, 0, 0, 0, 0);
        FusionContext ctx = fuse_algebra(z.algebra, "1", "2");
        FusedParts parts = fused_bracket_parts(ctx, z.bracket);
        for (auto g : core_generators(ctx.result))
            for (auto h : core_generators(ctx.result))
                for (auto k : core_generators(ctx.result))
                    REQUIRE(kappa(parts, nc_gen(g), nc_gen(h), nc_gen(k)).is_zero());
    }
}

TEST_CASE("iterated fusion of three truncated algebras matches the pairwise formulas") {
    CatalogBundle chain = nilpotent_sum({3, 4, 5});
    const AlgebraSpec& R = chain.algebra;
    NCPoly one = nc_one(R);
    for (std::uint32_t r = 0; r < 3; ++r)
        for (std::uint32_t s = r + 1; s < 3; ++s) {
            NCPoly xr = nc_gen(r), xs = nc_gen(s);
            Tensor2 want = t2_of(mul(R, xs, xr), one, Rat(1, 2)) +
                           t2_of(one, mul(R, xr, xs), Rat(1, 2));
            want += t2_of(xs, xr, Rat(-1, 2)) + t2_of(xr, xs, Rat(-1, 2));
            REQUIRE(*chain.bracket.find(r, s) == want);
        }
    REQUIRE(check_quasi_poisson(chain.bracket).passed());
}
