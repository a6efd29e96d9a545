#include "qpb/catalog.hpp"
#include "qpb/compare.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qpb;

namespace {

void perturb_pair(DoubleBracketSpec& br, std::uint32_t g, std::uint32_t h, const Tensor2& delta) {
    br.values[{g, h}] += delta;
    if (g != h) br.values[{h, g}] += t2_scale(Rat(-1), flip(delta));
}

} // namespace

TEST_CASE("one-generator family over a parameter grid") {
    std::vector<std::array<Rat, 3>> grid = {{0, Rat(1, 2), 0},
                                            {0, Rat(-1, 2), 0},
                                            {1, 0, Rat(-1, 4)},
                                            {-2, 0, Rat(1, 8)},
                                            {3, Rat(1, 2), 0}};
    for (const auto& [lambda, mu, nu] : grid) {
        CatalogBundle b = free1(lambda, mu, nu);
        REQUIRE(check_cyclic_antisymmetry(b.bracket).passed());
        REQUIRE(check_quasi_poisson(b.bracket).passed());
    }
    REQUIRE_THROWS_AS(free1(0, 1, 0), ParameterError);
}

TEST_CASE("truncated one-generator family") {
    CatalogBundle b = nilpotent_free1(3, Rat(1, 2));
    REQUIRE(check_quasi_poisson(b.bracket).passed());
    // <<x, x^2>> keeps no slot of degree >= 3 after truncation
    const AlgebraSpec& A = b.algebra;
    NCPoly x = nc_gen(0);
    Tensor2 v = eval_double(b.bracket, x, mul(A, x, x));
    REQUIRE(v == t2_of(mul(A, x, x), x, Rat(1, 2)) - t2_of(x, mul(A, x, x), Rat(1, 2)));
    for (const auto& [k, c] : v.terms) {
        (void)c;
        REQUIRE(k.first.atoms.size() <= 2);
        REQUIRE(k.second.atoms.size() <= 2);
    }
    REQUIRE_THROWS_AS(nilpotent_free1(2, Rat(1, 2)), ParameterError);
    REQUIRE_THROWS_AS(nilpotent_free1(3, Rat(1, 3)), ParameterError);
}

TEST_CASE("two-vertex quiver families") {
    SECTION("case 1a value and check") {
        FamilyParams p;
        p.delta = 1;
        CatalogBundle b = q1(Q1Case::C1a, p);
        const AlgebraSpec& A = b.algebra;
        NCPoly st = mul(A, nc_gen(1), nc_gen(0)), ts = mul(A, nc_gen(0), nc_gen(1));
        Tensor2 want = t2_of(st, nc_idem(0), Rat(1, 2)) - t2_of(nc_idem(1), ts, Rat(1, 2));
        REQUIRE(*b.bracket.find(0, 1) == want);
        REQUIRE(check_quasi_poisson(b.bracket).passed());
    }
    SECTION("case 1b for several parameter points") {
        for (auto [alpha, gamma, phi] : {std::array<Rat, 3>{Rat(1, 2), 1, 0},
                                         std::array<Rat, 3>{Rat(1, 2), 0, 0},
                                         std::array<Rat, 3>{Rat(3, 2), 1, 2}}) {
            FamilyParams p;
            p.alpha = alpha;
            p.gamma = gamma;
            p.phi = phi;
            CatalogBundle b = q1(Q1Case::C1b, p);
            REQUIRE(check_quasi_poisson(b.bracket).passed());
        }
        FamilyParams bad;
        bad.alpha = Rat(1);
        bad.gamma = Rat(0);
        bad.phi = Rat(0);
        REQUIRE_THROWS_AS(q1(Q1Case::C1b, bad), ParameterError);
    }
    SECTION("case 2 value and check") {
        FamilyParams p;
        p.delta = 1;
        p.lambda = Rat(1);
        CatalogBundle b = q1(Q1Case::C2, p);
        const AlgebraSpec& A = b.algebra;
        NCPoly t = nc_gen(0);
        NCPoly tst = mul(A, mul(A, t, nc_gen(1)), t);
        REQUIRE(*b.bracket.find(0, 0) == t2_of(tst, t) - t2_of(t, tst));
        REQUIRE(check_quasi_poisson(b.bracket).passed());
    }
    SECTION("case 3 check") {
        FamilyParams p;
        p.delta = -1;
        p.lambda = Rat(2);
        REQUIRE(check_quasi_poisson(q1(Q1Case::C3, p).bracket).passed());
    }
}

TEST_CASE("two-generator free families pass for all seven cases") {
    auto params = [](int c) {
        FamilyParams p;
        switch (c) {
        case 1:
            p.mu = Rat(1, 2);
            p.gamma0 = Rat(0);
            p.gamma1 = Rat(0);
            p.alpha = Rat(1, 2);
            break;
        case 2:
            p.mu = Rat(1, 2);
            p.alpha = Rat(1, 2);
            p.gamma = Rat(1);
            break;
        case 3:
            p.mu = Rat(1, 2);
            p.m = Rat(-1, 2);
            break;
        case 4:
            p.mu = Rat(1, 2);
            p.m = Rat(1, 2);
            p.alpha = Rat(-1, 2);
            break;
        case 5:
            p.mu = Rat(-1, 2);
            p.alpha = Rat(1, 2);
            p.n = Rat(2);
            break;
        case 6:
            p.mu = Rat(1, 2);
            p.n = Rat(-1);
            break;
        case 7:
            p.alpha = Rat(1, 2);
            p.n = Rat(1);
            p.nu = Rat(1);
            break;
        }
        return p;
    };
    for (int c = 1; c <= 7; ++c) {
        CatalogBundle b = free2(c, params(c));
        INFO("case " << c);
        REQUIRE(check_cyclic_antisymmetry(b.bracket).passed());
        REQUIRE(check_quasi_poisson(b.bracket).passed());
    }
    SECTION("case 2 matches the glued-quiver bracket") {
        FamilyParams p;
        p.mu = Rat(1, 2);
        p.alpha = Rat(1, 2);
        p.gamma = Rat(1);
        CatalogBundle b = free2(2, p);
        const AlgebraSpec& A = b.algebra;
        NCPoly t = nc_gen(0), s = nc_gen(1), one = nc_one(A);
        Tensor2 want = t2_of(one, one);
        want += t2_of(mul(A, s, t), one, Rat(1, 2)) + t2_of(one, mul(A, t, s), Rat(1, 2));
        want += t2_of(s, t, Rat(1, 2)) + t2_of(t, s, Rat(-1, 2));
        REQUIRE(*b.bracket.find(0, 1) == want);
    }
    SECTION("case 1 with nonzero cross coefficients") {
        FamilyParams p;
        p.mu = Rat(-1, 2);
        p.gamma0 = Rat(2);
        p.gamma1 = Rat(1);
        p.alpha = Rat(3, 2);
        REQUIRE(check_quasi_poisson(free2(1, p).bracket).passed());
    }
}

TEST_CASE("perturbing a constrained coefficient breaks each family") {
    SECTION("one-generator family") {
        CatalogBundle b = free1_raw(0, Rat(1, 2) + 1, 0);
        REQUIRE(!check_quasi_poisson(b.bracket).passed());
    }
    SECTION("two-vertex case 1a") {
        FamilyParams p;
        p.delta = 1;
        CatalogBundle b = q1(Q1Case::C1a, p);
        const AlgebraSpec& A = b.algebra;
        Tensor2 delta = t2_of(mul(A, nc_gen(1), nc_gen(0)), nc_idem(0));
        perturb_pair(b.bracket, 0, 1, delta);
        REQUIRE(!check_quasi_poisson(b.bracket).passed());
    }
    SECTION("two-generator case 4") {
        FamilyParams p;
        p.mu = Rat(1, 2);
        p.m = Rat(1, 2);
        p.alpha = Rat(1, 2);
        CatalogBundle b = free2(4, p);
        Tensor2 delta = t2_of(nc_gen(0), nc_gen(1), Rat(-1)); // alpha -> alpha + 1 on t (x) s
        perturb_pair(b.bracket, 0, 1, delta);
        REQUIRE(!check_quasi_poisson(b.bracket).passed());
    }
}

namespace {
QuiverSpec one_arrow(const Rat& gamma) {
    QuiverSpec q;
    q.vertices = {"1", "2"};
    q.arrows = {QuiverArrow{"t", "1", "2"}};
    if (gamma != 0) q.weights["t"] = gamma;
    return q;
}
QuiverSpec one_loop(const Rat& gamma, bool star_first) {
    QuiverSpec q;
    q.vertices = {"1"};
    q.arrows = {QuiverArrow{"a", "1", "1"}};
    if (gamma != 0) q.weights["a"] = gamma;
    if (star_first) q.orderings["1"] = {"a*", "a"};
    return q;
}
QuiverSpec two_arrow_star(const Rat& gamma, bool swap_order) {
    QuiverSpec q;
    q.vertices = {"1", "2", "3"};
    q.arrows = {QuiverArrow{"a", "1", "2"}, QuiverArrow{"b", "1", "3"}};
    if (gamma != 0) {
        q.weights["a"] = gamma;
        q.weights["b"] = gamma;
    }
    if (swap_order) q.orderings["1"] = {"b", "a"};
    return q;
}
} // namespace

TEST_CASE("quiver bracket closed forms") {
    SECTION("one arrow with weight") {
        CatalogBundle b = vdb_quiver(one_arrow(Rat(1)));
        const AlgebraSpec& A = b.algebra;
        std::uint32_t t = A.gen_index("t"), ts = A.gen_index("t*");
        Tensor2 want = t2_of(nc_idem(1), nc_idem(0));
        want += t2_of(mul(A, nc_gen(ts), nc_gen(t)), nc_idem(0), Rat(1, 2));
        want += t2_of(nc_idem(1), mul(A, nc_gen(t), nc_gen(ts)), Rat(1, 2));
        REQUIRE(*b.bracket.find(t, ts) == want);
        REQUIRE(check_quasi_poisson(b.bracket).passed());
    }
    SECTION("loop ordering signs") {
        CatalogBundle b = vdb_quiver(one_loop(Rat(1), false));
        const AlgebraSpec& A = b.algebra;
        std::uint32_t a = A.gen_index("a");
        NCPoly a2 = mul(A, nc_gen(a), nc_gen(a));
        REQUIRE(*b.bracket.find(a, a) ==
                t2_of(a2, nc_idem(0), Rat(1, 2)) - t2_of(nc_idem(0), a2, Rat(1, 2)));
        REQUIRE(check_quasi_poisson(b.bracket).passed());

        CatalogBundle c = vdb_quiver(one_loop(Rat(1), true));
        REQUIRE(*c.bracket.find(a, a) ==
                t2_of(nc_idem(0), a2, Rat(1, 2)) - t2_of(a2, nc_idem(0), Rat(1, 2)));
        REQUIRE(check_quasi_poisson(c.bracket).passed());
    }
    SECTION("arrows sharing no vertex do not interact") {
        QuiverSpec q;
        q.vertices = {"1", "2", "3", "4"};
        q.arrows = {QuiverArrow{"a", "1", "2"}, QuiverArrow{"b", "3", "4"}};
        CatalogBundle b = vdb_quiver(q);
        const AlgebraSpec& A = b.algebra;
        REQUIRE(b.bracket.find(A.gen_index("a"), A.gen_index("b"))->is_zero());
        REQUIRE(check_quasi_poisson(b.bracket).passed());
    }
    SECTION("star quiver orderings") {
        for (bool swap_order : {false, true}) {
            CatalogBundle b = vdb_quiver(two_arrow_star(Rat(1), swap_order));
            const AlgebraSpec& A = b.algebra;
            std::uint32_t a = A.gen_index("a"), bb = A.gen_index("b");
            Rat sign = swap_order ? Rat(1, 2) : Rat(-1, 2);
            REQUIRE(*b.bracket.find(a, bb) == t2_of(nc_gen(a), nc_gen(bb), sign));
            REQUIRE(check_quasi_poisson(b.bracket).passed());
        }
    }
}

TEST_CASE("quiver brackets agree with their iterated-fusion rebuilds") {
    std::vector<QuiverSpec> specs;
    specs.push_back(one_arrow(Rat(0)));
    specs.push_back(one_arrow(Rat(1)));
    specs.push_back(one_loop(Rat(1), false));
    specs.push_back(one_loop(Rat(1), true));
    specs.push_back(two_arrow_star(Rat(1), false));
    specs.push_back(two_arrow_star(Rat(1), true));
    for (const auto& q : specs) {
        CatalogBundle direct = vdb_quiver(q);
        CatalogBundle fused = vdb_quiver_by_fusion(q);
        std::string diff = bracket_diff_by_name(direct.bracket, fused.bracket);
        INFO(diff);
        REQUIRE(diff.empty());
        std::string mdiff = moment_map_diff_by_name(direct.algebra, *direct.moment_map,
                                                    fused.algebra, *fused.moment_map);
        INFO(mdiff);
        REQUIRE(mdiff.empty());
    }
}

TEST_CASE("group-like quiver moment maps verify symbolically") {
    CatalogBundle b = vdb_quiver(one_arrow(Rat(0)));
    REQUIRE(check_moment_map(b.bracket, *b.moment_map).passed());
    CatalogBundle l = vdb_quiver(one_loop(Rat(0), false));
    REQUIRE(check_moment_map(l.bracket, *l.moment_map).passed());
}

TEST_CASE("weighted quiver moment maps defer to numeric verification") {
    CatalogBundle b = vdb_quiver(one_arrow(Rat(1)));
    REQUIRE_THROWS_AS(check_moment_map(b.bracket, *b.moment_map), DeferToNumericError);
}

TEST_CASE("surface structures") {
    SECTION("one boundary component") {
        CatalogBundle b = surface(SurfaceSpec{0, 1, {}});
        const AlgebraSpec& A = b.algebra;
        NCPoly c = nc_gen(0), one = nc_one(A);
        NCPoly c2 = mul(A, c, c);
        REQUIRE(*b.bracket.find(0, 0) ==
                t2_of(c2, one, Rat(1, 2)) - t2_of(one, c2, Rat(1, 2)));
        REQUIRE(b.moment_map->components.at(0) == c);
        REQUIRE(check_quasi_poisson(b.bracket).passed());
        REQUIRE(check_moment_map(b.bracket, *b.moment_map).passed());
    }
    SECTION("torus with one boundary component") {
        CatalogBundle b = surface(SurfaceSpec{1, 0, {}});
        REQUIRE(check_quasi_poisson(b.bracket).passed());
        REQUIRE(check_moment_map(b.bracket, *b.moment_map).passed());
    }
    SECTION("genus one with an extra boundary") {
        CatalogBundle b = surface(SurfaceSpec{1, 1, {}});
        REQUIRE(check_quasi_poisson(b.bracket).passed());
        REQUIRE(check_moment_map(b.bracket, *b.moment_map).passed());
    }
    SECTION("weighted boundary of order two") {
        CatalogBundle b = surface(SurfaceSpec{0, 1, {2}});
        REQUIRE(b.bracket.find(0, 0)->is_zero()); // c^2 = 1 collapses the bracket
        REQUIRE(check_quasi_poisson(b.bracket).passed());
        REQUIRE(check_moment_map(b.bracket, *b.moment_map).passed());
    }
    REQUIRE_THROWS_AS(surface(SurfaceSpec{0, 0, {}}), ParameterError);
}

TEST_CASE("surface brackets agree with their iterated-fusion rebuilds") {
    for (auto [g, r] : {std::pair<int, int>{0, 1}, {1, 0}, {1, 1}, {2, 0}}) {
        SurfaceSpec spec{g, r, {}};
        CatalogBundle direct = surface(spec);
        CatalogBundle fused = surface_by_fusion(spec);
        std::string diff = bracket_diff_by_name(direct.bracket, fused.bracket);
        INFO("(g,r) = (" << g << "," << r << ") " << diff);
        REQUIRE(diff.empty());
        std::string mdiff = moment_map_diff_by_name(direct.algebra, *direct.moment_map,
                                                    fused.algebra, *fused.moment_map);
        REQUIRE(mdiff.empty());
    }
}

TEST_CASE("weighted boundary of order three keeps the structure") {
    CatalogBundle b = surface(SurfaceSpec{0, 1, {3}});
    const AlgebraSpec& A = b.algebra;
    // c^3 = 1 leaves the quadratic bracket intact but folds higher powers
    NCPoly c = nc_gen(0);
    REQUIRE(mul(A, mul(A, c, c), c) == nc_one(A));
    REQUIRE(check_quasi_poisson(b.bracket).passed());
    REQUIRE(check_moment_map(b.bracket, *b.moment_map).passed());
}

TEST_CASE("the two-vertex family with unit weight equals the one-arrow quiver structure") {
    FamilyParams p;
    p.alpha = Rat(1, 2);
    p.gamma = Rat(1);
    p.phi = Rat(0);
    p.with_moment_map = true;
    CatalogBundle family = q1(Q1Case::C1b, p);
    CatalogBundle quiver = vdb_quiver(one_arrow(Rat(1)));
    const AlgebraSpec& F = family.algebra;
    const AlgebraSpec& Q = quiver.algebra;

    // core tables agree under s <-> t*
    std::uint32_t tq = Q.gen_index("t"), sq = Q.gen_index("t*");
    auto rename = [&](const Tensor2& v) {
        NameMap nm;
        nm.idem = {0, 1};
        nm.gen = {tq, sq, 0, 0}; // formal inverses never occur in core values
        return map_tensor(nm, v);
    };
    for (std::uint32_t g = 0; g < 2; ++g)
        for (std::uint32_t h = 0; h < 2; ++h) {
            std::uint32_t gq = g == 0 ? tq : sq;
            std::uint32_t hq = h == 0 ? tq : sq;
            REQUIRE(rename(*family.bracket.find(g, h)) == *quiver.bracket.find(gq, hq));
        }

    // moment maps agree: Phi_1 is the weighted cycle, Phi_2 the formal
    // inverse of the opposite weighted cycle
    NameMap nm;
    nm.idem = {0, 1};
    nm.gen = {tq, sq, 0, 0};
    NCPoly phi1_family = family.moment_map->components.at(0);
    REQUIRE(map_poly(nm, phi1_family) == quiver.moment_map->components.at(0));
    NCPoly phi2_family = family.moment_map->components.at(1);
    REQUIRE(phi2_family.terms.size() == 1);
    const Word& atom_word = phi2_family.terms.begin()->first;
    const GeneratorDecl& family_inv = F.generators[atom_word.atoms.at(0).gen];
    std::uint32_t quiver_inv = Q.gen_index("inv_t*");
    REQUIRE(quiver.moment_map->components.at(1) == nc_gen(quiver_inv));
    REQUIRE(map_poly(nm, family_inv.defining) == Q.generators[quiver_inv].defining);
}

TEST_CASE("single truncated factor sums to itself") {
    CatalogBundle a = nilpotent_sum({4});
    CatalogBundle b = nilpotent_free1(4, Rat(1, 2));
    b.algebra.generators[0].name = "x1";
    b.bracket.algebra = b.algebra;
    REQUIRE(bracket_diff_by_name(a.bracket, b.bracket).empty());
}
